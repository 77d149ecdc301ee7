#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "varlp/exponent.hpp"
#include "varlp/grid.hpp"
#include "varlp/luxemburg.hpp"
#include "varlp/weights.hpp"

namespace varlp {

// Two-variable kernel evaluable off the diagonal. Slices y -> K(x,y) and
// x -> K(x,y) expose their singular anchors and jump points so quadrature
// grids can grade toward them; evaluation in local coordinates around an
// anchor avoids forming anchor + t when t is far below one ulp.
struct Kernel {
    std::string name;

    std::function<double(double, double)> eval;                    // K(x, y)
    std::function<double(double, double, double)> eval_y_local;    // K(x, s + t)
    std::function<double(double, double, double)> eval_x_local;    // K(s + t, y)

    std::function<std::vector<double>(double)> y_singular;  // of y -> K(x,y)
    std::function<std::vector<double>(double)> x_singular;  // of x -> K(x,y)
    std::function<std::vector<double>(double)> y_breaks;
    std::function<std::vector<double>(double)> x_breaks;

    // bounding boxes of the support; nullopt = unbounded
    std::optional<Interval> x_support;
    std::optional<Interval> y_support;
};

// K1 = chi_[2,3]; K2(t) = t^{-1/2} (log(e/t))^{-(1+beta)/2} chi_(0,1)(t)
double kernel_K1(double t);
double kernel_K2(double t, double beta_param);

Kernel make_kernel_K(double beta_param);       // K(x,y) = K1(x-y) K2(y)
Kernel make_kernel_Ktilde(double beta_param);  // K(x,y) = K1(y) K2(x-y-1)
Kernel make_fractional(double alpha, Kernel base);  // |x-y|^alpha base(x,y)

Kernel kernel_by_name(const std::string& name, double beta_param, double alpha = 0.5);

// Resolution of slice quadrature: uniform cells per smooth piece, and a
// geometric ladder (grade_octaves halvings, cells_per_octave each) toward
// every singular anchor. grade_octaves is the refinement-ladder control.
struct SliceSpec {
    std::size_t base_cells = 32;
    int grade_octaves = 40;
    int cells_per_octave = 4;
};

// Luxemburg norm over parts of ||[K(x,.) - K(z,.)] chi||_r (variant 1) or
// ||[K(.,x) - K(.,z)] chi||_r (variant 2). A single slice (no difference)
// is requested with z = nullopt.
double slice_norm(const Kernel& k, int variant, double x, std::optional<double> z,
                  const std::vector<Interval>& parts, const VariableExponent& r,
                  const SliceSpec& spec = {});

// Tf(x) = int K(x,y) f(y) dy by graded quadrature; throws QuadratureError
// when the floor is reached with non-decaying contributions.
double apply_operator(const Kernel& k, const GridFunction& f, double x,
                      const SliceSpec& spec = {});

// Tf at every cell midpoint of f's grid
GridFunction operator_profile(const Kernel& k, const GridFunction& f,
                              const SliceSpec& spec = {});

struct HormanderTerm {
    int m = 0;
    double annulus_norm = 0.0;  // || diff chi_{2^m Q \ 2^{m-1} Q} ||_r
    double chi_r = 0.0;
    double chi_beta = 0.0;
    double value = 0.0;
};

struct HormanderSum {
    double total = 0.0;
    double max_annulus_norm = 0.0;
    int terms_used = 0;
    bool support_exhausted = false;  // ended on a run of exactly-zero terms
    std::vector<HormanderTerm> terms;
};

// Truncated Hörmander sum for one cube and one pair x, z in (1/2)Q.
HormanderSum hormander_sum(const Kernel& k, const Interval& q, double x, double z,
                           const VariableExponent& beta, const VariableExponent& r, int variant,
                           int m_max = 40, const SliceSpec& spec = {});

struct ProbePoint {
    Interval q;
    double x = 0.0;
    double z = 0.0;
};

struct HormanderProbeConfig {
    std::vector<Interval> cubes;
    int m_max = 40;
    std::vector<int> ladder = {40, 48, 56, 64};  // grade_octaves refinement rungs
    std::size_t base_cells = 32;
    int cells_per_octave = 4;
    std::vector<double> quantiles = {0.1, 0.3, 0.5, 0.7, 0.9};
    std::vector<ProbePoint> extra_points;
    double stability_cap = 1.25;     // total sup growth over the ladder still "bounded"
    double divergence_factor = 2.0;  // per-rung inner-norm growth certifying divergence
};

struct LadderLevel {
    int octaves = 0;
    double sup_sum = 0.0;
    double sup_inner = 0.0;  // largest single annulus norm
    ProbePoint witness;
};

struct HormanderReport {
    std::vector<LadderLevel> ladder;
    double sup = 0.0;  // sup of the sum at the finest rung
    bool m_stable = true;
    Verdict verdict = Verdict::inconclusive;
    std::vector<HormanderTerm> witness_terms;  // per-term audit trail at the sup

    nlohmann::json to_json() const;
};

HormanderReport hormander_class_probe(const Kernel& k, const VariableExponent& beta,
                                      const VariableExponent& r, int variant,
                                      const HormanderProbeConfig& cfg);

struct SizeCubeResult {
    Interval q;
    double ratio = 0.0;  // sup_x ||K(x,.) chi_{2Q\Q}||_r / ||chi_Q||_r * |Q| / ||chi_Q||_beta
    double raw = 0.0;    // ratio * ||chi_Q||_beta (the unnormalized sup)
};

struct SizeReport {
    std::vector<SizeCubeResult> cubes;
    double sup_ratio = 0.0;
    std::vector<LadderLevel> ladder;  // sup_sum carries the sup ratio per rung
    Verdict verdict = Verdict::inconclusive;
    // least-squares slope of log raw against log l(Q) over per-size maxima
    double raw_slope = 0.0;

    nlohmann::json to_json() const;
};

SizeReport size_condition_probe(const Kernel& k, const VariableExponent& beta,
                                const VariableExponent& r, int variant,
                                const HormanderProbeConfig& cfg);

// sup over grid midpoints of w(x) M^sharp f(x)
double bmo_seminorm(const GridFunction& f, const Weight& w, const std::vector<Interval>& cubes);

}  // namespace varlp
