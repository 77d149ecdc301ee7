#pragma once

#include <optional>
#include <string>
#include <vector>

#include "varlp/exponent.hpp"
#include "varlp/grid.hpp"

namespace varlp {

// Convention for the essential-sup term of the modular on {p = inf}.
// Without the division by lambda the induced norm is not positively
// homogeneous, so the scaled form is the default; the unscaled literal
// form stays available behind this switch.
enum class SupConvention { scaled, unscaled };

// Exact piecewise-constant integrand data: one block of cells with widths,
// values and per-cell exponent values. Several blocks may be combined in one
// modular (annulus slices in local coordinates produce multiple blocks).
struct SampleBlock {
    std::vector<double> width;
    std::vector<double> value;
    std::vector<double> exponent;  // +inf allowed

    void push(double w, double v, double p) {
        width.push_back(w);
        value.push_back(v);
        exponent.push_back(p);
    }
};

struct NormResult {
    double value = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    double modular_at_value = 0.0;

    operator double() const { return value; }
};

// rho_{p(.)}(f / lambda) for the block data
double modular(const std::vector<SampleBlock>& blocks, double lambda,
               SupConvention sup = SupConvention::scaled);

// Luxemburg norm inf{lambda > 0 : rho(f/lambda) <= 1} by bracketing and
// bisection on the continuous decreasing modular.
NormResult luxemburg_norm(const std::vector<SampleBlock>& blocks, double rel_tol = 1e-10,
                          SupConvention sup = SupConvention::scaled);

// Classical closed form (sum w |v|^p)^(1/p) for constant finite exponents;
// identical to the Luxemburg norm in that case.
double classical_norm(const std::vector<SampleBlock>& blocks, double p);

// --- GridFunction frontends ------------------------------------------------

// Block data for f restricted to Q (partial cells weighted by overlap).
// Without Q the whole window is used.
SampleBlock block_of(const GridFunction& f, const VariableExponent& p,
                     const std::optional<Interval>& q = std::nullopt);

double modular(const GridFunction& f, const VariableExponent& p, double lambda,
               SupConvention sup = SupConvention::scaled);

NormResult luxemburg_norm(const GridFunction& f, const VariableExponent& p,
                          const std::optional<Interval>& q = std::nullopt,
                          double rel_tol = 1e-10, SupConvention sup = SupConvention::scaled);

// ||chi_Q||_{p(.)} computed on a dedicated uniform grid over Q
NormResult indicator_norm(const VariableExponent& p, const Interval& q,
                          std::size_t cells = 256);

// --- norm identities and inequalities ---------------------------------------

struct PowerIdentityReport {
    double lhs = 0.0;  // || |f|^{s0} ||_{p(.)}
    double rhs = 0.0;  // ||f||_{s0 p(.)}^{s0}
    double rel_gap = 0.0;
};

PowerIdentityReport power_norm_identity_check(const GridFunction& f, const VariableExponent& p,
                                              double s0);

struct HolderReport {
    double lhs = 0.0;    // ||fg||_{r(.)}
    double rhs = 0.0;    // ||f||_{p(.)} ||g||_{q(.)}
    double ratio = 0.0;  // lhs / rhs (0 when rhs == 0)
};

// ||fg||_1 <= 4 ||f||_{p} ||g||_{p'}
HolderReport holder(const GridFunction& f, const GridFunction& g, const VariableExponent& p);

// general form with 1/r = 1/p + 1/q, verified pointwise at cell midpoints
HolderReport holder_general(const GridFunction& f, const GridFunction& g,
                            const VariableExponent& r, const VariableExponent& p,
                            const VariableExponent& q);

struct ConjugateNormResult {
    double value = 0.0;       // best certified lower bound for the sup
    double witness_q_norm = 0.0;
    std::string witness;      // which candidate achieved it
};

// ||f||*_{p(.)} = sup_{||g||_q <= 1} ||fg||_{r(.)} with 1/r = 1/p + 1/q.
// Lower bound over the appendix witness family (g ~ (|f|/lambda)^{(p-r)/r},
// with the k_q-weighted variant on mixed q-regions) plus seeded random
// unit-ball candidates.
ConjugateNormResult conjugate_norm(const GridFunction& f, const VariableExponent& p,
                                   const VariableExponent& r, std::size_t random_candidates = 8,
                                   std::uint64_t seed = 7);

// k_q of the appendix: 1/k = ||chi_{q<inf}||_inf + ||chi_{q=inf}||_inf,
// decided from the sampled cell midpoints of the grid.
double conjugate_k_constant(const VariableExponent& q, const Grid& grid);

struct CubeNormReport {
    double norm = 0.0;            // ||chi_Q||_{p(.)}
    double via_harmonic = 0.0;    // |Q|^{1/p_Q}
    double via_center = 0.0;      // |Q|^{1/p(c_Q)}, meaningful when |Q| <= 2
    double via_infinity = 0.0;    // |Q|^{1/p_inf}, meaningful when |Q| >= 1
};

CubeNormReport cube_norm_estimates(const VariableExponent& p, const Interval& q,
                                   std::size_t cells = 256);

// ||chi_Q||_r / (||chi_Q||_p ||chi_Q||_q) for a triple with 1/r = 1/p + 1/q
double cube_norm_triple_ratio(const VariableExponent& r, const VariableExponent& p,
                              const VariableExponent& q, const Interval& cube,
                              std::size_t cells = 256);

}  // namespace varlp
