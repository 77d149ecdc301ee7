#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "varlp/exponent.hpp"
#include "varlp/grid.hpp"
#include "varlp/luxemburg.hpp"

namespace varlp {

// A weight: strictly positive piecewise-constant function on the window,
// with its inverse representable on the same grid.
class Weight {
public:
    Weight(GridFunction values, std::vector<double> singular_points = {});

    static Weight constant(GridPtr grid, double c);
    // |x - x0|^delta sampled at cell midpoints; pass a grid graded at x0
    static Weight power(GridPtr grid, double delta, double x0);
    static Weight from_json(GridPtr grid, const nlohmann::json& spec);

    const GridFunction& values() const { return w_; }
    const std::vector<double>& singular_points() const { return singular_; }
    Weight inverse() const;
    Weight pow(double e) const;

private:
    GridFunction w_;
    std::vector<double> singular_;
};

enum class Verdict { bounded, diverging, inconclusive };

std::string to_string(Verdict v);

struct CubeRatio {
    Interval cube;
    double ratio = 0.0;
};

struct ClassTestReport {
    std::vector<CubeRatio> ratios;
    double max_ratio = 0.0;
    // slope of log ratio against log |Q| over cubes touching a singular
    // point (steepest across singular points; 0 when none declared)
    double trend_slope = 0.0;
    int trend_scales = 0;
    double slope_tol = 0.05;
    Verdict verdict = Verdict::inconclusive;

    nlohmann::json to_json() const;
    void write_csv(const std::string& path) const;
};

// minimum number of dyadic scales for a trend verdict
inline constexpr int kMinTrendScales = 8;

// classical A_p: ratio(Q) = (avg_Q w) (avg_Q w^{-1/(p-1)})^{p-1}
ClassTestReport test_Ap_classical(const Weight& w, double p, const std::vector<Interval>& cubes,
                                  double slope_tol = 0.05);

// variable A_{p(.)}: ratio(Q) = ||w chi_Q||_p ||w^{-1} chi_Q||_{p'} / |Q|
ClassTestReport test_Ap_variable(const Weight& w, const VariableExponent& p,
                                 const std::vector<Interval>& cubes, double slope_tol = 0.05);

// two-index class A_{p(.),r(.)}: with 1/r = 1/p + 1/q,
// ratio(Q) = ||chi_Q w||_p ||chi_Q w^{-1}||_q / ||chi_Q||_r
ClassTestReport test_Apr(const Weight& w, const VariableExponent& p, const VariableExponent& r,
                         const std::vector<Interval>& cubes, double slope_tol = 0.05);

// single-cube ratio values (used by duality tests and the harness)
double apr_ratio(const Weight& w, const VariableExponent& p, const VariableExponent& r,
                 const Interval& cube);
double ap_variable_ratio(const Weight& w, const VariableExponent& p, const Interval& cube);
double ap_classical_ratio(const Weight& w, double p, const Interval& cube);

struct OpennessReport {
    bool refused = false;  // precondition (a prior bounded verdict) failed
    std::vector<std::pair<double, Verdict>> scans;
    double smallest_passing_s = 1.0;
};

// scans s in {0.99, 0.97, 0.95, 0.9}: w^{1/s} in A_{s p(.)}?
OpennessReport openness_probe(const Weight& w, const VariableExponent& p,
                              const std::vector<Interval>& cubes);

struct ImplicationReport {
    Verdict apr = Verdict::inconclusive;
    Verdict ap = Verdict::inconclusive;
    Verdict aq_inverse = Verdict::inconclusive;
    bool vacuous = false;        // antecedent not bounded
    bool implication_holds = false;
};

// Apr membership implies A_{p(.)} for w and A_{q(.)} for w^{-1}
ImplicationReport test_Apr_implies_Ap(const Weight& w, const VariableExponent& p,
                                      const VariableExponent& r,
                                      const std::vector<Interval>& cubes);

}  // namespace varlp
