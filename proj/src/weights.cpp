#include "varlp/weights.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

namespace varlp {

Weight::Weight(GridFunction values, std::vector<double> singular_points)
    : w_(std::move(values)), singular_(std::move(singular_points)) {
    for (double v : w_.values())
        if (!(v > 0.0) || !std::isfinite(v))
            throw RangeError("weights must be strictly positive and finite on every cell");
}

Weight Weight::constant(GridPtr grid, double c) {
    if (!(c > 0.0)) throw RangeError("constant weight must be positive");
    return Weight(GridFunction::sample(std::move(grid), [c](double) { return c; }));
}

Weight Weight::power(GridPtr grid, double delta, double x0) {
    auto f = GridFunction::sample(std::move(grid),
                                  [=](double x) { return std::pow(std::fabs(x - x0), delta); });
    return Weight(std::move(f), {x0});
}

Weight Weight::from_json(GridPtr grid, const nlohmann::json& spec) {
    const std::string kind = spec.at("kind").get<std::string>();
    if (kind == "constant") return constant(std::move(grid), spec.at("value").get<double>());
    if (kind == "power")
        return power(std::move(grid), spec.at("delta").get<double>(),
                     spec.value("center", 0.0));
    throw ParseError("unknown weight kind '" + kind + "'");
}

Weight Weight::inverse() const {
    return Weight(w_.map([](double v) { return 1.0 / v; }), singular_);
}

Weight Weight::pow(double e) const {
    return Weight(w_.map([e](double v) { return std::pow(v, e); }), singular_);
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::bounded: return "bounded";
        case Verdict::diverging: return "diverging";
        default: return "inconclusive";
    }
}

nlohmann::json ClassTestReport::to_json() const {
    nlohmann::json j;
    j["max_ratio"] = max_ratio;
    j["trend_slope"] = trend_slope;
    j["trend_scales"] = trend_scales;
    j["slope_tol"] = slope_tol;
    j["verdict"] = to_string(verdict);
    auto& arr = j["ratios"] = nlohmann::json::array();
    for (const auto& cr : ratios) arr.push_back({{"a", cr.cube.a}, {"b", cr.cube.b}, {"ratio", cr.ratio}});
    return j;
}

void ClassTestReport::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << "a,b,ratio\n";
    char buf[96];
    for (const auto& cr : ratios) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", cr.cube.a, cr.cube.b, cr.ratio);
        out << buf;
    }
}

namespace {

// least-squares slope of log(max ratio per dyadic size) against log size,
// over cubes containing the point s
std::pair<double, int> singular_trend(const std::vector<CubeRatio>& ratios, double s) {
    std::map<int, double> by_scale;  // floor(log2 length) -> max ratio
    for (const auto& cr : ratios) {
        if (!cr.cube.contains(s) || !(cr.ratio > 0.0) || !std::isfinite(cr.ratio)) continue;
        const int k = static_cast<int>(std::lround(std::log2(cr.cube.length())));
        auto [it, inserted] = by_scale.emplace(k, cr.ratio);
        if (!inserted) it->second = std::max(it->second, cr.ratio);
    }
    const int n = static_cast<int>(by_scale.size());
    if (n < 2) return {0.0, n};
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [k, ratio] : by_scale) {
        const double x = static_cast<double>(k), y = std::log2(ratio);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) return {0.0, n};
    return {(n * sxy - sx * sy) / denom, n};
}

template <typename RatioFn>
ClassTestReport run_class_test(const std::vector<Interval>& cubes,
                               const std::vector<double>& singular, double slope_tol,
                               RatioFn&& ratio_fn) {
    ClassTestReport rep;
    rep.slope_tol = slope_tol;
    rep.ratios.reserve(cubes.size());
    bool all_finite = true;
    for (const auto& q : cubes) {
        const double r = ratio_fn(q);
        if (!std::isfinite(r)) all_finite = false;
        rep.ratios.push_back({q, r});
        rep.max_ratio = std::max(rep.max_ratio, r);
    }
    int scales = 0;
    double worst_slope = 0.0;
    for (double s : singular) {
        auto [slope, n] = singular_trend(rep.ratios, s);
        if (std::fabs(slope) > std::fabs(worst_slope)) worst_slope = slope;
        scales = std::max(scales, n);
    }
    rep.trend_slope = worst_slope;
    rep.trend_scales = scales;
    if (!all_finite) {
        rep.verdict = Verdict::diverging;
    } else if (singular.empty()) {
        rep.verdict = Verdict::bounded;
    } else if (scales < kMinTrendScales) {
        rep.verdict = Verdict::inconclusive;
    } else {
        rep.verdict = std::fabs(worst_slope) <= slope_tol ? Verdict::bounded : Verdict::diverging;
    }
    return rep;
}

}  // namespace

double ap_classical_ratio(const Weight& w, double p, const Interval& cube) {
    const double len = cube.length();
    const double avg_w = integrate(w.values(), cube) / len;
    const GridFunction wexp =
        w.values().map([p](double v) { return std::pow(v, -1.0 / (p - 1.0)); });
    const double avg_dual = integrate(wexp, cube) / len;
    return avg_w * std::pow(avg_dual, p - 1.0);
}

ClassTestReport test_Ap_classical(const Weight& w, double p, const std::vector<Interval>& cubes,
                                  double slope_tol) {
    if (!(p > 1.0)) throw RangeError("classical A_p needs p > 1");
    return run_class_test(cubes, w.singular_points(), slope_tol,
                          [&](const Interval& q) { return ap_classical_ratio(w, p, q); });
}

double ap_variable_ratio(const Weight& w, const VariableExponent& p, const Interval& cube) {
    const VariableExponent pc = conjugate(p);
    const double a = luxemburg_norm(w.values(), p, cube).value;
    const double b = luxemburg_norm(w.inverse().values(), pc, cube).value;
    return a * b / cube.length();
}

ClassTestReport test_Ap_variable(const Weight& w, const VariableExponent& p,
                                 const std::vector<Interval>& cubes, double slope_tol) {
    return run_class_test(cubes, w.singular_points(), slope_tol,
                          [&](const Interval& q) { return ap_variable_ratio(w, p, q); });
}

double apr_ratio(const Weight& w, const VariableExponent& p, const VariableExponent& r,
                 const Interval& cube) {
    auto q_recip = [&](double x) {
        const double d = r.reciprocal(x) - p.reciprocal(x);
        if (d < -1e-12) throw ExponentMismatch("A_{p,r} requires r <= p pointwise");
        return d < 0.0 ? 0.0 : d;
    };
    const VariableExponent q = VariableExponent::from_reciprocal(
        q_recip, std::max(0.0, r.reciprocal_infinity() - p.reciprocal_infinity()));
    const double a = luxemburg_norm(w.values(), p, cube).value;
    const double b = luxemburg_norm(w.inverse().values(), q, cube).value;
    const double c = indicator_norm(r, cube).value;
    return a * b / c;
}

ClassTestReport test_Apr(const Weight& w, const VariableExponent& p, const VariableExponent& r,
                         const std::vector<Interval>& cubes, double slope_tol) {
    return run_class_test(cubes, w.singular_points(), slope_tol,
                          [&](const Interval& q) { return apr_ratio(w, p, r, q); });
}

OpennessReport openness_probe(const Weight& w, const VariableExponent& p,
                              const std::vector<Interval>& cubes) {
    OpennessReport rep;
    if (test_Ap_variable(w, p, cubes).verdict != Verdict::bounded) {
        rep.refused = true;
        return rep;
    }
    for (double s : {0.99, 0.97, 0.95, 0.9}) {
        const VariableExponent sp = VariableExponent::from_reciprocal(
            [p, s](double x) { return p.reciprocal(x) / s; }, p.reciprocal_infinity() / s);
        const Weight ws = w.pow(1.0 / s);
        const Verdict v = test_Ap_variable(ws, sp, cubes).verdict;
        rep.scans.emplace_back(s, v);
        if (v == Verdict::bounded) rep.smallest_passing_s = s;
    }
    return rep;
}

ImplicationReport test_Apr_implies_Ap(const Weight& w, const VariableExponent& p,
                                      const VariableExponent& r,
                                      const std::vector<Interval>& cubes) {
    ImplicationReport rep;
    rep.apr = test_Apr(w, p, r, cubes).verdict;
    rep.ap = test_Ap_variable(w, p, cubes).verdict;
    const VariableExponent q = VariableExponent::from_reciprocal(
        [p, r](double x) { return std::max(0.0, r.reciprocal(x) - p.reciprocal(x)); },
        std::max(0.0, r.reciprocal_infinity() - p.reciprocal_infinity()));
    rep.aq_inverse = test_Ap_variable(w.inverse(), q, cubes).verdict;
    rep.vacuous = rep.apr != Verdict::bounded;
    rep.implication_holds =
        rep.vacuous || (rep.ap == Verdict::bounded && rep.aq_inverse == Verdict::bounded);
    return rep;
}

}  // namespace varlp
