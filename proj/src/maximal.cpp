#include "varlp/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace varlp {

namespace {

// ||f chi_Q||_r, using the exact classical closed form when the exponent is
// constant over the touched cells. Keeps stopping-time comparisons against
// thresholds exact on piecewise data instead of carrying the one-sided
// bisection bracket bias.
double masked_norm(const GridFunction& f, const VariableExponent& r, const Interval& q) {
    SampleBlock b = block_of(f, r, q);
    if (b.exponent.empty()) return 0.0;
    bool constant = true;
    for (double e : b.exponent)
        if (e != b.exponent.front()) {
            constant = false;
            break;
        }
    if (constant) return classical_norm({b}, b.exponent.front());
    return luxemburg_norm(std::vector<SampleBlock>{std::move(b)}).value;
}

}  // namespace

double average_op(const GridFunction& f, const Interval& q, const VariableExponent& beta,
                  const VariableExponent& r, std::size_t indicator_cells) {
    const double fr = masked_norm(f, r, q);
    if (fr == 0.0) return 0.0;
    const double chir = indicator_norm(r, q, indicator_cells).value;
    const double chib = indicator_norm(beta, q, indicator_cells).value;
    return chib * fr / chir;
}

double maximal(const GridFunction& f, double x, const MaximalConfig& cfg) {
    double best = 0.0;
    for (const auto& q : cfg.cubes)
        if (q.contains(x))
            best = std::max(best, average_op(f, q, cfg.beta, cfg.r, cfg.indicator_cells));
    return best;
}

double dyadic_maximal(const GridFunction& f, double x, const DyadicFamily& family,
                      const VariableExponent& beta, const VariableExponent& r) {
    if (!family.root().contains(x)) return 0.0;
    // walk the unique chain of dyadic cubes containing x
    double best = 0.0;
    DyadicCube c{0, 0};
    for (int d = 0;; ++d) {
        best = std::max(best, average_op(f, family.interval_of(c), beta, r));
        if (d == family.max_depth()) break;
        auto [left, right] = family.children(c);
        c = x < family.interval_of(left).b ? left : right;
    }
    return best;
}

MaximalProfile maximal_profile(const GridFunction& f, const MaximalConfig& cfg) {
    const Grid& g = f.grid();
    MaximalProfile prof;
    prof.value.assign(g.cell_count(), 0.0);
    prof.argmax_cube.assign(g.cell_count(), -1);
    for (std::size_t qi = 0; qi < cfg.cubes.size(); ++qi) {
        const Interval& q = cfg.cubes[qi];
        const double a = average_op(f, q, cfg.beta, cfg.r, cfg.indicator_cells);
        if (a <= 0.0) continue;
        auto [first, last] = g.overlapping_range(q);
        for (std::size_t i = first; i < last; ++i) {
            if (!q.contains(g.midpoint(i))) continue;
            if (a > prof.value[i]) {
                prof.value[i] = a;
                prof.argmax_cube[i] = static_cast<int>(qi);
            }
        }
    }
    return prof;
}

void write_profile_csv(const std::string& path, const GridFunction& f,
                       const MaximalProfile& profile) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << "x,Mf,argmax_cube\n";
    char buf[96];
    for (std::size_t i = 0; i < profile.value.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d\n", f.grid().midpoint(i),
                      profile.value[i], profile.argmax_cube[i]);
        out << buf;
    }
}

double weighted_median(std::vector<std::pair<double, double>> vw) {
    if (vw.empty()) throw RangeError("weighted_median of empty set");
    std::sort(vw.begin(), vw.end());
    double total = 0.0;
    for (const auto& [v, w] : vw) total += w;
    double acc = 0.0;
    for (const auto& [v, w] : vw) {
        acc += w;
        if (acc >= 0.5 * total) return v;
    }
    return vw.back().first;
}

double mean_oscillation(const GridFunction& f, const Interval& q) {
    const Grid& g = f.grid();
    auto [first, last] = g.overlapping_range(q);
    std::vector<std::pair<double, double>> vw;
    vw.reserve(last - first);
    double total = 0.0;
    for (std::size_t i = first; i < last; ++i) {
        const double w = g.cell(i).overlap(q);
        if (w <= 0.0) continue;
        vw.emplace_back(f.value(i), w);
        total += w;
    }
    // cells of Q outside the window carry the value 0
    const double outside = q.length() - total;
    if (outside > 1e-15 * q.length()) vw.emplace_back(0.0, outside);
    if (vw.empty()) return 0.0;
    const double med = weighted_median(vw);
    double acc = 0.0;
    for (const auto& [v, w] : vw) acc += w * std::fabs(v - med);
    return acc / q.length();
}

double sharp_maximal(const GridFunction& f, double x, const std::vector<Interval>& cubes) {
    double best = 0.0;
    for (const auto& q : cubes)
        if (q.contains(x)) best = std::max(best, mean_oscillation(f, q));
    return best;
}

std::vector<double> sharp_profile(const GridFunction& f, const std::vector<Interval>& cubes) {
    const Grid& g = f.grid();
    std::vector<double> out(g.cell_count(), 0.0);
    for (const auto& q : cubes) {
        const double osc = mean_oscillation(f, q);
        if (osc <= 0.0) continue;
        auto [first, last] = g.overlapping_range(q);
        for (std::size_t i = first; i < last; ++i)
            if (q.contains(g.midpoint(i))) out[i] = std::max(out[i], osc);
    }
    return out;
}

}  // namespace varlp
