#include "varlp/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "varlp/maximal.hpp"

namespace varlp {

double kernel_K1(double t) { return (t >= 2.0 && t <= 3.0) ? 1.0 : 0.0; }

double kernel_K2(double t, double beta_param) {
    if (!(t > 0.0) || t > 1.0) return 0.0;
    return std::pow(t, -0.5) * std::pow(1.0 - std::log(t), -0.5 * (1.0 + beta_param));
}

Kernel make_kernel_K(double beta_param) {
    Kernel k;
    k.name = "K";
    const double bp = beta_param;
    k.eval = [bp](double x, double y) { return kernel_K1(x - y) * kernel_K2(y, bp); };
    // y = s + t; K2's argument is carried in local coordinates when s = 0
    k.eval_y_local = [bp](double x, double s, double t) {
        const double k1 = kernel_K1((x - s) - t);
        const double u = s == 0.0 ? t : s + t;
        return k1 * kernel_K2(u, bp);
    };
    k.eval_x_local = [bp](double s, double t, double y) {
        return kernel_K1((s - y) + t) * kernel_K2(y, bp);
    };
    k.y_singular = [](double) { return std::vector<double>{0.0}; };
    k.x_singular = [](double) { return std::vector<double>{}; };
    k.y_breaks = [](double x) { return std::vector<double>{0.0, 1.0, x - 3.0, x - 2.0}; };
    k.x_breaks = [](double y) { return std::vector<double>{y + 2.0, y + 3.0}; };
    k.x_support = Interval(2.0, 4.0);
    k.y_support = Interval(0.0, 1.0);
    return k;
}

Kernel make_kernel_Ktilde(double beta_param) {
    Kernel k;
    k.name = "Ktilde";
    const double bp = beta_param;
    k.eval = [bp](double x, double y) { return kernel_K1(y) * kernel_K2(x - y - 1.0, bp); };
    // y = s + t: K2(x - y - 1) = K2((x - 1 - s) - t); with s = x - 1 the
    // offset x - 1 - s is exactly zero and the singular argument is -t
    k.eval_y_local = [bp](double x, double s, double t) {
        const double d = (x - 1.0) - s;
        return kernel_K1(s + t) * kernel_K2(d - t, bp);
    };
    // x = s + t: K2(x - y - 1) = K2((s - y - 1) + t); anchor s = y + 1
    k.eval_x_local = [bp](double s, double t, double y) {
        const double d = (s - y) - 1.0;
        return kernel_K1(y) * kernel_K2(d + t, bp);
    };
    k.y_singular = [](double x) { return std::vector<double>{x - 1.0}; };
    k.x_singular = [](double y) { return std::vector<double>{y + 1.0}; };
    k.y_breaks = [](double x) { return std::vector<double>{2.0, 3.0, x - 2.0, x - 1.0}; };
    k.x_breaks = [](double y) { return std::vector<double>{y + 1.0, y + 2.0}; };
    k.x_support = Interval(3.0, 5.0);
    k.y_support = Interval(2.0, 3.0);
    return k;
}

Kernel make_fractional(double alpha, Kernel base) {
    if (!(alpha > 0.0)) throw RangeError("fractional kernel requires alpha > 0");
    Kernel k;
    k.name = "fractional(" + std::to_string(alpha) + "," + base.name + ")";
    k.eval = [alpha, b = base.eval](double x, double y) {
        return std::pow(std::fabs(x - y), alpha) * b(x, y);
    };
    k.eval_y_local = [alpha, b = base.eval_y_local](double x, double s, double t) {
        const double d = x - s;
        return std::pow(std::fabs(d - t), alpha) * b(x, s, t);
    };
    k.eval_x_local = [alpha, b = base.eval_x_local](double s, double t, double y) {
        const double d = s - y;
        return std::pow(std::fabs(d + t), alpha) * b(s, t, y);
    };
    k.y_singular = base.y_singular;
    k.x_singular = base.x_singular;
    // |x-y|^alpha has a kink on the diagonal
    k.y_breaks = [b = base.y_breaks](double x) {
        auto v = b(x);
        v.push_back(x);
        return v;
    };
    k.x_breaks = [b = base.x_breaks](double y) {
        auto v = b(y);
        v.push_back(y);
        return v;
    };
    k.x_support = base.x_support;
    k.y_support = base.y_support;
    return k;
}

Kernel kernel_by_name(const std::string& name, double beta_param, double alpha) {
    if (name == "K") return make_kernel_K(beta_param);
    if (name == "Ktilde") return make_kernel_Ktilde(beta_param);
    if (name == "fractional_K") return make_fractional(alpha, make_kernel_K(beta_param));
    if (name == "fractional_Ktilde") return make_fractional(alpha, make_kernel_Ktilde(beta_param));
    throw ParseError("unknown kernel '" + name + "'");
}

namespace {

// Append graded cells of [lo, hi] toward the anchor at one endpoint.
// fn(s, t) evaluates the integrand at s + t in local coordinates.
void append_graded_piece(SampleBlock& block, double lo, double hi, bool anchor_at_lo,
                         const std::function<double(double, double)>& fn,
                         const VariableExponent& r, const SliceSpec& spec) {
    const double len = hi - lo;
    if (!(len > 0.0)) return;
    const double anchor = anchor_at_lo ? lo : hi;
    const int n = spec.grade_octaves * spec.cells_per_octave;
    double t_prev = len;
    for (int j = 1; j <= n; ++j) {
        const double t = len * std::exp2(-static_cast<double>(j) / spec.cells_per_octave);
        const double mid = 0.5 * (t + t_prev);
        const double w = t_prev - t;
        if (w > 0.0) {
            const double tt = anchor_at_lo ? mid : -mid;
            block.push(w, fn(anchor, tt), r(anchor + tt));
        }
        t_prev = t;
    }
    // innermost cell down to the anchor
    if (t_prev > 0.0) {
        const double mid = 0.5 * t_prev;
        const double tt = anchor_at_lo ? mid : -mid;
        block.push(t_prev, fn(anchor, tt), r(anchor + tt));
    }
}

void append_uniform_piece(SampleBlock& block, double lo, double hi,
                          const std::function<double(double, double)>& fn,
                          const VariableExponent& r, const SliceSpec& spec) {
    const double len = hi - lo;
    if (!(len > 0.0)) return;
    const std::size_t n = std::max<std::size_t>(spec.base_cells, 1);
    const double w = len / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = w * (static_cast<double>(i) + 0.5);
        block.push(w, fn(lo, t), r(lo + t));
    }
}

// Split [part] at break/singular points and build blocks, grading toward
// each singular anchor (both sides).
void build_slice_blocks(std::vector<SampleBlock>& out, const Interval& part,
                        const std::vector<double>& breaks, const std::vector<double>& singular,
                        const std::function<double(double, double)>& fn,
                        const VariableExponent& r, const SliceSpec& spec) {
    std::vector<double> cuts{part.a, part.b};
    for (double c : breaks)
        if (c > part.a && c < part.b) cuts.push_back(c);
    for (double s : singular)
        if (s > part.a && s < part.b) cuts.push_back(s);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto is_singular = [&](double v) {
        for (double s : singular)
            if (s == v) return true;
        return false;
    };

    SampleBlock block;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i], hi = cuts[i + 1];
        const bool slo = is_singular(lo), shi = is_singular(hi);
        if (slo && shi) {
            const double mid = 0.5 * (lo + hi);
            append_graded_piece(block, lo, mid, true, fn, r, spec);
            append_graded_piece(block, mid, hi, false, fn, r, spec);
        } else if (slo) {
            append_graded_piece(block, lo, hi, true, fn, r, spec);
        } else if (shi) {
            append_graded_piece(block, lo, hi, false, fn, r, spec);
        } else {
            append_uniform_piece(block, lo, hi, fn, r, spec);
        }
    }
    if (!block.value.empty()) out.push_back(std::move(block));
}

bool support_excludes(const std::optional<Interval>& support, double pt) {
    return support && !(support->a <= pt && pt <= support->b);
}

}  // namespace

double slice_norm(const Kernel& k, int variant, double x, std::optional<double> z,
                  const std::vector<Interval>& parts, const VariableExponent& r,
                  const SliceSpec& spec) {
    if (variant != 1 && variant != 2) throw RangeError("slice variant must be 1 or 2");

    // exact support-box skip
    const auto& point_support = variant == 1 ? k.x_support : k.y_support;
    const auto& slice_support = variant == 1 ? k.y_support : k.x_support;
    const bool x_out = support_excludes(point_support, x);
    const bool z_out = !z || support_excludes(point_support, *z);
    if (x_out && z_out) return 0.0;

    std::function<double(double, double)> fn;
    if (variant == 1) {
        if (z)
            fn = [&](double s, double t) {
                return k.eval_y_local(x, s, t) - k.eval_y_local(*z, s, t);
            };
        else
            fn = [&](double s, double t) { return k.eval_y_local(x, s, t); };
    } else {
        if (z)
            fn = [&](double s, double t) {
                return k.eval_x_local(s, t, x) - k.eval_x_local(s, t, *z);
            };
        else
            fn = [&](double s, double t) { return k.eval_x_local(s, t, x); };
    }

    auto breaks_of = variant == 1 ? k.y_breaks : k.x_breaks;
    auto singular_of = variant == 1 ? k.y_singular : k.x_singular;
    std::vector<double> breaks = breaks_of(x);
    std::vector<double> singular = singular_of(x);
    if (z) {
        for (double b : breaks_of(*z)) breaks.push_back(b);
        for (double s : singular_of(*z)) singular.push_back(s);
    }

    std::vector<SampleBlock> blocks;
    for (const auto& part : parts) {
        std::optional<Interval> clipped = part;
        if (slice_support) clipped = part.intersect(*slice_support);
        if (!clipped) continue;
        build_slice_blocks(blocks, *clipped, breaks, singular, fn, r, spec);
    }
    if (blocks.empty()) return 0.0;
    return luxemburg_norm(blocks).value;
}

double apply_operator(const Kernel& k, const GridFunction& f, double x, const SliceSpec& spec) {
    if (support_excludes(k.x_support, x)) return 0.0;
    const Interval window = f.grid().window();
    std::optional<Interval> domain = window;
    if (k.y_support) domain = window.intersect(*k.y_support);
    if (!domain) return 0.0;

    std::vector<double> breaks = k.y_breaks(x);
    for (double b : f.grid().breakpoints())
        if (b > domain->a && b < domain->b) breaks.push_back(b);
    std::vector<double> singular = k.y_singular(x);

    auto fn = [&](double s, double t) { return k.eval_y_local(x, s, t) * f(s + t); };
    std::vector<SampleBlock> blocks;
    build_slice_blocks(blocks, *domain, breaks, singular, fn,
                       VariableExponent::constant(1.0), spec);

    double total = 0.0, floor_part = 0.0, abs_total = 0.0;
    for (const auto& b : blocks)
        for (std::size_t i = 0; i < b.value.size(); ++i) {
            const double c = b.width[i] * b.value[i];
            total += c;
            abs_total += std::fabs(c);
        }
    // non-decaying floor contributions indicate a non-integrable singularity
    for (const auto& b : blocks) {
        std::size_t n = b.value.size();
        if (n >= 2 && b.width[n - 1] < b.width[n - 2])
            floor_part = std::max(floor_part, std::fabs(b.width[n - 1] * b.value[n - 1]));
    }
    if (abs_total > 0.0 && floor_part > 0.05 * abs_total)
        throw QuadratureError("graded floor reached with non-decaying contributions");
    return total;
}

GridFunction operator_profile(const Kernel& k, const GridFunction& f, const SliceSpec& spec) {
    std::vector<double> out(f.grid().cell_count(), 0.0);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = apply_operator(k, f, f.grid().midpoint(i), spec);
    return GridFunction(f.grid_ptr(), std::move(out));
}

namespace {

struct IndicatorCache {
    const VariableExponent* exponent;
    std::map<std::pair<double, double>, double> values;

    double norm(const Interval& q) {
        auto key = std::make_pair(q.a, q.b);
        auto it = values.find(key);
        if (it != values.end()) return it->second;
        const double v = indicator_norm(*exponent, q).value;
        values.emplace(key, v);
        return v;
    }
};

std::vector<Interval> annulus_parts(const Interval& inner, const Interval& outer) {
    std::vector<Interval> parts;
    if (outer.a < inner.a) parts.emplace_back(outer.a, inner.a);
    if (inner.b < outer.b) parts.emplace_back(inner.b, outer.b);
    return parts;
}

}  // namespace

HormanderSum hormander_sum(const Kernel& k, const Interval& q, double x, double z,
                           const VariableExponent& beta, const VariableExponent& r, int variant,
                           int m_max, const SliceSpec& spec) {
    const Interval half = q.dilated(0.5);
    if (!half.contains(x) || !half.contains(z))
        throw RangeError("hormander_sum requires x, z in (1/2)Q");

    HormanderSum sum;
    IndicatorCache chi_r{&r, {}}, chi_b{&beta, {}};
    Interval prev = q;
    int zero_run = 0;
    for (int m = 1; m <= m_max; ++m) {
        const Interval cur = q.dilated(std::exp2(m));
        HormanderTerm term;
        term.m = m;
        term.annulus_norm = slice_norm(k, variant, x, z, annulus_parts(prev, cur), r, spec);
        if (term.annulus_norm == 0.0) {
            ++zero_run;
            sum.terms.push_back(term);
            prev = cur;
            if (zero_run >= 10) {
                sum.support_exhausted = true;
                break;
            }
            continue;
        }
        zero_run = 0;
        term.chi_r = chi_r.norm(cur);
        term.chi_beta = chi_b.norm(cur);
        term.value = cur.length() / term.chi_beta * term.annulus_norm / term.chi_r;
        sum.total += term.value;
        sum.max_annulus_norm = std::max(sum.max_annulus_norm, term.annulus_norm);
        sum.terms.push_back(term);
        prev = cur;
    }
    sum.terms_used = static_cast<int>(sum.terms.size());
    return sum;
}

namespace {

std::vector<std::pair<double, double>> probe_pairs(const Interval& q,
                                                   const std::vector<double>& quantiles) {
    const Interval half = q.dilated(0.5);
    std::vector<double> pts;
    pts.reserve(quantiles.size());
    for (double t : quantiles) pts.push_back(half.a + t * half.length());
    std::vector<std::pair<double, double>> pairs;
    for (double a : pts)
        for (double b : pts)
            if (a < b) pairs.emplace_back(a, b);  // the kernel difference is symmetric
    return pairs;
}

}  // namespace

nlohmann::json HormanderReport::to_json() const {
    nlohmann::json j;
    j["sup"] = sup;
    j["verdict"] = to_string(verdict);
    j["m_stable"] = m_stable;
    auto& arr = j["ladder"] = nlohmann::json::array();
    for (const auto& lv : ladder)
        arr.push_back({{"octaves", lv.octaves},
                       {"sup_sum", lv.sup_sum},
                       {"sup_inner", lv.sup_inner},
                       {"witness_cube", {lv.witness.q.a, lv.witness.q.b}},
                       {"witness_x", lv.witness.x},
                       {"witness_z", lv.witness.z}});
    auto& terms = j["witness_terms"] = nlohmann::json::array();
    for (const auto& t : witness_terms)
        terms.push_back({{"m", t.m},
                         {"annulus_norm", t.annulus_norm},
                         {"chi_r", t.chi_r},
                         {"chi_beta", t.chi_beta},
                         {"value", t.value}});
    return j;
}

HormanderReport hormander_class_probe(const Kernel& k, const VariableExponent& beta,
                                      const VariableExponent& r, int variant,
                                      const HormanderProbeConfig& cfg) {
    HormanderReport rep;
    bool any_truncated = false;

    for (int octaves : cfg.ladder) {
        SliceSpec spec{cfg.base_cells, octaves, cfg.cells_per_octave};
        LadderLevel level;
        level.octaves = octaves;
        auto consider = [&](const Interval& q, double x, double z) {
            const HormanderSum s = hormander_sum(k, q, x, z, beta, r, variant, cfg.m_max, spec);
            if (!s.support_exhausted && s.terms_used >= cfg.m_max) any_truncated = true;
            if (s.total > level.sup_sum) {
                level.sup_sum = s.total;
                level.witness = {q, x, z};
            }
            level.sup_inner = std::max(level.sup_inner, s.max_annulus_norm);
        };
        for (const auto& q : cfg.cubes)
            for (const auto& [x, z] : probe_pairs(q, cfg.quantiles)) consider(q, x, z);
        for (const auto& pp : cfg.extra_points) consider(pp.q, pp.x, pp.z);
        rep.ladder.push_back(level);
    }

    rep.sup = rep.ladder.back().sup_sum;
    rep.m_stable = !any_truncated;

    const auto& first = rep.ladder.front();
    const auto& last = rep.ladder.back();
    if (last.sup_sum > 0.0) {
        // per-term audit trail for the extremal triple at the finest rung
        SliceSpec finest{cfg.base_cells, cfg.ladder.back(), cfg.cells_per_octave};
        rep.witness_terms = hormander_sum(k, last.witness.q, last.witness.x, last.witness.z,
                                          beta, r, variant, cfg.m_max, finest)
                                .terms;
    }
    if (last.sup_sum == 0.0) {
        rep.verdict = Verdict::bounded;
        return rep;
    }
    bool diverging = rep.ladder.size() >= 2;
    for (std::size_t i = 1; i < rep.ladder.size(); ++i)
        if (!(rep.ladder[i].sup_inner >= cfg.divergence_factor * rep.ladder[i - 1].sup_inner))
            diverging = false;
    if (diverging) {
        rep.verdict = Verdict::diverging;
    } else if (first.sup_sum > 0.0 && last.sup_sum <= cfg.stability_cap * first.sup_sum &&
               rep.m_stable) {
        rep.verdict = Verdict::bounded;
    } else {
        rep.verdict = Verdict::inconclusive;
    }
    return rep;
}

nlohmann::json SizeReport::to_json() const {
    nlohmann::json j;
    j["sup_ratio"] = sup_ratio;
    j["verdict"] = to_string(verdict);
    j["raw_slope"] = raw_slope;
    auto& arr = j["cubes"] = nlohmann::json::array();
    for (const auto& c : cubes)
        arr.push_back({{"a", c.q.a}, {"b", c.q.b}, {"ratio", c.ratio}, {"raw", c.raw}});
    auto& lad = j["ladder"] = nlohmann::json::array();
    for (const auto& lv : ladder)
        lad.push_back({{"octaves", lv.octaves}, {"sup_ratio", lv.sup_sum}});
    return j;
}

SizeReport size_condition_probe(const Kernel& k, const VariableExponent& beta,
                                const VariableExponent& r, int variant,
                                const HormanderProbeConfig& cfg) {
    SizeReport rep;
    IndicatorCache chi_r{&r, {}}, chi_b{&beta, {}};

    auto cube_sup = [&](const Interval& q, const SliceSpec& spec) {
        const Interval half = q.dilated(0.5);
        const auto parts = annulus_parts(q, q.dilated(2.0));
        double sup = 0.0;
        for (double t : cfg.quantiles) {
            const double x = half.a + t * half.length();
            sup = std::max(sup, slice_norm(k, variant, x, std::nullopt, parts, r, spec));
        }
        return sup;
    };

    for (int octaves : cfg.ladder) {
        SliceSpec spec{cfg.base_cells, octaves, cfg.cells_per_octave};
        LadderLevel level;
        level.octaves = octaves;
        const bool finest = octaves == cfg.ladder.back();
        for (const auto& q : cfg.cubes) {
            const double sup = cube_sup(q, spec);
            const double ratio = sup == 0.0
                                     ? 0.0
                                     : sup / chi_r.norm(q) * q.length() / chi_b.norm(q);
            if (ratio > level.sup_sum) {
                level.sup_sum = ratio;
                level.witness = {q, 0.0, 0.0};
            }
            level.sup_inner = std::max(level.sup_inner, sup);
            if (finest) rep.cubes.push_back({q, ratio, sup == 0.0 ? 0.0 : ratio * chi_b.norm(q)});
        }
        rep.ladder.push_back(level);
    }
    rep.sup_ratio = rep.ladder.back().sup_sum;

    // per-size maxima of the raw sup, least squares in log-log
    std::map<long long, std::pair<double, double>> by_size;  // len key -> (log len, max raw)
    for (const auto& c : rep.cubes) {
        if (!(c.raw > 0.0)) continue;
        const long long key = std::llround(std::log2(c.q.length()) * 1024.0);
        auto [it, inserted] = by_size.emplace(key, std::make_pair(std::log(c.q.length()), c.raw));
        if (!inserted) it->second.second = std::max(it->second.second, c.raw);
    }
    if (by_size.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double n = static_cast<double>(by_size.size());
        for (const auto& [key, lv] : by_size) {
            const double lx = lv.first, ly = std::log(lv.second);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        rep.raw_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }

    const auto& first = rep.ladder.front();
    const auto& last = rep.ladder.back();
    if (last.sup_sum == 0.0) {
        rep.verdict = Verdict::bounded;
    } else {
        bool diverging = rep.ladder.size() >= 2;
        for (std::size_t i = 1; i < rep.ladder.size(); ++i)
            if (!(rep.ladder[i].sup_inner >= cfg.divergence_factor * rep.ladder[i - 1].sup_inner))
                diverging = false;
        if (diverging)
            rep.verdict = Verdict::diverging;
        else if (first.sup_sum > 0.0 && last.sup_sum <= cfg.stability_cap * first.sup_sum)
            rep.verdict = Verdict::bounded;
        else
            rep.verdict = Verdict::inconclusive;
    }
    return rep;
}

double bmo_seminorm(const GridFunction& f, const Weight& w,
                    const std::vector<Interval>& cubes) {
    const std::vector<double> sharp = sharp_profile(f, cubes);
    const auto& wv = w.values();
    double sup = 0.0;
    for (std::size_t i = 0; i < sharp.size(); ++i)
        sup = std::max(sup, wv.value(i) * sharp[i]);
    return sup;
}

}  // namespace varlp
