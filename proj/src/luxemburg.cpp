#include "varlp/luxemburg.hpp"

#include <algorithm>
#include <cmath>

namespace varlp {

namespace {

// Per-block precomputation: finite-exponent nonzero cells as
// (width, log|value|, exponent), plus the sup of |value| on {p = inf}.
struct Prepared {
    std::vector<double> w, logv, p;
    double sup_inf = 0.0;
    double total_width = 0.0;
    double max_abs = 0.0;

    void add(const SampleBlock& b) {
        for (std::size_t i = 0; i < b.value.size(); ++i) {
            const double v = std::fabs(b.value[i]);
            total_width += b.width[i];
            if (v == 0.0) continue;
            max_abs = std::max(max_abs, v);
            if (std::isinf(b.exponent[i])) {
                sup_inf = std::max(sup_inf, v);
            } else {
                w.push_back(b.width[i]);
                logv.push_back(std::log(v));
                p.push_back(b.exponent[i]);
            }
        }
    }

    double modular(double lambda, SupConvention sup) const {
        const double ll = std::log(lambda);
        double acc = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            acc += w[i] * std::exp(p[i] * (logv[i] - ll));
            if (acc == kInf) return kInf;
        }
        if (sup_inf > 0.0)
            acc += sup == SupConvention::scaled ? sup_inf / lambda : sup_inf;
        return acc;
    }
};

Prepared prepare(const std::vector<SampleBlock>& blocks) {
    Prepared pr;
    for (const auto& b : blocks) pr.add(b);
    return pr;
}

}  // namespace

double modular(const std::vector<SampleBlock>& blocks, double lambda, SupConvention sup) {
    if (!(lambda > 0.0)) throw RangeError("modular requires lambda > 0");
    return prepare(blocks).modular(lambda, sup);
}

NormResult luxemburg_norm(const std::vector<SampleBlock>& blocks, double rel_tol,
                          SupConvention sup) {
    const Prepared pr = prepare(blocks);
    NormResult res;
    if (pr.max_abs == 0.0) return res;  // zero function

    // With p >= 1 everywhere, rho(f/hi) <= 1 is guaranteed at
    // hi = sup|f| (1 + total width); extended-mode exponents below 1 may
    // need a few doublings more.
    double hi = pr.max_abs * (1.0 + pr.total_width);
    for (int i = 0; i < 1200 && pr.modular(hi, sup) > 1.0; ++i) hi *= 2.0;

    double lo = hi;
    while (lo > hi * 1e-18 && pr.modular(0.5 * lo, sup) <= 1.0) lo *= 0.5;
    lo *= 0.5;  // rho(lo) > 1 (or lo is negligibly small)

    while (hi - lo > rel_tol * hi) {
        const double mid = 0.5 * (lo + hi);
        if (pr.modular(mid, sup) <= 1.0)
            hi = mid;
        else
            lo = mid;
    }
    res.value = hi;
    res.bracket_lo = lo;
    res.bracket_hi = hi;
    res.modular_at_value = pr.modular(hi, sup);
    return res;
}

double classical_norm(const std::vector<SampleBlock>& blocks, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (const auto& b : blocks)
            for (double v : b.value) m = std::max(m, std::fabs(v));
        return m;
    }
    double acc = 0.0;
    for (const auto& b : blocks)
        for (std::size_t i = 0; i < b.value.size(); ++i)
            acc += b.width[i] * std::pow(std::fabs(b.value[i]), p);
    return std::pow(acc, 1.0 / p);
}

SampleBlock block_of(const GridFunction& f, const VariableExponent& p,
                     const std::optional<Interval>& q) {
    SampleBlock b;
    const Grid& g = f.grid();
    std::size_t first = 0, last = g.cell_count();
    if (q) std::tie(first, last) = g.overlapping_range(*q);
    b.width.reserve(last - first);
    for (std::size_t i = first; i < last; ++i) {
        const Interval cell = g.cell(i);
        const double w = q ? cell.overlap(*q) : cell.length();
        if (w <= 0.0) continue;
        b.push(w, f.value(i), p(g.midpoint(i)));
    }
    return b;
}

double modular(const GridFunction& f, const VariableExponent& p, double lambda,
               SupConvention sup) {
    return modular(std::vector<SampleBlock>{block_of(f, p)}, lambda, sup);
}

NormResult luxemburg_norm(const GridFunction& f, const VariableExponent& p,
                          const std::optional<Interval>& q, double rel_tol, SupConvention sup) {
    return luxemburg_norm(std::vector<SampleBlock>{block_of(f, p, q)}, rel_tol, sup);
}

NormResult indicator_norm(const VariableExponent& p, const Interval& q, std::size_t cells) {
    SampleBlock b;
    const double w = q.length() / static_cast<double>(cells);
    bool constant = true;
    double p0 = p(q.a + 0.5 * w);
    for (std::size_t i = 0; i < cells; ++i) {
        const double x = q.a + w * (static_cast<double>(i) + 0.5);
        const double pi = p(x);
        if (pi != p0) constant = false;
        b.push(w, 1.0, pi);
    }
    if (constant) {
        // exact closed form: the Luxemburg norm of chi_Q at constant p is
        // |Q|^{1/p} (1 for p = inf)
        NormResult r;
        r.value = std::isinf(p0) ? 1.0 : std::pow(q.length(), 1.0 / p0);
        r.bracket_lo = r.bracket_hi = r.value;
        r.modular_at_value = 1.0;
        return r;
    }
    return luxemburg_norm(std::vector<SampleBlock>{std::move(b)});
}

PowerIdentityReport power_norm_identity_check(const GridFunction& f, const VariableExponent& p,
                                              double s0) {
    if (!(s0 > 0.0)) throw RangeError("power identity requires s0 > 0");
    PowerIdentityReport rep;
    GridFunction fs = f.map([s0](double v) { return std::pow(std::fabs(v), s0); });
    rep.lhs = luxemburg_norm(fs, p).value;
    const VariableExponent sp = scale_exponent(p, s0);
    rep.rhs = std::pow(luxemburg_norm(f, sp).value, s0);
    const double denom = std::max(rep.lhs, rep.rhs);
    rep.rel_gap = denom == 0.0 ? 0.0 : std::fabs(rep.lhs - rep.rhs) / denom;
    return rep;
}

HolderReport holder(const GridFunction& f, const GridFunction& g, const VariableExponent& p) {
    HolderReport rep;
    const VariableExponent pc = conjugate(p);
    rep.lhs = luxemburg_norm(f * g, VariableExponent::constant(1.0)).value;
    rep.rhs = luxemburg_norm(f, p).value * luxemburg_norm(g, pc).value;
    rep.ratio = rep.rhs == 0.0 ? 0.0 : rep.lhs / rep.rhs;
    return rep;
}

HolderReport holder_general(const GridFunction& f, const GridFunction& g,
                            const VariableExponent& r, const VariableExponent& p,
                            const VariableExponent& q) {
    const Grid& grid = f.grid();
    for (std::size_t i = 0; i < grid.cell_count(); ++i) {
        const double x = grid.midpoint(i);
        if (std::fabs(r.reciprocal(x) - p.reciprocal(x) - q.reciprocal(x)) > 1e-12)
            throw ExponentMismatch("1/r = 1/p + 1/q fails at x = " + std::to_string(x));
    }
    HolderReport rep;
    rep.lhs = luxemburg_norm(f * g, r).value;
    rep.rhs = luxemburg_norm(f, p).value * luxemburg_norm(g, q).value;
    rep.ratio = rep.rhs == 0.0 ? 0.0 : rep.lhs / rep.rhs;
    return rep;
}

double conjugate_k_constant(const VariableExponent& q, const Grid& grid) {
    bool any_finite = false, any_inf = false;
    for (std::size_t i = 0; i < grid.cell_count(); ++i) {
        if (q.is_infinite_at(grid.midpoint(i)))
            any_inf = true;
        else
            any_finite = true;
    }
    const double k_inv = (any_finite ? 1.0 : 0.0) + (any_inf ? 1.0 : 0.0);
    return k_inv == 0.0 ? 1.0 : 1.0 / k_inv;
}

ConjugateNormResult conjugate_norm(const GridFunction& f, const VariableExponent& p,
                                   const VariableExponent& r, std::size_t random_candidates,
                                   std::uint64_t seed) {
    ConjugateNormResult best;
    if (f.is_zero()) return best;
    const Grid& grid = f.grid();

    // q from the combine-inverse 1/q = 1/r - 1/p; r <= p is required
    auto q_recip = [&](double x) {
        const double d = r.reciprocal(x) - p.reciprocal(x);
        if (d < -1e-12) throw ExponentMismatch("conjugate_norm requires r <= p pointwise");
        return d < 0.0 ? 0.0 : d;
    };
    const VariableExponent q = VariableExponent::from_reciprocal(
        q_recip, std::max(0.0, r.reciprocal_infinity() - p.reciprocal_infinity()));

    auto try_candidate = [&](GridFunction g, const std::string& name) {
        const double gq = luxemburg_norm(g, q).value;
        if (gq > 1.0) g = g.scaled(1.0 / gq);
        const double value = luxemburg_norm(f * g, r).value;
        if (value > best.value) {
            best.value = value;
            best.witness_q_norm = std::min(gq, 1.0);
            best.witness = name;
        }
    };

    // appendix witness: g = (|f|/lambda)^{(p-r)/r}, with rho_p(f/lambda) = 1
    const double lambda = luxemburg_norm(f, p).value;
    if (lambda > 0.0) {
        std::vector<double> gv(grid.cell_count());
        for (std::size_t i = 0; i < gv.size(); ++i) {
            const double x = grid.midpoint(i);
            const double v = std::fabs(f.value(i));
            if (v == 0.0) {
                gv[i] = 0.0;
                continue;
            }
            if (q.is_infinite_at(x)) {
                gv[i] = 1.0;  // r = p there; constant witness attains the sup
                continue;
            }
            const double expo = (p(x) - r(x)) / r(x);
            gv[i] = std::pow(v / lambda, expo);
        }
        try_candidate(GridFunction(f.grid_ptr(), gv), "appendix");

        // k_q-weighted variant for mixed q-regions
        const double k = conjugate_k_constant(q, grid);
        if (k < 1.0) {
            std::vector<double> gk(gv);
            for (double& v : gk) v *= k;
            try_candidate(GridFunction(f.grid_ptr(), gk), "appendix_k");
        }
    }

    Rng rng(seed);
    for (std::size_t c = 0; c < random_candidates; ++c) {
        std::vector<double> gv(grid.cell_count());
        for (double& v : gv) v = rng.next_double();
        try_candidate(GridFunction(f.grid_ptr(), gv), "random" + std::to_string(c));
    }
    return best;
}

CubeNormReport cube_norm_estimates(const VariableExponent& p, const Interval& q,
                                   std::size_t cells) {
    CubeNormReport rep;
    rep.norm = indicator_norm(p, q, cells).value;
    const double len = q.length();
    rep.via_harmonic = std::pow(len, 1.0 / harmonic_mean(p, q, cells));
    const double pc = p(q.center());
    rep.via_center = std::isinf(pc) ? 1.0 : std::pow(len, 1.0 / pc);
    const double pinf = p.p_infinity();
    rep.via_infinity = std::isinf(pinf) ? 1.0 : std::pow(len, 1.0 / pinf);
    return rep;
}

double cube_norm_triple_ratio(const VariableExponent& r, const VariableExponent& p,
                              const VariableExponent& q, const Interval& cube,
                              std::size_t cells) {
    const double nr = indicator_norm(r, cube, cells).value;
    const double np = indicator_norm(p, cube, cells).value;
    const double nq = indicator_norm(q, cube, cells).value;
    return nr / (np * nq);
}

}  // namespace varlp
