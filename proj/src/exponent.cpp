#include "varlp/exponent.hpp"

#include <algorithm>
#include <cmath>

namespace varlp {

namespace {

double parse_exponent_value(const nlohmann::json& v) {
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "inf" || s == "infinity") return kInf;
        throw ParseError("unknown exponent value '" + s + "'");
    }
    return v.get<double>();
}

double to_recip(double p) {
    if (std::isinf(p)) return 0.0;
    if (!(p > 0.0)) throw RangeError("exponent values must be positive");
    return 1.0 / p;
}

}  // namespace

VariableExponent VariableExponent::constant(double p) {
    const double r = to_recip(p);
    if (p < 1.0) throw RangeError("constant exponent below 1 (use extended mode)");
    return VariableExponent([r](double) { return r; }, r, false);
}

VariableExponent VariableExponent::from_value(std::function<double(double)> value,
                                              double p_infinity, bool extended) {
    const double rinf = to_recip(p_infinity);
    auto recip = [f = std::move(value)](double x) {
        const double p = f(x);
        return std::isinf(p) ? 0.0 : 1.0 / p;
    };
    return VariableExponent(std::move(recip), rinf, extended);
}

VariableExponent VariableExponent::from_reciprocal(std::function<double(double)> recip,
                                                   double recip_infinity, bool extended) {
    return VariableExponent(std::move(recip), recip_infinity, extended);
}

VariableExponent VariableExponent::from_json(const nlohmann::json& spec) {
    const std::string kind = spec.at("kind").get<std::string>();
    if (kind == "constant") {
        return constant(parse_exponent_value(spec.at("value")));
    }
    if (kind == "piecewise") {
        struct Piece {
            double from, to;
            bool affine;
            double c0, c1;  // value = c0 + c1 x on [from, to)
        };
        std::vector<Piece> pieces;
        for (const auto& pj : spec.at("pieces")) {
            Piece pc{};
            pc.from = pj.at("from").get<double>();
            pc.to = pj.at("to").get<double>();
            if (pj.contains("affine")) {
                pc.affine = true;
                pc.c0 = pj.at("affine").at(0).get<double>();
                pc.c1 = pj.at("affine").at(1).get<double>();
            } else {
                pc.affine = false;
                pc.c0 = parse_exponent_value(pj.at("value"));
                pc.c1 = 0.0;
            }
            pieces.push_back(pc);
        }
        const double dflt = parse_exponent_value(spec.at("default"));
        auto value = [pieces, dflt](double x) {
            for (const auto& pc : pieces)
                if (x >= pc.from && x < pc.to) return pc.affine ? pc.c0 + pc.c1 * x : pc.c0;
            return dflt;
        };
        return from_value(std::move(value), dflt);
    }
    if (kind == "bump") {
        // smooth compact bump: log-Hölder by C^inf smoothness and compact support
        const double base = spec.at("base").get<double>();
        const double amp = spec.at("amplitude").get<double>();
        const double center = spec.at("center").get<double>();
        const double width = spec.at("width").get<double>();
        auto value = [=](double x) {
            const double t = (x - center) / width;
            if (std::fabs(t) >= 1.0) return base;
            return base + amp * std::exp(1.0 - 1.0 / (1.0 - t * t));
        };
        return from_value(std::move(value), base);
    }
    if (kind == "jump") {
        const double at = spec.at("at").get<double>();
        const double left = parse_exponent_value(spec.at("left"));
        const double right = parse_exponent_value(spec.at("right"));
        auto value = [=](double x) { return x < at ? left : right; };
        return from_value(std::move(value), right);
    }
    throw ParseError("unknown exponent kind '" + kind + "'");
}

VariableExponent VariableExponent::from_json_string(const std::string& spec) {
    return from_json(nlohmann::json::parse(spec));
}

std::pair<double, double> VariableExponent::essential_bounds(const Interval& domain,
                                                             std::size_t samples) const {
    double lo = kInf, hi = 1.0;
    bool any_inf = false;
    for (std::size_t i = 0; i < samples; ++i) {
        const double x =
            domain.a + domain.length() * ((static_cast<double>(i) + 0.5) / samples);
        const double r = recip_(x);
        if (r == 0.0) {
            any_inf = true;
            continue;
        }
        lo = std::min(lo, 1.0 / r);
        hi = std::max(hi, 1.0 / r);
    }
    if (any_inf) hi = kInf;
    if (std::isinf(lo)) lo = hi;  // exponent is identically infinite
    return {lo, hi};
}

VariableExponent conjugate(const VariableExponent& p) {
    if (p.extended_) throw RangeError("conjugate undefined in extended mode");
    auto recip = [f = p.recip_](double x) { return 1.0 - f(x); };
    return VariableExponent(std::move(recip), 1.0 - p.recip_inf_, false);
}

VariableExponent combine(const VariableExponent& p, const VariableExponent& q) {
    const bool extended = p.extended_ || q.extended_;
    auto recip = [fp = p.recip_, fq = q.recip_, extended](double x) {
        const double r = fp(x) + fq(x);
        if (!extended && r > 1.0 + 1e-12)
            throw RangeError("combined exponent drops below 1 in standard mode");
        return r;
    };
    return VariableExponent(std::move(recip), p.recip_inf_ + q.recip_inf_, extended);
}

VariableExponent beta_from_pair(const VariableExponent& p, const VariableExponent& q) {
    auto recip = [fp = p.recip_, fq = q.recip_](double x) {
        const double r = fp(x) - fq(x);
        if (r < -1e-12) throw RangeError("beta_from_pair requires p <= q pointwise");
        return r < 0.0 ? 0.0 : r;
    };
    double rinf = p.recip_inf_ - q.recip_inf_;
    if (rinf < 0.0) rinf = 0.0;
    return VariableExponent(std::move(recip), rinf, false);
}

VariableExponent scale_exponent(const VariableExponent& p, double s0) {
    if (!(s0 > 0.0)) throw RangeError("scale_exponent requires s0 > 0");
    return VariableExponent::from_reciprocal(
        [f = p, s0](double x) { return f.reciprocal(x) / s0; }, p.reciprocal_infinity() / s0,
        true);
}

VariableExponent combine_inverse(const VariableExponent& r, const VariableExponent& p) {
    auto recip = [fr = r, fp = p](double x) {
        const double d = fr.reciprocal(x) - fp.reciprocal(x);
        if (d < -1e-12) throw ExponentMismatch("combine_inverse requires r <= p pointwise");
        return d < 0.0 ? 0.0 : d;
    };
    return VariableExponent::from_reciprocal(
        std::move(recip),
        std::max(0.0, r.reciprocal_infinity() - p.reciprocal_infinity()));
}

double harmonic_mean(const VariableExponent& p, const Interval& q, std::size_t cells) {
    if (cells == 0) throw QuadratureError("harmonic_mean needs cells > 0");
    double acc = 0.0;
    const double w = q.length() / static_cast<double>(cells);
    for (std::size_t i = 0; i < cells; ++i) {
        const double x = q.a + w * (static_cast<double>(i) + 0.5);
        const double r = p.reciprocal(x);
        if (!std::isfinite(r)) throw QuadratureError("exponent not evaluable on cube");
        acc += r;
    }
    const double mean_recip = acc / static_cast<double>(cells);
    return mean_recip == 0.0 ? kInf : 1.0 / mean_recip;
}

LogHolderReport verify_log_holder(const VariableExponent& p, const Interval& domain,
                                  std::size_t samples, double cap, std::uint64_t seed) {
    if (samples < 2) throw RangeError("verify_log_holder needs samples >= 2");
    LogHolderReport rep;
    rep.cap = cap;

    const double rinf = p.reciprocal_infinity();
    std::vector<double> pts(samples);
    for (std::size_t i = 0; i < samples; ++i)
        pts[i] = domain.a + domain.length() * ((static_cast<double>(i) + 0.5) / samples);

    auto local_constant = [&](double x, double y) {
        const double d = std::fabs(x - y);
        if (!(d > 0.0) || d >= 0.5) return 0.0;
        return std::fabs(p.reciprocal(x) - p.reciprocal(y)) * (-std::log(d));
    };

    // decade buckets for pair separations: 1e-2, 1e-4, ..., 1e-12
    const std::vector<double> scales = {1e-2, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12};
    rep.scale_constants.assign(scales.size(), 0.0);

    auto consider = [&](double x, double y) {
        const double c = local_constant(x, y);
        if (c > rep.c0) {
            rep.c0 = c;
            rep.witness_x = x;
            rep.witness_y = y;
        }
        const double d = std::fabs(x - y);
        for (std::size_t k = 0; k < scales.size(); ++k)
            if (d <= scales[k] * 3.0 && d >= scales[k] / 3.0)
                rep.scale_constants[k] = std::max(rep.scale_constants[k], c);
    };

    // neighbouring sample pairs
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) consider(pts[i], pts[i + 1]);

    // straddling pairs at fixed separation decades around a subsample of
    // the grid (plus the domain center, where library exponents place their
    // features)
    std::vector<double> anchors;
    const std::size_t stride = std::max<std::size_t>(1, samples / 64);
    for (std::size_t i = 0; i < pts.size(); i += stride) anchors.push_back(pts[i]);
    anchors.push_back(domain.center());
    for (double g : anchors)
        for (double h : scales) {
            const double x = g - 0.5 * h, y = g + 0.5 * h;
            if (x >= domain.a && y <= domain.b) consider(x, y);
        }

    // seeded random pairs with log-uniform separations
    Rng rng(seed);
    for (std::size_t i = 0; i < samples; ++i) {
        const double x = rng.uniform(domain.a, domain.b);
        const double h = rng.log_uniform(1e-12, 0.4);
        const double y = std::min(domain.b, x + h);
        consider(x, y);
    }

    // decay constant toward infinity, over the sampled domain
    for (double x : pts) {
        const double c = std::fabs(p.reciprocal(x) - rinf) * std::log(std::exp(1.0) + std::fabs(x));
        rep.c_inf = std::max(rep.c_inf, c);
    }

    // Growing local constants at ever finer separations defeat any finite c0
    // (a jump gives c ~ -log d); compare the finest populated decade against
    // two decades coarser.
    bool growing = false;
    for (std::size_t k = 2; k < rep.scale_constants.size(); ++k) {
        const double fine = rep.scale_constants[k], coarse = rep.scale_constants[k - 2];
        if (coarse > 0.0 && fine > 1.15 * coarse) growing = true;
    }
    rep.pass = !growing && rep.c0 <= cap && rep.c_inf <= cap;
    return rep;
}

}  // namespace varlp
