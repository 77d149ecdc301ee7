#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "varlp/luxemburg.hpp"

using namespace varlp;

namespace {

GridFunction random_piecewise(const GridPtr& grid, Rng& rng, double support = 1.5) {
    std::vector<double> levels(16);
    for (double& v : levels) v = rng.next_double();
    return GridFunction::sample(grid, [levels, support](double x) {
        if (std::fabs(x) >= support) return 0.0;
        const auto k = static_cast<std::size_t>((x / support + 1.0) * 8.0);
        return levels[std::min<std::size_t>(k, 15)];
    });
}

VariableExponent random_bump(Rng& rng, double lo = 1.3, double hi = 3.0) {
    return VariableExponent::from_json({{"kind", "bump"},
                                        {"base", rng.uniform(lo, hi)},
                                        {"amplitude", rng.uniform(0.0, 1.0)},
                                        {"center", rng.uniform(-1.0, 1.0)},
                                        {"width", rng.uniform(0.5, 2.0)}});
}

}  // namespace

TEST_CASE("modular: indicator examples") {
    auto grid = Grid::uniform(Interval(-2.0, 2.0), 512);
    auto chi = GridFunction::sample(grid, [](double x) { return x >= 0 && x < 1 ? 1.0 : 0.0; });
    const auto p2 = VariableExponent::constant(2.0);
    CHECK(modular(chi, p2, 1.0) == doctest::Approx(1.0));
    CHECK(modular(chi.scaled(2.0), p2, 1.0) == doctest::Approx(4.0));

    // p = inf on [0,1]: sup term scaled by lambda
    const auto pinf = VariableExponent::constant(kInf);
    CHECK(modular(chi, pinf, 2.0) == doctest::Approx(0.5));
    // unscaled convention keeps the sup term constant in lambda
    CHECK(modular(std::vector<SampleBlock>{block_of(chi, pinf)}, 2.0,
                  SupConvention::unscaled) == doctest::Approx(1.0));
}

TEST_CASE("luxemburg norm: indicators and closed forms") {
    auto grid = Grid::uniform(Interval(-2.0, 2.0), 512);
    auto chi = GridFunction::sample(grid, [](double x) { return x >= 0 && x < 1 ? 1.0 : 0.0; });
    const auto p2 = VariableExponent::constant(2.0);
    const NormResult n = luxemburg_norm(chi, p2);
    CHECK(n.value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(n.bracket_lo <= n.value);
    CHECK(n.value <= n.bracket_hi);
    CHECK(n.modular_at_value <= 1.0);

    // |Q| = 8 indicator: ||chi_Q||_p = 8^{1/p}
    auto grid8 = Grid::uniform(Interval(-8.0, 8.0), 1024);
    auto chi8 = GridFunction::sample(grid8, [](double x) { return std::fabs(x) < 4 ? 1.0 : 0.0; });
    for (double p0 : {1.0, 2.0, 3.0, 3.5}) {
        const double expected = std::pow(8.0, 1.0 / p0);
        CHECK(luxemburg_norm(chi8, VariableExponent::constant(p0)).value ==
              doctest::Approx(expected).epsilon(1e-9));
    }

    CHECK(luxemburg_norm(GridFunction::zero(grid), p2).value == 0.0);
}

TEST_CASE("luxemburg norm matches the classical closed form for constant p") {
    auto grid = Grid::uniform(Interval(-2.0, 2.0), 1 << 12);
    Rng rng(42);
    for (double p0 : {1.0, 2.0, 3.0, 3.5}) {
        const auto p = VariableExponent::constant(p0);
        for (int trial = 0; trial < 10; ++trial) {
            const auto f = random_piecewise(grid, rng);
            const double oracle = classical_norm({block_of(f, p)}, p0);
            const double lux = luxemburg_norm(f, p).value;
            CHECK(lux == doctest::Approx(oracle).epsilon(1e-8));
        }
    }
}

TEST_CASE("norm scaling and monotonicity") {
    auto grid = Grid::uniform(Interval(-2.0, 2.0), 512);
    Rng rng(7);
    const auto p = random_bump(rng);
    const auto f = random_piecewise(grid, rng);
    const double n = luxemburg_norm(f, p).value;
    CHECK(luxemburg_norm(f.scaled(3.5), p).value == doctest::Approx(3.5 * n).epsilon(1e-9));

    const auto g = f * random_piecewise(grid, rng);  // |g| <= |f| since levels in [0,1)
    CHECK(luxemburg_norm(g, p).value <= n * (1 + 1e-12));
    CHECK(modular(g, p, 0.7) <= modular(f, p, 0.7));
}

TEST_CASE("unit-ball bridge between norm and modular") {
    auto grid = Grid::uniform(Interval(-2.0, 2.0), 512);
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = random_bump(rng);
        auto f = random_piecewise(grid, rng);
        const double scale = rng.uniform(0.2, 3.0);
        f = f.scaled(scale);
        const double norm = luxemburg_norm(f, p).value;
        if (norm == 0.0) continue;
        const double rho = modular(f, p, 1.0);
        if (norm <= 1.0)
            CHECK(rho <= norm * (1 + 1e-9));
        else
            CHECK(norm <= rho * (1 + 1e-9));
    }
}

TEST_CASE("power-of-norm identity") {
    auto grid = Grid::uniform(Interval(-2.0, 2.0), 512);
    const auto p2 = VariableExponent::constant(2.0);
    auto chi = GridFunction::sample(grid, [](double x) { return x >= 0 && x < 1 ? 1.0 : 0.0; });

    auto rep = power_norm_identity_check(chi, p2, 2.0);
    CHECK(rep.lhs == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.rhs == doctest::Approx(1.0).epsilon(1e-9));

    // s0 = 1/2, f = 4 chi: || 2 chi ||_2 = 2 and ||4 chi||_1^{1/2} = 2
    rep = power_norm_identity_check(chi.scaled(4.0), p2, 0.5);
    CHECK(rep.lhs == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(rep.rhs == doctest::Approx(2.0).epsilon(1e-9));

    Rng rng(3);
    for (double s0 : {0.5, 2.0, 3.0}) {
        for (int trial = 0; trial < 5; ++trial) {
            const auto p = random_bump(rng);
            const auto f = random_piecewise(grid, rng);
            const auto r = power_norm_identity_check(f, p, s0);
            CHECK(r.rel_gap <= 1e-7);
        }
    }
}

TEST_CASE("Hölder inequality") {
    auto grid = Grid::uniform(Interval(-2.0, 2.0), 512);
    auto chi = GridFunction::sample(grid, [](double x) { return x >= 0 && x < 1 ? 1.0 : 0.0; });
    const auto p2 = VariableExponent::constant(2.0);

    const auto hr = holder(chi, chi, p2);
    CHECK(hr.lhs == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(hr.ratio <= 1.0 + 1e-9);

    Rng rng(23);
    SUBCASE("classical constant-exponent Hölder has constant 1") {
        for (double p0 : {1.5, 2.0, 4.0})
            for (int t = 0; t < 8; ++t) {
                const auto f = random_piecewise(grid, rng);
                const auto g = random_piecewise(grid, rng);
                CHECK(holder(f, g, VariableExponent::constant(p0)).ratio <= 1.0 + 1e-9);
            }
    }
    SUBCASE("variable exponents stay below the generalized constant 4") {
        for (int t = 0; t < 40; ++t) {
            const auto p = random_bump(rng);
            const auto f = random_piecewise(grid, rng);
            const auto g = random_piecewise(grid, rng);
            CHECK(holder(f, g, p).ratio <= 4.0);
        }
    }
    SUBCASE("general form rejects mismatched triples") {
        const auto r = VariableExponent::constant(1.0);
        const auto q = VariableExponent::constant(3.0);  // 1/2 + 1/3 != 1
        const auto f = random_piecewise(grid, rng);
        CHECK_THROWS_AS(holder_general(f, f, r, p2, q), ExponentMismatch);
    }
}

TEST_CASE("conjugate norm lower bounds") {
    auto grid = Grid::uniform(Interval(-2.0, 2.0), 512);
    auto chi = GridFunction::sample(grid, [](double x) { return x >= 0 && x < 1 ? 1.0 : 0.0; });
    const auto p2 = VariableExponent::constant(2.0);
    const auto r1 = VariableExponent::constant(1.0);

    // f = chi_{[0,1]}, p = 2, r = 1: witness g = chi gives exactly 1
    const auto c = conjugate_norm(chi, p2, r1);
    CHECK(c.value == doctest::Approx(1.0).epsilon(1e-6));

    // r = p (q = inf): witness g = 1 on supp f attains ||f||_p
    Rng rng(31);
    const auto f = random_piecewise(grid, rng);
    const auto cc = conjugate_norm(f, p2, p2);
    CHECK(cc.value == doctest::Approx(luxemburg_norm(f, p2).value).epsilon(1e-6));

    // constant exponents, r < p: ratio against the norm lands in [1/2, 1+tol]
    for (int t = 0; t < 10; ++t) {
        const auto g = random_piecewise(grid, rng);
        if (g.is_zero()) continue;
        const auto cn = conjugate_norm(g, p2, VariableExponent::constant(1.25));
        const double lux = luxemburg_norm(g, p2).value;
        CHECK(cn.value >= 0.5 * lux);
        CHECK(cn.value <= lux * (1 + 1e-6));
    }
}

TEST_CASE("cube norm estimates agree exactly for constant exponents") {
    const auto p = VariableExponent::constant(2.5);
    for (const auto& q : {Interval(0.0, 0.5), Interval(-1.0, 1.0), Interval(2.0, 6.0)}) {
        const auto rep = cube_norm_estimates(p, q);
        CHECK(rep.norm == doctest::Approx(rep.via_harmonic).epsilon(1e-9));
        if (q.length() <= 2.0)
            CHECK(rep.norm == doctest::Approx(rep.via_center).epsilon(1e-9));
        if (q.length() >= 1.0)
            CHECK(rep.norm == doctest::Approx(rep.via_infinity).epsilon(1e-9));
    }
}

TEST_CASE("cube norm ratios drift for a jump exponent but not for log-Hölder") {
    const auto bump = VariableExponent::from_json_string(
        R"({"kind":"bump","base":1.8,"amplitude":1,"center":0,"width":2})");
    const auto jump = VariableExponent::from_json_string(
        R"({"kind":"jump","at":0,"left":1.5,"right":3})");

    // |Q|^{1/p(x)} must be comparable to the norm uniformly over x in Q;
    // probe both sides of the feature at 0
    auto spread_for = [](const VariableExponent& p) {
        double lo = kInf, hi = 0.0;
        for (int d = 0; d <= 12; ++d) {
            const double len = std::exp2(-d);
            const Interval q(-0.5 * len, 0.5 * len);  // cubes straddling the feature at 0
            const double norm = indicator_norm(p, q).value;
            for (double x : {-0.25 * len, 0.25 * len}) {
                const double ratio = norm / std::pow(len, 1.0 / p(x));
                lo = std::min(lo, ratio);
                hi = std::max(hi, ratio);
            }
        }
        return hi / lo;
    };
    CHECK(spread_for(bump) < 1.6);
    CHECK(spread_for(jump) > 2.0);  // drift with scale flags the jump
}
