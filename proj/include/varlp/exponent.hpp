#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "varlp/common.hpp"
#include "varlp/grid.hpp"

namespace varlp {

struct LogHolderConstants {
    double c0 = 0.0;
    double c_inf = 0.0;
};

// A measurable exponent p(·): R -> [1, inf]. Infinity is represented by a
// reciprocal of exactly 0; all exponent algebra runs on reciprocals
// 1/p in [0, 1] so the conventions (r/inf = 0) are exact. Extended mode
// admits exponents in (0, 1) (reciprocals above 1), used only for the
// power-of-norm identity with s0 p(·) < 1.
class VariableExponent {
public:
    static VariableExponent constant(double p);
    static VariableExponent from_value(std::function<double(double)> value, double p_infinity,
                                       bool extended = false);
    static VariableExponent from_reciprocal(std::function<double(double)> recip,
                                            double recip_infinity, bool extended = false);
    static VariableExponent from_json(const nlohmann::json& spec);
    static VariableExponent from_json_string(const std::string& spec);

    // p(x); +inf where the reciprocal vanishes
    double operator()(double x) const {
        const double r = recip_(x);
        return r == 0.0 ? kInf : 1.0 / r;
    }
    double reciprocal(double x) const { return recip_(x); }

    bool extended() const { return extended_; }
    bool is_infinite_at(double x) const { return recip_(x) == 0.0; }

    double p_infinity() const { return recip_inf_ == 0.0 ? kInf : 1.0 / recip_inf_; }
    double reciprocal_infinity() const { return recip_inf_; }

    // (p^-, p^+) over a stated bounded domain, by midpoint sampling
    std::pair<double, double> essential_bounds(const Interval& domain,
                                               std::size_t samples = 4096) const;

    std::optional<LogHolderConstants> log_holder;

    // p'(·): 1/p + 1/p' = 1 pointwise; 1 <-> inf at the endpoints.
    friend VariableExponent conjugate(const VariableExponent& p);
    // r(·) with 1/r = 1/p + 1/q (convention 1/inf = 0). Throws RangeError if
    // the result drops below 1 while neither operand is extended.
    friend VariableExponent combine(const VariableExponent& p, const VariableExponent& q);
    // beta(·) with 1/beta = 1/p - 1/q; requires p <= q pointwise (checked
    // lazily at evaluation sites).
    friend VariableExponent beta_from_pair(const VariableExponent& p, const VariableExponent& q);

private:
    VariableExponent(std::function<double(double)> recip, double recip_inf, bool extended)
        : recip_(std::move(recip)), recip_inf_(recip_inf), extended_(extended) {}

    std::function<double(double)> recip_;
    double recip_inf_ = 0.0;
    bool extended_ = false;
};

VariableExponent conjugate(const VariableExponent& p);
VariableExponent combine(const VariableExponent& p, const VariableExponent& q);
VariableExponent beta_from_pair(const VariableExponent& p, const VariableExponent& q);

// scale s0 * p(·); extended mode is forced on when s0 p may drop below 1
VariableExponent scale_exponent(const VariableExponent& p, double s0);

// q(·) with 1/r = 1/p + 1/q, i.e. 1/q = 1/r - 1/p; requires r <= p
// pointwise (checked lazily at evaluation sites, ExponentMismatch).
VariableExponent combine_inverse(const VariableExponent& r, const VariableExponent& p);

// Harmonic mean p_Q with 1/p_Q = (1/|Q|) \int_Q 1/p, by midpoint quadrature.
double harmonic_mean(const VariableExponent& p, const Interval& q, std::size_t cells = 4096);

struct LogHolderReport {
    double c0 = 0.0;
    double c_inf = 0.0;
    bool pass = false;
    double cap = 0.0;
    // worst pair for the local modulus
    double witness_x = 0.0;
    double witness_y = 0.0;
    // max measured constant per separation decade (coarse -> fine); a local
    // modulus still growing at the finest separations defeats log-Hölder
    std::vector<double> scale_constants;
};

// Sampled verification of the log-Hölder condition on 1/p over a domain.
// Evidence, not proof: the report flags failure when the measured local
// constant keeps growing as pair separations shrink, or a cap is exceeded.
LogHolderReport verify_log_holder(const VariableExponent& p, const Interval& domain,
                                  std::size_t samples, double cap = 20.0,
                                  std::uint64_t seed = 1);

}  // namespace varlp
