#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace varlp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exponent arithmetic left the admissible range (e.g. combined exponent < 1
// outside extended mode, or beta_from_pair with p > q).
struct RangeError : Error {
    using Error::Error;
};

struct QuadratureError : Error {
    using Error::Error;
};

// A cube was passed to a dyadic operation but is not a member of the family.
struct NotInFamily : Error {
    using Error::Error;
};

// The pointwise relation 1/r = 1/p + 1/q (or r <= p) fails at a sample.
struct ExponentMismatch : Error {
    using Error::Error;
};

// Finite surrogate of the CZ decay hypothesis failed: the root average
// already exceeds the level threshold.
struct RootAboveThreshold : Error {
    using Error::Error;
};

struct ScenarioInvalid : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

// Deterministic cross-platform RNG (splitmix64). Distribution code in the
// standard library is implementation-defined, which would break frozen
// expected values in tests and byte-identical reports.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // log-uniform in [lo, hi), lo > 0
    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }

    std::uint64_t uniform_index(std::uint64_t n) { return next_u64() % n; }

private:
    std::uint64_t state_;
};

}  // namespace varlp
