#pragma once

#include <string>
#include <vector>

#include "varlp/exponent.hpp"
#include "varlp/grid.hpp"
#include "varlp/luxemburg.hpp"

namespace varlp {

// Cube family plus the exponent pair of M_{beta(.),r(.)}. beta == inf and
// r == 1 give the Hardy-Littlewood maximal operator.
struct MaximalConfig {
    std::vector<Interval> cubes;
    VariableExponent beta = VariableExponent::constant(kInf);
    VariableExponent r = VariableExponent::constant(1.0);
    std::size_t indicator_cells = 64;  // resolution for ||chi_Q|| norms
};

// A_{beta(.),r(.),Q} f = ||chi_Q||_beta ||f chi_Q||_r / ||chi_Q||_r
// (the constant value the averaging operator takes on Q).
double average_op(const GridFunction& f, const Interval& q, const VariableExponent& beta,
                  const VariableExponent& r, std::size_t indicator_cells = 64);

// sup over family cubes containing x; 0 when no cube contains x.
double maximal(const GridFunction& f, double x, const MaximalConfig& cfg);

double dyadic_maximal(const GridFunction& f, double x, const DyadicFamily& family,
                      const VariableExponent& beta, const VariableExponent& r);

struct MaximalProfile {
    std::vector<double> value;       // per cell midpoint of f's grid
    std::vector<int> argmax_cube;    // index into cfg.cubes, -1 if none

    GridFunction as_grid_function(const GridFunction& f) const {
        return GridFunction(f.grid_ptr(), value);
    }
};

// Vectorized evaluation at every cell midpoint (the exhaustive value set of
// the piecewise-constant model).
MaximalProfile maximal_profile(const GridFunction& f, const MaximalConfig& cfg);

void write_profile_csv(const std::string& path, const GridFunction& f,
                       const MaximalProfile& profile);

// Best-constant L1 mean oscillation on Q: inf_a (1/|Q|) int_Q |f - a|,
// attained at a weighted median of f on Q for piecewise-constant data.
double mean_oscillation(const GridFunction& f, const Interval& q);

double weighted_median(std::vector<std::pair<double, double>> value_weight);

// M^sharp f(x) over the given cube family
double sharp_maximal(const GridFunction& f, double x, const std::vector<Interval>& cubes);

std::vector<double> sharp_profile(const GridFunction& f, const std::vector<Interval>& cubes);

}  // namespace varlp
