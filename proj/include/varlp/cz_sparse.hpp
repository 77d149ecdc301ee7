#pragma once

#include <map>
#include <vector>

#include <json.hpp>

#include "varlp/exponent.hpp"
#include "varlp/grid.hpp"
#include "varlp/maximal.hpp"

namespace varlp {

// One stopping-time level: the maximal dyadic cubes whose average first
// exceeds lambda, top-down from the root.
struct CZLevel {
    double lambda = 0.0;
    std::vector<DyadicCube> cubes;
    std::vector<double> averages;          // A_{beta,r,Q} per selected cube
    double max_parent_jump = 0.0;          // max avg(Q)/avg(parent Q) over selections
};

// Requires the finite decay surrogate: the root average must not exceed
// lambda (RootAboveThreshold otherwise). f should live on a grid aligned
// with the family (see DyadicFamily::aligned_grid) so that set arithmetic
// downstream is exact.
CZLevel cz_decompose(const GridFunction& f, const VariableExponent& beta,
                     const VariableExponent& r, const DyadicFamily& family, double lambda);

// Independent oracle for tests: scan every dyadic cube and keep the maximal
// ones whose average exceeds lambda.
CZLevel cz_decompose_bruteforce(const GridFunction& f, const VariableExponent& beta,
                                const VariableExponent& r, const DyadicFamily& family,
                                double lambda);

struct SparseCube {
    int level_k = 0;
    DyadicCube cube;
    Interval interval{0.0, 1.0};
    double average = 0.0;
    std::pair<std::uint64_t, std::uint64_t> leaves;  // cube as leaf range
    std::vector<bool> carved;                        // E_Q mask over the cube's leaves
    double carved_measure = 0.0;                     // |E_Q|
};

struct SparseFamily {
    double a = 0.0;                 // level base, lambda_k = a^k
    std::map<int, CZLevel> levels;
    std::vector<SparseCube> cubes;  // all Q_j^k with their carved sets E_j^k
    double eta = 0.0;               // min |E_Q| / |Q|; meaningful only when !empty
    bool empty = true;

    nlohmann::json to_json() const;
};

// Levels at lambda = a^k for k in [k_min, k_max]; E_j^k = Q_j^k \ Omega_{k+1}.
// Disjointness of the E sets is verified exactly on the leaf partition.
SparseFamily build_sparse(const GridFunction& f, const VariableExponent& beta,
                          const VariableExponent& r, const DyadicFamily& family, double a,
                          int k_min, int k_max);

// T_{beta(.),1,S} f = sum_Q ||chi_Q||_beta (avg_Q |f|) chi_Q, each term
// carried on its own cube (the standard sparse-operator form).
GridFunction sparse_operator(const GridFunction& f, const SparseFamily& s,
                             const VariableExponent& beta, const DyadicFamily& family);

}  // namespace varlp
