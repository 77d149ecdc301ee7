#include "varlp/cz_sparse.hpp"

#include <algorithm>
#include <cmath>

namespace varlp {

namespace {

double cube_average(const GridFunction& f, const DyadicFamily& family, const DyadicCube& q,
                    const VariableExponent& beta, const VariableExponent& r) {
    return average_op(f, family.interval_of(q), beta, r);
}

}  // namespace

CZLevel cz_decompose(const GridFunction& f, const VariableExponent& beta,
                     const VariableExponent& r, const DyadicFamily& family, double lambda) {
    CZLevel level;
    level.lambda = lambda;
    const DyadicCube root{0, 0};
    const double root_avg = cube_average(f, family, root, beta, r);
    if (root_avg > lambda)
        throw RootAboveThreshold("root average " + std::to_string(root_avg) +
                                 " exceeds lambda " + std::to_string(lambda));

    std::vector<std::pair<DyadicCube, double>> stack{{root, root_avg}};
    while (!stack.empty()) {
        auto [cube, avg] = stack.back();
        stack.pop_back();
        if (cube.depth == family.max_depth()) continue;
        for (const DyadicCube& child : {family.children(cube).first, family.children(cube).second}) {
            const double child_avg = cube_average(f, family, child, beta, r);
            if (child_avg > lambda) {
                level.cubes.push_back(child);
                level.averages.push_back(child_avg);
                if (avg > 0.0)
                    level.max_parent_jump = std::max(level.max_parent_jump, child_avg / avg);
            } else {
                stack.emplace_back(child, child_avg);
            }
        }
    }
    // canonical order: by leaf position
    std::vector<std::size_t> idx(level.cubes.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
        return family.leaf_range(level.cubes[i]).first < family.leaf_range(level.cubes[j]).first;
    });
    CZLevel sorted;
    sorted.lambda = level.lambda;
    sorted.max_parent_jump = level.max_parent_jump;
    for (std::size_t i : idx) {
        sorted.cubes.push_back(level.cubes[i]);
        sorted.averages.push_back(level.averages[i]);
    }
    return sorted;
}

CZLevel cz_decompose_bruteforce(const GridFunction& f, const VariableExponent& beta,
                                const VariableExponent& r, const DyadicFamily& family,
                                double lambda) {
    CZLevel level;
    level.lambda = lambda;
    const double root_avg = cube_average(f, family, DyadicCube{0, 0}, beta, r);
    if (root_avg > lambda) throw RootAboveThreshold("root average exceeds lambda");

    std::vector<std::pair<DyadicCube, double>> hot;
    for (const DyadicCube& q : family.all_cubes()) {
        const double avg = cube_average(f, family, q, beta, r);
        if (avg > lambda) hot.emplace_back(q, avg);
    }
    auto contained_in = [&](const DyadicCube& inner, const DyadicCube& outer) {
        if (outer.depth > inner.depth) return false;
        return (inner.index >> (inner.depth - outer.depth)) == outer.index;
    };
    for (const auto& [q, avg] : hot) {
        bool maximal = true;
        for (const auto& [other, oavg] : hot)
            if (!(other == q) && contained_in(q, other)) {
                maximal = false;
                break;
            }
        if (maximal) {
            level.cubes.push_back(q);
            level.averages.push_back(avg);
        }
    }
    std::vector<std::size_t> idx(level.cubes.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
        return family.leaf_range(level.cubes[i]).first < family.leaf_range(level.cubes[j]).first;
    });
    CZLevel sorted;
    sorted.lambda = lambda;
    for (std::size_t i : idx) {
        sorted.cubes.push_back(level.cubes[i]);
        sorted.averages.push_back(level.averages[i]);
    }
    return sorted;
}

nlohmann::json SparseFamily::to_json() const {
    nlohmann::json j;
    j["a"] = a;
    j["eta"] = empty ? nlohmann::json() : nlohmann::json(eta);
    j["empty"] = empty;
    auto& arr = j["levels"] = nlohmann::json::array();
    for (const auto& [k, level] : levels) {
        nlohmann::json lj;
        lj["k"] = k;
        lj["lambda"] = level.lambda;
        auto& cj = lj["cubes"] = nlohmann::json::array();
        for (const auto& sc : cubes)
            if (sc.level_k == k) cj.push_back({sc.interval.a, sc.interval.b});
        arr.push_back(std::move(lj));
    }
    return j;
}

SparseFamily build_sparse(const GridFunction& f, const VariableExponent& beta,
                          const VariableExponent& r, const DyadicFamily& family, double a,
                          int k_min, int k_max) {
    if (!(a > 1.0)) throw RangeError("build_sparse requires a > 1");
    SparseFamily s;
    s.a = a;
    if (f.is_zero()) return s;

    for (int k = k_min; k <= k_max; ++k) {
        CZLevel level = cz_decompose(f, beta, r, family, std::pow(a, k));
        if (!level.cubes.empty()) s.empty = false;
        s.levels.emplace(k, std::move(level));
    }
    if (s.empty) return s;

    const std::uint64_t leaves = family.leaf_count();
    const double leaf_w = family.leaf_width();

    // Omega_k as leaf masks
    std::map<int, std::vector<bool>> omega;
    for (const auto& [k, level] : s.levels) {
        std::vector<bool> mask(leaves, false);
        for (const auto& q : level.cubes) {
            auto [lo, hi] = family.leaf_range(q);
            for (std::uint64_t i = lo; i < hi; ++i) mask[i] = true;
        }
        omega.emplace(k, std::move(mask));
    }

    // E_j^k = Q_j^k \ Omega_{k+1}; exact disjointness across all (j, k)
    std::vector<int> owner(leaves, -1);
    s.eta = 1.0;
    int cube_id = 0;
    for (const auto& [k, level] : s.levels) {
        const auto next = omega.find(k + 1);
        for (std::size_t j = 0; j < level.cubes.size(); ++j) {
            SparseCube sc;
            sc.level_k = k;
            sc.cube = level.cubes[j];
            sc.interval = family.interval_of(sc.cube);
            sc.average = level.averages[j];
            sc.leaves = family.leaf_range(sc.cube);
            const auto [lo, hi] = sc.leaves;
            sc.carved.assign(hi - lo, false);
            std::uint64_t count = 0;
            for (std::uint64_t i = lo; i < hi; ++i) {
                const bool removed = next != omega.end() && next->second[i];
                if (removed) continue;
                sc.carved[i - lo] = true;
                ++count;
                if (owner[i] != -1)
                    throw Error("sparse E-sets overlap: leaf " + std::to_string(i));
                owner[i] = cube_id;
            }
            sc.carved_measure = static_cast<double>(count) * leaf_w;
            const double qlen = family.interval_of(sc.cube).length();
            s.eta = std::min(s.eta, sc.carved_measure / qlen);
            s.cubes.push_back(std::move(sc));
            ++cube_id;
        }
    }
    return s;
}

GridFunction sparse_operator(const GridFunction& f, const SparseFamily& s,
                             const VariableExponent& beta, const DyadicFamily& family) {
    std::vector<double> out(f.grid().cell_count(), 0.0);
    const GridFunction fabs = f.abs();
    for (const auto& sc : s.cubes) {
        const Interval q = family.interval_of(sc.cube);
        const double avg = integrate(fabs, q) / q.length();
        const double coef = indicator_norm(beta, q).value * avg;
        if (coef == 0.0) continue;
        auto [first, last] = f.grid().overlapping_range(q);
        for (std::size_t i = first; i < last; ++i)
            if (q.contains(f.grid().midpoint(i))) out[i] += coef;
    }
    return GridFunction(f.grid_ptr(), std::move(out));
}

}  // namespace varlp
