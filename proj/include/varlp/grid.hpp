#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "varlp/common.hpp"

namespace varlp {

// A 1-D cube Q = [a, b].
struct Interval {
    double a = 0.0;
    double b = 0.0;

    Interval() = default;
    Interval(double a_, double b_) : a(a_), b(b_) {
        if (!(a < b)) throw RangeError("Interval requires a < b");
    }

    double center() const { return 0.5 * (a + b); }
    double length() const { return b - a; }

    // mQ: concentric with Q, side length scaled by m.
    Interval dilated(double m) const {
        const double c = center(), h = 0.5 * m * length();
        return Interval(c - h, c + h);
    }

    bool contains(double x) const { return a <= x && x <= b; }
    bool contains(const Interval& q) const { return a <= q.a && q.b <= b; }

    double overlap(const Interval& q) const {
        const double lo = a > q.a ? a : q.a;
        const double hi = b < q.b ? b : q.b;
        return hi > lo ? hi - lo : 0.0;
    }

    std::optional<Interval> intersect(const Interval& q) const {
        const double lo = a > q.a ? a : q.a;
        const double hi = b < q.b ? b : q.b;
        if (!(lo < hi)) return std::nullopt;
        return Interval(lo, hi);
    }

    bool operator==(const Interval& o) const { return a == o.a && b == o.b; }
};

// Graded dyadic grid over a bounded window. Cells are the gaps between
// consecutive breakpoints; functions are piecewise-constant per cell and
// zero outside the window.
class Grid {
public:
    static constexpr int kDefaultFloorExp = 40;

    Grid(Interval window, std::vector<double> breakpoints);

    static std::shared_ptr<const Grid> uniform(Interval window, std::size_t cells);

    // Uniform base grid refined geometrically (ratio 1/2) toward each
    // singular point, down to width ~ 2^-floor_exp * |window|. Extra
    // mandatory breakpoints (kernel support edges etc.) are merged in.
    static std::shared_ptr<const Grid> graded(Interval window,
                                              std::span<const double> singular_points,
                                              std::size_t base_cells,
                                              int floor_exp = kDefaultFloorExp,
                                              std::span<const double> mandatory = {});

    const Interval& window() const { return window_; }
    const std::vector<double>& breakpoints() const { return breaks_; }
    std::size_t cell_count() const { return breaks_.size() - 1; }
    Interval cell(std::size_t i) const { return Interval(breaks_[i], breaks_[i + 1]); }
    double midpoint(std::size_t i) const { return 0.5 * (breaks_[i] + breaks_[i + 1]); }
    double width(std::size_t i) const { return breaks_[i + 1] - breaks_[i]; }

    // Cell containing x (cells are [b_i, b_{i+1}); the last cell is closed).
    std::optional<std::size_t> locate(double x) const;

    // Smallest contiguous cell range [first, last) meeting Q.
    std::pair<std::size_t, std::size_t> overlapping_range(const Interval& q) const;

private:
    Interval window_;
    std::vector<double> breaks_;
};

using GridPtr = std::shared_ptr<const Grid>;

class GridFunction {
public:
    GridFunction(GridPtr grid, std::vector<double> values);

    static GridFunction sample(GridPtr grid, const std::function<double(double)>& f);
    static GridFunction zero(GridPtr grid);

    const Grid& grid() const { return *grid_; }
    GridPtr grid_ptr() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    double value(std::size_t cell) const { return values_[cell]; }

    // f(x); 0 outside the window.
    double operator()(double x) const;

    double sup_abs() const;
    bool is_zero() const;

    GridFunction map(const std::function<double(double)>& op) const;
    GridFunction abs() const;
    GridFunction scaled(double c) const;
    GridFunction operator+(const GridFunction& o) const;
    GridFunction operator-(const GridFunction& o) const;
    GridFunction operator*(const GridFunction& o) const;

    void write_csv(const std::string& path) const;
    static GridFunction read_csv(const std::string& path);

private:
    GridPtr grid_;
    std::vector<double> values_;
};

// Exact integral of the piecewise-constant representative over Q ∩ window;
// partial cells weighted by overlap length.
double integrate(const GridFunction& f, const Interval& q);
double integrate(const GridFunction& f);

// Dyadic collection over a root interval, up to max_depth. Members are
// identified by (depth, index); endpoints are always derived from leaf
// indices so that coinciding endpoints across depths are bit-identical.
struct DyadicCube {
    int depth = 0;
    std::uint64_t index = 0;
    bool operator==(const DyadicCube& o) const { return depth == o.depth && index == o.index; }
};

class DyadicFamily {
public:
    DyadicFamily(Interval root, int max_depth);

    const Interval& root() const { return root_; }
    int max_depth() const { return max_depth_; }
    std::uint64_t leaf_count() const { return 1ull << max_depth_; }
    double leaf_width() const { return root_.length() / static_cast<double>(leaf_count()); }

    double leaf_breakpoint(std::uint64_t k) const;
    Interval interval_of(const DyadicCube& q) const;
    // leaf index range [first, last) covered by q
    std::pair<std::uint64_t, std::uint64_t> leaf_range(const DyadicCube& q) const;

    std::pair<DyadicCube, DyadicCube> children(const DyadicCube& q) const;
    DyadicCube parent(const DyadicCube& q) const;
    std::vector<DyadicCube> ancestors(const DyadicCube& q) const;

    // membership by exact endpoints
    DyadicCube locate(const Interval& q) const;

    std::vector<DyadicCube> all_cubes(int depth_from = 0, int depth_to = -1) const;

    // Grid whose breakpoints are exactly the leaf endpoints.
    GridPtr aligned_grid() const;

private:
    Interval root_;
    int max_depth_;
};

std::pair<Interval, Interval> dyadic_children(const Interval& q);

// Deterministic finite surrogate for "supremum over all cubes": every dyadic
// subinterval of the window at depths [depth_from, depth_to], plus copies
// shifted by k/3 of their length for k = 1..shifts, clipped to the window.
std::vector<Interval> test_cubes(const Interval& window, int depth_from, int depth_to,
                                 int shifts);

}  // namespace varlp
