#include "varlp/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace varlp {

Grid::Grid(Interval window, std::vector<double> breakpoints)
    : window_(window), breaks_(std::move(breakpoints)) {
    if (breaks_.size() < 2) throw RangeError("Grid needs at least one cell");
    for (std::size_t i = 0; i + 1 < breaks_.size(); ++i)
        if (!(breaks_[i] < breaks_[i + 1]))
            throw RangeError("Grid breakpoints must be strictly increasing");
    if (breaks_.front() != window_.a || breaks_.back() != window_.b)
        throw RangeError("Grid breakpoints must span the window");
}

std::shared_ptr<const Grid> Grid::uniform(Interval window, std::size_t cells) {
    if (cells == 0) throw RangeError("uniform grid needs cells > 0");
    std::vector<double> b(cells + 1);
    for (std::size_t i = 0; i <= cells; ++i)
        b[i] = window.a + window.length() * (static_cast<double>(i) / static_cast<double>(cells));
    b.front() = window.a;
    b.back() = window.b;
    return std::make_shared<Grid>(window, std::move(b));
}

std::shared_ptr<const Grid> Grid::graded(Interval window,
                                         std::span<const double> singular_points,
                                         std::size_t base_cells, int floor_exp,
                                         std::span<const double> mandatory) {
    std::vector<double> b;
    b.reserve(base_cells + 1 + singular_points.size() * (2 * floor_exp + 1) + mandatory.size());
    for (std::size_t i = 0; i <= base_cells; ++i)
        b.push_back(window.a +
                    window.length() * (static_cast<double>(i) / static_cast<double>(base_cells)));
    const double scale = window.length();
    for (double s : singular_points) {
        if (!(s >= window.a && s <= window.b)) continue;
        if (s > window.a && s < window.b) b.push_back(s);
        for (int k = 1; k <= floor_exp; ++k) {
            const double w = std::ldexp(scale, -k);
            const double lo = s - w, hi = s + w;
            if (lo > window.a && lo < window.b) b.push_back(lo);
            if (hi > window.a && hi < window.b) b.push_back(hi);
        }
    }
    for (double m : mandatory)
        if (m > window.a && m < window.b) b.push_back(m);
    b.push_back(window.a);
    b.push_back(window.b);
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    b.front() = window.a;
    b.back() = window.b;
    return std::make_shared<Grid>(window, std::move(b));
}

std::optional<std::size_t> Grid::locate(double x) const {
    if (x < window_.a || x > window_.b) return std::nullopt;
    if (x == window_.b) return cell_count() - 1;
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
    return static_cast<std::size_t>(it - breaks_.begin()) - 1;
}

std::pair<std::size_t, std::size_t> Grid::overlapping_range(const Interval& q) const {
    if (q.b <= window_.a || q.a >= window_.b) return {0, 0};
    auto lo = std::upper_bound(breaks_.begin(), breaks_.end(), q.a);
    std::size_t first = lo == breaks_.begin() ? 0 : static_cast<std::size_t>(lo - breaks_.begin()) - 1;
    auto hi = std::lower_bound(breaks_.begin(), breaks_.end(), q.b);
    std::size_t last = static_cast<std::size_t>(hi - breaks_.begin());
    if (last > cell_count()) last = cell_count();
    return {first, last};
}

GridFunction::GridFunction(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_->cell_count())
        throw RangeError("GridFunction values must match cell count");
}

GridFunction GridFunction::sample(GridPtr grid, const std::function<double(double)>& f) {
    std::vector<double> v(grid->cell_count());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid->midpoint(i));
    return GridFunction(std::move(grid), std::move(v));
}

GridFunction GridFunction::zero(GridPtr grid) {
    std::vector<double> v(grid->cell_count(), 0.0);
    return GridFunction(std::move(grid), std::move(v));
}

double GridFunction::operator()(double x) const {
    auto c = grid_->locate(x);
    return c ? values_[*c] : 0.0;
}

double GridFunction::sup_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::fabs(v));
    return m;
}

bool GridFunction::is_zero() const {
    for (double v : values_)
        if (v != 0.0) return false;
    return true;
}

GridFunction GridFunction::map(const std::function<double(double)>& op) const {
    std::vector<double> v(values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = op(values_[i]);
    return GridFunction(grid_, std::move(v));
}

GridFunction GridFunction::abs() const {
    return map([](double v) { return std::fabs(v); });
}

GridFunction GridFunction::scaled(double c) const {
    return map([c](double v) { return c * v; });
}

static void check_same_grid(const GridFunction& a, const GridFunction& b) {
    if (a.grid_ptr() != b.grid_ptr() &&
        a.grid().breakpoints() != b.grid().breakpoints())
        throw RangeError("GridFunction operands live on different grids");
}

GridFunction GridFunction::operator+(const GridFunction& o) const {
    check_same_grid(*this, o);
    std::vector<double> v(values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i] + o.values_[i];
    return GridFunction(grid_, std::move(v));
}

GridFunction GridFunction::operator-(const GridFunction& o) const {
    check_same_grid(*this, o);
    std::vector<double> v(values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i] - o.values_[i];
    return GridFunction(grid_, std::move(v));
}

GridFunction GridFunction::operator*(const GridFunction& o) const {
    check_same_grid(*this, o);
    std::vector<double> v(values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i] * o.values_[i];
    return GridFunction(grid_, std::move(v));
}

void GridFunction::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    char buf[64];
    const auto& b = grid_->breakpoints();
    for (std::size_t i = 0; i < values_.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", b[i], values_[i]);
        out << buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g\n", b.back());
    out << buf;
}

GridFunction GridFunction::read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::vector<double> breaks, values;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto comma = line.find(',');
        try {
            breaks.push_back(std::stod(line.substr(0, comma)));
            if (comma != std::string::npos && comma + 1 < line.size())
                values.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": bad CSV row");
        }
    }
    if (breaks.size() != values.size() + 1)
        throw ParseError(path + ": expected n+1 breakpoints for n values");
    Interval window(breaks.front(), breaks.back());
    auto grid = std::make_shared<Grid>(window, std::move(breaks));
    return GridFunction(std::move(grid), std::move(values));
}

double integrate(const GridFunction& f, const Interval& q) {
    const Grid& g = f.grid();
    auto [first, last] = g.overlapping_range(q);
    double sum = 0.0;
    for (std::size_t i = first; i < last; ++i) {
        const double w = g.cell(i).overlap(q);
        if (w > 0.0) sum += f.value(i) * w;
    }
    return sum;
}

double integrate(const GridFunction& f) { return integrate(f, f.grid().window()); }

DyadicFamily::DyadicFamily(Interval root, int max_depth) : root_(root), max_depth_(max_depth) {
    if (max_depth < 0 || max_depth > 40) throw RangeError("DyadicFamily depth out of range");
}

double DyadicFamily::leaf_breakpoint(std::uint64_t k) const {
    if (k == 0) return root_.a;
    if (k == leaf_count()) return root_.b;
    return root_.a + root_.length() * (static_cast<double>(k) / static_cast<double>(leaf_count()));
}

std::pair<std::uint64_t, std::uint64_t> DyadicFamily::leaf_range(const DyadicCube& q) const {
    if (q.depth < 0 || q.depth > max_depth_) throw NotInFamily("depth out of range");
    if (q.index >= (1ull << q.depth)) throw NotInFamily("index out of range");
    const std::uint64_t span = 1ull << (max_depth_ - q.depth);
    return {q.index * span, (q.index + 1) * span};
}

Interval DyadicFamily::interval_of(const DyadicCube& q) const {
    auto [lo, hi] = leaf_range(q);
    return Interval(leaf_breakpoint(lo), leaf_breakpoint(hi));
}

std::pair<DyadicCube, DyadicCube> DyadicFamily::children(const DyadicCube& q) const {
    if (q.depth >= max_depth_) throw NotInFamily("cube has no children in family");
    return {DyadicCube{q.depth + 1, 2 * q.index}, DyadicCube{q.depth + 1, 2 * q.index + 1}};
}

DyadicCube DyadicFamily::parent(const DyadicCube& q) const {
    if (q.depth == 0) throw NotInFamily("root has no parent");
    return DyadicCube{q.depth - 1, q.index / 2};
}

std::vector<DyadicCube> DyadicFamily::ancestors(const DyadicCube& q) const {
    std::vector<DyadicCube> out;
    DyadicCube c = q;
    while (c.depth > 0) {
        c = parent(c);
        out.push_back(c);
    }
    return out;
}

DyadicCube DyadicFamily::locate(const Interval& q) const {
    for (int d = 0; d <= max_depth_; ++d) {
        const double w = root_.length() / static_cast<double>(1ull << d);
        if (q.length() > w * 1.0000001) break;
        const double rel = (q.a - root_.a) / w;
        const auto j = static_cast<std::uint64_t>(std::llround(rel));
        if (j >= (1ull << d)) continue;
        DyadicCube c{d, j};
        Interval iv = interval_of(c);
        if (iv.a == q.a && iv.b == q.b) return c;
    }
    throw NotInFamily("interval is not a member of the dyadic family");
}

std::vector<DyadicCube> DyadicFamily::all_cubes(int depth_from, int depth_to) const {
    if (depth_to < 0) depth_to = max_depth_;
    std::vector<DyadicCube> out;
    for (int d = depth_from; d <= depth_to && d <= max_depth_; ++d)
        for (std::uint64_t j = 0; j < (1ull << d); ++j) out.push_back(DyadicCube{d, j});
    return out;
}

GridPtr DyadicFamily::aligned_grid() const {
    std::vector<double> b(leaf_count() + 1);
    for (std::uint64_t k = 0; k <= leaf_count(); ++k) b[k] = leaf_breakpoint(k);
    return std::make_shared<Grid>(root_, std::move(b));
}

std::pair<Interval, Interval> dyadic_children(const Interval& q) {
    const double m = q.center();
    return {Interval(q.a, m), Interval(m, q.b)};
}

std::vector<Interval> test_cubes(const Interval& window, int depth_from, int depth_to,
                                 int shifts) {
    std::vector<Interval> out;
    const double L = window.length();
    for (int d = depth_from; d <= depth_to; ++d) {
        const std::uint64_t n = 1ull << d;
        const double w = L / static_cast<double>(n);
        for (std::uint64_t j = 0; j < n; ++j) {
            const double a = window.a + w * static_cast<double>(j);
            out.emplace_back(a, a + w);
            for (int k = 1; k <= shifts; ++k) {
                const double s = a + w * static_cast<double>(k) / 3.0;
                if (auto clipped = Interval(s, s + w).intersect(window))
                    out.push_back(*clipped);
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const Interval& x, const Interval& y) {
        return x.a < y.a || (x.a == y.a && x.b < y.b);
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace varlp
