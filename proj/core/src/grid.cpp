#include "rotbl/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace rotbl {

namespace {

void require_same(const Field2D& a, const Field2D& b) {
    if (!a.grid || !b.grid || !same_grid(*a.grid, *b.grid))
        throw std::invalid_argument("field grids differ");
}

std::vector<double> combine_ramp(const Field2D& a, double ca, const Field2D& b, double cb) {
    if (!a.has_ramp() && !b.has_ramp()) return {};
    std::vector<double> r(a.grid->n_y, 0.0);
    for (int j = 0; j < a.grid->n_y; ++j) {
        if (a.has_ramp()) r[j] += ca * a.ramp[j];
        if (b.has_ramp()) r[j] += cb * b.ramp[j];
    }
    return r;
}

}  // namespace

GridPtr make_grid(int n_x1, int n_y, double L, double Y) {
    if (n_x1 < 8 || (n_x1 & (n_x1 - 1)) != 0)
        throw std::invalid_argument(fmt::format("n_x1 = {} must be a power of two >= 8", n_x1));
    if (n_y < 5) throw std::invalid_argument(fmt::format("n_y = {} must be >= 5", n_y));
    if (!(L > 0.0) || !(Y > 0.0))
        throw std::invalid_argument(fmt::format("L = {} and Y = {} must be positive", L, Y));
    auto g = std::make_shared<Grid>();
    g->n_x1 = n_x1;
    g->n_y = n_y;
    g->L = L;
    g->Y = Y;
    g->dx = 2.0 * L / n_x1;
    g->dy = Y / (n_y - 1);
    g->x1_nodes.resize(n_x1);
    g->y_nodes.resize(n_y);
    for (int i = 0; i < n_x1; ++i) g->x1_nodes[i] = -L + i * g->dx;
    for (int j = 0; j < n_y; ++j) g->y_nodes[j] = j * g->dy;
    g->y_nodes[n_y - 1] = Y;
    return g;
}

bool same_grid(const Grid& a, const Grid& b) {
    return &a == &b || (a.n_x1 == b.n_x1 && a.n_y == b.n_y && a.L == b.L && a.Y == b.Y);
}

Field2D::Field2D(GridPtr g, std::string name)
    : grid(std::move(g)), values(grid->size(), 0.0), label(std::move(name)) {}

double Field2D::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

bool Field2D::all_finite() const {
    return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

TraceField::TraceField(GridPtr g, std::string name)
    : grid(std::move(g)), values(grid->n_x1, 0.0), label(std::move(name)) {}

double TraceField::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

void validate_weight(const WeightParams& w, double Y) {
    if (!(w.ell > 0.5 && w.ell <= 1.0))
        throw std::invalid_argument(fmt::format("ell = {} outside (1/2, 1]", w.ell));
    if (!(w.a > 0.0)) throw std::invalid_argument(fmt::format("weight a = {} must be positive", w.a));
    if (w.a * Y * Y > 600.0)
        throw std::invalid_argument(
            fmt::format("a * Y^2 = {} exceeds 600; exp(a Y^2) would overflow", w.a * Y * Y));
}

Field2D operator+(const Field2D& a, const Field2D& b) {
    require_same(a, b);
    Field2D r(a.grid, a.label);
    for (std::size_t k = 0; k < r.values.size(); ++k) r.values[k] = a.values[k] + b.values[k];
    r.ramp = combine_ramp(a, 1.0, b, 1.0);
    return r;
}

Field2D operator-(const Field2D& a, const Field2D& b) {
    require_same(a, b);
    Field2D r(a.grid, a.label);
    for (std::size_t k = 0; k < r.values.size(); ++k) r.values[k] = a.values[k] - b.values[k];
    r.ramp = combine_ramp(a, 1.0, b, -1.0);
    return r;
}

Field2D operator*(double c, const Field2D& f) {
    Field2D r(f.grid, f.label);
    for (std::size_t k = 0; k < r.values.size(); ++k) r.values[k] = c * f.values[k];
    if (f.has_ramp()) {
        r.ramp = f.ramp;
        for (double& s : r.ramp) s *= c;
    }
    return r;
}

Field2D hadamard(const Field2D& a, const Field2D& b) {
    require_same(a, b);
    Field2D r(a.grid, a.label);
    for (std::size_t k = 0; k < r.values.size(); ++k) r.values[k] = a.values[k] * b.values[k];
    return r;
}

Field2D broadcast(const TraceField& t) {
    Field2D r(t.grid, t.label);
    const auto& g = *t.grid;
    for (int i = 0; i < g.n_x1; ++i)
        for (int j = 0; j < g.n_y; ++j) r(i, j) = t[i];
    return r;
}

Field2D y_times(const TraceField& t) {
    Field2D r(t.grid, t.label);
    const auto& g = *t.grid;
    for (int i = 0; i < g.n_x1; ++i)
        for (int j = 0; j < g.n_y; ++j) r(i, j) = g.y_nodes[j] * t[i];
    return r;
}

Field2D broadcast(const TraceField& t, const GridPtr& g) { return broadcast(retarget(t, g)); }

Field2D y_times(const TraceField& t, const GridPtr& g) { return y_times(retarget(t, g)); }

TraceField retarget(const TraceField& t, const GridPtr& g) {
    if (t.grid->n_x1 != g->n_x1 || t.grid->L != g->L)
        throw std::invalid_argument(fmt::format(
            "trace '{}' has n_x1 = {}, L = {}; target grid has n_x1 = {}, L = {}", t.label,
            t.grid->n_x1, t.grid->L, g->n_x1, g->L));
    TraceField r = t;
    r.grid = g;
    return r;
}

TraceField row(const Field2D& f, int j) {
    TraceField t(f.grid, f.label);
    for (int i = 0; i < f.grid->n_x1; ++i) t[i] = f(i, j);
    return t;
}

TraceField operator+(const TraceField& a, const TraceField& b) {
    TraceField r(a.grid, a.label);
    for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] = a.values[i] + b.values[i];
    return r;
}

TraceField operator-(const TraceField& a, const TraceField& b) {
    TraceField r(a.grid, a.label);
    for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] = a.values[i] - b.values[i];
    return r;
}

TraceField operator*(double c, const TraceField& t) {
    TraceField r(t.grid, t.label);
    for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] = c * t.values[i];
    return r;
}

}  // namespace rotbl
