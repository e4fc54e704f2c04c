#include "rotbl/operators.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "spectral.hpp"

namespace rotbl {

namespace {

std::complex<double> derivative_symbol(int k, int n, double L, int order) {
    if (2 * k == n && order % 2 == 1) return 0.0;
    const std::complex<double> ik(0.0, std::numbers::pi * k / L);
    return std::pow(ik, order);
}

std::complex<double> antiderivative_symbol(int k, int n, double L) {
    if (k == 0 || 2 * k == n) return 0.0;
    return 1.0 / std::complex<double>(0.0, std::numbers::pi * k / L);
}

void check_order(int order, int max_order) {
    if (order < 1 || order > max_order)
        throw std::out_of_range(
            fmt::format("derivative order {} outside [1, {}]", order, max_order));
}

// Integrates interleaved rows in place; returns per-row means.
std::vector<double> integrate_rows(std::vector<double>& v, int n, int m, double L, double dx) {
    std::vector<double> mean(m, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) mean[j] += v[static_cast<std::size_t>(i) * m + j];
    for (double& mu : mean) mu /= n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) v[static_cast<std::size_t>(i) * m + j] -= mean[j];
    detail::spectral_multiply(v.data(), v.data(), n, m,
                              [&](int k) { return antiderivative_symbol(k, n, L); });
    std::vector<double> left(v.begin(), v.begin() + m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            v[static_cast<std::size_t>(i) * m + j] += mean[j] * (i * dx) - left[j];
    return mean;
}

void decay_check(const std::vector<double>& v, int n, int m, double tol, WarningLog* log,
                 const std::string& label) {
    if (!log) return;
    double peak = 0.0;
    for (double x : v) peak = std::max(peak, std::abs(x));
    double edge = 0.0;
    for (int j = 0; j < m; ++j) edge = std::max(edge, std::abs(v[j]));
    if (peak > 0.0 && edge > tol * peak)
        log->add(fmt::format("integrate_x1_from_left({}): |f(-L)| = {:.3e} exceeds {:.1e} * max|f|",
                             label, edge, tol));
    (void)n;
}

}  // namespace

Field2D d_x1(const Field2D& f, int order, int max_order) {
    check_order(order, max_order);
    const auto& g = *f.grid;
    Field2D r(f.grid, f.label);
    std::vector<double> p = f.values;
    if (f.has_ramp())
        for (int i = 0; i < g.n_x1; ++i)
            for (int j = 0; j < g.n_y; ++j) p[g.index(i, j)] -= f.ramp[j] * (i * g.dx);
    detail::spectral_multiply(p.data(), r.values.data(), g.n_x1, g.n_y, [&](int k) {
        return derivative_symbol(k, g.n_x1, g.L, order);
    });
    if (f.has_ramp() && order == 1)
        for (int i = 0; i < g.n_x1; ++i)
            for (int j = 0; j < g.n_y; ++j) r(i, j) += f.ramp[j];
    return r;
}

TraceField d_x1(const TraceField& f, int order, int max_order) {
    check_order(order, max_order);
    const auto& g = *f.grid;
    TraceField r(f.grid, f.label);
    detail::spectral_multiply(f.values.data(), r.values.data(), g.n_x1, 1, [&](int k) {
        return derivative_symbol(k, g.n_x1, g.L, order);
    });
    return r;
}

Field2D d_y(const Field2D& f, int order) {
    if (order != 1 && order != 2)
        throw std::out_of_range(fmt::format("d_y order {} must be 1 or 2", order));
    const auto& g = *f.grid;
    Field2D r(f.grid, f.label);
    const int n = g.n_y;
    const double h = g.dy;
    for (int i = 0; i < g.n_x1; ++i) {
        const double* a = &f.values[g.index(i, 0)];
        double* o = &r.values[g.index(i, 0)];
        if (order == 1) {
            o[0] = (-3.0 * a[0] + 4.0 * a[1] - a[2]) / (2.0 * h);
            for (int j = 1; j < n - 1; ++j) o[j] = (a[j + 1] - a[j - 1]) / (2.0 * h);
            o[n - 1] = (3.0 * a[n - 1] - 4.0 * a[n - 2] + a[n - 3]) / (2.0 * h);
        } else {
            const double h2 = h * h;
            o[0] = (2.0 * a[0] - 5.0 * a[1] + 4.0 * a[2] - a[3]) / h2;
            for (int j = 1; j < n - 1; ++j) o[j] = (a[j + 1] - 2.0 * a[j] + a[j - 1]) / h2;
            o[n - 1] = (2.0 * a[n - 1] - 5.0 * a[n - 2] + 4.0 * a[n - 3] - a[n - 4]) / h2;
        }
    }
    if (f.has_ramp()) {
        r.ramp.assign(n, 0.0);
        const auto& s = f.ramp;
        if (order == 1) {
            r.ramp[0] = (-3.0 * s[0] + 4.0 * s[1] - s[2]) / (2.0 * h);
            for (int j = 1; j < n - 1; ++j) r.ramp[j] = (s[j + 1] - s[j - 1]) / (2.0 * h);
            r.ramp[n - 1] = (3.0 * s[n - 1] - 4.0 * s[n - 2] + s[n - 3]) / (2.0 * h);
        } else {
            const double h2 = h * h;
            r.ramp[0] = (2.0 * s[0] - 5.0 * s[1] + 4.0 * s[2] - s[3]) / h2;
            for (int j = 1; j < n - 1; ++j) r.ramp[j] = (s[j + 1] - 2.0 * s[j] + s[j - 1]) / h2;
            r.ramp[n - 1] = (2.0 * s[n - 1] - 5.0 * s[n - 2] + 4.0 * s[n - 3] - s[n - 4]) / h2;
        }
    }
    return r;
}

Field2D integrate_x1_from_left(const Field2D& f, WarningLog* log, double decay_tol) {
    if (f.has_ramp())
        throw std::invalid_argument("integrate_x1_from_left: input already carries a ramp");
    const auto& g = *f.grid;
    decay_check(f.values, g.n_x1, g.n_y, decay_tol, log, f.label);
    Field2D r(f.grid, f.label);
    r.values = f.values;
    r.ramp = integrate_rows(r.values, g.n_x1, g.n_y, g.L, g.dx);
    return r;
}

TraceField integrate_x1_from_left(const TraceField& f, WarningLog* log, double decay_tol) {
    const auto& g = *f.grid;
    decay_check(f.values, g.n_x1, 1, decay_tol, log, f.label);
    TraceField r(f.grid, f.label);
    r.values = f.values;
    integrate_rows(r.values, g.n_x1, 1, g.L, g.dx);
    return r;
}

double weighted_l2(const Field2D& f, const WeightParams& w) {
    const auto& g = *f.grid;
    std::vector<double> wy(g.n_y);
    for (int j = 0; j < g.n_y; ++j) {
        const double e = std::exp(w.a * g.y_nodes[j] * g.y_nodes[j]);
        wy[j] = e * e * ((j == 0 || j == g.n_y - 1) ? 0.5 : 1.0);
    }
    double s = 0.0;
    for (int i = 0; i < g.n_x1; ++i) {
        const double x = g.x1_nodes[i];
        const double wx = std::pow(1.0 + x * x, w.ell);
        double col = 0.0;
        for (int j = 0; j < g.n_y; ++j) {
            const double v = f(i, j);
            col += wy[j] * v * v;
        }
        s += wx * col;
    }
    return std::sqrt(s * g.dx * g.dy);
}

double l2(const Field2D& f) {
    const auto& g = *f.grid;
    double s = 0.0;
    for (int i = 0; i < g.n_x1; ++i)
        for (int j = 0; j < g.n_y; ++j) {
            const double v = f(i, j);
            s += ((j == 0 || j == g.n_y - 1) ? 0.5 : 1.0) * v * v;
        }
    return std::sqrt(s * g.dx * g.dy);
}

double l2(const TraceField& f) {
    double s = 0.0;
    for (double v : f.values) s += v * v;
    return std::sqrt(s * f.grid->dx);
}

double tangential_tail_ratio(const Field2D& f) {
    const auto& g = *f.grid;
    return detail::spectral_tail_ratio(f.values.data(), g.n_x1, g.n_y);
}

}  // namespace rotbl
