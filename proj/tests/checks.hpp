#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "rotbl/boundary_layer.hpp"
#include "rotbl/composer.hpp"
#include "rotbl/operators.hpp"
#include "rotbl/outer_euler.hpp"

namespace checks {

struct Convergence {
    std::vector<double> h, error;
    double slope() const { return oracle::loglog_slope(h, error); }
};

inline rotbl::Field2D sample(const rotbl::GridPtr& g, const std::function<double(double, double)>& f) {
    rotbl::Field2D out(g);
    for (int i = 0; i < g->n_x1; ++i)
        for (int j = 0; j < g->n_y; ++j) out(i, j) = f(g->x1_nodes[i], g->y_nodes[j]);
    return out;
}

inline double max_diff(const rotbl::Field2D& a, const rotbl::Field2D& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.values.size(); ++k) m = std::max(m, std::abs(a.values[k] - b.values[k]));
    return m;
}

/// Largest error of d_x1^m on sin(k pi (x + L) / L) over all resolved modes and m = 1..max_order,
/// relative to the mode's own symbol, or to the largest resolved symbol when `by_max_symbol`.
inline double fourier_mode_error(int max_order = 2, bool by_max_symbol = false, int n_x1 = 64, double L = 3.0) {
    const auto g = rotbl::make_grid(n_x1, 5, L, 1.0);
    double worst = 0.0;
    for (int k = 1; k < n_x1 / 2; ++k) {
        const double w = k * std::numbers::pi / L;
        const auto f = sample(g, [&](double x, double) { return std::sin(w * (x + L)); });
        for (int m = 1; m <= max_order; ++m) {
            const auto exact = sample(g, [&](double x, double) {
                return std::pow(w, m) * std::sin(w * (x + L) + m * std::numbers::pi / 2);
            });
            const double scale = by_max_symbol ? (n_x1 / 2) * std::numbers::pi / L : w;
            worst = std::max(worst, max_diff(rotbl::d_x1(f, m), exact) / std::pow(scale, m));
        }
    }
    return worst;
}

/// Max-norm error of d_y^order on sin(2y) e^{-y}, including both end rows.
inline Convergence wall_normal_refinement(int order) {
    Convergence c;
    for (int n : {33, 65, 129, 257}) {
        const auto g = rotbl::make_grid(8, n, 1.0, 2.0);
        const auto f = sample(g, [](double, double y) { return std::sin(2.0 * y) * std::exp(-y); });
        const auto exact = sample(g, [&](double, double y) {
            const double s = std::sin(2.0 * y), co = std::cos(2.0 * y), e = std::exp(-y);
            return order == 1 ? (2.0 * co - s) * e : (-3.0 * s - 4.0 * co) * e;
        });
        c.h.push_back(g->dy);
        c.error.push_back(max_diff(rotbl::d_y(f, order), exact));
    }
    return c;
}

/// max |int_{-L}^{x} d_1 f - (f - f(-L))| divided by dx^2.
inline double antiderivative_defect(int n_x1 = 64) {
    const auto g = rotbl::make_grid(n_x1, 5, 8.0, 1.0);
    const auto f = sample(g, [](double x, double y) { return (1.0 + y) * std::exp(-x * x / 2.0) * std::cos(x); });
    const auto F = rotbl::integrate_x1_from_left(rotbl::d_x1(f, 1));
    double err = 0.0;
    for (int i = 0; i < g->n_x1; ++i)
        for (int j = 0; j < g->n_y; ++j) err = std::max(err, std::abs(F(i, j) - (f(i, j) - f(0, j))));
    return err / (g->dx * g->dx);
}

inline rotbl::TraceSet zero_traces(const rotbl::GridPtr& g) {
    rotbl::TraceSet t;
    for (auto* f : {&t.u1_bar, &t.u2_bar, &t.u3_bar, &t.d3u3_bar, &t.d1d3u3_bar, &t.d1p0_bar, &t.d2p0_bar})
        *f = rotbl::TraceField(g);
    return t;
}

/// Largest per-step deviation of step_bl (all explicit terms off, zero traces) from the dense
/// column oracle, each step started from the solver's own previous state.
inline double heat_oracle_deviation(int n_x1 = 128, int n_y = 128, int steps = 20, double dt = 1e-2) {
    const auto g = rotbl::make_grid(n_x1, n_y, 10.0, 8.0);
    rotbl::Field2D u = sample(g, [](double x, double y) {
        return std::exp(-x * x / 8.0) * (std::cos(x) + 0.5) * (1.0 + y) * std::exp(-y * y);
    });
    for (int i = 0; i < n_x1; ++i) u(i, n_y - 1) = 0.0;
    const rotbl::TraceSet tr = zero_traces(g);
    rotbl::RegularizationParams reg;
    rotbl::BLStepOptions opt;
    opt.terms = rotbl::BLTerms{false, false, false};
    double worst = 0.0;
    for (int s = 0; s < steps; ++s) {
        const rotbl::Field2D next = rotbl::step_bl(u, tr, reg, dt, opt);
        for (int i = 0; i < n_x1; ++i) {
            std::vector<double> col(u.values.begin() + g->index(i, 0), u.values.begin() + g->index(i, 0) + n_y);
            const auto ref = oracle::heat_column_step(col, g->dy, dt, 0.0);
            for (int j = 0; j < n_y; ++j) worst = std::max(worst, std::abs(next(i, j) - ref[j]));
        }
        u = next;
    }
    return worst;
}

/// Discrete L2 error at T of the full nonlinear layer operator against a manufactured solution.
inline double layer_mms_error(int n_y, double dt, double T = 0.2) {
    const oracle::LayerMms m;
    const auto g = rotbl::make_grid(64, n_y, m.L, 8.0);
    rotbl::TraceSet tr = m.traces(g);
    rotbl::Field2D u = sample(g, [&](double x, double y) { return m.u(0.0, x, y); });
    rotbl::RegularizationParams reg;
    reg.eps1 = m.eps1;
    rotbl::BLStepOptions opt;
    opt.source = [&m](double t, double x, double y) { return m.source(t, x, y); };
    const int n = static_cast<int>(std::lround(T / dt));
    for (int k = 0; k < n; ++k) {
        tr.t = k * dt;
        u = rotbl::step_bl(u, tr, reg, dt, opt);
    }
    const auto exact = sample(g, [&](double x, double y) { return m.u(n * dt, x, y); });
    return rotbl::l2(u - exact);
}

inline Convergence layer_mms_refinement() {
    Convergence c;
    for (int n : {33, 65, 129, 257}) {
        const double dy = 8.0 / (n - 1);
        c.h.push_back(dy);
        c.error.push_back(layer_mms_error(n, 0.2 * dy));
    }
    return c;
}

inline rotbl::OuterState outer_mms_state(const oracle::OuterMms& m, const rotbl::GridPtr& g,
                                         const rotbl::OuterForcing* f) {
    rotbl::Field2D psi = sample(g, [&](double x, double z) { return m.psi(0.0, x, z); });
    for (int i = 0; i < g->n_x1; ++i) psi(i, 0) = psi(i, g->n_y - 1) = 0.0;
    return rotbl::outer_from_streamfunction(psi, rotbl::Field2D(g), 0.0, f);
}

inline double outer_mms_error(int n_x3, double dt, double T = 0.25) {
    const oracle::OuterMms m;
    const auto g = rotbl::make_grid(64, n_x3, 10.0, m.H);
    rotbl::OuterForcing f;
    f.vorticity = [&m](double t, double x, double z) { return m.vorticity_source(t, x, z); };
    rotbl::OuterState s = outer_mms_state(m, g, &f);
    const int n = static_cast<int>(std::lround(T / dt));
    for (int k = 0; k < n; ++k) s = rotbl::step_outer(s, dt, &f);
    double e = 0.0;
    for (int i = 0; i < g->n_x1; ++i)
        for (int j = 0; j < g->n_y; ++j) {
            const double x = g->x1_nodes[i], z = g->y_nodes[j];
            e += std::pow(s.u1(i, j) - m.u1(s.t, x, z), 2) + std::pow(s.u3(i, j) - m.u3(s.t, x, z), 2);
        }
    return std::sqrt(e * g->dx * g->dy);
}

inline Convergence outer_mms_refinement() {
    Convergence c;
    for (int n : {33, 65, 129}) {
        const double dz = 4.0 / (n - 1);
        c.h.push_back(dz);
        c.error.push_back(outer_mms_error(n, 0.25 * dz));
    }
    return c;
}

/// Adds a small smooth disturbance to every group the identity suite inspects.
inline rotbl::ExpansionState perturbed(rotbl::ExpansionState e, double size = 1e-3) {
    auto bump = [](const rotbl::GridPtr& g, double amp, bool vanish_on_wall) {
        return sample(g, [=](double x, double y) {
            return amp * std::exp(-x * x) * (vanish_on_wall ? y : 1.0) * std::exp(-y * y);
        });
    };
    const auto og = e.outer.u1.grid, lg = e.bl.u.grid;
    e.p_Im2 = e.p_Im2 + bump(og, size * e.p_Im2.max_abs(), false);
    e.p_Im1 = e.p_Im1 + bump(og, size * e.p_Im1.max_abs(), false);
    e.outer.p = e.outer.p + bump(og, size * e.outer.p.max_abs(), true);
    e.P_pm1 = e.P_pm1 + bump(lg, size * e.P_pm1.max_abs(), false);
    e.bl.v = e.bl.v + bump(lg, size * e.bl.v.max_abs(), false);
    e.bl.U1 = e.bl.U1 + bump(lg, size * e.bl.U1.max_abs(), false);
    return e;
}

}  // namespace checks
