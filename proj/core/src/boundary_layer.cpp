#include "rotbl/boundary_layer.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "rotbl/errors.hpp"
#include "rotbl/operators.hpp"
#include "spectral.hpp"

namespace rotbl {

namespace {

struct LocalTraces {
    TraceField u1, u2, d3u3, d1d3u3, d1p0, d1u1;
};

LocalTraces local(const TraceSet& t, const GridPtr& g) {
    LocalTraces l{retarget(t.u1_bar, g), retarget(t.u2_bar, g), retarget(t.d3u3_bar, g),
                  retarget(t.d1d3u3_bar, g), retarget(t.d1p0_bar, g), {}};
    l.d1u1 = d_x1(l.u1, 1);
    return l;
}

Field2D sample(const GridPtr& g, const Source& s, double t) {
    Field2D f(g, "source");
    for (int i = 0; i < g->n_x1; ++i)
        for (int j = 0; j < g->n_y; ++j) f(i, j) = s(t, g->x1_nodes[i], g->y_nodes[j]);
    return f;
}

// Crank-Nicolson in y for each column: (I - dt/2 D) u_new = (I + dt/2 D) u_old + dt * e,
// with the one-sided Neumann condition on row 0 and u = 0 on the top row.
Field2D crank_nicolson(const Field2D& u_old, const Field2D& e, const TraceField& neumann, double dt) {
    const auto& g = *u_old.grid;
    const int n = g.n_y;
    const int m = n - 2;
    const double h = g.dy;
    const double r = dt / (2.0 * h * h);
    Field2D out(u_old.grid, u_old.label);
    std::vector<double> a(m), b(m), c(m), d(m);
    for (int i = 0; i < g.n_x1; ++i) {
        const double* uo = &u_old.values[g.index(i, 0)];
        const double* ei = &e.values[g.index(i, 0)];
        for (int q = 0; q < m; ++q) {
            const int j = q + 1;
            a[q] = -r;
            b[q] = 1.0 + 2.0 * r;
            c[q] = -r;
            d[q] = uo[j] + r * (uo[j - 1] - 2.0 * uo[j] + uo[j + 1]) + dt * ei[j];
        }
        const double gn = neumann[i];
        b[0] = 1.0 + 2.0 * r / 3.0;
        c[0] = -2.0 * r / 3.0;
        d[0] -= 2.0 / 3.0 * r * h * gn;
        detail::solve_tridiagonal(a.data(), b.data(), c.data(), d.data(), m);
        double* uo_new = &out.values[g.index(i, 0)];
        for (int q = 0; q < m; ++q) uo_new[q + 1] = d[q];
        uo_new[n - 1] = 0.0;
        uo_new[0] = (4.0 * uo_new[1] - uo_new[2] - 2.0 * h * gn) / 3.0;
    }
    return out;
}

}  // namespace

void validate(const RegularizationParams& reg) {
    if (!(reg.eps1 > 0.0)) throw std::invalid_argument(fmt::format("eps1 = {} must be positive", reg.eps1));
    for (std::size_t k = 0; k < reg.schedule.size(); ++k) {
        if (!(reg.schedule[k] > 0.0))
            throw std::invalid_argument(fmt::format("schedule entry {} must be positive", reg.schedule[k]));
        if (k > 0 && !(reg.schedule[k] < reg.schedule[k - 1]))
            throw std::invalid_argument("regularization schedule must be strictly decreasing");
    }
}

Field2D reconstruct_v(const Field2D& u, WarningLog* log) {
    Field2D v = -1.0 * integrate_x1_from_left(d_y(u, 1), log);
    v.label = "v";
    return v;
}

Field2D bl_explicit_rhs(const Field2D& u, const TraceSet& traces, double eps1, const BLTerms& terms) {
    const auto& gp = u.grid;
    const auto& g = *gp;
    Field2D r(gp, "rhs");
    if (terms.regularization && eps1 != 0.0) r = eps1 * d_x1(u, 2);
    r.label = "rhs";
    if (!terms.trace && !terms.nonlinear) return r;
    const LocalTraces tr = local(traces, gp);
    const Field2D v = reconstruct_v(u);
    const Field2D du1 = d_x1(u, 1);
    const Field2D duy = d_y(u, 1);
    for (int i = 0; i < g.n_x1; ++i) {
        const double u0 = u(i, 0), du0 = du1(i, 0);
        for (int j = 0; j < g.n_y; ++j) {
            const double y = g.y_nodes[j];
            double s = 0.0;
            if (terms.trace)
                s -= tr.d3u3[i] * y * duy(i, j) + tr.u1[i] * du1(i, j) + tr.d3u3[i] * u(i, j) +
                     y * tr.d1d3u3[i] * v(i, j);
            if (terms.nonlinear)
                s -= v(i, j) * du1(i, j) + (u(i, j) - u0) * duy(i, j) + du0 * v(i, j);
            r(i, j) += s;
        }
    }
    return r;
}

double bl_admissible_dt(const Field2D& u, const TraceSet& traces, const RegularizationParams& reg,
                        const BLStepOptions& opt) {
    const auto& g = *u.grid;
    double dt = std::numeric_limits<double>::infinity();
    if (opt.terms.regularization && reg.eps1 > 0.0) {
        const double kmax = std::numbers::pi / g.dx;
        dt = std::min(dt, 2.0 * opt.cfl / (reg.eps1 * kmax * kmax));
    }
    if (opt.terms.trace || opt.terms.nonlinear) {
        const LocalTraces tr = local(traces, u.grid);
        const Field2D v = reconstruct_v(u);
        double ax = 0.0, ay = 0.0;
        for (int i = 0; i < g.n_x1; ++i)
            for (int j = 0; j < g.n_y; ++j) {
                double cx = 0.0, cy = 0.0;
                if (opt.terms.trace) {
                    cx += tr.u1[i];
                    cy += tr.d3u3[i] * g.y_nodes[j];
                }
                if (opt.terms.nonlinear) {
                    cx += v(i, j);
                    cy += u(i, j) - u(i, 0);
                }
                ax = std::max(ax, std::abs(cx));
                ay = std::max(ay, std::abs(cy));
            }
        const double rate = ax / g.dx + ay / g.dy;
        if (rate > 0.0) dt = std::min(dt, opt.cfl / rate);
    }
    return dt;
}

Field2D step_bl(const Field2D& u, const TraceSet& traces, const RegularizationParams& reg, double dt,
                const BLStepOptions& opt) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_bl: dt must be positive");
    const double adm = bl_admissible_dt(u, traces, reg, opt);
    if (dt > adm) throw CflViolation("step_bl", dt, adm);
    const TraceSet& wall = opt.end_traces ? *opt.end_traces : traces;
    const TraceField neumann = d_x1(retarget(wall.u1_bar, u.grid), 1);
    const double t0 = traces.t;

    Field2D e0 = bl_explicit_rhs(u, traces, reg.eps1, opt.terms);
    if (opt.source) e0 = e0 + sample(u.grid, opt.source, t0);
    const Field2D predicted = crank_nicolson(u, e0, neumann, dt);
    Field2D e1 = bl_explicit_rhs(predicted, traces, reg.eps1, opt.terms);
    if (opt.source) e1 = e1 + sample(u.grid, opt.source, t0 + dt);
    Field2D out = crank_nicolson(u, 0.5 * (e0 + e1), neumann, dt);
    out.label = u.label;
    if (!out.all_finite()) throw NonFiniteState("step_bl", opt.step_index);
    return out;
}

Field2D assemble_U3(const Field2D& u, const TraceField& lin_u3_bar, const TraceSet& traces) {
    Field2D U3 = u + broadcast(lin_u3_bar, u.grid) + y_times(traces.d3u3_bar, u.grid);
    U3.label = "U3";
    return U3;
}

Field2D assemble_U1(const Field2D& u, const TraceSet& traces, WarningLog* log) {
    Field2D U1 = reconstruct_v(u, log) + broadcast(traces.u1_bar, u.grid);
    U1.label = "U1";
    return U1;
}

Field2D recover_pressure_gradient(const Field2D& U1_prev, const Field2D& U1_next, const Field2D& U3,
                                  const TraceSet& traces, double dt) {
    if (dt == 0.0) throw std::invalid_argument("recover_pressure_gradient: dt must be nonzero");
    Field2D r = (-1.0 / dt) * (U1_next - U1_prev) + d_y(U1_next, 2) -
                hadamard(U1_next, d_x1(U1_next, 1)) - hadamard(U3, d_y(U1_next, 1)) -
                broadcast(traces.d1p0_bar, U1_next.grid);
    r.ramp.clear();
    r.label = "d1pB0";
    return r;
}

Field2D p2_substitute(const Field2D& u2B, const TraceField& u2_bar, double a0) {
    const auto& g = *u2B.grid;
    const TraceField tb = retarget(u2_bar, u2B.grid);
    Field2D w = u2B;
    for (int i = 0; i < g.n_x1; ++i)
        for (int j = 0; j < g.n_y; ++j) {
            const double y = g.y_nodes[j];
            w(i, j) += std::exp(-2.0 * a0 * y * y) * tb[i];
        }
    w.label = "w";
    w.ramp.clear();
    return w;
}

Field2D p2_source(const Field2D& U1, const Field2D& U3, const TraceSet& traces, double a0) {
    const auto& g = *U1.grid;
    const LocalTraces tr = local(traces, U1.grid);
    const TraceField d1u2 = d_x1(tr.u2, 1);
    Field2D R(U1.grid, "R");
    for (int i = 0; i < g.n_x1; ++i)
        for (int j = 0; j < g.n_y; ++j) {
            const double y = g.y_nodes[j];
            const double e = std::exp(-2.0 * a0 * y * y);
            const double u1B = U1(i, j) - tr.u1[i];
            R(i, j) = (16.0 * a0 * a0 * y * y - 4.0 * a0) * e * tr.u2[i] +
                      4.0 * a0 * U3(i, j) * y * e * tr.u2[i] + (1.0 - e) * d1u2[i] * u1B;
        }
    return R;
}

Field2D step_u2_bl(const Field2D& u2B, const Field2D& U1, const Field2D& U3, const TraceSet& traces,
                   double a0, double dt, P2StepInfo* info) {
    const auto& g = *u2B.grid;
    if (!(dt > 0.0)) throw std::invalid_argument("step_u2_bl: dt must be positive");
    const double a1 = U1.max_abs();
    if (a1 > 0.0 && dt * a1 > g.dx) throw CflViolation("step_u2_bl", dt, g.dx / a1);
    const LocalTraces tr = local(traces, u2B.grid);
    const Field2D w = p2_substitute(u2B, tr.u2, a0);
    const Field2D R = p2_source(U1, U3, traces, a0);
    const int nx = g.n_x1, n = g.n_y;

    // Tangential transport: first-order upwind.
    Field2D ws(u2B.grid, "w");
    for (int i = 0; i < nx; ++i) {
        const int im = (i + nx - 1) % nx, ip = (i + 1) % nx;
        for (int j = 1; j < n - 1; ++j) {
            const double c = U1(i, j);
            const double grad = c >= 0.0 ? (w(i, j) - w(im, j)) / g.dx : (w(ip, j) - w(i, j)) / g.dx;
            ws(i, j) = w(i, j) - dt * c * grad - dt * R(i, j);
        }
    }

    // Wall-normal advection-diffusion: backward Euler, w = 0 at both ends.
    Field2D wn(u2B.grid, "w");
    const int m = n - 2;
    const double h = g.dy, k = dt / (h * h);
    std::vector<double> a(m), b(m), c(m), d(m);
    for (int i = 0; i < nx; ++i) {
        for (int q = 0; q < m; ++q) {
            const int j = q + 1;
            const double s = U3(i, j);
            double lo = -k, di = 1.0 + 2.0 * k, up = -k;
            if (std::abs(s) * h <= 2.0) {
                lo -= dt * s / (2.0 * h);
                up += dt * s / (2.0 * h);
            } else if (s > 0.0) {
                lo -= dt * s / h;
                di += dt * s / h;
            } else {
                up += dt * s / h;
                di -= dt * s / h;
            }
            a[q] = lo;
            b[q] = di;
            c[q] = up;
            d[q] = ws(i, j);
        }
        detail::solve_tridiagonal(a.data(), b.data(), c.data(), d.data(), m);
        for (int q = 0; q < m; ++q) wn(i, q + 1) = d[q];
    }

    const TraceField u2_next = trace_transport_u2(tr.u2, tr.u1, dt);
    Field2D out = wn;
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < n; ++j) {
            const double y = g.y_nodes[j];
            out(i, j) -= std::exp(-2.0 * a0 * y * y) * u2_next[i];
        }
    out.label = "u2B";
    if (info) {
        info->w_before = w;
        info->w_after = wn;
    }
    if (!out.all_finite()) throw NonFiniteState("step_u2_bl", 0);
    return out;
}

SweepReport regularization_sweep(const std::function<Field2D(double)>& solve,
                                 const RegularizationParams& reg, const NormParams& norm) {
    if (reg.schedule.size() < 3)
        throw std::invalid_argument("regularization_sweep: schedule needs at least three entries");
    const std::size_t n = reg.schedule.size();
    std::vector<std::future<Field2D>> jobs;
    for (double e : reg.schedule) jobs.push_back(std::async(std::launch::async, solve, e));
    std::vector<Field2D> finals(n);
    SweepReport rep;
    rep.eps1 = reg.schedule;
    rep.failures.assign(n, "");
    std::vector<bool> ok(n, true);
    for (std::size_t k = 0; k < n; ++k) {
        try {
            finals[k] = jobs[k].get();
        } catch (const std::exception& ex) {
            ok[k] = false;
            rep.failures[k] = ex.what();
        }
    }
    rep.strictly_decreasing = true;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        double d = std::numeric_limits<double>::quiet_NaN();
        if (ok[k] && ok[k + 1]) d = x_norm(finals[k] - finals[k + 1], norm).X;
        rep.differences.push_back(d);
        if (!std::isfinite(d)) rep.strictly_decreasing = false;
        if (k > 0 && !(d < rep.differences[k - 1])) rep.strictly_decreasing = false;
    }
    return rep;
}

std::string SweepReport::to_text() const {
    std::string s = "eps1_k, eps1_k+1, difference_X\n";
    for (std::size_t k = 0; k < differences.size(); ++k)
        s += fmt::format("{:.6e}, {:.6e}, {:.10e}\n", eps1[k], eps1[k + 1], differences[k]);
    for (std::size_t k = 0; k < failures.size(); ++k)
        if (!failures[k].empty()) s += fmt::format("run eps1 = {:.6e} failed: {}\n", eps1[k], failures[k]);
    s += fmt::format("strictly_decreasing = {}\n", strictly_decreasing ? "yes" : "no");
    return s;
}

}  // namespace rotbl
