#include "rotbl/outer_euler_lin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "halfplane.hpp"
#include "rotbl/errors.hpp"
#include "rotbl/operators.hpp"

namespace rotbl {

namespace {

constexpr double rk_a[3] = {0.0, -5.0 / 9.0, -153.0 / 128.0};
constexpr double rk_b[3] = {1.0 / 3.0, 15.0 / 16.0, 8.0 / 15.0};

double mean_of(const TraceField& t) {
    double s = 0.0;
    for (double v : t.values) s += v;
    return s / t.values.size();
}

struct LinVelocity {
    Field2D u1, u3;
};

LinVelocity lin_velocity(const Field2D& omega, const TraceField& wall_trace, double flux) {
    const auto& g = omega.grid;
    TraceField trace = retarget(wall_trace, g);
    const double w0 = -mean_of(trace);
    Field2D psi = detail::solve_dirichlet_poisson(omega, lifting_row(trace), flux);
    LinVelocity v;
    v.u1 = d_y(psi, 1);
    v.u3 = -1.0 * d_x1(psi, 1);
    for (auto& x : v.u3.values) x += w0;
    for (int i = 0; i < g->n_x1; ++i) {
        v.u3(i, 0) = -trace[i];
        v.u3(i, g->n_y - 1) = w0;
    }
    v.u1.label = "u1";
    v.u3.label = "u3";
    return v;
}

// Background-linearised transport of a field q with background B: U.grad q + u.grad B.
Field2D linear_transport(const Field2D& q, const Field2D& bq, const OuterState& bg, const Field2D& u1,
                         const Field2D& u3) {
    return hadamard(bg.u1, d_x1(q, 1)) + hadamard(bg.u3, d_y(q, 1)) + hadamard(u1, d_x1(bq, 1)) +
           hadamard(u3, d_y(bq, 1));
}

Field2D lin_pressure(const LinVelocity& v, const OuterState& bg, const TraceField& old_row,
                     const TraceField& new_row, double dt) {
    const auto& g = v.u1.grid;
    Field2D n1 = linear_transport(v.u1, bg.u1, bg, v.u1, v.u3);
    Field2D n3 = linear_transport(v.u3, bg.u3, bg, v.u1, v.u3);
    Field2D rhs = -1.0 * (d_x1(n1, 1) + d_y(n3, 1));
    const int top = g->n_y - 1;
    TraceField gb(g), gt(g);
    std::vector<double> mean(g->n_y, 0.0);
    const double dw0 = dt > 0.0 ? -(mean_of(new_row) - mean_of(old_row)) / dt : 0.0;
    for (int i = 0; i < g->n_x1; ++i) {
        const double dtu3 = dt > 0.0 ? -(new_row[i] - old_row[i]) / dt : 0.0;
        gb[i] = -dtu3 - n3(i, 0);
        gt[i] = -dw0 - n3(i, top);
        for (int j = 0; j < g->n_y; ++j) mean[j] += (-dw0 - n3(i, j)) / g->n_x1;
    }
    mean[0] = 0.0;
    for (int i = 0; i < g->n_x1; ++i) mean[0] += gb[i] / g->n_x1;
    Field2D p = detail::solve_neumann_poisson(rhs, gb, gt, mean);
    p.label = "p";
    return p;
}

void check_times(const LinOuterState& ls, const OuterState& bg) {
    if (std::abs(ls.t - bg.t) > 1e-12 * std::max(1.0, std::abs(bg.t)))
        throw std::invalid_argument(fmt::format(
            "linearised state at t = {} but background at t = {}", ls.t, bg.t));
    if (!same_grid(*ls.u1.grid, *bg.u1.grid))
        throw std::invalid_argument("linearised state and background live on different grids");
}

}  // namespace

TraceField lifting_row(const TraceField& wall_trace) {
    const double m = mean_of(wall_trace);
    TraceField z(wall_trace.grid, "lift");
    for (std::size_t i = 0; i < z.values.size(); ++i) z.values[i] = wall_trace.values[i] - m;
    return integrate_x1_from_left(z);
}

LinOuterState lin_from_streamfunction(const Field2D& psi, const Field2D& u2, const TraceField& wall_trace,
                                      const OuterState& background, double tol) {
    const auto& g = psi.grid;
    TraceField trace = retarget(wall_trace, g);
    TraceField lift = lifting_row(trace);
    TraceField wall = row(psi, 0);
    const double shift = wall[0] - lift[0];
    double mismatch = 0.0;
    for (int i = 0; i < g->n_x1; ++i) mismatch = std::max(mismatch, std::abs(wall[i] - shift - lift[i]));
    const double scale = std::max(1.0, trace.max_abs());
    if (mismatch > tol * scale)
        throw std::invalid_argument(fmt::format(
            "initial interior normal velocity is incompatible with the layer wall trace "
            "(streamfunction wall-row mismatch {:.3e})",
            mismatch));
    Field2D shifted = psi;
    for (auto& v : shifted.values) v -= shift;
    LinOuterState ls;
    ls.t = background.t;
    ls.flux = shifted(0, g->n_y - 1);
    ls.omega = d_x1(shifted, 2) + d_y(shifted, 2);
    ls.omega.label = "omega";
    ls.wall_trace = trace;
    LinVelocity v = lin_velocity(ls.omega, trace, ls.flux);
    ls.u1 = v.u1;
    ls.u3 = v.u3;
    ls.u2 = u2;
    ls.u2.label = "u2";
    ls.p = lin_pressure(v, background, trace, trace, 0.0);
    check_times(ls, background);
    return ls;
}

double lin_admissible_dt(const LinOuterState& ls, const OuterState& background, double cfl) {
    const auto& g = *ls.u1.grid;
    const double a1 = background.u1.max_abs(), a3 = background.u3.max_abs();
    double dt = std::numeric_limits<double>::infinity();
    if (a1 > 0.0) dt = std::min(dt, cfl * g.dx / a1);
    if (a3 > 0.0) dt = std::min(dt, cfl * g.dy / a3);
    return dt;
}

LinOuterState step_linearized(const LinOuterState& ls, const OuterState& background,
                              const TraceField& bl_trace, double dt, double cfl) {
    check_times(ls, background);
    if (!(dt > 0.0)) throw std::invalid_argument("step_linearized: dt must be positive");
    const double adm = lin_admissible_dt(ls, background, cfl);
    if (dt > adm) throw CflViolation("step_linearized", dt, adm);
    const auto& g = ls.u1.grid;
    TraceField trace = retarget(bl_trace, g);

    Field2D omega = ls.omega, u2 = ls.u2;
    Field2D qw(g), q2(g);
    LinVelocity v{ls.u1, ls.u3};
    for (int st = 0; st < 3; ++st) {
        if (st > 0) v = lin_velocity(omega, trace, ls.flux);
        Field2D rw = -1.0 * linear_transport(omega, background.omega, background, v.u1, v.u3);
        Field2D r2 = -1.0 * linear_transport(u2, background.u2, background, v.u1, v.u3);
        qw = rk_a[st] * qw + dt * rw;
        q2 = rk_a[st] * q2 + dt * r2;
        omega = omega + rk_b[st] * qw;
        u2 = u2 + rk_b[st] * q2;
    }

    LinOuterState n;
    n.t = ls.t + dt;
    n.flux = ls.flux;
    n.omega = omega;
    n.omega.label = "omega";
    n.u2 = u2;
    n.u2.label = "u2";
    n.wall_trace = trace;
    v = lin_velocity(omega, trace, ls.flux);
    n.u1 = v.u1;
    n.u3 = v.u3;
    n.p = lin_pressure(v, background, ls.wall_trace, trace, dt);
    if (!n.u1.all_finite() || !n.u2.all_finite() || !n.p.all_finite())
        throw NonFiniteState("step_linearized", static_cast<long>(std::lround(n.t / dt)));
    return n;
}

Field2D reconstruct_p_minus1(const LinOuterState& ls, WarningLog* log, PathOrder path) {
    Field2D p = integrate_gradient(-1.0 * ls.u3, ls.u1, path, log);
    p.label = "p_Im1";
    return p;
}

}  // namespace rotbl
