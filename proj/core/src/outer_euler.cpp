#include "rotbl/outer_euler.hpp"

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
constexpr double rk_c[3] = {0.0, 1.0 / 3.0, 3.0 / 4.0};

Field2D sample(const GridPtr& g, const Source& s, double t, const char* label) {
    Field2D f(g, label);
    if (!s) return f;
    for (int i = 0; i < g->n_x1; ++i)
        for (int j = 0; j < g->n_y; ++j) f(i, j) = s(t, g->x1_nodes[i], g->y_nodes[j]);
    return f;
}

struct Velocity {
    Field2D psi, u1, u3;
};

Velocity velocity_from_vorticity(const Field2D& omega, double flux) {
    const auto& g = omega.grid;
    TraceField wall(g);
    Velocity v;
    v.psi = detail::solve_dirichlet_poisson(omega, wall, flux);
    v.u1 = d_y(v.psi, 1);
    v.u3 = -1.0 * d_x1(v.psi, 1);
    for (int i = 0; i < g->n_x1; ++i) {
        v.u3(i, 0) = 0.0;
        v.u3(i, g->n_y - 1) = 0.0;
    }
    v.u1.label = "u1";
    v.u3.label = "u3";
    return v;
}

Field2D vorticity_of(const Field2D& psi) {
    Field2D w = d_x1(psi, 2) + d_y(psi, 2);
    w.label = "omega";
    return w;
}

// Pressure from the divergence of the momentum balance with wall Neumann data.
Field2D outer_pressure(const Field2D& u1, const Field2D& u3, const OuterForcing* forcing, double t) {
    const auto& g = u1.grid;
    Field2D n1 = hadamard(u1, d_x1(u1, 1)) + hadamard(u3, d_y(u1, 1));
    Field2D n3 = hadamard(u1, d_x1(u3, 1)) + hadamard(u3, d_y(u3, 1));
    Field2D f1(g), f3(g);
    if (forcing) {
        f1 = sample(g, forcing->f1, t, "f1");
        f3 = sample(g, forcing->f3, t, "f3");
    }
    Field2D rhs = d_x1(f1 - n1, 1) + d_y(f3 - n3, 1);
    Field2D q3 = f3 - n3;
    TraceField gb = row(q3, 0), gt = row(q3, g->n_y - 1);
    std::vector<double> mean(g->n_y, 0.0);
    for (int i = 0; i < g->n_x1; ++i)
        for (int j = 0; j < g->n_y; ++j) mean[j] += q3(i, j) / g->n_x1;
    Field2D p = detail::solve_neumann_poisson(rhs, gb, gt, mean);
    p.label = "p";
    return p;
}

Field2D vorticity_rhs(const Field2D& omega, const Velocity& v, const OuterForcing* forcing,
                      double t) {
    Field2D r = -1.0 * (hadamard(v.u1, d_x1(omega, 1)) + hadamard(v.u3, d_y(omega, 1)));
    if (forcing && forcing->vorticity) r = r + sample(omega.grid, forcing->vorticity, t, "fw");
    return r;
}

}  // namespace

OuterState outer_from_streamfunction(const Field2D& psi, const Field2D& u2, double t,
                                     const OuterForcing* forcing) {
    const auto& g = *psi.grid;
    for (int i = 0; i < g.n_x1; ++i)
        if (psi(i, 0) != 0.0)
            throw std::invalid_argument("streamfunction must vanish on the wall row");
    OuterState s;
    s.flux = psi(0, g.n_y - 1);
    s.omega = vorticity_of(psi);
    Velocity v = velocity_from_vorticity(s.omega, s.flux);
    s.u1 = v.u1;
    s.u3 = v.u3;
    s.u2 = u2;
    s.u2.label = "u2";
    s.t = t;
    s.p = outer_pressure(s.u1, s.u3, forcing, t);
    return s;
}

double outer_admissible_dt(const OuterState& s, double cfl) {
    const auto& g = *s.u1.grid;
    const double a1 = s.u1.max_abs(), a3 = s.u3.max_abs();
    double dt = std::numeric_limits<double>::infinity();
    if (a1 > 0.0) dt = std::min(dt, cfl * g.dx / a1);
    if (a3 > 0.0) dt = std::min(dt, cfl * g.dy / a3);
    return dt;
}

OuterState step_outer(const OuterState& s, double dt, const OuterForcing* forcing, double cfl) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_outer: dt must be positive");
    const double adm = outer_admissible_dt(s, cfl);
    if (dt > adm) throw CflViolation("step_outer", dt, adm);
    const auto& g = s.u1.grid;

    Field2D omega = s.omega;
    Field2D q(g);
    for (int st = 0; st < 3; ++st) {
        const double ts = s.t + rk_c[st] * dt;
        Velocity v = st == 0 ? Velocity{Field2D(), s.u1, s.u3} : velocity_from_vorticity(omega, s.flux);
        q = rk_a[st] * q + dt * vorticity_rhs(omega, v, forcing, ts);
        omega = omega + rk_b[st] * q;
    }

    OuterState n;
    n.t = s.t + dt;
    n.flux = s.flux;
    n.omega = omega;
    n.omega.label = "omega";
    Velocity v = velocity_from_vorticity(omega, s.flux);
    n.u1 = v.u1;
    n.u3 = v.u3;
    n.p = outer_pressure(n.u1, n.u3, forcing, n.t);

    // u2: semi-Lagrangian with midpoint departure points and time-averaged velocity.
    Field2D a1 = 0.5 * (s.u1 + n.u1), a3 = 0.5 * (s.u3 + n.u3);
    n.u2 = Field2D(g, "u2");
    for (int i = 0; i < g->n_x1; ++i) {
        for (int j = 0; j < g->n_y; ++j) {
            const double x = g->x1_nodes[i], z = g->y_nodes[j];
            const double xm = x - 0.5 * dt * a1(i, j), zm = z - 0.5 * dt * a3(i, j);
            const double xd = x - dt * detail::interpolate_bilinear(a1, xm, zm);
            const double zd = z - dt * detail::interpolate_bilinear(a3, xm, zm);
            double val = detail::interpolate_bilinear(s.u2, xd, zd);
            if (forcing && forcing->f2)
                val += 0.5 * dt * (forcing->f2(s.t, xd, std::clamp(zd, 0.0, g->Y)) + forcing->f2(n.t, x, z));
            n.u2(i, j) = val;
        }
    }
    if (!n.u1.all_finite() || !n.u2.all_finite() || !n.p.all_finite())
        throw NonFiniteState("step_outer", static_cast<long>(std::lround(n.t / dt)));
    return n;
}

TraceSet extract_traces(const OuterState& s) {
    TraceSet t;
    t.t = s.t;
    t.u1_bar = row(s.u1, 0);
    t.u2_bar = row(s.u2, 0);
    t.u3_bar = row(s.u3, 0);
    t.d3u3_bar = row(d_y(s.u3, 1), 0);
    t.d1d3u3_bar = d_x1(t.d3u3_bar, 1);
    t.d1p0_bar = d_x1(row(s.p, 0), 1);
    t.d2p0_bar = TraceField(s.u1.grid);
    t.u1_bar.label = "u1_bar";
    t.u2_bar.label = "u2_bar";
    t.u3_bar.label = "u3_bar";
    t.d3u3_bar.label = "d3u3_bar";
    t.d1d3u3_bar.label = "d1d3u3_bar";
    t.d1p0_bar.label = "d1p0_bar";
    t.d2p0_bar.label = "d2p0_bar";
    return t;
}

TraceField trace_transport_u2(const TraceField& u2_bar, const TraceField& u1_bar, double dt) {
    const auto& g = *u2_bar.grid;
    const double a = u1_bar.max_abs();
    if (a > 0.0 && dt * a > g.dx) throw CflViolation("trace_transport_u2", dt, g.dx / a);
    TraceField r(u2_bar.grid, u2_bar.label);
    for (int i = 0; i < g.n_x1; ++i)
        r[i] = detail::interpolate_linear(u2_bar, g.x1_nodes[i] - dt * u1_bar[i]);
    return r;
}

double bernoulli_residual(const TraceSet& earlier, const TraceSet& later, double ell) {
    const double dt = later.t - earlier.t;
    if (!(dt > 0.0))
        throw std::invalid_argument("bernoulli_residual: later trace set must have a later time");
    const auto& g = *later.u1_bar.grid;
    TraceField d1u1 = d_x1(later.u1_bar, 1), d1u2 = d_x1(later.u2_bar, 1);
    double s = 0.0;
    for (int i = 0; i < g.n_x1; ++i) {
        const double u1 = later.u1_bar[i];
        const double r1 = (u1 - earlier.u1_bar[i]) / dt + u1 * d1u1[i] + later.d1p0_bar[i];
        const double r2 = (later.u2_bar[i] - earlier.u2_bar[i]) / dt + u1 * d1u2[i];
        const double x = g.x1_nodes[i];
        s += std::pow(1.0 + x * x, ell) * (r1 * r1 + r2 * r2);
    }
    return std::sqrt(s * g.dx);
}

Field2D integrate_gradient(const Field2D& g1, const Field2D& g3, PathOrder path, WarningLog* log,
                           double tol) {
    const auto& gr = *g1.grid;
    if (log) {
        const double scale = std::max(l2(d_y(g1, 1)), l2(d_x1(g3, 1)));
        const double res = l2(d_y(g1, 1) - d_x1(g3, 1));
        if (scale > 0.0 && res > tol * scale)
            log->add(fmt::format("integrate_gradient: compatibility residual {:.3e} (relative {:.3e})",
                                 res, res / scale));
    }
    const double h = gr.dy;
    Field2D p(g1.grid, "p");
    if (path == PathOrder::x3_then_x1) {
        std::vector<double> leg(gr.n_y, 0.0);
        leg[1] = 0.5 * h * (g3(0, 0) + g3(0, 1));
        for (int j = 2; j < gr.n_y; ++j) leg[j] = leg[j - 2] + 2.0 * h * g3(0, j - 1);
        Field2D rows = integrate_x1_from_left(g1);
        p = rows;
        for (int i = 0; i < gr.n_x1; ++i)
            for (int j = 0; j < gr.n_y; ++j) p(i, j) += leg[j];
    } else {
        TraceField bottom = integrate_x1_from_left(row(g1, 0));
        for (int i = 0; i < gr.n_x1; ++i) {
            double acc = bottom[i];
            p(i, 0) = acc;
            for (int j = 1; j < gr.n_y; ++j) {
                acc += 0.5 * h * (g3(i, j - 1) + g3(i, j));
                p(i, j) = acc;
            }
        }
    }
    return p;
}

Field2D reconstruct_p_minus2(const OuterState& s, WarningLog* log, PathOrder path) {
    Field2D p = integrate_gradient(-1.0 * s.u3, s.u1, path, log);
    p.label = "p_Im2";
    return p;
}

Field2D divergence(const Field2D& u1, const Field2D& u3) {
    Field2D d = d_x1(u1, 1) + d_y(u3, 1);
    d.label = "div";
    return d;
}

double kinetic_energy(const OuterState& s) {
    const auto& g = *s.u1.grid;
    double e = 0.0;
    for (int i = 0; i < g.n_x1; ++i)
        for (int j = 0; j < g.n_y; ++j) {
            const double w = (j == 0 || j == g.n_y - 1) ? 0.5 : 1.0;
            e += w * (s.u1(i, j) * s.u1(i, j) + s.u3(i, j) * s.u3(i, j));
        }
    return 0.5 * e * g.dx * g.dy;
}

}  // namespace rotbl
