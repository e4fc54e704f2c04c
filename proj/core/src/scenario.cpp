#include "rotbl/scenario.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "rotbl/operators.hpp"

namespace rotbl {

namespace {

/// Vanishes at 0 and at h, slope 1 at 0.
double wall_profile(double z, double h) { return z * (std::exp(-z * z) - std::exp(-h * h)); }

/// 1 at 0, 0 at h.
double lift_profile(double z, double h) { return std::exp(-z * z) - z / h * std::exp(-h * h); }

double draw_phase(std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    return 2.0 * std::numbers::pi * u;
}

/// Resets the wall row so the one-sided derivative equals g, and clears the top row.
void impose_layer_bc(Field2D& u, const TraceField& g) {
    const auto& gr = *u.grid;
    for (int i = 0; i < gr.n_x1; ++i) {
        u(i, gr.n_y - 1) = 0.0;
        u(i, 0) = (4.0 * u(i, 1) - u(i, 2) - 2.0 * gr.dy * g[i]) / 3.0;
    }
}

}  // namespace

double scenario_profile(const ScenarioSpec& s, double phase, double x1) {
    return std::cos(s.mode * x1 + phase) * std::exp(-std::pow(x1 / s.width, 2));
}

double zero_mean_profile(const ScenarioSpec& s, double phase, double x1) {
    const double e = std::exp(-std::pow(x1 / s.width, 2));
    const double d = -s.mode * std::sin(s.mode * x1 + phase) - 2.0 * x1 / (s.width * s.width) * std::cos(s.mode * x1 + phase);
    return 0.5 * s.width * d * e;
}

BLState make_bl_state(const Field2D& u, const Field2D& u2B, const TraceSet& traces, const LinOuterState& lin,
                      double t, WarningLog* log) {
    BLState b;
    b.u = u;
    b.u.label = "u";
    b.v = reconstruct_v(u, log);
    b.U1 = assemble_U1(u, traces, log);
    b.U3 = assemble_U3(u, row(lin.u3, 0), traces);
    b.u2B = u2B;
    b.d1pB0 = Field2D(u.grid, "d1pB0");
    b.t = t;
    return b;
}

InitialData make_scenario(const RunConfig& c) {
    InitialData d;
    d.outer_grid = make_grid(c.n_x1, c.n_x3, c.L, c.H);
    d.layer_grid = make_grid(c.n_x1, c.n_y, c.L, c.Y);
    const auto& og = *d.outer_grid;
    const auto& lg = *d.layer_grid;
    const ScenarioSpec& s = c.scenario;
    const bool zero = s.id == "zero";
    const double phase = s.random_phase ? draw_phase(c.seed) : 0.0;
    auto G = [&](double x) { return scenario_profile(s, phase, x); };
    auto G2 = [&](double x) { return scenario_profile(s, phase + 0.5 * std::numbers::pi, x); };
    const double amp = (s.id == "small_data" || s.id == "shear") ? s.amplitude : 0.0;
    const double amp_u2 = (s.id == "small_data" || s.id == "shear") ? s.amplitude_u2 : 0.0;
    const double shear = s.id == "shear" ? s.shear : 0.0;

    Field2D psi(d.outer_grid, "psi"), u2(d.outer_grid, "u2");
    for (int i = 0; i < og.n_x1; ++i)
        for (int j = 0; j < og.n_y; ++j) {
            const double x = og.x1_nodes[i], z = og.y_nodes[j];
            psi(i, j) = amp * G(x) * wall_profile(z, c.H) + 0.5 * shear * z * z;
            u2(i, j) = amp_u2 * G2(x) * std::exp(-z * z);
        }
    for (int i = 0; i < og.n_x1; ++i) {
        psi(i, 0) = 0.0;
        psi(i, og.n_y - 1) = 0.5 * shear * c.H * c.H;
    }
    d.outer = outer_from_streamfunction(psi, u2, 0.0);
    const TraceSet tr = extract_traces(d.outer);

    const TraceField g = d_x1(retarget(tr.u1_bar, d.layer_grid), 1);
    const TraceField u2b = retarget(tr.u2_bar, d.layer_grid);
    const double amp_layer = zero ? 0.0 : s.amplitude_layer;
    Field2D u(d.layer_grid, "u"), u2B(d.layer_grid, "u2B");
    for (int i = 0; i < lg.n_x1; ++i)
        for (int j = 0; j < lg.n_y; ++j) {
            const double x = lg.x1_nodes[i], y = lg.y_nodes[j];
            const double e = std::exp(-y * y);
            u(i, j) = g[i] * y * e + amp_layer * zero_mean_profile(s, phase, x) * e;
            u2B(i, j) = -u2b[i] * std::exp(-2.0 * c.a0 * y * y) + amp_u2 * G(x) * y * y * e;
        }
    impose_layer_bc(u, g);
    for (int i = 0; i < lg.n_x1; ++i) u2B(i, lg.n_y - 1) = -u2b[i] * std::exp(-2.0 * c.a0 * c.Y * c.Y);

    const TraceField wall = row(u, 0);
    const TraceField lift = lifting_row(retarget(wall, d.outer_grid));
    const double amp_lin = (s.id == "small_data" || s.id == "shear") ? s.amplitude_lin : 0.0;
    Field2D psi1(d.outer_grid, "psi1"), u2_1(d.outer_grid, "u2");
    for (int i = 0; i < og.n_x1; ++i)
        for (int j = 0; j < og.n_y; ++j) {
            const double x = og.x1_nodes[i], z = og.y_nodes[j];
            psi1(i, j) = lift[i] * lift_profile(z, c.H) + amp_lin * G2(x) * wall_profile(z, c.H);
        }
    for (int i = 0; i < og.n_x1; ++i) {
        psi1(i, 0) = lift[i];
        psi1(i, og.n_y - 1) = 0.0;
    }
    d.lin = lin_from_streamfunction(psi1, u2_1, wall, d.outer);
    d.bl = make_bl_state(u, u2B, tr, d.lin, 0.0);
    if (s.id == "heat_limit") d.terms = BLTerms{false, false, false};
    return d;
}

}  // namespace rotbl
