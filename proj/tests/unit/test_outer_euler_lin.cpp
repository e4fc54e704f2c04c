#include <doctest.h>

#include <cmath>

#include "rotbl/operators.hpp"
#include "rotbl/outer_euler_lin.hpp"

using namespace rotbl;

namespace {

constexpr double H = 4.0;

double bump(double x) { return std::exp(-x * x / 2.0) * std::cos(x); }
double wall_profile(double z) { return z * (std::exp(-z * z) - std::exp(-H * H)); }

OuterState uniform_flow(const GridPtr& g, double U) {
    Field2D psi(g), u2(g);
    for (int i = 0; i < g->n_x1; ++i)
        for (int j = 0; j < g->n_y; ++j) psi(i, j) = U * g->y_nodes[j];
    return outer_from_streamfunction(psi, u2, 0.0);
}

LinOuterState shifted_state(const GridPtr& g, const OuterState& bg, double shift) {
    Field2D psi(g), u2(g);
    for (int i = 0; i < g->n_x1; ++i)
        for (int j = 0; j < g->n_y; ++j) psi(i, j) = 0.1 * bump(g->x1_nodes[i] - shift) * wall_profile(g->y_nodes[j]);
    for (int i = 0; i < g->n_x1; ++i) psi(i, 0) = psi(i, g->n_y - 1) = 0.0;
    return lin_from_streamfunction(psi, u2, TraceField(g), bg);
}

}  // namespace

TEST_CASE("correction is advected rigidly by a uniform background") {
    const auto g = make_grid(128, 65, 10.0, H);
    const double U = 0.5, dt = 0.01;
    OuterState bg = uniform_flow(g, U);
    LinOuterState ls = shifted_state(g, bg, 0.0);
    for (int k = 0; k < 100; ++k) {
        ls = step_linearized(ls, bg, TraceField(g), dt);
        bg = step_outer(bg, dt);
    }
    const LinOuterState exact = shifted_state(g, bg, U * 1.0);
    CHECK(ls.t == doctest::Approx(1.0));
    CHECK(l2(ls.omega - exact.omega) < 1e-5 * l2(exact.omega));
    CHECK(l2(ls.u1 - exact.u1) < 1e-5 * l2(exact.u1));
}

TEST_CASE("the wall row of the correction carries the layer trace") {
    const auto g = make_grid(64, 65, 10.0, H);
    const OuterState bg = uniform_flow(g, 0.2);
    TraceField wall(g);
    for (int i = 0; i < g->n_x1; ++i) wall[i] = 0.05 * bump(g->x1_nodes[i]) * g->x1_nodes[i];
    const TraceField lift = lifting_row(wall);
    CHECK(lift[0] == 0.0);
    Field2D psi(g), u2(g);
    for (int i = 0; i < g->n_x1; ++i)
        for (int j = 0; j < g->n_y; ++j) {
            const double z = g->y_nodes[j];
            psi(i, j) = lift[i] * (std::exp(-z * z) - z / H * std::exp(-H * H));
        }
    for (int i = 0; i < g->n_x1; ++i) {
        psi(i, 0) = lift[i];
        psi(i, g->n_y - 1) = 0.0;
    }
    LinOuterState ls = lin_from_streamfunction(psi, u2, wall, bg);
    for (int i = 0; i < g->n_x1; ++i) CHECK(ls.u3(i, 0) == doctest::Approx(-wall[i]).epsilon(1e-9));
    CHECK(l2(divergence(ls.u1, ls.u3)) < 1e-9 * l2(ls.u1));
    ls = step_linearized(ls, bg, wall, 0.01);
    REQUIRE(ls.t == doctest::Approx(0.01));
    for (int i = 0; i < g->n_x1; ++i) CHECK(ls.u3(i, 0) == doctest::Approx(-wall[i]).epsilon(1e-9));

    Field2D wrong = psi;
    for (int i = 0; i < g->n_x1; ++i) wrong(i, 0) = 0.0;
    CHECK_THROWS_AS(lin_from_streamfunction(wrong, u2, wall, bg), std::invalid_argument);
}

TEST_CASE("the order -1 potential reproduces the correction velocity") {
    const auto g = make_grid(64, 65, 10.0, H);
    const OuterState bg = uniform_flow(g, 0.3);
    const LinOuterState ls = shifted_state(g, bg, 1.0);
    const Field2D p = reconstruct_p_minus1(ls);
    const double scale = l2(ls.u1) + l2(ls.u3);
    CHECK(l2(d_x1(p, 1) + ls.u3) < 1e-10 * scale);
    CHECK(l2(d_y(p, 1) - ls.u1) < 1e-10 * scale);
}

TEST_CASE("the correction step respects its CFL bound") {
    const auto g = make_grid(64, 65, 10.0, H);
    const OuterState bg = uniform_flow(g, 0.5);
    const LinOuterState ls = shifted_state(g, bg, 0.0);
    const double adm = lin_admissible_dt(ls, bg);
    CHECK(std::isfinite(adm));
    CHECK_THROWS(step_linearized(ls, bg, TraceField(g), 3.0 * adm));
}
