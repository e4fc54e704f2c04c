#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "checks.hpp"
#include "rotbl/errors.hpp"

using namespace rotbl;

namespace {

Field2D layer_bump(const GridPtr& g, double amp) {
    return checks::sample(g, [amp](double x, double y) { return amp * std::exp(-x * x / 4.0) * std::cos(x) * y * y * std::exp(-y * y); });
}

}  // namespace

TEST_CASE("heat limit matches the dense column oracle") {
    CHECK(checks::heat_oracle_deviation(128, 128, 10) <= 1e-10);
}

TEST_CASE("nonlinear layer operator converges at second order") {
    const auto c = checks::layer_mms_refinement();
    CHECK(c.slope() == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("Neumann data is taken from the end-of-step traces") {
    const auto g = make_grid(32, 65, 10.0, 8.0);
    const TraceSet start = checks::zero_traces(g);
    TraceSet end = start;
    for (int i = 0; i < g->n_x1; ++i) end.u1_bar[i] = 0.1 * std::exp(-g->x1_nodes[i] * g->x1_nodes[i]);
    BLStepOptions opt;
    opt.terms = BLTerms{false, false, false};
    opt.end_traces = &end;
    const Field2D u = step_bl(Field2D(g), start, {}, 1e-2, opt);
    const TraceField want = d_x1(end.u1_bar, 1);
    const Field2D du = d_y(u, 1);
    for (int i = 0; i < g->n_x1; ++i) CHECK(du(i, 0) == doctest::Approx(want[i]).epsilon(1e-12));
    for (int i = 0; i < g->n_x1; ++i) CHECK(u(i, g->n_y - 1) == 0.0);
}

TEST_CASE("the fluctuation divergence vanishes by construction") {
    const auto g = make_grid(64, 65, 10.0, 8.0);
    const Field2D u = layer_bump(g, 0.2);
    const Field2D v = reconstruct_v(u);
    CHECK(l2(d_x1(v, 1) + d_y(u, 1)) <= 1e-12);
}

TEST_CASE("layer step guards") {
    const auto g = make_grid(32, 33, 10.0, 8.0);
    const Field2D u = layer_bump(g, 0.2);
    const TraceSet tr = checks::zero_traces(g);
    RegularizationParams reg;
    reg.eps1 = 1.0;
    CHECK_THROWS_AS(step_bl(u, tr, reg, 0.0), std::invalid_argument);
    const double adm = bl_admissible_dt(u, tr, reg);
    CHECK_THROWS_AS(step_bl(u, tr, reg, 2.0 * adm), CflViolation);
    Field2D bad = u;
    bad(3, 3) = std::numeric_limits<double>::quiet_NaN();
    BLStepOptions opt;
    opt.step_index = 7;
    try {
        step_bl(bad, tr, {}, 1e-4, opt);
        FAIL("expected a non-finite state");
    } catch (const NonFiniteState& e) {
        CHECK(e.step_index == 7);
    }
}

TEST_CASE("regularization parameters are validated") {
    CHECK_NOTHROW(validate(RegularizationParams{1e-3, {1e-2, 1e-3, 1e-4}}));
    CHECK_THROWS_AS(validate(RegularizationParams{0.0, {}}), std::invalid_argument);
    CHECK_THROWS_AS(validate(RegularizationParams{1e-3, {1e-2, 1e-2, 1e-4}}), std::invalid_argument);
    CHECK_THROWS_AS(validate(RegularizationParams{1e-3, {1e-2, -1e-3}}), std::invalid_argument);
}

TEST_CASE("steady shear recovers the pressure gradient from the layer balance") {
    const auto g = make_grid(32, 257, 10.0, 8.0);
    const Field2D U1 = checks::sample(g, [](double, double y) { return 1.0 - std::exp(-y); });
    const Field2D U3(g);
    const TraceSet tr = checks::zero_traces(g);
    const Field2D r = recover_pressure_gradient(U1, U1, U3, tr, 0.1);
    const Field2D want = checks::sample(g, [](double, double y) { return -std::exp(-y); });
    CHECK(checks::max_diff(r, want) < 1e-3);
    CHECK_THROWS(recover_pressure_gradient(U1, U1, U3, tr, 0.0));
}

TEST_CASE("substituted u2 stays within its data when the trace vanishes") {
    const auto g = make_grid(64, 65, 10.0, 8.0);
    const TraceSet tr = checks::zero_traces(g);
    const Field2D u = layer_bump(g, 0.5);
    const Field2D U1 = assemble_U1(u, tr);
    const Field2D U3 = assemble_U3(u, TraceField(g), tr);
    Field2D u2B = layer_bump(g, 1.0);
    for (int i = 0; i < g->n_x1; ++i) u2B(i, 0) = u2B(i, g->n_y - 1) = 0.0;
    double lo = 0.0, hi = 0.0;
    for (double v : u2B.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    for (int k = 0; k < 50; ++k) {
        P2StepInfo info;
        u2B = step_u2_bl(u2B, U1, U3, tr, 0.5, 0.05, &info);
        for (double v : info.w_after.values) {
            CHECK(v <= hi + 1e-15);
            CHECK(v >= lo - 1e-15);
        }
    }
}

TEST_CASE("the u2 source vanishes with the trace and substitution inverts") {
    const auto g = make_grid(32, 33, 10.0, 8.0);
    TraceSet tr = checks::zero_traces(g);
    const Field2D u = layer_bump(g, 0.5);
    const Field2D U1 = assemble_U1(u, tr), U3 = assemble_U3(u, TraceField(g), tr);
    CHECK(p2_source(U1, U3, tr, 0.5).max_abs() == 0.0);
    for (int i = 0; i < g->n_x1; ++i) tr.u2_bar[i] = std::exp(-g->x1_nodes[i] * g->x1_nodes[i]);
    const Field2D w = p2_substitute(Field2D(g), tr.u2_bar, 0.5);
    for (int i = 0; i < g->n_x1; ++i) CHECK(w(i, 0) == doctest::Approx(tr.u2_bar[i]));
    CHECK(p2_source(U1, U3, tr, 0.5).max_abs() > 0.0);
}

TEST_CASE("regularization sweep flags failures and compares neighbours") {
    const auto g = make_grid(32, 33, 10.0, 8.0);
    RegularizationParams reg{1e-3, {1e-2, 1e-3, 1e-4}};
    const SweepReport ok = regularization_sweep([&](double e) { return layer_bump(g, 1.0 + e); }, reg,
                                                NormParams{0.5, 0.5, 1.0, 4});
    REQUIRE(ok.differences.size() == 2);
    CHECK(ok.strictly_decreasing);
    const SweepReport bad = regularization_sweep(
        [&](double e) -> Field2D {
            if (e < 5e-4) throw std::runtime_error("boom");
            return layer_bump(g, 1.0 + e);
        },
        reg, NormParams{0.5, 0.5, 1.0, 4});
    CHECK_FALSE(bad.strictly_decreasing);
    CHECK(std::isnan(bad.differences[1]));
    CHECK(bad.failures[2] == "boom");
    CHECK_THROWS(regularization_sweep([&](double) { return Field2D(g); }, RegularizationParams{1e-3, {1e-2, 1e-3}},
                                      NormParams{}));
}
