#include <doctest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "rotbl/analytic_norms.hpp"
#include "rotbl/operators.hpp"

using namespace rotbl;

namespace {

Field2D gaussian(const GridPtr& g, double amp) {
    Field2D f(g);
    for (int i = 0; i < g->n_x1; ++i)
        for (int j = 0; j < g->n_y; ++j) {
            const double x = g->x1_nodes[i], y = g->y_nodes[j];
            f(i, j) = amp * std::exp(-x * x / 4.0) * y * std::exp(-y * y);
        }
    return f;
}

}  // namespace

TEST_CASE("derivative weights") {
    CHECK(derivative_weight(0, 0.5) == 1.0);
    CHECK(derivative_weight(2, 0.5) == 1.0);
    CHECK(derivative_weight(3, 0.5) == doctest::Approx(0.25));
    CHECK(derivative_weight(5, 0.5) == doctest::Approx(std::pow(0.5, 4) / 2.0));
}

TEST_CASE("norm parameters are validated") {
    const auto g = make_grid(32, 33, 10.0, 8.0);
    Field2D f(g);
    CHECK_THROWS_AS(x_norm(f, {0.0, 0.5, 1.0, 8}), std::invalid_argument);
    CHECK_THROWS_AS(x_norm(f, {0.5, 0.5, 0.4, 8}), std::invalid_argument);
    CHECK_THROWS_AS(x_norm(f, {0.5, 0.5, 1.0, 20}), std::invalid_argument);
}

TEST_CASE("norms vanish on zero data and scale linearly") {
    const auto g = make_grid(64, 129, 10.0, 8.0);
    const NormParams p{0.5, 0.5, 1.0, 8};
    const NormReport z = all_norms(Field2D(g), p);
    CHECK(z.X == 0.0);
    CHECK(z.Y == 0.0);
    CHECK(z.Z == 0.0);
    const NormReport a = all_norms(gaussian(g, 1.0), p);
    const NormReport b = all_norms(gaussian(g, 3.0), p);
    CHECK(b.X == doctest::Approx(3.0 * a.X));
    CHECK(b.Y == doctest::Approx(3.0 * a.Y));
    CHECK(b.Z == doctest::Approx(3.0 * a.Z));
    CHECK(a.X == doctest::Approx(x_norm(gaussian(g, 1.0), p).X));
    CHECK(a.Y == doctest::Approx(y_norm(gaussian(g, 1.0), p)));
    CHECK(a.Z == doctest::Approx(z_norm(gaussian(g, 1.0), p)));
}

TEST_CASE("X norm is non-decreasing in the radius") {
    const auto g = make_grid(64, 129, 10.0, 8.0);
    const Field2D f = gaussian(g, 1.0);
    double prev = 0.0;
    for (double rho : {0.1, 0.3, 0.6, 1.0}) {
        const double x = x_norm(f, {rho, 0.5, 1.0, 8}).X;
        CHECK(x >= prev);
        prev = x;
    }
}

TEST_CASE("lowest X summands match quadrature") {
    const auto g = make_grid(64, 257, 10.0, 8.0);
    const NormReport r = x_norm(gaussian(g, 1.0), {0.5, 0.5, 1.0, 8});
    auto f = [](double x, double y) { return std::exp(-x * x / 4.0) * y * std::exp(-y * y); };
    auto dy = [](double x, double y) { return std::exp(-x * x / 4.0) * (1.0 - 2.0 * y * y) * std::exp(-y * y); };
    REQUIRE(r.per_m.size() >= 2);
    CHECK(r.per_m[0].m == 0);
    CHECK(r.per_m[0].j == 0);
    CHECK(r.per_m[1].j == 1);
    CHECK(r.per_m[0].norm == doctest::Approx(oracle::weighted_l2(f, 10.0, 8.0, 1.0, 0.5)).epsilon(1e-3));
    CHECK(r.per_m[1].norm == doctest::Approx(oracle::weighted_l2(dy, 10.0, 8.0, 1.0, 0.5)).epsilon(1e-3));
}

TEST_CASE("lifespan estimate") {
    CHECK(lifespan_estimate(1.0, 2.0, 3.0) == doctest::Approx(1.0 / 16.0));
    CHECK(std::isinf(lifespan_estimate(0.0, 0.5, 3.0)));
    CHECK(lifespan_estimate(0.5, 0.5, 3.0) > lifespan_estimate(1.0, 0.5, 3.0));
}

TEST_CASE("radius with constant Z is exactly linear") {
    RadiusTracker tr = make_tracker(0.5, 0.5, 1.0);
    const double z0 = 0.7, dt = 1e-3;
    for (int k = 1; k <= 500; ++k) {
        tr = evolve_radius(tr, z0, dt);
        CHECK(tr.rho() == doctest::Approx(0.5 - z0 * k * dt).epsilon(1e-13));
    }
    CHECK_FALSE(tr.aborted);
}

TEST_CASE("radius with varying Z matches a high-order integrator") {
    auto z = [](double t) { return 0.2 + std::sin(3.0 * t) * std::sin(3.0 * t); };
    RadiusTracker tr = make_tracker(1.0, 0.5, 1.0);
    const double dt = 1e-4;
    const int n = 10000;
    tr.z_t.push_back(z(0.0));
    for (int k = 1; k <= n; ++k) tr = evolve_radius(tr, z(k * dt), dt);
    CHECK(std::abs(tr.rho() - oracle::radius(z, 1.0, n * dt)) < 1e-8);
}

TEST_CASE("radius tracker aborts below the floor") {
    RadiusTracker tr = make_tracker(0.01, 0.5, 1.0, 1e-3);
    tr = evolve_radius(tr, 1.0, 0.02);
    CHECK(tr.aborted);
}

TEST_CASE("weight schedule decreases to its floor") {
    const RadiusTracker tr = make_tracker(0.5, 0.5, 1.0);
    CHECK(weight_schedule(tr, 0.0) == doctest::Approx(0.5));
    CHECK(weight_schedule(tr, 0.1) == doctest::Approx(0.5 - 1.5 * 0.1));
    CHECK(weight_schedule(tr, 10.0) == doctest::Approx(tr.a_floor));
}

TEST_CASE("energy budget needs three samples") {
    const auto g = make_grid(32, 65, 10.0, 8.0);
    RadiusTracker tr = make_tracker(0.5, 0.5, 1.0);
    tr = evolve_radius(tr, 0.1, 0.01);
    CHECK_THROWS(energy_budget({gaussian(g, 1.0), gaussian(g, 1.0)}, {0.0, 0.01}, tr, {0.5, 0.5, 1.0, 8}, 0.5));
}

TEST_CASE("A_tau estimate scales with the field") {
    const auto g = make_grid(32, 65, 10.0, 4.0);
    const ATauResult a = a_tau_estimate(gaussian(g, 1.0), 1.0, 1.0, 4);
    const ATauResult b = a_tau_estimate(gaussian(g, 2.0), 1.0, 1.0, 4);
    CHECK(a.value > 0.0);
    CHECK(b.value == doctest::Approx(2.0 * a.value));
}
