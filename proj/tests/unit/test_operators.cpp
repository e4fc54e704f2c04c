#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "checks.hpp"
#include "rotbl/field_io.hpp"
#include "rotbl/operators.hpp"

using namespace rotbl;

using checks::max_diff;
using checks::sample;

TEST_CASE("grid construction rejects invalid sizes") {
    CHECK_THROWS_AS(make_grid(48, 16, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(4, 16, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(16, 4, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(16, 16, 0.0, 1.0), std::invalid_argument);
    const auto g = make_grid(16, 9, 2.0, 4.0);
    CHECK(g->dx == doctest::Approx(0.25));
    CHECK(g->dy == doctest::Approx(0.5));
    CHECK(g->x1_nodes.front() == doctest::Approx(-2.0));
    CHECK(g->y_nodes.back() == doctest::Approx(4.0));
}

TEST_CASE("weight validation") {
    CHECK_NOTHROW(validate_weight({1.0, 0.5}, 8.0));
    CHECK_THROWS_AS(validate_weight({0.5, 0.5}, 8.0), std::invalid_argument);
    CHECK_THROWS_AS(validate_weight({1.0, 0.0}, 8.0), std::invalid_argument);
    CHECK_THROWS_AS(validate_weight({1.0, 10.0}, 8.0), std::invalid_argument);
}

TEST_CASE("tangential derivative is exact on single Fourier modes") {
    CHECK(checks::fourier_mode_error(2) < 1e-10);
    CHECK(checks::fourier_mode_error(4, true) < 1e-13);
}

TEST_CASE("tangential derivative order limits") {
    const auto g = make_grid(16, 5, 1.0, 1.0);
    Field2D f(g);
    CHECK_THROWS_AS(d_x1(f, 0), std::out_of_range);
    CHECK_THROWS_AS(d_x1(f, 13), std::out_of_range);
    CHECK_THROWS_AS(d_x1(f, 5, 4), std::out_of_range);
}

TEST_CASE("wall-normal derivative converges at second order including the ends") {
    CHECK(checks::wall_normal_refinement(1).slope() == doctest::Approx(2.0).epsilon(0.05));
    CHECK(checks::wall_normal_refinement(2).slope() == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("tangential antiderivative inverts the derivative") {
    CHECK(checks::antiderivative_defect() < 1.0);
}

TEST_CASE("nonzero-mean data integrates to an exact ramp") {
    const auto g = make_grid(64, 5, 8.0, 1.0);
    const Field2D f = sample(g, [](double x, double) { return std::exp(-x * x); });
    const Field2D F = integrate_x1_from_left(f);
    REQUIRE(F.has_ramp());
    const double exact_total = std::sqrt(std::numbers::pi);
    CHECK(F.ramp[0] * 2.0 * g->L == doctest::Approx(exact_total).epsilon(1e-10));
    CHECK(max_diff(d_x1(F, 1), f) < 1e-10);
    for (int i = 0; i < g->n_x1; ++i) {
        const double x = g->x1_nodes[i];
        const double exact = 0.5 * std::sqrt(std::numbers::pi) * (std::erf(x) + 1.0);
        CHECK(F(i, 2) == doctest::Approx(exact).epsilon(1e-10));
    }
    CHECK_FALSE(hadamard(F, f).has_ramp());
}

TEST_CASE("slowly decaying data is reported") {
    const auto g = make_grid(32, 5, 2.0, 1.0);
    const Field2D f = sample(g, [](double x, double) { return 1.0 + x * x; });
    WarningLog log;
    integrate_x1_from_left(f, &log);
    CHECK_FALSE(log.empty());
}

TEST_CASE("weighted L2 agrees with adaptive quadrature") {
    auto f = [](double x, double y) { return std::exp(-x * x / 4.0) * (1.0 + y) * std::exp(-y * y); };
    const double exact = oracle::weighted_l2(f, 10.0, 6.0, 1.0, 0.5);
    double prev = 0.0;
    for (int n : {129, 257}) {
        const auto g = make_grid(64, n, 10.0, 6.0);
        const double err = std::abs(weighted_l2(sample(g, f), {1.0, 0.5}) - exact) / exact;
        CHECK(err < 1e-3);
        if (prev > 0.0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.1));
        prev = err;
    }
}

TEST_CASE("field dumps round-trip bit for bit") {
    const auto g = make_grid(16, 7, 3.0, 2.0);
    Field2D f = sample(g, [](double x, double y) { return std::sin(x) * y + 1e-300; });
    f.label = "probe";
    std::stringstream ss;
    write_field(ss, f);
    const Field2D r = read_field(ss);
    CHECK(r.values == f.values);
    CHECK(r.label == "probe");
    CHECK(same_grid(*r.grid, *g));
    std::stringstream bad("not a dump");
    CHECK_THROWS(read_field(bad));
}

TEST_CASE("antiderivative of an odd Gaussian moment") {
    const auto g = make_grid(64, 5, 5.0, 1.0);
    const Field2D F = integrate_x1_from_left(sample(g, [](double x, double) { return 2.0 * x * std::exp(-x * x); }));
    const double tail = std::exp(-g->L * g->L);
    double err = 0.0;
    for (int i = 0; i < g->n_x1; ++i) {
        const double x = g->x1_nodes[i];
        err = std::max(err, std::abs(F(i, 1) - (tail - std::exp(-x * x))));
    }
    CHECK(err <= g->dx * g->dx);
}
