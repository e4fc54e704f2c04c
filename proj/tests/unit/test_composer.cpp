#include <doctest.h>

#include <cmath>

#include "checks.hpp"
#include "rotbl/pipeline.hpp"

using namespace rotbl;

namespace {

RunConfig small_config() {
    RunConfig c;
    c.n_x1 = 64;
    c.n_y = 64;
    c.n_x3 = 64;
    c.T = 0.01;
    c.scenario.id = "small_data";
    return c;
}

const PipelineResult& coupled_run() {
    static const PipelineResult r = run_pipeline(small_config());
    return r;
}

}  // namespace

TEST_CASE("order identities hold on a coupled run") {
    const IdentityReport rep = coupled_run().identities;
    CHECK(rep.items.size() == 9);
    for (const auto& it : rep.items) {
        INFO(it.name);
        CHECK(it.relative <= 1e-6);
    }
    CHECK(rep.all_pass());
}

TEST_CASE("perturbed expansions fail every identity") {
    const IdentityReport rep = order_identity_check(checks::perturbed(coupled_run().expansion));
    for (const auto& it : rep.items) {
        INFO(it.name);
        CHECK_FALSE(it.pass);
    }
}

TEST_CASE("wall slip and fluctuation divergence") {
    const auto& e = coupled_run().expansion;
    CHECK(l2(row(e.bl.U1, 0)) <= 1e-6 * l2(e.bl.U1));
    CHECK(l2(d_x1(e.bl.v, 1) + d_y(e.bl.u, 1)) <= 1e-12);
}

TEST_CASE("assembly rejects mismatched sub-states") {
    const auto& s = coupled_run().final_state;
    BLState late = s.bl;
    late.t += 1.0;
    CHECK_THROWS_AS(assemble_expansion(s.outer, s.lin, late), std::invalid_argument);
}

TEST_CASE("composite velocity reduces to the interior flow away from the wall") {
    const auto& e = coupled_run().expansion;
    const double eps = 1e-4;
    const auto target = e.outer.u1.grid;
    CHECK_THROWS_AS(compose_velocity(e, eps, target), std::invalid_argument);
    try {
        compose_velocity(e, eps, target);
    } catch (const std::invalid_argument& err) {
        CHECK(std::string(err.what()).find("nodes") != std::string::npos);
    }
    const auto fine = make_grid(target->n_x1, 1201, target->L, 12.0 * target->dy);
    const CompositeVelocity v = compose_velocity(e, eps, fine);
    const int j = fine->n_y - 1;
    const double z = fine->y_nodes[j];
    const int jo = static_cast<int>(std::lround(z / target->dy));
    REQUIRE(std::abs(target->y_nodes[jo] - z) < 1e-12);
    for (int i = 0; i < fine->n_x1; ++i) {
        const double want = e.outer.u1(i, jo) + std::sqrt(eps) * e.lin_outer.u1(i, jo);
        CHECK(v.u1(i, j) == doctest::Approx(want).epsilon(1e-8));
    }
    const Field2D p = compose_pressure(e, eps, fine);
    CHECK(p(0, 0) == 0.0);
    CHECK(p.all_finite());
}

TEST_CASE("residual needs matching, ordered snapshots") {
    const auto& e = coupled_run().expansion;
    const CompositeSnapshot a = composite_snapshot(e, 1e-2);
    CompositeSnapshot b = a;
    CHECK_THROWS(nsc_residual(a, b));
    b.t += 1e-3;
    CHECK_NOTHROW(nsc_residual(a, b));
    CHECK_THROWS(nsc_residual(a, composite_snapshot(e, 1e-3)));
    CHECK(a.n_window > 0);
    CHECK(a.x3[a.n_window - 1] >= 10.0 * std::sqrt(1e-2));
    CHECK(a.x3[a.n_window - 2] < 10.0 * std::sqrt(1e-2));
}

TEST_CASE("residual report fits the log-log slope") {
    std::vector<ResidualEntry> entries;
    for (double eps : {3e-4, 1e-2, 1e-3}) {
        ResidualEntry r;
        r.eps = eps;
        r.window = {2.0 * std::sqrt(eps), 0.0, 0.0, 0.0};
        r.bulk = {0.0, 0.0, 0.0, 0.0};
        entries.push_back(r);
    }
    const ResidualReport rep = make_residual_report(entries);
    CHECK(rep.fitted_slope == doctest::Approx(0.5));
    CHECK(rep.eps.front() == doctest::Approx(1e-2));
    CHECK(rep.to_csv().rfind("eps,component,window,bulk\n", 0) == 0);
    CHECK(rep.summary().find("slope") != std::string::npos);
    CHECK_THROWS(make_residual_report({entries.front()}));
}
