#include <doctest.h>

#include <sstream>

#include "rotbl/config.hpp"

using namespace rotbl;

namespace {

RunConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in, "test.cfg");
}

int error_line(const std::string& text) {
    try {
        parse(text);
    } catch (const ConfigError& e) {
        return e.line;
    }
    return -1;
}

}  // namespace

TEST_CASE("defaults are consistent") { CHECK(validate_config(RunConfig{}).empty()); }

TEST_CASE("sections and keys are read") {
    const RunConfig c = parse(
        "[grid]\nn_x1 = 32\nL = 12.5\n\n[time]\nT = 0.25\n\n[regularization]\nschedule = 1e-1, 1e-2, 1e-3\n"
        "[scenario]\nid = small_data\nrandom_phase = true\n[run]\nseed = 42\n");
    CHECK(c.n_x1 == 32);
    CHECK(c.L == 12.5);
    REQUIRE(c.T);
    CHECK(*c.T == 0.25);
    CHECK(c.schedule == std::vector<double>{1e-1, 1e-2, 1e-3});
    CHECK(c.scenario.id == "small_data");
    CHECK(c.scenario.random_phase);
    CHECK(c.seed == 42);
    CHECK_FALSE(parse("[time]\nT = auto\n").T);
}

TEST_CASE("canonical rendering round-trips") {
    RunConfig c;
    c.T = 0.125;
    c.eps = {1e-2, 1e-3};
    c.scenario.id = "shear";
    c.seed = 7;
    const RunConfig r = parse(to_ini(c));
    CHECK(to_ini(r) == to_ini(c));
}

TEST_CASE("malformed files report the offending line") {
    CHECK(error_line("[grid]\nn_x1 = 32\n[weights\nell = 1\n") == 3);
    CHECK(error_line("[grid]\nn_x1 = 32\n\nn_y = many\n") == 4);
    CHECK(error_line("[grid]\nn_x1 = 32\n[time]\nbogus = 1\n") == 4);
    CHECK(error_line("[weights]\nell = 1\nell = 0.9\n") > 0);
    try {
        parse("[grid]\nn_x1 = x\n");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("test.cfg:2") == 0);
    }
}

TEST_CASE("violations are listed without running") {
    RunConfig c;
    c.ell = 0.4;
    c.a0 = 20.0;
    c.schedule = {1e-3, 1e-2, 1e-4};
    c.scenario.id = "unknown";
    const auto v = validate_config(c);
    CHECK(v.size() >= 4);
    auto mentions = [&](const std::string& what) {
        for (const auto& s : v)
            if (s.find(what) != std::string::npos) return true;
        return false;
    };
    CHECK(mentions("ell"));
    CHECK(mentions("a0"));
    CHECK(mentions("schedule"));
    CHECK(mentions("scenario"));
}

TEST_CASE("list parsing") {
    CHECK(parse_list("1e-2, 3e-3,1e-3") == std::vector<double>{1e-2, 3e-3, 1e-3});
    CHECK_THROWS_AS(parse_list("1e-2, x"), std::invalid_argument);
}
