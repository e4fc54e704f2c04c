#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "rotbl/analytic_norms.hpp"
#include "rotbl/config.hpp"
#include "rotbl/field_io.hpp"
#include "rotbl/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

/// --out, then ROTBL_OUT, then the configuration.
fs::path output_dir(const std::string& flag, const rotbl::RunConfig& c) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("ROTBL_OUT"); env && *env) return env;
    return c.out_dir;
}

rotbl::RunConfig load(const std::string& path, const std::optional<std::uint64_t>& seed) {
    rotbl::RunConfig c = path.empty() ? rotbl::RunConfig{} : rotbl::load_config(path);
    if (seed) c.seed = *seed;
    return c;
}

int cmd_run(const std::string& config, const std::string& out, const std::optional<std::uint64_t>& seed) {
    const rotbl::RunConfig c = load(config, seed);
    const fs::path dir = output_dir(out, c);
    const auto res = rotbl::run_and_write(c, dir);
    const auto& last = res.records.back();
    std::cout << fmt::format("T = {:.6g}  steps recorded = {}  X = {:.6e}  rho = {:.6g}\n", res.T,
                             res.records.size(), last.X, last.rho);
    std::cout << fmt::format("identities: {}\n", res.identities.all_pass() ? "pass" : "FAIL");
    if (!res.log.empty()) std::cout << fmt::format("{} warnings, see warnings.txt\n", res.log.messages.size());
    std::cout << "artifacts in " << dir.string() << "\n";
    return 0;
}

int cmd_sweep(const std::string& config, const std::string& out, const std::optional<std::uint64_t>& seed,
              const std::string& eps_list, bool with_regularization) {
    const rotbl::RunConfig c = load(config, seed);
    const std::vector<double> eps = eps_list.empty() ? c.eps : rotbl::parse_list(eps_list);
    const fs::path dir = output_dir(out, c);
    const auto rep = rotbl::sweep_and_write(c, eps, dir, with_regularization);
    std::cout << rep.summary() << "artifacts in " << dir.string() << "\n";
    return 0;
}

int cmd_validate(const std::string& config) {
    const rotbl::RunConfig c = load(config, std::nullopt);
    const auto violations = rotbl::validate_config(c);
    for (const auto& v : violations) std::cout << v << "\n";
    if (violations.empty()) std::cout << "ok\n";
    return violations.empty() ? 0 : 1;
}

int cmd_norms(const std::string& config, const std::vector<std::string>& dumps, const std::optional<double>& rho,
              const std::optional<double>& a) {
    const rotbl::RunConfig c = load(config, std::nullopt);
    const rotbl::NormParams p{rho.value_or(c.rho0), a.value_or(c.a0), c.ell, c.m_max};
    std::cout << "file,X,Y,Z\n";
    for (const auto& d : dumps) {
        const rotbl::NormReport r = rotbl::all_norms(rotbl::read_field(d), p);
        std::cout << fmt::format("{},{:.17g},{:.17g},{:.17g}\n", d, r.X, r.Y, r.Z);
        for (const auto& w : r.warnings) std::cerr << d << ": " << w << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rotating boundary-layer expansion solver"};
    app.require_subcommand(1);
    std::string config, out, eps;
    std::optional<std::uint64_t> seed;
    bool with_regularization = false;
    std::vector<std::string> dumps;
    std::optional<double> rho, a;

    auto* run = app.add_subcommand("run", "Run the coupled pipeline and write artifacts");
    run->add_option("--config", config, "Configuration file")->check(CLI::ExistingFile);
    run->add_option("--out", out, "Output directory");
    run->add_option("--seed", seed, "Override the configured seed");

    auto* sweep = app.add_subcommand("sweep", "Composite residual across eps");
    sweep->add_option("--config", config, "Configuration file")->check(CLI::ExistingFile);
    sweep->add_option("--out", out, "Output directory");
    sweep->add_option("--seed", seed, "Override the configured seed");
    sweep->add_option("--eps", eps, "Comma-separated eps values");
    sweep->add_flag("--regularization", with_regularization, "Also run the regularization study");

    auto* validate = app.add_subcommand("validate", "Check a configuration without running");
    validate->add_option("--config", config, "Configuration file")->required()->check(CLI::ExistingFile);

    auto* norms = app.add_subcommand("norms", "Recompute X, Y, Z from field dumps");
    norms->add_option("--config", config, "Configuration file")->check(CLI::ExistingFile);
    norms->add_option("--rho", rho, "Analyticity radius (default: analyticity.rho0)");
    norms->add_option("--a", a, "Gaussian weight (default: weights.a0)");
    norms->add_option("dumps", dumps, "Field dumps (.rfld)")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(config, out, seed);
        if (*sweep) return cmd_sweep(config, out, seed, eps, with_regularization);
        if (*validate) return cmd_validate(config);
        if (*norms) return cmd_norms(config, dumps, rho, a);
    } catch (const std::exception& e) {
        std::cerr << "rotbl: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
