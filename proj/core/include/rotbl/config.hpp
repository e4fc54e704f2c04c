#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rotbl {

/// Analytic initial-data family: Gaussian-modulated Fourier modes G(x1) = cos(mode x1 + phase) e^{-(x1/width)^2}.
struct ScenarioSpec {
    std::string id = "zero";       ///< zero | heat_limit | small_data | shear
    double amplitude = 0.02;       ///< interior streamfunction
    double amplitude_lin = 0.02;   ///< order-one interior correction
    double amplitude_layer = 0.02; ///< layer normal velocity beyond the trace-driven part
    double amplitude_u2 = 0.0;     ///< interior u2 and the matching layer correction
    double shear = 0.5;            ///< background wall shear (shear scenario only)
    double mode = 1.0;
    double width = 2.0;
    bool random_phase = false;     ///< draw the phase from the seed
};

struct RunConfig {
    int n_x1 = 64;
    int n_y = 64;   ///< layer wall-normal nodes on [0, Y]
    int n_x3 = 64;  ///< interior wall-normal nodes on [0, H]
    double L = 10.0;
    double Y = 8.0;
    double H = 4.0;
    double ell = 1.0;
    double a0 = 0.5;
    double rho0 = 0.5;
    double tau = 3.0;
    double C0 = 1.0;
    int m_max = 8;
    double dt = 1e-3;
    std::optional<double> T;  ///< empty: half the lifespan estimate of the initial data
    double residual_dt = 1e-4;
    int diagnostics_every = 1;
    double cfl = 0.5;
    double eps1 = 1e-3;
    std::vector<double> schedule{1e-2, 1e-3, 1e-4};
    std::vector<double> eps{1e-2, 3e-3, 1e-3, 3e-4};
    ScenarioSpec scenario;
    std::string out_dir = "rotbl_out";
    std::uint64_t seed = 0;
};

/// Malformed configuration text; `line` is 0 when no line applies.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& source, int line, const std::string& what);
    int line;
};

RunConfig parse_config(std::istream& in, const std::string& source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

/// Every invariant violated by `c`; empty when the configuration is consistent.
std::vector<std::string> validate_config(const RunConfig& c);

/// Canonical key = value rendering; parse_config(to_ini(c)) reproduces c.
std::string to_ini(const RunConfig& c);

std::vector<double> parse_list(const std::string& text);

}  // namespace rotbl
