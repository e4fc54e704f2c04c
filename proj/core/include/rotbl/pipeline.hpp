#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rotbl/composer.hpp"
#include "rotbl/config.hpp"
#include "rotbl/scenario.hpp"

namespace rotbl {

struct CoupledState {
    OuterState outer;
    LinOuterState lin;
    BLState bl;
    TraceSet traces;
};

CoupledState initial_state(const InitialData& d);

/// One step of the coupled system: interior, traces, layer (u and u2B), correction, then the
/// recovered layer pressure gradient from the two layer snapshots.
CoupledState advance(const CoupledState& s, double dt, const RegularizationParams& reg, const BLTerms& terms,
                     double a0, double cfl = 0.5, long step_index = 0);

struct StepRecord {
    double t = 0.0;
    double rho = 0.0, a = 0.0;
    double X = 0.0, Y = 0.0, Z = 0.0;
    double bernoulli = 0.0;
    double kinetic = 0.0;
    double layer_max = 0.0;
};

struct PipelineOptions {
    std::optional<double> eps1;           ///< overrides the configured regularization
    std::optional<double> composite_eps;  ///< evaluate the composite residual at the final time
    std::function<void(const StepRecord&)> on_record;
};

struct PipelineResult {
    CoupledState final_state;
    ExpansionState expansion;
    RadiusTracker tracker;
    std::vector<StepRecord> records;
    std::vector<Field2D> samples;  ///< layer normal velocity at budget sample times
    std::vector<double> sample_times;
    std::optional<ResidualEntry> residual;
    IdentityReport identities;
    WarningLog log;
    double x0 = 0.0;
    double t_star = 0.0;
    double T = 0.0;
};

/// Final time: the configured T, or half the lifespan estimate of the initial layer data.
double resolve_horizon(const RunConfig& c, const InitialData& d, double* x0 = nullptr, double* t_star = nullptr);

PipelineResult run_pipeline(const RunConfig& c, const PipelineOptions& opt = {});

/// Independent pipelines for each eps (regularization equal to eps), run concurrently.
ResidualReport residual_sweep(const RunConfig& c, const std::vector<double>& eps);

/// Layer solutions for each regularization in the configured schedule, compared in X.
SweepReport regularization_study(const RunConfig& c);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& p);

/// Writes `manifest.txt` in `dir`, listing every other regular file with its checksum.
void write_manifest(const std::filesystem::path& dir, const RunConfig& c, const std::string& status);

/// `run`: executes the pipeline and writes norms.csv, diagnostics.csv, budget.txt, identities.txt,
/// field dumps and the manifest into `out`. Artifacts written before a failure are kept.
PipelineResult run_and_write(const RunConfig& c, const std::filesystem::path& out);

/// `sweep`: composite residual across eps; writes residual.csv, residual.txt and the manifest.
ResidualReport sweep_and_write(const RunConfig& c, const std::vector<double>& eps, const std::filesystem::path& out,
                               bool with_regularization);

std::string norms_csv_header();
std::string norms_csv_row(const StepRecord& r);

}  // namespace rotbl
