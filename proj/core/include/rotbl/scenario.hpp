#pragma once

#include "rotbl/boundary_layer.hpp"
#include "rotbl/config.hpp"
#include "rotbl/outer_euler_lin.hpp"

namespace rotbl {

struct InitialData {
    GridPtr outer_grid;
    GridPtr layer_grid;
    OuterState outer;
    LinOuterState lin;
    BLState bl;
    BLTerms terms;
};

/// G(x1) = cos(mode x1 + phase) exp(-(x1 / width)^2).
double scenario_profile(const ScenarioSpec& s, double phase, double x1);

/// (width / 2) G'(x1): same family with vanishing tangential mean, used for the layer data.
double zero_mean_profile(const ScenarioSpec& s, double phase, double x1);

/// Builds the coupled initial state of the configured scenario. Interior data is divergence-free
/// and impermeable; the layer data satisfies the discrete wall Neumann condition.
InitialData make_scenario(const RunConfig& c);

/// Layer state (v, U1, U3) consistent with u, the interior traces and the correction's wall row.
BLState make_bl_state(const Field2D& u, const Field2D& u2B, const TraceSet& traces, const LinOuterState& lin,
                      double t, WarningLog* log = nullptr);

}  // namespace rotbl
