#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rotbl/analytic_norms.hpp"
#include "rotbl/outer_euler.hpp"

namespace rotbl {

struct BLState {
    Field2D u;      ///< normal velocity of the layer at order one
    Field2D v;      ///< -int_{-L}^{x1} d_y u
    Field2D U1;     ///< v + u1_bar
    Field2D U3;     ///< u + lin trace + y d3u3_bar
    Field2D u2B;    ///< layer correction of u2
    Field2D d1pB0;  ///< tangential pressure gradient of the layer
    double t = 0.0;
};

struct RegularizationParams {
    double eps1 = 1e-3;
    std::vector<double> schedule;
};

/// Throws std::invalid_argument unless eps1 > 0 and the schedule is strictly decreasing and positive.
void validate(const RegularizationParams& reg);

/// Selects groups of explicit terms; the heat limit switches all of them off.
struct BLTerms {
    bool regularization = true;  ///< eps1 d_1^2 u
    bool trace = true;           ///< terms carrying outer traces
    bool nonlinear = true;       ///< terms quadratic in (u, v)
};

struct BLStepOptions {
    BLTerms terms;
    Source source;      ///< added to the right-hand side, evaluated at (t, x1, y)
    long step_index = 0;
    double cfl = 0.5;
    const TraceSet* end_traces = nullptr;  ///< wall data at the end of the step, when known
};

Field2D reconstruct_v(const Field2D& u, WarningLog* log = nullptr);

/// Largest stable step for the explicit part of step_bl.
double bl_admissible_dt(const Field2D& u, const TraceSet& traces, const RegularizationParams& reg,
                        const BLStepOptions& opt = {});

/// One IMEX step of the regularised layer equation: wall-normal diffusion by Crank-Nicolson,
/// all other terms explicit (Heun). Neumann data d_y u = d_1 u1_bar at y = 0, u = 0 at y = Y.
/// Traces are held at their time over the step; the Neumann data comes from opt.end_traces when
/// set. Throws CflViolation or NonFiniteState.
Field2D step_bl(const Field2D& u, const TraceSet& traces, const RegularizationParams& reg, double dt,
                const BLStepOptions& opt = {});

/// Right-hand side of the layer equation without wall-normal diffusion.
Field2D bl_explicit_rhs(const Field2D& u, const TraceSet& traces, double eps1, const BLTerms& terms);

Field2D assemble_U3(const Field2D& u, const TraceField& lin_u3_bar, const TraceSet& traces);
Field2D assemble_U1(const Field2D& u, const TraceSet& traces, WarningLog* log = nullptr);

/// -d_t U1 + d_y^2 U1 - U1 d_1 U1 - U3 d_y U1 - d_1 p_bar, with d_t by difference quotient and
/// spatial terms at the later snapshot. Throws on dt == 0.
Field2D recover_pressure_gradient(const Field2D& U1_prev, const Field2D& U1_next, const Field2D& U3,
                                  const TraceSet& traces, double dt);

/// Source of the substituted u2 problem: the layer correction plus a Gaussian lift of the trace,
/// w = u2B + exp(-2 a0 y^2) u2_bar, obeys d_t w - d_y^2 w + U1 d_1 w + U3 d_y w + R = 0.
Field2D p2_source(const Field2D& U1, const Field2D& U3, const TraceSet& traces, double a0);

/// The substituted variable w for a given layer correction.
Field2D p2_substitute(const Field2D& u2B, const TraceField& u2_bar, double a0);

struct P2StepInfo {
    Field2D w_before;
    Field2D w_after;
};

/// Advances u2B via the substituted variable: explicit upwind transport in x1, then implicit
/// wall-normal advection-diffusion with w = 0 at both ends. Throws CflViolation.
Field2D step_u2_bl(const Field2D& u2B, const Field2D& U1, const Field2D& U3, const TraceSet& traces,
                   double a0, double dt, P2StepInfo* info = nullptr);

struct SweepReport {
    std::vector<double> eps1;
    std::vector<double> differences;  ///< |u^{eps_k} - u^{eps_{k+1}}|_X
    std::vector<std::string> failures;  ///< empty string when the run succeeded
    bool strictly_decreasing = false;
    std::string to_text() const;
};

/// Runs `solve(eps1)` for each schedule entry (concurrently) and compares successive final states
/// in the X norm. A failing run is recorded and its neighbouring differences are NaN.
SweepReport regularization_sweep(const std::function<Field2D(double)>& solve,
                                 const RegularizationParams& reg, const NormParams& norm);

}  // namespace rotbl
