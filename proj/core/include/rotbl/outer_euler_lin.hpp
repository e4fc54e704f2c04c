#pragma once

#include "rotbl/outer_euler.hpp"

namespace rotbl {

/// Linearised interior correction. The wall row of u3 equals -wall_trace, where wall_trace is
/// the layer's normal velocity on the wall.
struct LinOuterState {
    Field2D u1, u2, u3, p;
    Field2D omega;
    TraceField wall_trace;
    double flux = 0.0;
    double t = 0.0;
};

/// Builds a state from a streamfunction whose wall row lifts the zero-mean part of the trace
/// (-d_1 psi = -(g - mean g) on the wall); the mean of g becomes a uniform normal velocity.
/// Throws std::invalid_argument if psi's wall row is incompatible with the trace.
LinOuterState lin_from_streamfunction(const Field2D& psi, const Field2D& u2, const TraceField& wall_trace,
                                      const OuterState& background, double tol = 1e-9);

/// Lifting streamfunction wall row G with d_1 G = g - mean g and G(-L) = 0.
TraceField lifting_row(const TraceField& wall_trace);

double lin_admissible_dt(const LinOuterState& ls, const OuterState& background, double cfl = 0.5);

/// Advances the linearised system by dt with the background frozen over the step and the wall
/// trace taken from the latest layer step. Throws CflViolation.
LinOuterState step_linearized(const LinOuterState& ls, const OuterState& background,
                              const TraceField& bl_trace, double dt, double cfl = 0.5);

/// Potential with d_1 p = -u3, d_3 p = u1 for the order-one fields.
Field2D reconstruct_p_minus1(const LinOuterState& ls, WarningLog* log = nullptr,
                             PathOrder path = PathOrder::x3_then_x1);

}  // namespace rotbl
