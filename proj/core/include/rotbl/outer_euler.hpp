#pragma once

#include <functional>

#include "rotbl/grid.hpp"

namespace rotbl {

/// Source term s(t, x1, x3).
using Source = std::function<double(double, double, double)>;

/// Optional body forces for manufactured-solution runs. Empty members are zero.
struct OuterForcing {
    Source vorticity;  ///< curl of the momentum forcing: d3 f1 - d1 f3
    Source f1;
    Source f2;
    Source f3;
};

/// Interior flow on the (x1, x3) half-plane grid (the grid's y axis is x3).
struct OuterState {
    Field2D u1, u2, u3, p;
    Field2D omega;
    double flux = 0.0;  ///< streamfunction value on the top boundary
    double t = 0.0;
};

struct TraceSet {
    TraceField u1_bar, u2_bar, u3_bar, d3u3_bar, d1d3u3_bar, d1p0_bar, d2p0_bar;
    double t = 0.0;
};

/// Builds a state from a streamfunction (zero on the wall, constant on the top row)
/// and the transported component u2. The pressure is solved for.
OuterState outer_from_streamfunction(const Field2D& psi, const Field2D& u2, double t,
                                     const OuterForcing* forcing = nullptr);

/// Largest stable step for the given CFL number.
double outer_admissible_dt(const OuterState& s, double cfl = 0.5);

/// Advances (u1, u3, p) in vorticity-streamfunction form with low-storage RK3, and u2 by a
/// semi-Lagrangian step. Throws CflViolation when dt exceeds outer_admissible_dt(s, cfl).
OuterState step_outer(const OuterState& s, double dt, const OuterForcing* forcing = nullptr,
                      double cfl = 0.5);

TraceSet extract_traces(const OuterState& s);

/// One semi-Lagrangian step of d_t u2 + u1 d_1 u2 = 0 on the wall.
TraceField trace_transport_u2(const TraceField& u2_bar, const TraceField& u1_bar, double dt);

/// Weighted L2 size of the wall balances d_t u1 + u1 d_1 u1 + d_1 p = 0 and d_t u2 + u1 d_1 u2 = 0,
/// with d_t from the difference quotient and spatial terms at the later set.
double bernoulli_residual(const TraceSet& earlier, const TraceSet& later, double ell = 1.0);

enum class PathOrder { x3_then_x1, x1_then_x3 };

/// Integrates the gradient field (g1, g3) from the corner (-L, 0).
Field2D integrate_gradient(const Field2D& g1, const Field2D& g3, PathOrder path,
                           WarningLog* log = nullptr, double tol = 1e-8);

/// Potential with d_1 p = -u3, d_3 p = u1 and p(-L, 0) = 0.
Field2D reconstruct_p_minus2(const OuterState& s, WarningLog* log = nullptr,
                             PathOrder path = PathOrder::x3_then_x1);

Field2D divergence(const Field2D& u1, const Field2D& u3);
double kinetic_energy(const OuterState& s);

}  // namespace rotbl
