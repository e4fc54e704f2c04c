#pragma once

#include <vector>

#include "rotbl/grid.hpp"

namespace rotbl::detail {

/// Solves (D1^2 + D3^2) psi = rhs on interior rows with psi = bottom(x1) on row 0 and
/// psi = top (a constant) on the last row. D1 is spectral, D3 the three-point stencil.
Field2D solve_dirichlet_poisson(const Field2D& rhs, const TraceField& bottom, double top);

/// Solves (D1^2 + D3^2) p = rhs with the one-sided d3 p = g_bottom on row 0 and d3 p = g_top on
/// the last row for every nonzero wavenumber. The x1-mean of p starts at 0 on the wall and has
/// `mean_dp` (the x1-mean of d3 p per row) as its discrete derivative on all but the last row.
Field2D solve_neumann_poisson(const Field2D& rhs, const TraceField& g_bottom,
                              const TraceField& g_top, const std::vector<double>& mean_dp);

/// Bilinear interpolation, periodic in x1, clamped in the wall-normal direction.
double interpolate_bilinear(const Field2D& f, double x1, double y);

/// Linear interpolation of a periodic trace.
double interpolate_linear(const TraceField& f, double x1);

}  // namespace rotbl::detail
