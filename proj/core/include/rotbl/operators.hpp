#pragma once

#include "rotbl/grid.hpp"

namespace rotbl {

inline constexpr int default_max_order = 12;

/// order-th tangential derivative by Fourier differentiation on the periodic interval.
/// A ramp carried by `f` is differentiated exactly. Throws std::out_of_range when
/// order < 1 or order > max_order.
Field2D d_x1(const Field2D& f, int order, int max_order = default_max_order);
TraceField d_x1(const TraceField& f, int order, int max_order = default_max_order);

/// Wall-normal derivative of order 1 or 2: centered in the interior,
/// one-sided second-order at both ends.
Field2D d_y(const Field2D& f, int order);

/// Discrete antiderivative from x1 = -L, zero at -L.
///
/// The zero-mean part of each row is integrated spectrally and the row mean contributes an
/// exact linear ramp, so d_x1 inverts it to round-off. A row whose value at -L exceeds
/// decay_tol * max|f| is reported to `log` when given.
Field2D integrate_x1_from_left(const Field2D& f, WarningLog* log = nullptr, double decay_tol = 1e-8);
TraceField integrate_x1_from_left(const TraceField& f, WarningLog* log = nullptr,
                                  double decay_tol = 1e-8);

/// Discrete L2 norm of <x1>^ell exp(a y^2) f; trapezoid in y, periodic rule in x1.
double weighted_l2(const Field2D& f, const WeightParams& w);

/// Plain discrete L2 norm (unit weight) of a field or trace.
double l2(const Field2D& f);
double l2(const TraceField& f);

/// Relative size of the top quarter of the tangential spectrum, maximised over rows.
double tangential_tail_ratio(const Field2D& f);

}  // namespace rotbl
