#pragma once

#include <array>
#include <string>
#include <vector>

#include "rotbl/boundary_layer.hpp"
#include "rotbl/outer_euler_lin.hpp"

namespace rotbl {

/// All retained expansion terms at one time. Layer quantities live on the layer grid,
/// interior quantities on the half-plane grid; both share n_x1 and L.
struct ExpansionState {
    OuterState outer;
    LinOuterState lin_outer;
    BLState bl;
    TraceSet traces;
    Field2D p_Im2, p_Im1;  ///< interior potentials of order -2 and -1
    Field2D P_pm1;         ///< layer pressure of order -1 including interior traces
    Field2D pBm1;          ///< -int u dx1
    Field2D pB0;           ///< int d1pB0 dx1
    Field2D q;             ///< d_y pB0, the order-one tangential layer velocity
    double t = 0.0;
};

/// Reconstructs the low-order pressures and derived layer fields. Throws when sub-states
/// disagree in time or tangential discretisation.
ExpansionState assemble_expansion(const OuterState& outer, const LinOuterState& lin, const BLState& bl,
                                  WarningLog* log = nullptr);

struct CompositeVelocity {
    Field2D u1, u2, u3;
};

/// Composite velocity sampled on `target` (an (x1, x3) grid). Rejects targets whose x3 spacing is
/// not below 5 sqrt(eps) times the layer spacing, suggesting a node count.
CompositeVelocity compose_velocity(const ExpansionState& e, double eps, const GridPtr& target);

/// Composite pressure of orders eps^-1, eps^-1/2 and eps^0 on `target`, zero at (-L, 0).
Field2D compose_pressure(const ExpansionState& e, double eps, const GridPtr& target);

/// Composite fields and the derivatives needed by the momentum residual, at measurement nodes:
/// the first n_window x3-nodes cover [0, 10 sqrt(eps)] at layer resolution, the rest are the
/// half-plane rows above it.
struct CompositeSnapshot {
    double eps = 0.0;
    double t = 0.0;
    double ell = 1.0;
    int n_x1 = 0;
    double L = 0.0;
    double d_eta = 0.0;
    std::vector<double> x3;
    int n_window = 0;
    std::array<std::vector<double>, 3> u, d1, d3, lap, singular, pressure;

    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * x3.size() + j; }
};

CompositeSnapshot composite_snapshot(const ExpansionState& e, double eps, double ell = 1.0);

struct ResidualEntry {
    double eps = 0.0;
    std::array<double, 4> window{};  ///< x1, x2, x3 momentum and divergence
    std::array<double, 4> bulk{};
    double window_total() const;
    double bulk_total() const;
};

struct ResidualReport {
    std::vector<double> eps;
    std::vector<ResidualEntry> entries;
    double fitted_slope = 0.0;
    std::string to_csv() const;
    std::string summary() const;
};

inline constexpr std::array<const char*, 4> residual_components{"momentum_x1", "momentum_x2",
                                                                "momentum_x3", "divergence"};

/// Residual of the rotating Navier-Stokes system (viscosity eps) on the composite, with d_t from the
/// two snapshots and spatial terms at the later one. The window norm uses the layer variable
/// eta = x3 / sqrt(eps) as measure. Throws if the snapshots differ in eps or nodes.
ResidualEntry nsc_residual(const CompositeSnapshot& earlier, const CompositeSnapshot& later);

/// Least-squares slope of log(window + bulk) against log eps; entries sorted by decreasing eps.
ResidualReport make_residual_report(std::vector<ResidualEntry> entries);

struct IdentityResult {
    std::string name;
    double residual = 0.0;
    double scale = 0.0;
    double relative = 0.0;
    bool pass = false;
};

struct IdentityReport {
    std::vector<IdentityResult> items;
    bool all_pass() const;
    std::string to_text() const;
};

/// Order-by-order identities of the expansion, each measured relative to its natural scale.
IdentityReport order_identity_check(const ExpansionState& e, double rel_tol = 1e-6);

}  // namespace rotbl
