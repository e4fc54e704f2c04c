#pragma once

#include <limits>
#include <string>
#include <vector>

#include "rotbl/grid.hpp"

namespace rotbl {

struct NormParams {
    double rho = 1.0;
    double a = 0.5;
    double ell = 1.0;
    int m_max = 8;
};

void validate(const NormParams& p);

/// Contribution of one (m, j) summand: weight * ||<x1>^ell e^{a y^2} d_1^m d_y^j u||.
struct NormTerm {
    int m = 0;
    int j = 0;
    double weight = 1.0;
    double norm = 0.0;
};

struct NormReport {
    double X = 0.0, Y = 0.0, Z = 0.0;
    std::vector<NormTerm> per_m;  ///< X summands; X^2 is the sum of (weight * norm)^2
    std::vector<std::string> warnings;
};

/// rho^{m-1} / (m-3)! for m >= 3, 1 otherwise.
double derivative_weight(int m, double rho);

NormReport x_norm(const Field2D& u, const NormParams& p);
double y_norm(const Field2D& u, const NormParams& p);
double z_norm(const Field2D& u, const NormParams& p);
/// X, Y and Z together, sharing the derivative stack.
NormReport all_norms(const Field2D& u, const NormParams& p);

struct ATauResult {
    double value = 0.0;
    int alpha1 = 0;
    int alpha3 = 0;
};

/// max over |alpha| <= alpha_max of tau^|alpha| / |alpha|! * ||<z>^ell d^alpha f|| on the half-plane.
ATauResult a_tau_estimate(const Field2D& f, double tau, double ell, int alpha_max);

struct PhiStack {
    std::vector<Field2D> phi;  ///< <x1>^ell e^{a y^2} d_1^m d_y u
    std::vector<Field2D> psi;  ///< <x1>^ell e^{a y^2} d_1^m u
};

PhiStack phi_stack(const Field2D& u, const NormParams& p);

/// Evolving analyticity radius rho(t) and weight a(t).
struct RadiusTracker {
    std::vector<double> t;
    std::vector<double> rho_t;
    std::vector<double> a_t;
    std::vector<double> z_t;  ///< Z norm at each time in t; may lag by one entry before the first update
    double a0 = 0.5;
    double C0 = 1.0;
    double rho_floor = 1e-3;
    double a_floor = 0.05;
    bool aborted = false;

    double rho() const { return rho_t.back(); }
    double a() const { return a_t.back(); }
    double time() const { return t.back(); }
};

RadiusTracker make_tracker(double rho_start, double a0, double C0 = 1.0, double rho_floor = 1e-3);

/// a0 - (2 a0^2 + C0) t, not below the tracker's floor.
double weight_schedule(const RadiusTracker& tr, double t);

/// Advances rho' = -Z by dt, where z_value is Z at the end of the step. Uses the trapezoid rule
/// when Z at the start of the step is known and explicit Euler otherwise. Sets `aborted` once
/// rho drops below rho_floor.
RadiusTracker evolve_radius(RadiusTracker tr, double z_value, double dt);

/// Lifespan (1/4) (3 x0^2 + x0^4)^{-1} min(rho0/2, tau/3)^2; +inf when x0 == 0.
double lifespan_estimate(double x0, double rho0, double tau);

struct BudgetReport {
    std::vector<double> t;
    std::vector<double> lhs;       ///< |u(t)|_X^2 + int Z^2 - int rho' Y^2
    std::vector<double> growth;    ///< int (|rho'| rho^{-2} X + X^2 + X^4)
    std::vector<double> coupling;  ///< int Z Y^2
    double initial_sq = 0.0;       ///< |u0|^2 in X_{rho0, a0}
    double fitted_C = 0.0;
    std::string to_text() const;
};

/// Evaluates both sides of the energy inequality along a sampled trajectory.
/// Requires at least three samples; rho, rho' and a are taken from the tracker.
BudgetReport energy_budget(const std::vector<Field2D>& u_hist, const std::vector<double>& times,
                           const RadiusTracker& tracker, const NormParams& base, double rho0);

}  // namespace rotbl
