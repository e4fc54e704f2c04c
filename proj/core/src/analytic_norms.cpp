#include "rotbl/analytic_norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "rotbl/operators.hpp"

namespace rotbl {

namespace {

Field2D tangential(const Field2D& u, int m) {
    return m == 0 ? u : d_x1(u, m, std::max(m, default_max_order));
}

double factorial(int n) { return std::tgamma(n + 1.0); }

double interp(const std::vector<double>& t, const std::vector<double>& v, double x) {
    if (t.size() == 1 || x <= t.front()) return v.front();
    if (x >= t.back()) return v.back();
    auto it = std::upper_bound(t.begin(), t.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - t.begin());
    const double w = (x - t[k - 1]) / (t[k] - t[k - 1]);
    return (1 - w) * v[k - 1] + w * v[k];
}

}  // namespace

void validate(const NormParams& p) {
    if (!(p.rho > 0.0)) throw std::invalid_argument(fmt::format("rho = {} must be positive", p.rho));
    if (!(p.a > 0.0)) throw std::invalid_argument(fmt::format("a = {} must be positive", p.a));
    if (!(p.ell > 0.5 && p.ell <= 1.0))
        throw std::invalid_argument(fmt::format("ell = {} must lie in (1/2, 1]", p.ell));
    if (p.m_max < 3 || p.m_max > default_max_order)
        throw std::invalid_argument(fmt::format("m_max = {} must lie in [3, {}]", p.m_max, default_max_order));
}

double derivative_weight(int m, double rho) {
    if (m <= 2) return 1.0;
    return std::pow(rho, m - 1) / factorial(m - 3);
}

NormReport all_norms(const Field2D& u, const NormParams& p) {
    validate(p);
    const WeightParams w{p.ell, p.a};
    NormReport r;
    double x2 = 0.0, y2 = 0.0, z2 = 0.0;
    for (int m = 0; m <= p.m_max; ++m) {
        const Field2D f = tangential(u, m);
        const double n0 = weighted_l2(f, w);
        const double n1 = weighted_l2(d_y(f, 1), w);
        const double n2 = weighted_l2(d_y(f, 2), w);
        const double wm = derivative_weight(m, p.rho);
        r.per_m.push_back({m, 0, wm, n0});
        r.per_m.push_back({m, 1, wm, n1});
        x2 += wm * wm * (n0 * n0 + n1 * n1);
        const double cy = m >= 3 ? std::sqrt((m - 1) / p.rho) * wm : 1.0;
        y2 += std::pow(cy * (n0 + n1), 2);
        z2 += std::pow(wm * (n1 + n2), 2);
    }
    r.X = std::sqrt(x2);
    r.Y = std::sqrt(y2);
    r.Z = std::sqrt(z2);
    const double tail = tangential_tail_ratio(u);
    if (tail > 1e-8)
        r.warnings.push_back(
            fmt::format("unresolved tangential spectrum: tail/peak = {:.2e} exceeds 1e-8", tail));
    return r;
}

NormReport x_norm(const Field2D& u, const NormParams& p) {
    NormReport r = all_norms(u, p);
    r.Y = r.Z = 0.0;
    return r;
}

double y_norm(const Field2D& u, const NormParams& p) { return all_norms(u, p).Y; }

double z_norm(const Field2D& u, const NormParams& p) { return all_norms(u, p).Z; }

ATauResult a_tau_estimate(const Field2D& f, double tau, double ell, int alpha_max) {
    if (!(tau > 0.0)) throw std::invalid_argument("a_tau_estimate: tau must be positive");
    const auto& g = *f.grid;
    ATauResult best;
    bool first = true;
    for (int a1 = 0; a1 <= alpha_max; ++a1) {
        Field2D d = tangential(f, a1);
        for (int a3 = 0; a1 + a3 <= alpha_max; ++a3) {
            if (a3 > 0) d = d_y(d, 1);
            double s = 0.0;
            for (int i = 0; i < g.n_x1; ++i)
                for (int j = 0; j < g.n_y; ++j) {
                    const double x = g.x1_nodes[i], z = g.y_nodes[j];
                    const double wq = (j == 0 || j == g.n_y - 1) ? 0.5 : 1.0;
                    s += wq * std::pow(1.0 + x * x + z * z, ell) * d(i, j) * d(i, j);
                }
            const int k = a1 + a3;
            const double v = std::pow(tau, k) / factorial(k) * std::sqrt(s * g.dx * g.dy);
            if (first || v > best.value) best = {v, a1, a3};
            first = false;
        }
    }
    return best;
}

PhiStack phi_stack(const Field2D& u, const NormParams& p) {
    const auto& g = *u.grid;
    Field2D weight(u.grid, "weight");
    for (int i = 0; i < g.n_x1; ++i)
        for (int j = 0; j < g.n_y; ++j) {
            const double x = g.x1_nodes[i], y = g.y_nodes[j];
            weight(i, j) = std::pow(1.0 + x * x, 0.5 * p.ell) * std::exp(p.a * y * y);
        }
    PhiStack s;
    const Field2D omega = d_y(u, 1);
    for (int m = 0; m <= p.m_max; ++m) {
        s.phi.push_back(hadamard(weight, tangential(omega, m)));
        s.psi.push_back(hadamard(weight, tangential(u, m)));
        s.phi.back().label = fmt::format("phi_{}", m);
        s.psi.back().label = fmt::format("psi_{}", m);
    }
    return s;
}

RadiusTracker make_tracker(double rho_start, double a0, double C0, double rho_floor) {
    if (!(rho_start > 0.0)) throw std::invalid_argument("initial radius must be positive");
    RadiusTracker tr;
    tr.a0 = a0;
    tr.C0 = C0;
    tr.rho_floor = rho_floor;
    tr.a_floor = 0.1 * a0;
    tr.t = {0.0};
    tr.rho_t = {rho_start};
    tr.a_t = {a0};
    return tr;
}

double weight_schedule(const RadiusTracker& tr, double t) {
    return std::max(tr.a_floor, tr.a0 - (2.0 * tr.a0 * tr.a0 + tr.C0) * t);
}

RadiusTracker evolve_radius(RadiusTracker tr, double z_value, double dt) {
    if (z_value < 0.0) throw std::invalid_argument("evolve_radius: Z must be non-negative");
    const bool have_start = tr.z_t.size() == tr.t.size();
    const double slope = have_start ? 0.5 * (tr.z_t.back() + z_value) : z_value;
    if (!have_start) tr.z_t.push_back(z_value);
    const double t_new = tr.t.back() + dt;
    const double rho_new = tr.rho_t.back() - dt * slope;
    tr.t.push_back(t_new);
    tr.rho_t.push_back(rho_new);
    tr.a_t.push_back(weight_schedule(tr, t_new));
    tr.z_t.push_back(z_value);
    if (rho_new < tr.rho_floor) tr.aborted = true;
    return tr;
}

double lifespan_estimate(double x0, double rho0, double tau) {
    if (x0 < 0.0) throw std::invalid_argument("lifespan_estimate: x0 must be non-negative");
    if (x0 == 0.0) return std::numeric_limits<double>::infinity();
    const double r = std::min(rho0 / 2.0, tau / 3.0);
    return 0.25 / (3.0 * x0 * x0 + std::pow(x0, 4)) * r * r;
}

BudgetReport energy_budget(const std::vector<Field2D>& u_hist, const std::vector<double>& times,
                           const RadiusTracker& tracker, const NormParams& base, double rho0) {
    if (u_hist.size() < 3 || u_hist.size() != times.size())
        throw std::invalid_argument("energy_budget: need at least three samples with matching times");
    const std::size_t n = u_hist.size();
    std::vector<double> X(n), Y(n), Z(n), rho(n), drho(n);
    std::vector<double> zt = tracker.z_t;
    zt.resize(tracker.t.size(), zt.empty() ? 0.0 : zt.back());
    for (std::size_t k = 0; k < n; ++k) {
        NormParams p = base;
        p.rho = interp(tracker.t, tracker.rho_t, times[k]);
        p.a = interp(tracker.t, tracker.a_t, times[k]);
        const NormReport r = all_norms(u_hist[k], p);
        X[k] = r.X;
        Y[k] = r.Y;
        Z[k] = r.Z;
        rho[k] = p.rho;
        drho[k] = -interp(tracker.t, zt, times[k]);
    }
    BudgetReport b;
    NormParams p0 = base;
    p0.rho = rho0;
    p0.a = tracker.a0;
    b.initial_sq = std::pow(all_norms(u_hist.front(), p0).X, 2);
    double iz = 0.0, iy = 0.0, ia = 0.0, ib = 0.0;
    auto trap = [&](std::size_t k, auto&& f) { return 0.5 * (times[k] - times[k - 1]) * (f(k - 1) + f(k)); };
    for (std::size_t k = 0; k < n; ++k) {
        if (k > 0) {
            iz += trap(k, [&](std::size_t q) { return Z[q] * Z[q]; });
            iy += trap(k, [&](std::size_t q) { return drho[q] * Y[q] * Y[q]; });
            ia += trap(k, [&](std::size_t q) {
                return std::abs(drho[q]) / (rho[q] * rho[q]) * X[q] + X[q] * X[q] + std::pow(X[q], 4);
            });
            ib += trap(k, [&](std::size_t q) { return Z[q] * Y[q] * Y[q]; });
        }
        b.t.push_back(times[k]);
        b.lhs.push_back(X[k] * X[k] + iz - iy);
        b.growth.push_back(ia);
        b.coupling.push_back(ib);
        if (k > 0 && ia + ib > 0.0)
            b.fitted_C = std::max(b.fitted_C, (b.lhs.back() - b.initial_sq) / (ia + ib));
    }
    return b;
}

std::string BudgetReport::to_text() const {
    std::string s;
    s += fmt::format("initial_sq = {:.10e}\n", initial_sq);
    s += fmt::format("fitted_C = {:.10e}\n", fitted_C);
    s += "t, lhs, growth, coupling\n";
    for (std::size_t k = 0; k < t.size(); ++k)
        s += fmt::format("{:.10e}, {:.10e}, {:.10e}, {:.10e}\n", t[k], lhs[k], growth[k], coupling[k]);
    return s;
}

}  // namespace rotbl
