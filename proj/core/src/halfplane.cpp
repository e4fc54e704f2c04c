#include "halfplane.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "spectral.hpp"

namespace rotbl::detail {

namespace {

using cplx = std::complex<double>;

std::vector<cplx> transform_rows(const Field2D& f) {
    const auto& g = *f.grid;
    std::vector<cplx> c(static_cast<std::size_t>(g.n_x1 / 2 + 1) * g.n_y);
    forward(f.values.data(), c.data(), g.n_x1, g.n_y);
    return c;
}

std::vector<cplx> transform_trace(const TraceField& t) {
    std::vector<cplx> c(t.grid->n_x1 / 2 + 1);
    forward(t.values.data(), c.data(), t.grid->n_x1, 1);
    return c;
}

double wavenumber(int k, const Grid& g) { return std::numbers::pi * k / g.L; }

}  // namespace

Field2D solve_dirichlet_poisson(const Field2D& rhs, const TraceField& bottom, double top) {
    const auto& g = *rhs.grid;
    const int n = g.n_y;
    const int nc = g.n_x1 / 2 + 1;
    const double h2 = g.dy * g.dy;
    auto r = transform_rows(rhs);
    auto b = transform_trace(bottom);
    std::vector<cplx> sol(r.size(), 0.0);
    const int m = n - 2;
    std::vector<double> lo(m, 1.0 / h2), di(m), up(m, 1.0 / h2);
    std::vector<cplx> d(m);
    for (int k = 0; k < nc; ++k) {
        const double kap = wavenumber(k, g);
        const cplx bot = b[k];
        const cplx tp = (k == 0) ? cplx(top) : cplx(0.0);
        for (int q = 0; q < m; ++q) {
            di[q] = -2.0 / h2 - kap * kap;
            d[q] = r[static_cast<std::size_t>(k) * n + q + 1];
        }
        d[0] -= bot / h2;
        d[m - 1] -= tp / h2;
        solve_tridiagonal(lo.data(), di.data(), up.data(), d.data(), m);
        sol[static_cast<std::size_t>(k) * n] = bot;
        for (int q = 0; q < m; ++q) sol[static_cast<std::size_t>(k) * n + q + 1] = d[q];
        sol[static_cast<std::size_t>(k) * n + n - 1] = tp;
    }
    Field2D out(rhs.grid, "psi");
    backward(sol.data(), out.values.data(), g.n_x1, n);
    return out;
}

Field2D solve_neumann_poisson(const Field2D& rhs, const TraceField& g_bottom,
                              const TraceField& g_top, const std::vector<double>& mean_dp) {
    const auto& g = *rhs.grid;
    const int n = g.n_y;
    const int nc = g.n_x1 / 2 + 1;
    const double h = g.dy;
    const double h2 = h * h;
    auto r = transform_rows(rhs);
    auto gb = transform_trace(g_bottom);
    auto gt = transform_trace(g_top);
    std::vector<cplx> sol(r.size(), 0.0);
    std::vector<double> lo(n, 1.0), di(n), up(n, 1.0);
    std::vector<cplx> d(n);
    for (int k = 1; k < nc; ++k) {
        const double kh2 = std::pow(wavenumber(k, g) * h, 2);
        const cplx* rk = &r[static_cast<std::size_t>(k) * n];
        for (int q = 1; q < n - 1; ++q) {
            lo[q] = up[q] = 1.0;
            di[q] = -2.0 - kh2;
            d[q] = rk[q] * h2;
        }
        // one-sided wall stencils with the neighbouring interior row eliminated
        di[0] = -2.0;
        up[0] = 2.0 - kh2;
        d[0] = 2.0 * h * gb[k] + rk[1] * h2;
        lo[n - 1] = kh2 - 2.0;
        di[n - 1] = 2.0;
        d[n - 1] = 2.0 * h * gt[k] - rk[n - 2] * h2;
        solve_tridiagonal(lo.data(), di.data(), up.data(), d.data(), n);
        for (int q = 0; q < n; ++q) sol[static_cast<std::size_t>(k) * n + q] = d[q];
    }
    sol[0] = 0.0;
    sol[1] = 0.5 * h * (mean_dp[0] + mean_dp[1]);
    for (int q = 2; q < n; ++q) sol[q] = sol[q - 2] + 2.0 * h * mean_dp[q - 1];
    Field2D out(rhs.grid, "p");
    backward(sol.data(), out.values.data(), g.n_x1, n);
    return out;
}

double interpolate_bilinear(const Field2D& f, double x1, double y) {
    const auto& g = *f.grid;
    double s = (x1 + g.L) / g.dx;
    s -= g.n_x1 * std::floor(s / g.n_x1);
    int i0 = static_cast<int>(std::floor(s));
    const double fx = s - i0;
    i0 %= g.n_x1;
    const int i1 = (i0 + 1) % g.n_x1;
    const double t = std::clamp(y / g.dy, 0.0, static_cast<double>(g.n_y - 1));
    int j0 = std::min(static_cast<int>(std::floor(t)), g.n_y - 2);
    const double fy = t - j0;
    return (1 - fx) * ((1 - fy) * f(i0, j0) + fy * f(i0, j0 + 1)) +
           fx * ((1 - fy) * f(i1, j0) + fy * f(i1, j0 + 1));
}

double interpolate_linear(const TraceField& f, double x1) {
    const auto& g = *f.grid;
    double s = (x1 + g.L) / g.dx;
    s -= g.n_x1 * std::floor(s / g.n_x1);
    int i0 = static_cast<int>(std::floor(s));
    const double fx = s - i0;
    i0 %= g.n_x1;
    const int i1 = (i0 + 1) % g.n_x1;
    return (1 - fx) * f[i0] + fx * f[i1];
}

}  // namespace rotbl::detail
