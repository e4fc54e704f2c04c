#include "rotbl/composer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "rotbl/operators.hpp"

namespace rotbl {

namespace {

bool same_tangential(const Grid& a, const Grid& b) { return a.n_x1 == b.n_x1 && a.L == b.L; }

/// Row j of f broadcast onto g (optionally times y), keeping the row's ramp.
Field2D lift_row(const Field2D& f, int j, const GridPtr& g, bool times_y) {
    const TraceField t = retarget(row(f, j), g);
    Field2D r = times_y ? y_times(t, g) : broadcast(t, g);
    if (f.has_ramp()) {
        r.ramp.assign(g->n_y, f.ramp[j]);
        if (times_y)
            for (int q = 0; q < g->n_y; ++q) r.ramp[q] *= g->y_nodes[q];
    }
    return r;
}

/// Four-point Lagrange weights around fractional index s on a column of n samples.
struct Stencil {
    int j0 = 0;
    double w[4] = {0, 0, 0, 0};
    bool active = false;
};

Stencil cubic_stencil(double s, int n) {
    Stencil st;
    if (s < -1e-9 || s > n - 1 + 1e-9) return st;
    st.active = true;
    const double r = std::round(s);
    if (std::abs(s - r) < 1e-9) {
        const int j = static_cast<int>(r);
        st.j0 = std::clamp(j, 0, n - 4);
        st.w[j - st.j0] = 1.0;
        return st;
    }
    st.j0 = std::clamp(static_cast<int>(std::floor(s)) - 1, 0, n - 4);
    for (int a = 0; a < 4; ++a) {
        double w = 1.0;
        for (int b = 0; b < 4; ++b)
            if (b != a) w *= (s - (st.j0 + b)) / static_cast<double>(a - b);
        st.w[a] = w;
    }
    return st;
}

double apply(const Stencil& st, const Field2D& f, int i) {
    if (!st.active) return 0.0;
    double v = 0.0;
    for (int a = 0; a < 4; ++a) v += st.w[a] * f(i, st.j0 + a);
    return v;
}

/// Value and derivative stack of one additive piece, already scaled for the composite.
struct Piece {
    Field2D v, d1, d3, lap;
};

Piece interior_piece(const Field2D& f, double eps) {
    return {f, d_x1(f, 1), d_y(f, 1), eps * (d_x1(f, 2) + d_y(f, 2))};
}

/// c * f(x1, x3 / sqrt(eps)) with x3 derivatives converted from the layer variable.
Piece layer_piece(const Field2D& f, double c, double eps) {
    const double se = std::sqrt(eps);
    return {c * f, c * d_x1(f, 1), (c / se) * d_y(f, 1), c * (eps * d_x1(f, 2) + d_y(f, 2))};
}

Piece operator+(const Piece& a, const Piece& b) {
    return {a.v + b.v, a.d1 + b.d1, a.d3 + b.d3, a.lap + b.lap};
}

void check_consistent(const OuterState& outer, const LinOuterState& lin, const BLState& bl) {
    const double tol = 1e-12 * std::max(1.0, std::abs(outer.t));
    if (std::abs(outer.t - lin.t) > tol || std::abs(outer.t - bl.t) > tol)
        throw std::invalid_argument(fmt::format(
            "assemble_expansion: times differ (outer {}, linearised {}, layer {})", outer.t, lin.t, bl.t));
    if (!same_tangential(*outer.u1.grid, *bl.u.grid) || !same_grid(*outer.u1.grid, *lin.u1.grid))
        throw std::invalid_argument("assemble_expansion: sub-states use incompatible grids");
}

void check_resolution(const ExpansionState& e, double eps, const Grid& target) {
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    const Grid& og = *e.outer.u1.grid;
    if (!same_tangential(og, target))
        throw std::invalid_argument("target grid must share n_x1 and L with the interior grid");
    if (target.Y > og.Y * (1 + 1e-12))
        throw std::invalid_argument("target grid extends beyond the interior domain");
    const double limit = 5.0 * std::sqrt(eps) * e.bl.u.grid->dy;
    if (!(target.dy < limit)) {
        const int n = static_cast<int>(std::ceil(target.Y / limit)) + 2;
        throw std::invalid_argument(
            fmt::format("x3 spacing {:.3e} does not resolve the layer at eps = {:.3e} (needs < {:.3e}); "
                        "use at least {} wall-normal nodes",
                        target.dy, eps, limit, n));
    }
}

/// Interior field f plus layer fields (f_B, c) evaluated on target nodes.
Field2D sample_composite(const Field2D& f_I, const std::vector<std::pair<const Field2D*, double>>& layer,
                         double eps, const GridPtr& target, const char* label) {
    const Grid& og = *f_I.grid;
    const Grid& tg = *target;
    Field2D r(target, label);
    const double se = std::sqrt(eps);
    for (int j = 0; j < tg.n_y; ++j) {
        const double z = tg.y_nodes[j];
        const Stencil si = cubic_stencil(z / og.dy, og.n_y);
        const Grid* lg = layer.empty() ? nullptr : layer.front().first->grid.get();
        const Stencil sl = lg ? cubic_stencil(z / se / lg->dy, lg->n_y) : Stencil{};
        for (int i = 0; i < tg.n_x1; ++i) {
            double v = apply(si, f_I, i);
            for (const auto& [f, c] : layer) v += c * apply(sl, *f, i);
            r(i, j) = v;
        }
    }
    return r;
}

}  // namespace

ExpansionState assemble_expansion(const OuterState& outer, const LinOuterState& lin, const BLState& bl,
                                  WarningLog* log) {
    check_consistent(outer, lin, bl);
    ExpansionState e;
    e.outer = outer;
    e.lin_outer = lin;
    e.bl = bl;
    e.t = outer.t;
    e.traces = extract_traces(outer);
    const GridPtr& lg = bl.u.grid;
    if (e.bl.d1pB0.values.empty()) e.bl.d1pB0 = Field2D(lg, "d1pB0");

    e.p_Im2 = reconstruct_p_minus2(outer, log);
    e.p_Im1 = reconstruct_p_minus1(lin, log);
    e.pBm1 = -1.0 * integrate_x1_from_left(bl.u, log);
    e.pBm1.label = "pBm1";
    e.P_pm1 = e.pBm1 + lift_row(e.p_Im1, 0, lg, false) + lift_row(d_y(e.p_Im2, 1), 0, lg, true);
    e.P_pm1.label = "P_pm1";
    e.pB0 = integrate_x1_from_left(e.bl.d1pB0, log);
    e.pB0.label = "pB0";
    e.q = d_y(e.pB0, 1);
    e.q.label = "uB1_1";
    return e;
}

CompositeVelocity compose_velocity(const ExpansionState& e, double eps, const GridPtr& target) {
    check_resolution(e, eps, *target);
    const double se = std::sqrt(eps);
    const auto& o = e.outer;
    const auto& l = e.lin_outer;
    CompositeVelocity c;
    c.u1 = sample_composite(o.u1 + se * l.u1, {{&e.bl.v, 1.0}, {&e.q, se}}, eps, target, "u1");
    c.u2 = sample_composite(o.u2 + se * l.u2, {{&e.bl.u2B, 1.0}}, eps, target, "u2");
    c.u3 = sample_composite(o.u3 + se * l.u3, {{&e.bl.u, se}}, eps, target, "u3");
    return c;
}

Field2D compose_pressure(const ExpansionState& e, double eps, const GridPtr& target) {
    check_resolution(e, eps, *target);
    const double se = std::sqrt(eps);
    const Field2D pI = (1.0 / eps) * e.p_Im2 + (1.0 / se) * e.p_Im1 + e.outer.p;
    Field2D p = sample_composite(pI, {{&e.pBm1, 1.0 / se}, {&e.pB0, 1.0}}, eps, target, "p");
    const double p00 = p(0, 0);
    for (double& v : p.values) v -= p00;
    return p;
}

CompositeSnapshot composite_snapshot(const ExpansionState& e, double eps, double ell) {
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    const double se = std::sqrt(eps);
    const auto& o = e.outer;
    const auto& l = e.lin_outer;
    const auto& b = e.bl;
    const Grid& og = *o.u1.grid;
    const Grid& lg = *b.u.grid;

    CompositeSnapshot s;
    s.eps = eps;
    s.t = e.t;
    s.ell = ell;
    s.n_x1 = og.n_x1;
    s.L = og.L;
    s.d_eta = lg.dy;
    std::vector<double> eta;
    const int n_win = static_cast<int>(std::ceil(10.0 / lg.dy - 1e-9)) + 1;
    for (int j = 0; j < n_win; ++j) {
        eta.push_back(j * lg.dy);
        s.x3.push_back(se * eta.back());
    }
    s.n_window = n_win;
    const double top = s.x3.back();
    for (int j = 0; j < og.n_y; ++j)
        if (og.y_nodes[j] > top) {
            s.x3.push_back(og.y_nodes[j]);
            eta.push_back(og.y_nodes[j] / se);
        }
    if (s.x3.size() == static_cast<std::size_t>(n_win))
        throw std::invalid_argument("composite_snapshot: measurement window exceeds the interior domain");

    // Pieces on native grids.
    const std::array<Piece, 3> interior{interior_piece(o.u1 + se * l.u1, eps),
                                        interior_piece(o.u2 + se * l.u2, eps),
                                        interior_piece(o.u3 + se * l.u3, eps)};
    const std::array<Piece, 3> layer{layer_piece(b.v, 1.0, eps) + layer_piece(e.q, se, eps),
                                     layer_piece(b.u2B, 1.0, eps), layer_piece(b.u, se, eps)};
    const Field2D gi1 = (1.0 / eps) * (o.u3 + d_x1(e.p_Im2, 1)) + (1.0 / se) * (l.u3 + d_x1(e.p_Im1, 1));
    const Field2D gi3 =
        (1.0 / eps) * (d_y(e.p_Im2, 1) - o.u1) + (1.0 / se) * (d_y(e.p_Im1, 1) - l.u1);
    const Field2D gb1 = (1.0 / se) * (b.u + d_x1(e.pBm1, 1));
    const Field2D gb3 = (1.0 / eps) * (d_y(e.pBm1, 1) - b.v) + (1.0 / se) * (d_y(e.pB0, 1) - e.q);
    const Field2D pi1 = d_x1(o.p, 1), pi3 = d_y(o.p, 1);
    const Field2D zero_i(o.u1.grid), zero_b(b.u.grid);

    const std::size_t n_nodes = s.x3.size();
    for (int k = 0; k < 3; ++k)
        for (auto* a : {&s.u, &s.d1, &s.d3, &s.lap, &s.singular, &s.pressure})
            (*a)[k].assign(static_cast<std::size_t>(s.n_x1) * n_nodes, 0.0);

    const std::array<const Field2D*, 3> sing_i{&gi1, &zero_i, &gi3}, sing_b{&gb1, &zero_b, &gb3};
    const std::array<const Field2D*, 3> pres_i{&pi1, &zero_i, &pi3}, pres_b{&b.d1pB0, &zero_b, &zero_b};

    for (std::size_t n = 0; n < n_nodes; ++n) {
        const Stencil si = cubic_stencil(s.x3[n] / og.dy, og.n_y);
        const Stencil sl = cubic_stencil(eta[n] / lg.dy, lg.n_y);
        for (int i = 0; i < s.n_x1; ++i) {
            const std::size_t idx = s.index(i, static_cast<int>(n));
            for (int k = 0; k < 3; ++k) {
                s.u[k][idx] = apply(si, interior[k].v, i) + apply(sl, layer[k].v, i);
                s.d1[k][idx] = apply(si, interior[k].d1, i) + apply(sl, layer[k].d1, i);
                s.d3[k][idx] = apply(si, interior[k].d3, i) + apply(sl, layer[k].d3, i);
                s.lap[k][idx] = apply(si, interior[k].lap, i) + apply(sl, layer[k].lap, i);
                s.singular[k][idx] = apply(si, *sing_i[k], i) + apply(sl, *sing_b[k], i);
                s.pressure[k][idx] = apply(si, *pres_i[k], i) + apply(sl, *pres_b[k], i);
            }
        }
    }
    return s;
}

double ResidualEntry::window_total() const {
    return std::sqrt(std::inner_product(window.begin(), window.end(), window.begin(), 0.0));
}

double ResidualEntry::bulk_total() const {
    return std::sqrt(std::inner_product(bulk.begin(), bulk.end(), bulk.begin(), 0.0));
}

ResidualEntry nsc_residual(const CompositeSnapshot& earlier, const CompositeSnapshot& later) {
    if (earlier.eps != later.eps)
        throw std::invalid_argument(
            fmt::format("nsc_residual: snapshots use different eps ({} and {})", earlier.eps, later.eps));
    if (earlier.x3 != later.x3 || earlier.n_x1 != later.n_x1 || earlier.L != later.L)
        throw std::invalid_argument("nsc_residual: snapshots use different nodes");
    const double dt = later.t - earlier.t;
    if (!(dt > 0.0)) throw std::invalid_argument("nsc_residual: snapshots must be ordered in time");

    const auto& s = later;
    const int nn = static_cast<int>(s.x3.size());
    const double dx = 2.0 * s.L / s.n_x1;
    std::vector<double> wz(nn, 0.0);
    for (int j = 0; j < s.n_window; ++j)
        wz[j] = s.d_eta * ((j == 0 || j == s.n_window - 1) ? 0.5 : 1.0);
    for (int j = s.n_window; j < nn; ++j) {
        if (j > s.n_window) wz[j] += 0.5 * (s.x3[j] - s.x3[j - 1]);
        if (j + 1 < nn) wz[j] += 0.5 * (s.x3[j + 1] - s.x3[j]);
    }

    std::array<double, 4> win{}, bulk{};
    for (int i = 0; i < s.n_x1; ++i) {
        const double x = -s.L + i * dx;
        const double wx = std::pow(1.0 + x * x, s.ell) * dx;
        for (int j = 0; j < nn; ++j) {
            const std::size_t id = s.index(i, j);
            std::array<double, 4> r{};
            for (int k = 0; k < 3; ++k)
                r[k] = (s.u[k][id] - earlier.u[k][id]) / dt + s.u[0][id] * s.d1[k][id] +
                       s.u[2][id] * s.d3[k][id] - s.lap[k][id] + s.singular[k][id] + s.pressure[k][id];
            r[3] = s.d1[0][id] + s.d3[2][id];
            auto& acc = j < s.n_window ? win : bulk;
            for (int c = 0; c < 4; ++c) acc[c] += wx * wz[j] * r[c] * r[c];
        }
    }
    ResidualEntry out;
    out.eps = s.eps;
    for (int c = 0; c < 4; ++c) {
        out.window[c] = std::sqrt(win[c]);
        out.bulk[c] = std::sqrt(bulk[c]);
    }
    return out;
}

ResidualReport make_residual_report(std::vector<ResidualEntry> entries) {
    if (entries.size() < 2) throw std::invalid_argument("make_residual_report: need at least two eps values");
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.eps > b.eps; });
    ResidualReport r;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& e : entries) {
        r.eps.push_back(e.eps);
        const double x = std::log(e.eps), y = std::log(e.window_total() + e.bulk_total());
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(entries.size());
    r.fitted_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    r.entries = std::move(entries);
    return r;
}

std::string ResidualReport::to_csv() const {
    std::string s = "eps,component,window,bulk\n";
    for (const auto& e : entries) {
        for (std::size_t c = 0; c < residual_components.size(); ++c)
            s += fmt::format("{:.6e},{},{:.10e},{:.10e}\n", e.eps, residual_components[c], e.window[c],
                             e.bulk[c]);
        s += fmt::format("{:.6e},total,{:.10e},{:.10e}\n", e.eps, e.window_total(), e.bulk_total());
    }
    return s;
}

std::string ResidualReport::summary() const {
    std::string s;
    for (const auto& e : entries)
        s += fmt::format("eps = {:.3e}  window = {:.4e}  bulk = {:.4e}\n", e.eps, e.window_total(),
                         e.bulk_total());
    s += fmt::format("fitted slope = {:.4f}\n", fitted_slope);
    return s;
}

bool IdentityReport::all_pass() const {
    return std::all_of(items.begin(), items.end(), [](const auto& i) { return i.pass; });
}

std::string IdentityReport::to_text() const {
    std::string s;
    for (const auto& i : items)
        s += fmt::format("{:<28} residual {:.3e}  scale {:.3e}  relative {:.3e}  {}\n", i.name, i.residual,
                         i.scale, i.relative, i.pass ? "ok" : "FAIL");
    return s;
}

IdentityReport order_identity_check(const ExpansionState& e, double rel_tol) {
    IdentityReport rep;
    auto add = [&](std::string name, double res, double scale) {
        IdentityResult r{std::move(name), res, scale, 0.0, false};
        r.relative = scale > 0.0 ? res / scale : res;
        r.pass = r.relative <= rel_tol;
        rep.items.push_back(std::move(r));
    };
    const auto& o = e.outer;
    const auto& l = e.lin_outer;
    const auto& b = e.bl;
    const double s0 = l2(o.u1) + l2(o.u3);
    add("interior_geostrophy_x1", l2(d_x1(e.p_Im2, 1) + o.u3), s0);
    add("interior_geostrophy_x3", l2(d_y(e.p_Im2, 1) - o.u1), s0);
    const double s1 = l2(l.u1) + l2(l.u3);
    add("correction_geostrophy_x1", l2(d_x1(e.p_Im1, 1) + l.u3), s1);
    add("correction_geostrophy_x3", l2(d_y(e.p_Im1, 1) - l.u1), s1);
    add("wall_normal_pressure", l2(row(d_y(o.p, 1), 0)), l2(d_x1(o.p, 1)) + l2(d_y(o.p, 1)));
    add("layer_pressure_normal", l2(d_y(e.P_pm1, 1) - b.U1), l2(b.U1));
    add("layer_pressure_tangential", l2(d_x1(e.P_pm1, 1) + b.U3), l2(b.U3));
    add("layer_divergence", l2(d_x1(b.v, 1) + d_y(b.u, 1)), l2(d_y(b.u, 1)));
    add("layer_wall_slip", l2(row(b.U1, 0)), l2(b.U1));
    return rep;
}

}  // namespace rotbl
