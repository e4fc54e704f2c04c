#include "rotbl/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <limits>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "rotbl/field_io.hpp"
#include "rotbl/operators.hpp"

namespace rotbl {

namespace fs = std::filesystem;

namespace {

NormParams norm_params(const RunConfig& c, double rho, double a) { return NormParams{rho, a, c.ell, c.m_max}; }

RegularizationParams regularization(const RunConfig& c, double eps1) {
    RegularizationParams r;
    r.eps1 = eps1;
    r.schedule = c.schedule;
    return r;
}

void write_text(const fs::path& p, const std::string& s) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error(fmt::format("cannot write {}", p.string()));
    os << s;
}

}  // namespace

CoupledState initial_state(const InitialData& d) {
    return CoupledState{d.outer, d.lin, d.bl, extract_traces(d.outer)};
}

CoupledState advance(const CoupledState& s, double dt, const RegularizationParams& reg, const BLTerms& terms,
                     double a0, double cfl, long step_index) {
    CoupledState n;
    n.outer = step_outer(s.outer, dt, nullptr, cfl);
    n.traces = extract_traces(n.outer);
    BLStepOptions opt;
    opt.terms = terms;
    opt.step_index = step_index;
    opt.cfl = cfl;
    opt.end_traces = &n.traces;
    const Field2D u = step_bl(s.bl.u, s.traces, reg, dt, opt);
    n.lin = step_linearized(s.lin, s.outer, row(u, 0), dt, cfl);
    const Field2D u2B = step_u2_bl(s.bl.u2B, s.bl.U1, s.bl.U3, s.traces, a0, dt);
    n.bl = make_bl_state(u, u2B, n.traces, n.lin, n.outer.t);
    n.bl.d1pB0 = recover_pressure_gradient(s.bl.U1, n.bl.U1, n.bl.U3, n.traces, dt);
    return n;
}

double resolve_horizon(const RunConfig& c, const InitialData& d, double* x0, double* t_star) {
    const double x = all_norms(d.bl.u, norm_params(c, c.rho0, c.a0)).X;
    const double ts = lifespan_estimate(x, c.rho0, c.tau);
    if (x0) *x0 = x;
    if (t_star) *t_star = ts;
    if (c.T) return *c.T;
    if (!std::isfinite(ts))
        throw std::invalid_argument("T = auto needs nonzero layer data; set time.T explicitly");
    return 0.5 * ts;
}

PipelineResult run_pipeline(const RunConfig& c, const PipelineOptions& opt) {
    const auto violations = validate_config(c);
    if (!violations.empty()) throw std::invalid_argument("invalid configuration: " + violations.front());
    const InitialData init = make_scenario(c);
    PipelineResult res;
    res.T = resolve_horizon(c, init, &res.x0, &res.t_star);
    const RegularizationParams reg = regularization(c, opt.eps1.value_or(c.eps1));
    const double delta = c.residual_dt;
    const double t_regular = res.T - (opt.composite_eps ? 2.0 * delta : 0.0);
    if (!(t_regular > 0.0)) throw std::invalid_argument("final time too short for the residual steps");
    const long n_steps = std::max(1L, static_cast<long>(std::ceil(t_regular / c.dt - 1e-9)));
    const double h = t_regular / static_cast<double>(n_steps);
    const long stride =
        std::max<long>(c.diagnostics_every, static_cast<long>(std::ceil(n_steps / 200.0)));

    res.tracker = make_tracker(c.rho0, c.a0, c.C0);
    CoupledState s = initial_state(init);
    TraceSet prev_traces = s.traces;
    double last_diag_t = 0.0;

    auto record = [&](bool first) {
        const double t = s.outer.t;
        const NormReport nr = all_norms(s.bl.u, norm_params(c, res.tracker.rho(), res.tracker.a()));
        for (const auto& w : nr.warnings) res.log.add(fmt::format("t = {:.6g}: {}", t, w));
        if (first)
            res.tracker.z_t.push_back(nr.Z);
        else
            res.tracker = evolve_radius(res.tracker, nr.Z, t - last_diag_t);
        last_diag_t = t;
        StepRecord r;
        r.t = t;
        r.rho = res.tracker.rho();
        r.a = res.tracker.a();
        r.X = nr.X;
        r.Y = nr.Y;
        r.Z = nr.Z;
        r.bernoulli = first ? 0.0 : bernoulli_residual(prev_traces, s.traces, c.ell);
        r.kinetic = kinetic_energy(s.outer);
        r.layer_max = s.bl.u.max_abs();
        res.records.push_back(r);
        res.samples.push_back(s.bl.u);
        res.sample_times.push_back(t);
        if (opt.on_record) opt.on_record(r);
    };

    record(true);
    for (long k = 1; k <= n_steps; ++k) {
        const TraceSet before = s.traces;
        s = advance(s, h, reg, init.terms, c.a0, c.cfl, k);
        if (k % stride == 0 || k == n_steps) {
            prev_traces = before;
            record(false);
        }
    }

    if (opt.composite_eps) {
        const double eps = *opt.composite_eps;
        s = advance(s, delta, reg, init.terms, c.a0, c.cfl, n_steps + 1);
        const CompositeSnapshot first = composite_snapshot(assemble_expansion(s.outer, s.lin, s.bl, &res.log), eps, c.ell);
        s = advance(s, delta, reg, init.terms, c.a0, c.cfl, n_steps + 2);
        res.expansion = assemble_expansion(s.outer, s.lin, s.bl, &res.log);
        res.residual = nsc_residual(first, composite_snapshot(res.expansion, eps, c.ell));
    } else {
        res.expansion = assemble_expansion(s.outer, s.lin, s.bl, &res.log);
    }
    res.identities = order_identity_check(res.expansion);
    res.final_state = std::move(s);
    return res;
}

ResidualReport residual_sweep(const RunConfig& c, const std::vector<double>& eps) {
    std::vector<std::future<ResidualEntry>> jobs;
    for (double e : eps)
        jobs.push_back(std::async(std::launch::async, [&c, e] {
            PipelineOptions o;
            o.eps1 = e;
            o.composite_eps = e;
            return *run_pipeline(c, o).residual;
        }));
    std::vector<ResidualEntry> entries;
    for (auto& j : jobs) entries.push_back(j.get());
    return make_residual_report(std::move(entries));
}

SweepReport regularization_study(const RunConfig& c) {
    return regularization_sweep(
        [&c](double e) {
            PipelineOptions o;
            o.eps1 = e;
            return run_pipeline(c, o).final_state.bl.u;
        },
        regularization(c, c.eps1), norm_params(c, c.rho0, c.a0));
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 digest failed");
    std::string hex;
    for (unsigned int k = 0; k < len; ++k) hex += fmt::format("{:02x}", md[k]);
    return hex;
}

std::string sha256_file(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    if (!is) throw std::runtime_error(fmt::format("cannot read {}", p.string()));
    std::ostringstream ss;
    ss << is.rdbuf();
    return sha256_hex(ss.str());
}

void write_manifest(const fs::path& dir, const RunConfig& c, const std::string& status) {
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(dir))
        if (e.is_regular_file() && e.path().filename() != "manifest.txt") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::string m = fmt::format("config_sha256 {}\nseed {}\nstatus {}\n", sha256_hex(to_ini(c)), c.seed, status);
    for (const auto& f : files)
        m += fmt::format("{}  {}\n", sha256_file(f), fs::relative(f, dir).generic_string());
    write_text(dir / "manifest.txt", m);
}

std::string norms_csv_header() { return "t,rho,a,X,Y,Z\n"; }

std::string norms_csv_row(const StepRecord& r) {
    return fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", r.t, r.rho, r.a, r.X, r.Y, r.Z);
}

PipelineResult run_and_write(const RunConfig& c, const fs::path& out) {
    fs::create_directories(out / "fields");
    write_text(out / "config.ini", to_ini(c));
    std::ofstream norms(out / "norms.csv", std::ios::binary);
    std::ofstream diag(out / "diagnostics.csv", std::ios::binary);
    norms << norms_csv_header();
    diag << "t,bernoulli_residual,kinetic_energy,layer_max\n";
    PipelineOptions opt;
    opt.on_record = [&](const StepRecord& r) {
        norms << norms_csv_row(r) << std::flush;
        diag << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", r.t, r.bernoulli, r.kinetic, r.layer_max)
             << std::flush;
    };
    PipelineResult res;
    try {
        res = run_pipeline(c, opt);
    } catch (const std::exception& e) {
        norms.close();
        diag.close();
        write_manifest(out, c, fmt::format("failed: {}", e.what()));
        throw;
    }
    norms.close();
    diag.close();

    std::string budget = fmt::format("x0 = {:.10e}\nt_star = {:.10e}\nT = {:.10e}\n", res.x0, res.t_star, res.T);
    if (res.samples.size() >= 3)
        budget += energy_budget(res.samples, res.sample_times, res.tracker, norm_params(c, c.rho0, c.a0), c.rho0)
                      .to_text();
    else
        budget += "budget unavailable: fewer than three samples\n";
    write_text(out / "budget.txt", budget);
    write_text(out / "identities.txt", res.identities.to_text());
    std::string warn;
    for (const auto& w : res.log.messages) warn += w + "\n";
    write_text(out / "warnings.txt", warn);

    const auto& f = res.final_state;
    write_field(out / "fields" / "u.rfld", f.bl.u);
    write_field(out / "fields" / "v.rfld", f.bl.v);
    write_field(out / "fields" / "u2B.rfld", f.bl.u2B);
    write_field(out / "fields" / "d1pB0.rfld", f.bl.d1pB0);
    write_field(out / "fields" / "outer_u1.rfld", f.outer.u1);
    write_field(out / "fields" / "outer_u2.rfld", f.outer.u2);
    write_field(out / "fields" / "outer_u3.rfld", f.outer.u3);
    write_field(out / "fields" / "outer_p.rfld", f.outer.p);
    write_field(out / "fields" / "lin_u1.rfld", f.lin.u1);
    write_field(out / "fields" / "lin_u3.rfld", f.lin.u3);
    write_manifest(out, c, "ok");
    return res;
}

ResidualReport sweep_and_write(const RunConfig& c, const std::vector<double>& eps, const fs::path& out,
                               bool with_regularization) {
    fs::create_directories(out);
    write_text(out / "config.ini", to_ini(c));
    try {
        ResidualReport rep = residual_sweep(c, eps);
        write_text(out / "residual.csv", rep.to_csv());
        write_text(out / "residual.txt", rep.summary());
        if (with_regularization) write_text(out / "regularization.txt", regularization_study(c).to_text());
        write_manifest(out, c, "ok");
        return rep;
    } catch (const std::exception& e) {
        write_manifest(out, c, fmt::format("failed: {}", e.what()));
        throw;
    }
}

}  // namespace rotbl
