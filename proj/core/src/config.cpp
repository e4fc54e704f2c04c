#include "rotbl/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

namespace rotbl {

namespace pt = boost::property_tree;

namespace {

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

/// Line of `key` inside `[section]` in the raw text, 0 when not found.
int line_of(const std::vector<std::string>& lines, const std::string& section, const std::string& key) {
    std::string current;
    for (std::size_t k = 0; k < lines.size(); ++k) {
        const std::string l = trim(lines[k]);
        if (l.empty() || l[0] == ';' || l[0] == '#') continue;
        if (l.front() == '[' && l.back() == ']') {
            current = trim(l.substr(1, l.size() - 2));
            continue;
        }
        const auto eq = l.find('=');
        if (eq != std::string::npos && current == section && trim(l.substr(0, eq)) == key)
            return static_cast<int>(k + 1);
    }
    return 0;
}

class Reader {
public:
    Reader(const pt::ptree& tree, std::vector<std::string> lines, std::string source)
        : tree_(tree), lines_(std::move(lines)), source_(std::move(source)) {}

    template <class T>
    void get(const std::string& section, const std::string& key, T& out) {
        const std::string raw = take(section, key);
        if (raw.empty()) return;
        std::istringstream is(raw);
        T v{};
        is >> v;
        if (!is || !(is >> std::ws).eof()) fail(section, key, raw);
        out = v;
    }

    void get(const std::string& section, const std::string& key, std::string& out) {
        const std::string raw = take(section, key);
        if (!raw.empty()) out = raw;
    }

    void get(const std::string& section, const std::string& key, bool& out) {
        const std::string raw = take(section, key);
        if (raw.empty()) return;
        if (raw == "true" || raw == "yes" || raw == "1")
            out = true;
        else if (raw == "false" || raw == "no" || raw == "0")
            out = false;
        else
            fail(section, key, raw);
    }

    void get(const std::string& section, const std::string& key, std::vector<double>& out) {
        const std::string raw = take(section, key);
        if (raw.empty()) return;
        try {
            out = parse_list(raw);
        } catch (const std::invalid_argument&) {
            fail(section, key, raw);
        }
    }

    void get(const std::string& section, const std::string& key, std::optional<double>& out) {
        const std::string raw = take(section, key);
        if (raw.empty()) return;
        if (raw == "auto") {
            out.reset();
            return;
        }
        double v = 0.0;
        get_number(section, key, raw, v);
        out = v;
    }

    void reject_unknown() const {
        for (const auto& [section, child] : tree_) {
            if (child.empty() && !child.data().empty())
                throw ConfigError(source_, line_of_bare(section), fmt::format("key '{}' outside a section", section));
            for (const auto& [key, value] : child)
                if (!used_.count(section + "." + key))
                    throw ConfigError(source_, line_of(lines_, section, key),
                                      fmt::format("unknown key '{}' in section [{}]", key, section));
        }
    }

private:
    std::string take(const std::string& section, const std::string& key) {
        used_.insert(section + "." + key);
        const auto node = tree_.get_child_optional(pt::ptree::path_type(section + "/" + key, '/'));
        return node ? trim(node->data()) : std::string();
    }

    void get_number(const std::string& section, const std::string& key, const std::string& raw, double& out) {
        std::istringstream is(raw);
        is >> out;
        if (!is || !(is >> std::ws).eof()) fail(section, key, raw);
    }

    [[noreturn]] void fail(const std::string& section, const std::string& key, const std::string& raw) const {
        throw ConfigError(source_, line_of(lines_, section, key),
                          fmt::format("cannot parse value '{}' of [{}] {}", raw, section, key));
    }

    int line_of_bare(const std::string& key) const {
        for (std::size_t k = 0; k < lines_.size(); ++k) {
            const std::string l = trim(lines_[k]);
            const auto eq = l.find('=');
            if (eq != std::string::npos && trim(l.substr(0, eq)) == key) return static_cast<int>(k + 1);
        }
        return 0;
    }

    const pt::ptree& tree_;
    std::vector<std::string> lines_;
    std::string source_;
    std::set<std::string> used_;
};

std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) s += fmt::format("{}{}", k ? ", " : "", v[k]);
    return s;
}

bool strictly_decreasing(const std::vector<double>& v) {
    for (std::size_t k = 1; k < v.size(); ++k)
        if (!(v[k] < v[k - 1])) return false;
    return true;
}

}  // namespace

ConfigError::ConfigError(const std::string& source, int line_no, const std::string& what)
    : std::runtime_error(line_no > 0 ? fmt::format("{}:{}: {}", source, line_no, what)
                                     : fmt::format("{}: {}", source, what)),
      line(line_no) {}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw std::invalid_argument("empty list entry");
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument(fmt::format("'{}' is not a number", item));
        }
        if (used != item.size()) throw std::invalid_argument(fmt::format("'{}' is not a number", item));
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("empty list");
    return out;
}

RunConfig parse_config(std::istream& in, const std::string& source) {
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::vector<std::string> lines;
    {
        std::istringstream ls(text);
        for (std::string l; std::getline(ls, l);) lines.push_back(l);
    }
    pt::ptree tree;
    try {
        std::istringstream is(text);
        pt::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(source, static_cast<int>(e.line()), e.message());
    }
    RunConfig c;
    Reader r(tree, lines, source);
    r.get("grid", "n_x1", c.n_x1);
    r.get("grid", "n_y", c.n_y);
    r.get("grid", "n_x3", c.n_x3);
    r.get("grid", "L", c.L);
    r.get("grid", "Y", c.Y);
    r.get("grid", "H", c.H);
    r.get("weights", "ell", c.ell);
    r.get("weights", "a0", c.a0);
    r.get("analyticity", "rho0", c.rho0);
    r.get("analyticity", "tau", c.tau);
    r.get("analyticity", "C0", c.C0);
    r.get("analyticity", "m_max", c.m_max);
    r.get("time", "dt", c.dt);
    r.get("time", "T", c.T);
    r.get("time", "residual_dt", c.residual_dt);
    r.get("time", "diagnostics_every", c.diagnostics_every);
    r.get("time", "cfl", c.cfl);
    r.get("regularization", "eps1", c.eps1);
    r.get("regularization", "schedule", c.schedule);
    r.get("composer", "eps", c.eps);
    r.get("scenario", "id", c.scenario.id);
    r.get("scenario", "amplitude", c.scenario.amplitude);
    r.get("scenario", "amplitude_lin", c.scenario.amplitude_lin);
    r.get("scenario", "amplitude_layer", c.scenario.amplitude_layer);
    r.get("scenario", "amplitude_u2", c.scenario.amplitude_u2);
    r.get("scenario", "shear", c.scenario.shear);
    r.get("scenario", "mode", c.scenario.mode);
    r.get("scenario", "width", c.scenario.width);
    r.get("scenario", "random_phase", c.scenario.random_phase);
    r.get("output", "dir", c.out_dir);
    r.get("run", "seed", c.seed);
    r.reject_unknown();
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string(), 0, "cannot open file");
    return parse_config(in, path.string());
}

std::vector<std::string> validate_config(const RunConfig& c) {
    std::vector<std::string> v;
    auto need = [&](bool ok, std::string msg) {
        if (!ok) v.push_back(std::move(msg));
    };
    need(c.n_x1 >= 8 && (c.n_x1 & (c.n_x1 - 1)) == 0,
         fmt::format("grid.n_x1 = {} must be a power of two >= 8", c.n_x1));
    need(c.n_y >= 5, fmt::format("grid.n_y = {} must be >= 5", c.n_y));
    need(c.n_x3 >= 5, fmt::format("grid.n_x3 = {} must be >= 5", c.n_x3));
    need(c.L > 0.0, fmt::format("grid.L = {} must be positive", c.L));
    need(c.Y > 0.0, fmt::format("grid.Y = {} must be positive", c.Y));
    need(c.H > 0.0, fmt::format("grid.H = {} must be positive", c.H));
    need(c.ell > 0.5 && c.ell <= 1.0, fmt::format("weights.ell = {} must lie in (1/2, 1]", c.ell));
    need(c.a0 > 0.0, fmt::format("weights.a0 = {} must be positive", c.a0));
    need(c.a0 * c.Y * c.Y <= 600.0, fmt::format("weights.a0 * Y^2 = {} exceeds 600", c.a0 * c.Y * c.Y));
    need(c.rho0 > 0.0, fmt::format("analyticity.rho0 = {} must be positive", c.rho0));
    need(c.tau > 0.0, fmt::format("analyticity.tau = {} must be positive", c.tau));
    need(!(c.rho0 > 0.0 && c.tau > 0.0) || c.rho0 <= c.tau / 3.0,
         fmt::format("analyticity.rho0 = {} exceeds tau / 3 = {}", c.rho0, c.tau / 3.0));
    need(c.C0 >= 0.0, fmt::format("analyticity.C0 = {} must be non-negative", c.C0));
    need(c.m_max >= 3, fmt::format("analyticity.m_max = {} must be >= 3", c.m_max));
    need(c.dt > 0.0, fmt::format("time.dt = {} must be positive", c.dt));
    need(!c.T || *c.T > 0.0, "time.T must be positive or auto");
    need(c.residual_dt > 0.0 && c.residual_dt <= c.dt,
         fmt::format("time.residual_dt = {} must lie in (0, dt]", c.residual_dt));
    need(c.diagnostics_every >= 1, "time.diagnostics_every must be >= 1");
    need(c.cfl > 0.0 && c.cfl <= 1.0, fmt::format("time.cfl = {} must lie in (0, 1]", c.cfl));
    need(c.eps1 > 0.0, fmt::format("regularization.eps1 = {} must be positive", c.eps1));
    need(c.schedule.size() >= 3 && strictly_decreasing(c.schedule) &&
             std::all_of(c.schedule.begin(), c.schedule.end(), [](double e) { return e > 0.0; }),
         fmt::format("regularization.schedule = {} must hold at least three positive, strictly decreasing values",
                     join(c.schedule)));
    need(c.eps.size() >= 2 && strictly_decreasing(c.eps) &&
             std::all_of(c.eps.begin(), c.eps.end(), [](double e) { return e > 0.0 && e < 1.0; }),
         fmt::format("composer.eps = {} must hold at least two strictly decreasing values in (0, 1)", join(c.eps)));
    static const std::set<std::string> ids{"zero", "heat_limit", "small_data", "shear"};
    need(ids.count(c.scenario.id) == 1, fmt::format("scenario.id = '{}' is not one of zero, heat_limit, "
                                                    "small_data, shear",
                                                    c.scenario.id));
    need(c.scenario.width > 0.0, fmt::format("scenario.width = {} must be positive", c.scenario.width));
    need(c.scenario.width <= c.L / 4.0,
         fmt::format("scenario.width = {} must be at most L / 4 for decay at the periodic ends", c.scenario.width));
    need(!c.out_dir.empty(), "output.dir must not be empty");
    return v;
}

std::string to_ini(const RunConfig& c) {
    const auto& s = c.scenario;
    std::string o;
    o += fmt::format("[grid]\nn_x1 = {}\nn_y = {}\nn_x3 = {}\nL = {}\nY = {}\nH = {}\n\n", c.n_x1, c.n_y, c.n_x3,
                     c.L, c.Y, c.H);
    o += fmt::format("[weights]\nell = {}\na0 = {}\n\n", c.ell, c.a0);
    o += fmt::format("[analyticity]\nrho0 = {}\ntau = {}\nC0 = {}\nm_max = {}\n\n", c.rho0, c.tau, c.C0, c.m_max);
    o += fmt::format("[time]\ndt = {}\nT = {}\nresidual_dt = {}\ndiagnostics_every = {}\ncfl = {}\n\n", c.dt,
                     c.T ? fmt::format("{}", *c.T) : std::string("auto"), c.residual_dt, c.diagnostics_every,
                     c.cfl);
    o += fmt::format("[regularization]\neps1 = {}\nschedule = {}\n\n", c.eps1, join(c.schedule));
    o += fmt::format("[composer]\neps = {}\n\n", join(c.eps));
    o += fmt::format(
        "[scenario]\nid = {}\namplitude = {}\namplitude_lin = {}\namplitude_layer = {}\namplitude_u2 = {}\n"
        "shear = {}\nmode = {}\nwidth = {}\nrandom_phase = {}\n\n",
        s.id, s.amplitude, s.amplitude_lin, s.amplitude_layer, s.amplitude_u2, s.shear, s.mode, s.width,
        s.random_phase ? "true" : "false");
    o += fmt::format("[output]\ndir = {}\n\n[run]\nseed = {}\n", c.out_dir, c.seed);
    return o;
}

}  // namespace rotbl
