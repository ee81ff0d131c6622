#include "shs/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace shs::io {

std::uint64_t fnv1a_hash(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

Grid RunConfig::make_grid() const {
    const double h = grid.length / grid.cells_x;
    return grid.dim == 1 ? Grid::make_1d(grid.cells_x, h, grid.boundary)
                         : Grid::make_2d(grid.cells_x, grid.cells_y, h, grid.boundary);
}

kinetics::ScalingParams RunConfig::make_params() const {
    kinetics::ScalingParams p;
    p.epsilon = kin.epsilon;
    p.sigma = kin.sigma;
    p.theta_bar = kin.theta_bar;
    p.kappa_eps = kin.kappa;
    p.scaling_kind = kin.kind;
    return p;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

using KvMap = std::map<std::string, std::string>;  // "section.key" -> value

KvMap tokenize(const std::string& text, std::vector<std::string>& errors) {
    KvMap kv;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                errors.push_back("line " + std::to_string(lineno) + ": malformed section header");
                continue;
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            errors.push_back("line " + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        const std::string full = section.empty() ? key : section + "." + key;
        if (kv.count(full))
            errors.push_back("line " + std::to_string(lineno) + ": duplicate key '" + full + "'");
        kv[full] = val;
    }
    return kv;
}

struct Reader {
    const KvMap& kv;
    std::vector<std::string>& errors;
    std::set<std::string> consumed;

    bool has(const std::string& key) const { return kv.count(key) > 0; }

    std::string str(const std::string& key, const std::string& def) {
        consumed.insert(key);
        auto it = kv.find(key);
        return it == kv.end() ? def : it->second;
    }
    double num(const std::string& key, double def) {
        consumed.insert(key);
        auto it = kv.find(key);
        if (it == kv.end()) return def;
        try {
            std::size_t pos = 0;
            const double v = std::stod(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            errors.push_back("key '" + key + "': expected a number, got '" + it->second + "'");
            return def;
        }
    }
    long integer(const std::string& key, long def) {
        const double v = num(key, static_cast<double>(def));
        if (v != std::floor(v)) errors.push_back("key '" + key + "': expected an integer");
        return static_cast<long>(v);
    }
    bool boolean(const std::string& key, bool def) {
        const std::string s = str(key, def ? "true" : "false");
        if (s == "true" || s == "1" || s == "yes") return true;
        if (s == "false" || s == "0" || s == "no") return false;
        errors.push_back("key '" + key + "': expected true/false");
        return def;
    }
    std::vector<double> list(const std::string& key) {
        consumed.insert(key);
        std::vector<double> out;
        auto it = kv.find(key);
        if (it == kv.end()) return out;
        std::stringstream ss(it->second);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            try {
                out.push_back(std::stod(item));
            } catch (const std::exception&) {
                errors.push_back("key '" + key + "': bad list entry '" + item + "'");
            }
        }
        return out;
    }
    void reject_unknown() {
        for (const auto& [key, val] : kv) {
            (void)val;
            if (!consumed.count(key)) errors.push_back("unknown key '" + key + "'");
        }
    }
};

const std::set<std::string> kExperiments = {"simulate-eps",    "simulate-limit", "traveling-wave",
                                            "pulsating-wave", "dispersion",     "eps-convergence",
                                            "sweep"};

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    std::vector<std::string> errors;
    const KvMap kv = tokenize(text, errors);
    Reader r{kv, errors, {}};
    RunConfig cfg;
    cfg.config_hash = fnv1a_hash(text);

    cfg.experiment = r.str("experiment", "");
    if (!kExperiments.count(cfg.experiment))
        errors.push_back("experiment must be one of simulate-eps, simulate-limit, traveling-wave, "
                         "pulsating-wave, dispersion, eps-convergence, sweep");

    cfg.grid.dim = static_cast<int>(r.integer("grid.dim", 1));
    cfg.grid.cells_x = static_cast<int>(r.integer("grid.cells_x", 256));
    cfg.grid.cells_y = static_cast<int>(r.integer("grid.cells_y", cfg.grid.dim == 2 ? 256 : 1));
    cfg.grid.length = r.num("grid.length", 1.0);
    const std::string bc = r.str("grid.boundary", "neumann");
    if (bc == "neumann")
        cfg.grid.boundary = Boundary::Neumann;
    else if (bc == "periodic")
        cfg.grid.boundary = Boundary::Periodic;
    else
        errors.push_back("grid.boundary must be neumann or periodic");
    if (cfg.grid.dim != 1 && cfg.grid.dim != 2) errors.push_back("grid.dim must be 1 or 2");
    if (cfg.grid.cells_x < 3) errors.push_back("grid.cells_x must be at least 3");
    if (cfg.grid.dim == 2 && cfg.grid.cells_y < 3)
        errors.push_back("grid.cells_y must be at least 3");
    if (!(cfg.grid.length > 0.0)) errors.push_back("grid.length must be positive");

    const std::string scaling = r.str("kinetics.scaling", "ms");
    if (scaling == "ms")
        cfg.kin.kind = kinetics::ScalingKind::MatkowskySivashinsky;
    else if (scaling == "threshold")
        cfg.kin.kind = kinetics::ScalingKind::Threshold;
    else
        errors.push_back("kinetics.scaling must be ms or threshold");
    cfg.kin.epsilon = r.num("kinetics.epsilon", 0.1);
    cfg.kin.sigma = r.num("kinetics.sigma", 0.0);
    cfg.kin.theta_bar = r.num("kinetics.theta_bar", 0.5);
    cfg.kin.kappa = r.num("kinetics.kappa", 0.5);
    if (!(cfg.kin.epsilon > 0.0)) errors.push_back("epsilon must be positive");
    if (!(cfg.kin.sigma >= 0.0 && cfg.kin.sigma < 1.0)) errors.push_back("sigma must lie in [0,1)");
    if (!(cfg.kin.theta_bar > 0.0 && cfg.kin.theta_bar < 1.0))
        errors.push_back("theta_bar must lie in (0,1)");
    if (cfg.kin.kind == kinetics::ScalingKind::Threshold && !(cfg.kin.kappa > 0.0))
        errors.push_back("threshold scaling requires kappa > 0");

    cfg.u_spec.kind = r.str("initial.u_profile", "uniform");
    cfg.u_spec.u_level = r.num("initial.u_level", -0.5);
    cfg.u_spec.u_right = r.num("initial.u_right", -1.0);
    cfg.u_spec.center = r.num("initial.center", 0.5);
    cfg.u_spec.width = r.num("initial.width", 0.1);
    cfg.u_spec.xs = r.list("initial.u_table_x");
    cfg.u_spec.values = r.list("initial.u_table_v");
    if (cfg.u_spec.kind != "uniform" && cfg.u_spec.kind != "step" &&
        cfg.u_spec.kind != "smooth-front" && cfg.u_spec.kind != "table")
        errors.push_back("initial.u_profile must be uniform, step, smooth-front, or table");
    if (!(cfg.u_spec.width > 0.0)) errors.push_back("initial.width must be positive");

    cfg.v_spec.kind = r.str("initial.v0_profile", "constant");
    cfg.v_spec.value = r.num("initial.v0_value", 1.0);
    cfg.v_spec.amplitude = r.num("initial.v0_amplitude", 0.0);
    cfg.v_spec.frequency_x = r.num("initial.v0_frequency_x", 1.0);
    cfg.v_spec.frequency_y = r.num("initial.v0_frequency_y", 0.0);
    cfg.v_spec.xs = r.list("initial.v0_table_x");
    cfg.v_spec.values = r.list("initial.v0_table_v");
    if (cfg.v_spec.kind != "constant" && cfg.v_spec.kind != "sinusoidal" &&
        cfg.v_spec.kind != "table")
        errors.push_back("initial.v0_profile must be constant, sinusoidal, or table");

    cfg.num.dt = r.num("numerics.dt", 1e-4);
    cfg.num.t_final = r.num("numerics.t_final", 1.0);
    cfg.num.snapshot_dt = r.num("numerics.snapshot_dt", 0.0);
    cfg.num.diffusion = r.str("numerics.diffusion", "backward-euler");
    cfg.num.splitting = r.str("numerics.splitting", "lie");
    cfg.num.trace_every = static_cast<int>(r.integer("numerics.trace_every", 50));
    cfg.num.fixed_point_ignition = r.boolean("numerics.fixed_point_ignition", false);
    cfg.num.monotone_tol = r.num("numerics.monotone_tol", 0.05);
    if (!(cfg.num.dt > 0.0)) errors.push_back("numerics.dt must be positive");
    if (!(cfg.num.t_final >= 0.0)) errors.push_back("numerics.t_final must be nonnegative");
    if (cfg.num.diffusion != "backward-euler" && cfg.num.diffusion != "crank-nicolson")
        errors.push_back("numerics.diffusion must be backward-euler or crank-nicolson");
    if (cfg.num.splitting != "lie" && cfg.num.splitting != "strang")
        errors.push_back("numerics.splitting must be lie or strang");

    cfg.wave.c = r.num("wave.c", 1.0);
    cfg.wave.c0 = r.num("wave.c0", 1.0);
    cfg.wave.M = r.num("wave.M", 6.0);
    cfg.wave.S = r.num("wave.S", 0.0);
    cfg.wave.ns = static_cast<int>(r.integer("wave.ns", 2000));
    cfg.wave.nx = static_cast<int>(r.integer("wave.nx", 64));
    cfg.wave.x_period = r.num("wave.x_period", 1.0);
    cfg.wave.rel_tol = r.num("wave.rel_tol", 1e-8);
    cfg.wave.max_iterations = r.integer("wave.max_iterations", 100000);
    cfg.wave.shoot = r.boolean("wave.shoot", true);
    if (cfg.experiment == "pulsating-wave" || cfg.experiment == "traveling-wave") {
        if (!(cfg.wave.c > 0.0)) errors.push_back("wave.c must be positive");
        if (!(cfg.wave.c0 > 0.0)) errors.push_back("wave.c0 must be positive");
        if (!(cfg.wave.M > 0.0)) errors.push_back("wave.M must be positive");
        if (cfg.wave.ns < 16 || cfg.wave.nx < 4)
            errors.push_back("wave.ns/nx too small for the moving-frame grid");
    }

    cfg.disp.c_values = r.list("dispersion.c_values");
    if (cfg.disp.c_values.empty() && cfg.experiment == "dispersion")
        errors.push_back("dispersion.c_values must be a nonempty list");
    cfg.disp.re_lo = r.num("dispersion.re_lo", 0.0);
    cfg.disp.re_hi = r.num("dispersion.re_hi", 8.0);
    cfg.disp.im_lo = r.num("dispersion.im_lo", -8.0);
    cfg.disp.im_hi = r.num("dispersion.im_hi", 8.0);
    cfg.disp.density = static_cast<int>(r.integer("dispersion.density", 32));
    if (cfg.experiment == "dispersion") {
        for (double c : cfg.disp.c_values)
            if (!(c > 0.0)) errors.push_back("dispersion.c_values entries must be positive");
        if (cfg.disp.density < 32) errors.push_back("dispersion.density must be at least 32");
    }

    cfg.conv.eps_values = r.list("convergence.eps_values");
    if (cfg.experiment == "eps-convergence") {
        for (std::size_t i = 1; i < cfg.conv.eps_values.size(); ++i)
            if (!(cfg.conv.eps_values[i] < cfg.conv.eps_values[i - 1]))
                errors.push_back("convergence.eps_values must be strictly decreasing");
        for (double e : cfg.conv.eps_values)
            if (!(e > 0.0)) errors.push_back("convergence.eps_values entries must be positive");
    }

    cfg.sweep.experiment = r.str("sweep.experiment", "");
    cfg.sweep.parameter = r.str("sweep.parameter", "");
    cfg.sweep.values = r.list("sweep.values");
    if (cfg.experiment == "sweep") {
        if (!kExperiments.count(cfg.sweep.experiment) || cfg.sweep.experiment == "sweep")
            errors.push_back("sweep.experiment must name a non-sweep experiment");
        static const std::set<std::string> sweepable = {
            "kinetics.epsilon", "wave.c", "wave.M", "numerics.dt", "initial.v0_amplitude"};
        if (!sweepable.count(cfg.sweep.parameter))
            errors.push_back("sweep.parameter must be one of kinetics.epsilon, wave.c, wave.M, "
                             "numerics.dt, initial.v0_amplitude");
    }

    cfg.out_dir = r.str("output.directory", "out");

    r.reject_unknown();
    if (!errors.empty()) throw ConfigError(errors);
    return cfg;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"cannot open config file '" + path + "'"});
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace shs::io
