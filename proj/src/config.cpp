#include "mildsim/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mildsim/csv.hpp"
#include "mildsim/errors.hpp"
#include "mildsim/expressions.hpp"

namespace mildsim {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            parts.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty()) parts.push_back(trim(cur));
    return parts;
}

double parse_double(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (trim(text.substr(used)).empty()) return v;
    } catch (...) {
    }
    throw ConfigError("config key '" + key + "': cannot parse number from '" + text + "'");
}

const std::set<std::string> kExperiments = {"simulate",   "picard",     "diagnose",
                                            "spike-demo", "gate-check", "tail-probe"};

} // namespace

KeyValueConfig KeyValueConfig::parse(const std::string& text) {
    KeyValueConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("config line " + std::to_string(lineno) + ": unterminated section");
            }
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) {
                throw ConfigError("config line " + std::to_string(lineno) + ": empty section name");
            }
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        }
        const std::string full = section.empty() ? key : section + "." + key;
        if (cfg.values_.count(full)) {
            throw ConfigError("config key '" + full + "' appears twice");
        }
        cfg.values_[full] = value;
    }
    return cfg;
}

bool KeyValueConfig::has(const std::string& key) const { return values_.count(key) > 0; }

void KeyValueConfig::set(const std::string& key, const std::string& value) {
    values_[key] = value;
}

void KeyValueConfig::set_default(const std::string& key, const std::string& value) {
    values_.emplace(key, value);
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
    read_.insert(key);
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

std::string KeyValueConfig::require_string(const std::string& key) const {
    read_.insert(key);
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("config key '" + key + "' is required");
    return it->second;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
    read_.insert(key);
    auto it = values_.find(key);
    return it == values_.end() ? fallback : parse_double(key, it->second);
}

int KeyValueConfig::get_int(const std::string& key, int fallback) const {
    const double v = get_double(key, static_cast<double>(fallback));
    const int i = static_cast<int>(std::llround(v));
    if (std::abs(v - i) > 1e-9) throw ConfigError("config key '" + key + "' must be an integer");
    return i;
}

std::uint64_t KeyValueConfig::get_uint64(const std::string& key, std::uint64_t fallback) const {
    read_.insert(key);
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        return std::stoull(trim(it->second));
    } catch (...) {
        throw ConfigError("config key '" + key + "' must be a nonnegative integer");
    }
}

std::vector<double> KeyValueConfig::get_double_list(const std::string& key,
                                                    std::vector<double> fallback) const {
    read_.insert(key);
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::vector<double> out;
    for (const std::string& part : split_list(it->second)) out.push_back(parse_double(key, part));
    return out;
}

std::vector<int> KeyValueConfig::get_int_list(const std::string& key,
                                              std::vector<int> fallback) const {
    read_.insert(key);
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::vector<int> out;
    for (const std::string& part : split_list(it->second)) {
        const double v = parse_double(key, part);
        const int i = static_cast<int>(std::llround(v));
        if (std::abs(v - i) > 1e-9) {
            throw ConfigError("config key '" + key + "' must hold integers");
        }
        out.push_back(i);
    }
    return out;
}

std::vector<std::string> KeyValueConfig::unread_keys() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : values_) {
        if (!read_.count(k)) out.push_back(k);
    }
    return out;
}

bool ValidationReport::fatal() const {
    return std::any_of(issues.begin(), issues.end(), [](const ValidationIssue& i) {
        return i.severity == ValidationIssue::Severity::Fatal;
    });
}

std::string ValidationReport::to_text() const {
    std::string out;
    for (const ValidationIssue& i : issues) {
        switch (i.severity) {
            case ValidationIssue::Severity::Fatal: out += "FATAL    "; break;
            case ValidationIssue::Severity::Warning: out += "WARNING  "; break;
            case ValidationIssue::Severity::Advisory: out += "ADVISORY "; break;
        }
        out += i.key + ": " + i.message + "\n";
    }
    return out;
}

namespace {

void apply_preset(KeyValueConfig& kv, const std::string& preset) {
    if (preset.empty()) return;
    if (preset != "heat-example") {
        throw ConfigError("config key 'preset': unknown preset '" + preset + "'");
    }
    kv.set_default("semigroup.kind", "heat");
    kv.set_default("semigroup.n_modes", "16");
    kv.set_default("drift.kind", "linear_in_state");
    kv.set_default("drift.profile", "decaying_sin(period=2, amplitude=0.5, rate=1)");
    kv.set_default("diffusion.kind", "linear_in_state");
    kv.set_default("diffusion.profile", "decaying_sin(period=2, amplitude=0.5, rate=1)");
    kv.set_default("initial.coeffs", "1");
    kv.set_default("solver.dt", "0.015625");
    kv.set_default("periodicity.omega", "2");
    kv.set_default("mc.paths", "2000");
}

std::string join_doubles(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += format_g17(v[i]);
    }
    return out;
}

std::string join_ints(const std::vector<int>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(v[i]);
    }
    return out;
}

} // namespace

RunConfig RunConfig::from_text(const std::string& text) {
    KeyValueConfig kv = KeyValueConfig::parse(text);
    RunConfig c;
    c.experiment = kv.require_string("experiment");
    c.preset = kv.get_string("preset", "");
    apply_preset(kv, c.preset);

    c.semigroup_kind = kv.get_string("semigroup.kind", c.semigroup_kind);
    c.n_modes = kv.get_int("semigroup.n_modes", c.n_modes);
    c.lambdas = kv.get_double_list("semigroup.lambda", {});
    if (c.semigroup_kind == "scalar" && !c.lambdas.empty()) {
        c.n_modes = static_cast<int>(c.lambdas.size());
    }

    c.drift.kind = kv.get_string("drift.kind", "zero");
    c.drift.profile = kv.get_string("drift.profile", "");
    c.drift.mode = kv.get_int("drift.mode", 1);
    c.diffusion.kind = kv.get_string("diffusion.kind", "zero");
    c.diffusion.profile = kv.get_string("diffusion.profile", "");
    c.diffusion.mode = kv.get_int("diffusion.mode", 1);

    c.initial_coeffs = kv.get_double_list("initial.coeffs", {1.0});

    c.omega = kv.get_double("periodicity.omega", c.omega);
    c.t_grid_points = kv.get_int("periodicity.t_grid_points", c.t_grid_points);
    c.n_schedule = kv.get_int_list("periodicity.n_schedule", c.n_schedule);
    c.p_list = kv.get_int_list("periodicity.p_list", c.p_list);
    c.thresholds.pointwise_tol = kv.get_double("periodicity.pointwise_tol", 1e-3);
    c.thresholds.uniform_tol = kv.get_double("periodicity.uniform_tol", 1e-3);
    c.thresholds.decay_ratio = kv.get_double("periodicity.decay_ratio", 0.2);
    c.thresholds.screen_tol = kv.get_double("periodicity.screen_tol", 0.1);
    {
        std::vector<int> tail_default;
        for (std::size_t i = c.n_schedule.size() / 2; i < c.n_schedule.size(); ++i) {
            tail_default.push_back(c.n_schedule[i]);
        }
        c.tail_n = kv.get_int_list("periodicity.tail_n", tail_default);
    }

    c.requested_dt = kv.get_double("solver.dt", c.dt);
    if (!(c.requested_dt > 0.0)) throw ConfigError("config key 'solver.dt' must be positive");
    if (!(c.omega > 0.0)) throw ConfigError("config key 'periodicity.omega' must be positive");
    const long steps_per_period = std::lround(std::ceil(c.omega / c.requested_dt - 1e-12));
    c.dt = c.omega / static_cast<double>(steps_per_period);
    c.dt_was_adjusted = std::abs(c.dt - c.requested_dt) > 1e-15 * c.requested_dt;

    double default_periods = 4.0;
    if (c.experiment == "diagnose" && !c.n_schedule.empty() && !c.p_list.empty()) {
        const int max_p = *std::max_element(c.p_list.begin(), c.p_list.end());
        default_periods = static_cast<double>(c.n_schedule.back() + max_p + 1);
    }
    c.horizon_periods = kv.get_double("solver.horizon_periods", default_periods);
    c.n_steps = static_cast<int>(std::lround(std::ceil(c.horizon_periods * c.omega / c.dt - 1e-9)));

    c.mc_paths = kv.get_int("mc.paths", c.mc_paths);
    c.seed = kv.get_uint64("mc.seed", c.seed);

    c.picard_max_iters = kv.get_int("picard.max_iters", c.picard_max_iters);
    c.picard_tol = kv.get_double("picard.tol", c.picard_tol);

    c.spike_grid_points = kv.get_int("spike.grid_points", c.spike_grid_points);
    c.spike_n_max = kv.get_int("spike.n_max", c.spike_n_max);
    c.spike_tol = kv.get_double("spike.tol", c.spike_tol);
    c.spike_sup_schedule = kv.get_int_list("spike.sup_schedule", c.spike_sup_schedule);

    c.probe_kind = kv.get_string("probe.kind", c.probe_kind);
    c.probe_t = kv.get_double("probe.t", c.probe_t);
    c.probe_n_list = kv.get_int_list("probe.n_list", c.probe_n_list);
    c.probe_omega = kv.get_double("probe.omega", c.probe_omega);
    const double probe_dt_req = kv.get_double("probe.quad_dt", c.probe_quad_dt);
    if (!(probe_dt_req > 0.0) || !(c.probe_omega > 0.0)) {
        throw ConfigError("config keys 'probe.quad_dt' and 'probe.omega' must be positive");
    }
    const long probe_steps = std::lround(std::ceil(c.probe_omega / probe_dt_req - 1e-12));
    c.probe_quad_dt = c.probe_omega / static_cast<double>(probe_steps);
    c.probe_paths = kv.get_int("probe.paths", c.probe_paths);
    c.probe_drift_profile = kv.get_string("probe.drift_profile", c.probe_drift_profile);
    c.probe_noise_profile = kv.get_string("probe.noise_profile", c.probe_noise_profile);
    c.probe_mode = kv.get_int("probe.mode", 1);

    if (kv.has("gate.psi_sup")) c.gate_psi_sup = kv.get_double("gate.psi_sup", 0.0);
    if (kv.has("gate.phi_sup")) c.gate_phi_sup = kv.get_double("gate.phi_sup", 0.0);

    c.physical_x_points = kv.get_int("physical.x_points", c.physical_x_points);
    c.physical_times = kv.get_double_list("physical.times", {});

    c.out_dir = kv.get_string("output.dir", c.out_dir);

    const std::vector<std::string> unknown = kv.unread_keys();
    if (!unknown.empty()) {
        std::string msg = "unknown config key(s):";
        for (const std::string& k : unknown) msg += " '" + k + "'";
        throw ConfigError(msg);
    }
    return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_text(buf.str());
}

std::string RunConfig::echo() const {
    std::ostringstream out;
    out << "experiment = " << experiment << "\n";
    if (!preset.empty()) out << "preset = " << preset << "\n";
    out << "\n[semigroup]\nkind = " << semigroup_kind << "\n";
    out << "n_modes = " << n_modes << "\n";
    if (!lambdas.empty()) out << "lambda = " << join_doubles(lambdas) << "\n";
    out << "\n[drift]\nkind = " << drift.kind << "\n";
    if (!drift.profile.empty()) out << "profile = " << drift.profile << "\n";
    out << "mode = " << drift.mode << "\n";
    out << "\n[diffusion]\nkind = " << diffusion.kind << "\n";
    if (!diffusion.profile.empty()) out << "profile = " << diffusion.profile << "\n";
    out << "mode = " << diffusion.mode << "\n";
    out << "\n[initial]\ncoeffs = " << join_doubles(initial_coeffs) << "\n";
    out << "\n[solver]\ndt = " << format_g17(dt) << "\n";
    out << "horizon_periods = " << format_g17(horizon_periods) << "\n";
    out << "\n[mc]\npaths = " << mc_paths << "\n";
    out << "seed = " << seed << "\n";
    out << "\n[picard]\nmax_iters = " << picard_max_iters << "\n";
    out << "tol = " << format_g17(picard_tol) << "\n";
    out << "\n[periodicity]\nomega = " << format_g17(omega) << "\n";
    out << "t_grid_points = " << t_grid_points << "\n";
    out << "n_schedule = " << join_ints(n_schedule) << "\n";
    out << "p_list = " << join_ints(p_list) << "\n";
    out << "pointwise_tol = " << format_g17(thresholds.pointwise_tol) << "\n";
    out << "uniform_tol = " << format_g17(thresholds.uniform_tol) << "\n";
    out << "decay_ratio = " << format_g17(thresholds.decay_ratio) << "\n";
    out << "screen_tol = " << format_g17(thresholds.screen_tol) << "\n";
    out << "tail_n = " << join_ints(tail_n) << "\n";
    out << "\n[spike]\ngrid_points = " << spike_grid_points << "\n";
    out << "n_max = " << spike_n_max << "\n";
    out << "tol = " << format_g17(spike_tol) << "\n";
    out << "sup_schedule = " << join_ints(spike_sup_schedule) << "\n";
    out << "\n[probe]\nkind = " << probe_kind << "\n";
    out << "t = " << format_g17(probe_t) << "\n";
    out << "n_list = " << join_ints(probe_n_list) << "\n";
    out << "omega = " << format_g17(probe_omega) << "\n";
    out << "quad_dt = " << format_g17(probe_quad_dt) << "\n";
    out << "paths = " << probe_paths << "\n";
    out << "drift_profile = " << probe_drift_profile << "\n";
    out << "noise_profile = " << probe_noise_profile << "\n";
    out << "mode = " << probe_mode << "\n";
    if (gate_psi_sup || gate_phi_sup) {
        out << "\n[gate]\n";
        if (gate_psi_sup) out << "psi_sup = " << format_g17(*gate_psi_sup) << "\n";
        if (gate_phi_sup) out << "phi_sup = " << format_g17(*gate_phi_sup) << "\n";
    }
    out << "\n[physical]\nx_points = " << physical_x_points << "\n";
    if (!physical_times.empty()) out << "times = " << join_doubles(physical_times) << "\n";
    out << "\n[output]\ndir = " << out_dir << "\n";
    return out.str();
}

ExpStableSemigroup RunConfig::build_semigroup() const {
    if (semigroup_kind == "heat") return heat_semigroup(n_modes);
    if (semigroup_kind == "scalar") {
        if (lambdas.empty()) {
            throw ConfigError("config key 'semigroup.lambda' is required for kind = scalar");
        }
        return scalar_semigroup(lambdas);
    }
    throw ConfigError("config key 'semigroup.kind': unknown kind '" + semigroup_kind + "'");
}

CoefficientFn RunConfig::build_coefficient(const CoefficientSection& section) const {
    if (section.kind == "zero") return zero_coefficient();
    if (section.profile.empty()) {
        throw ConfigError("coefficient kind '" + section.kind + "' needs a profile expression");
    }
    const PeriodicLimitFn psi = parse_expression(section.profile);
    if (section.kind == "additive") return additive_profile(psi, n_modes, section.mode);
    if (section.kind == "linear_in_state") return linear_in_state(psi);
    throw ConfigError("unknown coefficient kind '" + section.kind + "'");
}

SolverConfig RunConfig::build_solver_config() const {
    SolverConfig cfg;
    cfg.dt = dt;
    cfg.n_steps = n_steps;
    cfg.n_paths = mc_paths;
    cfg.seed = seed;
    if (static_cast<int>(initial_coeffs.size()) > n_modes) {
        throw ConfigError("config key 'initial.coeffs' has more entries than n_modes");
    }
    cfg.initial = SpectralField(n_modes);
    for (std::size_t i = 0; i < initial_coeffs.size(); ++i) cfg.initial.coeffs[i] = initial_coeffs[i];
    return cfg;
}

PeriodicityPlan RunConfig::build_plan() const {
    PeriodicityPlan plan;
    plan.omega = omega;
    plan.n_schedule = n_schedule;
    plan.p_list = p_list;
    plan.thresholds = thresholds;
    const long steps_per_period = std::lround(omega / dt);
    if (t_grid_points < 1 || t_grid_points > steps_per_period) {
        throw ConfigError("config key 'periodicity.t_grid_points' must be in [1, omega/dt]");
    }
    std::vector<double> grid;
    long prev_step = -1;
    for (int j = 0; j < t_grid_points; ++j) {
        const long step = static_cast<long>(j) * steps_per_period / t_grid_points;
        if (step == prev_step) continue;
        prev_step = step;
        grid.push_back(static_cast<double>(step) * dt);
    }
    plan.t_grid = grid;
    return plan;
}

ValidationReport RunConfig::validate() const {
    ValidationReport report;
    auto fatal = [&](const std::string& key, const std::string& msg) {
        report.issues.push_back({ValidationIssue::Severity::Fatal, key, msg});
    };
    auto warn = [&](const std::string& key, const std::string& msg) {
        report.issues.push_back({ValidationIssue::Severity::Warning, key, msg});
    };
    auto advise = [&](const std::string& key, const std::string& msg) {
        report.issues.push_back({ValidationIssue::Severity::Advisory, key, msg});
    };

    if (!kExperiments.count(experiment)) {
        fatal("experiment", "unknown experiment '" + experiment + "'");
        return report;
    }

    if (dt_was_adjusted) {
        warn("solver.dt", "adjusted from " + format_g17(requested_dt) + " to " + format_g17(dt) +
                              " so omega is an integer multiple of dt");
    }

    bool semigroup_ok = true;
    try {
        (void)build_semigroup();
    } catch (const ConfigError& e) {
        semigroup_ok = false;
        fatal("semigroup", e.what());
    }

    const bool solver_experiment =
        experiment == "simulate" || experiment == "picard" || experiment == "diagnose";

    bool coefficients_ok = true;
    auto check_coefficient = [&](const CoefficientSection& section, const std::string& name) {
        if (section.kind != "zero" && section.kind != "additive" &&
            section.kind != "linear_in_state") {
            fatal(name + ".kind", "unknown coefficient kind '" + section.kind + "'");
            coefficients_ok = false;
            return;
        }
        if (section.kind == "zero") return;
        if (section.profile.empty()) {
            fatal(name + ".profile", "required for kind '" + section.kind + "'");
            coefficients_ok = false;
            return;
        }
        try {
            const PeriodicLimitFn psi = parse_expression(section.profile);
            if (std::abs(psi.omega - omega) > 1e-12 * std::max(1.0, omega)) {
                warn(name + ".profile", "profile period " + format_g17(psi.omega) +
                                            " differs from periodicity.omega " + format_g17(omega));
            }
        } catch (const ConfigError& e) {
            fatal(name + ".profile", e.what());
            coefficients_ok = false;
            return;
        }
        if (section.kind == "additive" && (section.mode < 1 || section.mode > n_modes)) {
            fatal(name + ".mode", "must be in [1, n_modes]");
            coefficients_ok = false;
        }
    };
    if (solver_experiment) {
        check_coefficient(drift, "drift");
        check_coefficient(diffusion, "diffusion");
    }

    if (solver_experiment) {
        if (mc_paths < 1) fatal("mc.paths", "must be >= 1");
        if (static_cast<int>(initial_coeffs.size()) > n_modes) {
            fatal("initial.coeffs", "more entries than semigroup.n_modes");
        }
        if (n_steps < 1) fatal("solver.horizon_periods", "resolved horizon has no steps");
    }

    if (experiment == "diagnose") {
        const long steps_per_period = std::lround(omega / dt);
        if (t_grid_points < 1 || t_grid_points > steps_per_period) {
            fatal("periodicity.t_grid_points",
                  "must be in [1, omega/dt] = [1, " + std::to_string(steps_per_period) + "]");
        }
        if (n_schedule.empty()) {
            fatal("periodicity.n_schedule", "must not be empty");
        } else {
            for (std::size_t i = 0; i + 1 < n_schedule.size(); ++i) {
                if (n_schedule[i + 1] <= n_schedule[i]) {
                    fatal("periodicity.n_schedule", "must be strictly increasing");
                    break;
                }
            }
        }
        for (int p : p_list) {
            if (p < 1) fatal("periodicity.p_list", "entries must be >= 1");
        }

        if (!n_schedule.empty() && !p_list.empty()) {
            const double needed =
                (n_schedule.back() + *std::max_element(p_list.begin(), p_list.end()) + 1) *
                omega;
            if (n_steps * dt + 1e-9 < needed) {
                fatal("solver.horizon_periods",
                      "horizon " + format_g17(n_steps * dt) +
                          " is shorter than the diagnostics requirement " + format_g17(needed));
            }
        }
    }

    // Contraction and gate advisories. Both are sufficient conditions, so
    // failing them is informational, not fatal.
    if (solver_experiment && semigroup_ok && coefficients_ok) {
        try {
            const ExpStableSemigroup sg = build_semigroup();
            const CoefficientFn f = build_coefficient(drift);
            const CoefficientFn g = build_coefficient(diffusion);
            const double kappa_state = contraction_constant(
                sg.growth_constant(), sg.decay_rate(), f.lipschitz, g.lipschitz);
            if (kappa_state >= 1.0) {
                advise("picard", "state-convention contraction constant " +
                                     format_g17(kappa_state) +
                                     " >= 1: no fixed-point guarantee");
            }
            if (drift.kind == "linear_in_state" && diffusion.kind == "linear_in_state" &&
                semigroup_kind == "heat") {
                const double psi_sup = parse_expression(drift.profile).sup_bound;
                const double phi_sup = parse_expression(diffusion.profile).sup_bound;
                const GateResult gate = example_gate(psi_sup, phi_sup);
                if (!gate.holds) {
                    advise("gate", "sup-norm gate fails: " + format_g17(gate.lhs) +
                                       " >= " + format_g17(gate.rhs) +
                                       " (sufficient condition only)");
                }
            }
        } catch (const ConfigError& e) {
            fatal("coefficients", e.what());
        }
    }

    if (experiment == "gate-check") {
        if (!gate_psi_sup || !gate_phi_sup) {
            fatal("gate.psi_sup", "gate-check requires gate.psi_sup and gate.phi_sup");
        } else if (*gate_psi_sup < 0.0 || *gate_phi_sup < 0.0) {
            fatal("gate.psi_sup", "sup norms must be >= 0");
        }
    }

    if (experiment == "spike-demo") {
        if (spike_grid_points < 1) fatal("spike.grid_points", "must be >= 1");
        if (spike_n_max < 2) fatal("spike.n_max", "must be >= 2");
        for (std::size_t i = 0; i + 1 < spike_sup_schedule.size(); ++i) {
            if (spike_sup_schedule[i + 1] <= spike_sup_schedule[i]) {
                fatal("spike.sup_schedule", "must be strictly increasing");
                break;
            }
        }
    }

    if (experiment == "tail-probe") {
        if (probe_kind != "drift" && probe_kind != "noise" && probe_kind != "both") {
            fatal("probe.kind", "must be drift, noise or both");
        }
        if (probe_paths < 1) fatal("probe.paths", "must be >= 1");
        if (probe_t < 0.0) fatal("probe.t", "must be >= 0");
        if (probe_mode < 1 || probe_mode > n_modes) fatal("probe.mode", "must be in [1, n_modes]");
        if (probe_n_list.empty()) {
            fatal("probe.n_list", "must not be empty");
        } else {
            for (int n : probe_n_list) {
                if (n < 1) fatal("probe.n_list", "entries must be >= 1");
            }
        }
        for (const auto& [key, text] :
             {std::pair<std::string, std::string>{"probe.drift_profile", probe_drift_profile},
              std::pair<std::string, std::string>{"probe.noise_profile", probe_noise_profile}}) {
            try {
                (void)parse_expression(text);
            } catch (const ConfigError& e) {
                fatal(key, e.what());
            }
        }
    }

    if (physical_x_points < 0) fatal("physical.x_points", "must be >= 0");
    if (out_dir.empty()) fatal("output.dir", "must not be empty");
    return report;
}

} // namespace mildsim
