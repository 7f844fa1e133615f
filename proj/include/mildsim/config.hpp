#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mildsim/coefficients.hpp"
#include "mildsim/diagnostics.hpp"
#include "mildsim/semigroup.hpp"
#include "mildsim/solver.hpp"

namespace mildsim {

/// Flat sectioned key-value text: `[section]` lines introduce a prefix,
/// `key = value` lines define entries, `#` starts a comment. Lists are
/// comma-separated. Keys read through the typed getters are tracked so
/// validation can name unknown (never-read) keys.
class KeyValueConfig {
public:
    static KeyValueConfig parse(const std::string& text);

    bool has(const std::string& key) const;
    void set(const std::string& key, const std::string& value);
    void set_default(const std::string& key, const std::string& value);

    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::string require_string(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    std::uint64_t get_uint64(const std::string& key, std::uint64_t fallback) const;
    std::vector<double> get_double_list(const std::string& key,
                                        std::vector<double> fallback) const;
    std::vector<int> get_int_list(const std::string& key, std::vector<int> fallback) const;

    std::vector<std::string> unread_keys() const;

private:
    std::map<std::string, std::string> values_;
    mutable std::set<std::string> read_;
};

struct CoefficientSection {
    std::string kind = "zero"; // zero | additive | linear_in_state
    std::string profile;       // registry expression
    int mode = 1;              // additive target mode
};

struct ValidationIssue {
    enum class Severity { Fatal, Warning, Advisory };
    Severity severity;
    std::string key;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool fatal() const;
    std::string to_text() const;
};

/// Fully resolved experiment configuration: every default is materialized so
/// echo() reproduces the run exactly.
struct RunConfig {
    std::string experiment; // simulate | picard | diagnose | spike-demo | gate-check | tail-probe
    std::string preset;     // "" | heat-example

    std::string semigroup_kind = "heat"; // heat | scalar
    int n_modes = 16;
    std::vector<double> lambdas;

    CoefficientSection drift;
    CoefficientSection diffusion;

    std::vector<double> initial_coeffs;

    double dt = 1.0 / 64.0;
    double requested_dt = 1.0 / 64.0; // before the omega-divisibility adjustment
    double horizon_periods = 0.0;     // in units of omega; 0 = derived from the plan
    int n_steps = 0;                  // resolved

    int mc_paths = 2000;
    std::uint64_t seed = 1;

    int picard_max_iters = 32;
    double picard_tol = 1e-8;

    double omega = 2.0;
    int t_grid_points = 8;
    std::vector<int> n_schedule = {1, 2, 4, 8, 16};
    std::vector<int> p_list = {1};
    PeriodicityThresholds thresholds;
    std::vector<int> tail_n;

    int spike_grid_points = 256;
    int spike_n_max = 512;
    double spike_tol = 1e-9;
    std::vector<int> spike_sup_schedule = {1, 2, 4, 8, 16};

    std::string probe_kind = "both"; // drift | noise | both
    double probe_t = 0.5;
    std::vector<int> probe_n_list = {1, 2, 3, 4};
    double probe_quad_dt = 1e-3;
    int probe_paths = 4000;
    std::string probe_drift_profile = "const(1.0)";
    std::string probe_noise_profile = "const(1.0)";
    double probe_omega = 1.0;
    int probe_mode = 1;

    std::optional<double> gate_psi_sup;
    std::optional<double> gate_phi_sup;

    int physical_x_points = 101; // snapshot grid; files written only when times are set
    std::vector<double> physical_times;

    std::string out_dir = "out";

    bool dt_was_adjusted = false;

    static RunConfig from_text(const std::string& text);
    static RunConfig from_file(const std::string& path);

    ValidationReport validate() const;
    std::string echo() const;

    ExpStableSemigroup build_semigroup() const;
    CoefficientFn build_coefficient(const CoefficientSection& section) const;
    SolverConfig build_solver_config() const;
    PeriodicityPlan build_plan() const;
};

} // namespace mildsim
