#include "mildsim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "mildsim/csv.hpp"
#include "mildsim/diagnostics.hpp"
#include "mildsim/errors.hpp"
#include "mildsim/expressions.hpp"
#include "mildsim/parallel.hpp"
#include "mildsim/probes.hpp"
#include "mildsim/rng.hpp"
#include "mildsim/version.hpp"

namespace mildsim {

namespace {

using json = nlohmann::ordered_json;

class ArtifactWriter {
public:
    ArtifactWriter(const std::filesystem::path& dir, const RunConfig& cfg)
        : dir_(dir), manifest_(json::object()) {
        std::filesystem::create_directories(dir);
        manifest_["schema_version"] = kManifestSchemaVersion;
        manifest_["generator"] = std::string("mildsim ") + kVersion;
        manifest_["experiment"] = cfg.experiment;
        manifest_["seed"] = cfg.seed;
        manifest_["threads"] = thread_count();
        manifest_["dt"] = cfg.dt;
        if (cfg.dt_was_adjusted) {
            manifest_["dt_adjustment"] = {{"requested", cfg.requested_dt}, {"used", cfg.dt}};
        }
        manifest_["config_echo"] = cfg.echo();
        manifest_["artifacts"] = json::array();
    }

    CsvFile csv(const std::string& name, const std::string& header) {
        manifest_["artifacts"].push_back(name);
        names_.push_back(name);
        return CsvFile(dir_ / name, header);
    }

    json& manifest() { return manifest_; }
    const std::vector<std::string>& names() const { return names_; }

    void write_json(const std::string& name, const json& doc) {
        manifest_["artifacts"].push_back(name);
        names_.push_back(name);
        std::ofstream out(dir_ / name, std::ios::binary);
        out << doc.dump(2) << "\n";
    }

    void finalize() {
        std::ofstream out(dir_ / "manifest.json", std::ios::binary);
        out << manifest_.dump(2) << "\n";
    }

private:
    std::filesystem::path dir_;
    json manifest_;
    std::vector<std::string> names_;
};

void add_kappa_and_gate(const RunConfig& cfg, json& manifest) {
    const bool solver_experiment = cfg.experiment == "simulate" || cfg.experiment == "picard" ||
                                   cfg.experiment == "diagnose";
    if (!solver_experiment) return;
    const ExpStableSemigroup sg = cfg.build_semigroup();
    const CoefficientFn f = cfg.build_coefficient(cfg.drift);
    const CoefficientFn g = cfg.build_coefficient(cfg.diffusion);
    // Squared-norm convention (E||f(t,X)-f(t,Y)||^2 <= L E||X-Y||^2).
    manifest["kappa_state"] = contraction_constant(sg.growth_constant(), sg.decay_rate(),
                                                   f.lipschitz, g.lipschitz);
    // Sup-norm convention, reported alongside for comparison.
    if (cfg.drift.kind != "zero" && cfg.diffusion.kind != "zero") {
        const double psi_sup =
            cfg.drift.profile.empty() ? 0.0 : parse_expression(cfg.drift.profile).sup_bound;
        const double phi_sup = cfg.diffusion.profile.empty()
                                   ? 0.0
                                   : parse_expression(cfg.diffusion.profile).sup_bound;
        manifest["kappa_sup"] = contraction_constant(sg.growth_constant(), sg.decay_rate(),
                                                     psi_sup, phi_sup);
        if (cfg.drift.kind == "linear_in_state" && cfg.diffusion.kind == "linear_in_state" &&
            cfg.semigroup_kind == "heat") {
            const GateResult gate = example_gate(psi_sup, phi_sup);
            manifest["gate"] = {{"holds", gate.holds}, {"lhs", gate.lhs}, {"rhs", gate.rhs}};
        }
    }
}

void write_moments_csv(ArtifactWriter& w, const std::vector<MomentRow>& rows) {
    CsvFile csv = w.csv("trajectory_stats.csv", "t,E_norm2,std_error");
    for (const MomentRow& r : rows) csv.row(r.t, r.mean_norm2, r.std_error);
}

void write_physical_snapshots(ArtifactWriter& w, const RunConfig& cfg, const PathEnsemble& ens) {
    if (cfg.physical_x_points <= 0 || cfg.physical_times.empty()) return;
    std::vector<double> xs(static_cast<std::size_t>(cfg.physical_x_points));
    const int denom = std::max(1, cfg.physical_x_points - 1);
    for (int j = 0; j < cfg.physical_x_points; ++j) {
        xs[static_cast<std::size_t>(j)] = static_cast<double>(j) / denom;
    }
    int index = 0;
    for (double t : cfg.physical_times) {
        const int step = ens.step_of_time(t);
        // Ensemble-mean coefficients, then physical-space evaluation.
        SpectralField mean(ens.n_modes());
        for (int m = 0; m < ens.n_modes(); ++m) {
            const MeanVar mv = reduce_mean_var(ens.n_paths(), [&](std::int64_t p) {
                return ens.field(static_cast<int>(p), step)[static_cast<std::size_t>(m)];
            });
            mean.coeffs[static_cast<std::size_t>(m)] = mv.mean;
        }
        const std::vector<double> u = to_physical(mean.coeffs, xs);
        CsvFile csv = w.csv("snapshot_" + std::to_string(index) + ".csv", "x,u");
        for (std::size_t j = 0; j < xs.size(); ++j) csv.row(xs[j], u[j]);
        ++index;
    }
}

std::vector<int> snapshot_steps(const RunConfig& cfg) {
    std::vector<int> steps;
    for (double t : cfg.physical_times) {
        const double raw = t / cfg.dt;
        const long step = std::lround(raw);
        if (std::abs(raw - step) > 1e-9 * std::max(1.0, raw) || step < 0 || step > cfg.n_steps) {
            throw ConfigError("config key 'physical.times': " + format_g17(t) +
                              " is not a stored step");
        }
        steps.push_back(static_cast<int>(step));
    }
    return steps;
}

int run_simulate(const RunConfig& cfg, ArtifactWriter& w, ExperimentResult& result) {
    const ExpStableSemigroup sg = cfg.build_semigroup();
    const CoefficientFn f = cfg.build_coefficient(cfg.drift);
    const CoefficientFn g = cfg.build_coefficient(cfg.diffusion);
    const SolverConfig scfg = cfg.build_solver_config();
    std::vector<int> keep = snapshot_steps(cfg);
    keep.push_back(cfg.n_steps);
    const SimulationSummary sim = integrate_moments(sg, f, g, scfg, keep);
    write_moments_csv(w, sim.moments);
    write_physical_snapshots(w, cfg, sim.slices);
    const SquareMeanEstimate final_est = square_mean_norm(sim.slices, cfg.n_steps);
    w.manifest()["final_square_mean"] = {{"t", sim.slices.time_of_step(cfg.n_steps)},
                                         {"value", final_est.value},
                                         {"std_error", final_est.std_error}};
    result.message = "simulated " + std::to_string(cfg.mc_paths) + " paths over " +
                     std::to_string(cfg.n_steps) + " steps";
    return 0;
}

int run_picard(const RunConfig& cfg, ArtifactWriter& w, ExperimentResult& result) {
    const ExpStableSemigroup sg = cfg.build_semigroup();
    const CoefficientFn f = cfg.build_coefficient(cfg.drift);
    const CoefficientFn g = cfg.build_coefficient(cfg.diffusion);
    const SolverConfig scfg = cfg.build_solver_config();
    PicardConfig pc;
    pc.max_iters = cfg.picard_max_iters;
    pc.tol = cfg.picard_tol;
    pc.kappa = contraction_constant(sg.growth_constant(), sg.decay_rate(), f.lipschitz,
                                    g.lipschitz);
    const PicardResult pr = picard_solve(sg, f, g, scfg, pc);

    CsvFile res = w.csv("picard_residuals.csv", "iteration,residual");
    for (std::size_t i = 0; i < pr.residuals.size(); ++i) {
        res.row(static_cast<int>(i + 1), pr.residuals[i]);
    }

    // Cross-check against direct integration on the same driver.
    const PathEnsemble direct = integrate(sg, f, g, scfg);
    const double discrepancy = sup_square_mean_distance(pr.solution, direct);
    const double scale = sup_square_mean_norm(direct);

    std::vector<MomentRow> rows;
    rows.reserve(pr.solution.stored_steps().size());
    for (int step : pr.solution.stored_steps()) {
        const SquareMeanEstimate est = square_mean_norm(pr.solution, step);
        rows.push_back({pr.solution.time_of_step(step), est.value, est.std_error});
    }
    write_moments_csv(w, rows);
    write_physical_snapshots(w, cfg, pr.solution);

    w.manifest()["picard"] = {{"iterations", pr.iterations},
                              {"converged", pr.converged},
                              {"contraction_guaranteed", pr.contraction_guaranteed},
                              {"fixed_point_discrepancy", discrepancy},
                              {"solution_scale", scale}};
    result.message = pr.converged
                         ? "picard converged in " + std::to_string(pr.iterations) + " sweeps"
                         : "picard did not reach tol within max_iters (residuals reported)";
    return 0;
}

json report_to_json(const PeriodicityReport& r) {
    json evidence;
    evidence["norm_factor"] = r.norm_factor;
    evidence["screen_pass"] = r.screen_pass;
    evidence["pointwise_pass"] = r.pointwise_pass;
    evidence["uniform_pass"] = r.uniform_pass;
    evidence["worst_pointwise_decay_ratio"] = r.worst_pointwise_ratio;
    evidence["uniform_decay_ratio"] = r.uniform_ratio;
    evidence["notes"] = r.notes;
    return json{{"verdict", to_string(r.verdict)}, {"evidence", evidence}};
}

int run_diagnose(const RunConfig& cfg, ArtifactWriter& w, bool require_verdict,
                 ExperimentResult& result) {
    const ExpStableSemigroup sg = cfg.build_semigroup();
    const CoefficientFn f = cfg.build_coefficient(cfg.drift);
    const CoefficientFn g = cfg.build_coefficient(cfg.diffusion);
    const SolverConfig scfg = cfg.build_solver_config();
    const PeriodicityPlan plan = cfg.build_plan();

    std::vector<int> keep = plan.required_steps(cfg.dt, 0.0);
    for (int s : snapshot_steps(cfg)) keep.push_back(s);
    const SimulationSummary sim = integrate_moments(sg, f, g, scfg, keep);
    write_moments_csv(w, sim.moments);
    write_physical_snapshots(w, cfg, sim.slices);

    const PeriodicityReport report = classify_process(sim.slices, plan);

    CsvFile cauchy = w.csv("cauchy_table.csv", "t,n,p,D,std_error");
    for (const CauchyRow& row : report.cauchy_table) {
        cauchy.row(row.t, row.n, row.p, row.value, row.std_error);
    }
    CsvFile sup = w.csv("sup_curve.csv", "n,sup_discrepancy,max_std_error");
    for (const SupCurveRow& row : report.sup_curve) {
        sup.row(row.n, row.sup, row.max_std_error);
    }
    CsvFile screen = w.csv("screen.csv", "t,n,delta,std_error");
    for (const ScreenRow& row : report.screen) {
        screen.row(row.t, row.n, row.delta, row.std_error);
    }

    if (!cfg.tail_n.empty() && report.verdict != ProcessClass::Inconclusive) {
        const MeanFunctionEstimate mean =
            periodic_part_estimate(sim.slices, cfg.omega, cfg.tail_n, plan.t_grid);
        CsvFile mf = w.csv("mean_function.csv", "t,mode,value");
        for (std::size_t i = 0; i < mean.t.size(); ++i) {
            for (int m = 0; m < sim.slices.n_modes(); ++m) {
                mf.row(mean.t[i], m + 1, mean.mean[i].coeffs[static_cast<std::size_t>(m)]);
            }
        }
        w.manifest()["mean_function_seam_residual"] = mean.seam_residual;
    }

    w.write_json("report.json", report_to_json(report));
    w.manifest()["verdict"] = to_string(report.verdict);
    result.verdict = to_string(report.verdict);
    result.message = "verdict: " + result.verdict;
    if (require_verdict && report.verdict == ProcessClass::Inconclusive) return 4;
    return 0;
}

int run_spike_demo(const RunConfig& cfg, ArtifactWriter& w, ExperimentResult& result) {
    const PeriodicLimitFn spike = spike_fn();
    std::vector<double> grid(static_cast<std::size_t>(cfg.spike_grid_points));
    for (int j = 0; j < cfg.spike_grid_points; ++j) {
        grid[static_cast<std::size_t>(j)] = j * spike.omega / cfg.spike_grid_points;
    }
    const FnClassification r = classify_deterministic(spike, grid, cfg.spike_n_max,
                                                      cfg.spike_tol, cfg.spike_sup_schedule);

    CsvFile sup = w.csv("classification_sup.csv", "n,sup_discrepancy");
    for (const SupDiscrepancyRow& row : r.sup_table) sup.row(row.n, row.sup_discrepancy);
    CsvFile pw = w.csv("pointwise.csv", "t,limit,converged,last_delta");
    for (const PointwiseRow& row : r.pointwise) {
        pw.row(row.t, row.limit, row.converged ? 1 : 0, row.last_delta);
    }
    w.write_json("report.json",
                 json{{"verdict", to_string(r.verdict)},
                      {"all_pointwise_converged", r.all_pointwise_converged},
                      {"uniform_converged", r.uniform_converged},
                      {"n_max", r.n_max},
                      {"tol", r.tol}});
    w.manifest()["verdict"] = to_string(r.verdict);
    result.verdict = to_string(r.verdict);
    result.message = "verdict: " + result.verdict;
    return 0;
}

int run_gate_check(const RunConfig& cfg, ArtifactWriter& w, ExperimentResult& result) {
    const GateResult gate = example_gate(*cfg.gate_psi_sup, *cfg.gate_phi_sup);
    w.manifest()["gate"] = {{"holds", gate.holds}, {"lhs", gate.lhs}, {"rhs", gate.rhs}};
    w.write_json("report.json", json{{"holds", gate.holds}, {"lhs", gate.lhs}, {"rhs", gate.rhs}});
    result.verdict = gate.holds ? "holds" : "fails";
    result.message = "gate " + result.verdict + ": lhs = " + format_g17(gate.lhs) +
                     ", rhs = " + format_g17(gate.rhs);
    return 0;
}

int run_tail_probe(const RunConfig& cfg, ArtifactWriter& w, ExperimentResult& result) {
    const ExpStableSemigroup sg = cfg.build_semigroup();
    auto scalar_profile_process = [&](const std::string& text) {
        const PeriodicLimitFn fn = parse_expression(text);
        const std::size_t mode_idx = static_cast<std::size_t>(cfg.probe_mode - 1);
        SampledProcess p;
        p.n_paths = 1;
        p.at = [eval = fn.eval, mode_idx](int, double time, std::span<double> out) {
            for (double& v : out) v = 0.0;
            out[mode_idx] = eval(time);
        };
        return p;
    };

    if (cfg.probe_kind == "drift" || cfg.probe_kind == "both") {
        const auto rows = tail_convolution_probe_drift(
            sg, scalar_profile_process(cfg.probe_drift_profile), cfg.probe_omega,
            cfg.probe_n_list, cfg.probe_t, cfg.probe_quad_dt);
        CsvFile csv = w.csv("probe_drift.csv", "n,level,level_se,diff,diff_se");
        for (const ProbeRow& r : rows) csv.row(r.n, r.level, r.level_se, r.diff, r.diff_se);
    }
    if (cfg.probe_kind == "noise" || cfg.probe_kind == "both") {
        const BrownianDriver driver(cfg.seed, cfg.probe_quad_dt);
        const auto rows = tail_convolution_probe_noise(
            sg, scalar_profile_process(cfg.probe_noise_profile), driver, cfg.probe_omega,
            cfg.probe_n_list, cfg.probe_t, cfg.probe_paths);
        CsvFile csv = w.csv("probe_noise.csv", "n,level,level_se,diff,diff_se");
        for (const ProbeRow& r : rows) csv.row(r.n, r.level, r.level_se, r.diff, r.diff_se);
    }
    result.message = "tail probes written";
    return 0;
}

} // namespace

ExperimentResult run_experiment(const RunConfig& cfg, const std::filesystem::path& out_dir,
                                bool require_verdict) {
    ExperimentResult result;
    const ValidationReport validation = cfg.validate();
    if (validation.fatal()) {
        result.exit_code = 2;
        result.message = validation.to_text();
        return result;
    }

    ArtifactWriter w(out_dir, cfg);
    try {
        add_kappa_and_gate(cfg, w.manifest());
        if (cfg.experiment == "simulate") {
            result.exit_code = run_simulate(cfg, w, result);
        } else if (cfg.experiment == "picard") {
            result.exit_code = run_picard(cfg, w, result);
        } else if (cfg.experiment == "diagnose") {
            result.exit_code = run_diagnose(cfg, w, require_verdict, result);
        } else if (cfg.experiment == "spike-demo") {
            result.exit_code = run_spike_demo(cfg, w, result);
        } else if (cfg.experiment == "gate-check") {
            result.exit_code = run_gate_check(cfg, w, result);
        } else if (cfg.experiment == "tail-probe") {
            result.exit_code = run_tail_probe(cfg, w, result);
        } else {
            result.exit_code = 2;
            result.message = "unknown experiment '" + cfg.experiment + "'";
            return result;
        }
    } catch (const DivergenceError& e) {
        result.exit_code = 3;
        result.message = e.what();
        w.manifest()["error"] = e.what();
    } catch (const ConfigError& e) {
        result.exit_code = 2;
        result.message = e.what();
        w.manifest()["error"] = e.what();
    }
    w.manifest()["exit_code"] = result.exit_code;
    if (!result.message.empty()) w.manifest()["status"] = result.message;
    w.finalize();
    result.artifacts = w.names();
    return result;
}

} // namespace mildsim
