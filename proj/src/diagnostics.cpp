#include "mildsim/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "mildsim/errors.hpp"
#include "mildsim/parallel.hpp"

namespace mildsim {

std::string to_string(ProcessClass c) {
    switch (c) {
        case ProcessClass::SquareMeanAsymptoticallyPeriodic:
            return "SquareMeanAsymptoticallyPeriodic";
        case ProcessClass::SquareMeanPeriodicLimit:
            return "SquareMeanPeriodicLimit";
        case ProcessClass::Inconclusive:
            return "Inconclusive";
    }
    return "Inconclusive";
}

void PeriodicityPlan::validate(double dt) const {
    if (!(omega > 0.0)) throw ConfigError("periodicity plan: omega must be positive");
    const double steps = omega / dt;
    if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps)) {
        throw ConfigError("periodicity plan: omega must be an integer multiple of dt");
    }
    if (t_grid.empty()) throw ConfigError("periodicity plan: empty t grid");
    for (double t : t_grid) {
        if (t < 0.0 || t >= omega) throw ConfigError("periodicity plan: grid offset outside [0, omega)");
        const double k = t / dt;
        if (std::abs(k - std::round(k)) > 1e-9 * std::max(1.0, k)) {
            throw ConfigError("periodicity plan: grid offset is not a multiple of dt");
        }
    }
    if (n_schedule.empty()) throw ConfigError("periodicity plan: empty n schedule");
    for (std::size_t i = 0; i + 1 < n_schedule.size(); ++i) {
        if (n_schedule[i + 1] <= n_schedule[i]) {
            throw ConfigError("periodicity plan: n schedule must be strictly increasing");
        }
    }
    if (n_schedule.front() < 0) throw ConfigError("periodicity plan: n must be >= 0");
    if (p_list.empty()) throw ConfigError("periodicity plan: empty p list");
    for (int p : p_list) {
        if (p < 1) throw ConfigError("periodicity plan: p must be >= 1");
    }
}

std::vector<int> PeriodicityPlan::required_steps(double dt, double t0) const {
    validate(dt);
    const int omega_steps = static_cast<int>(std::lround(omega / dt));
    std::set<int> steps;
    for (double t : t_grid) {
        const int base = static_cast<int>(std::lround((t - t0) / dt));
        for (int n : n_schedule) {
            steps.insert(base + n * omega_steps);
            steps.insert(base + (n + 1) * omega_steps); // second-moment screen
            for (int p : p_list) steps.insert(base + (n + p) * omega_steps);
        }
    }
    return {steps.begin(), steps.end()};
}

double PeriodicityPlan::required_horizon() const {
    const double max_t = *std::max_element(t_grid.begin(), t_grid.end());
    const int max_n = n_schedule.back();
    const int max_p = std::max(1, *std::max_element(p_list.begin(), p_list.end()));
    return max_t + (max_n + max_p) * omega;
}

std::vector<ScreenRow> second_moment_period_check(const PathEnsemble& ens, double omega,
                                                  std::span<const int> n_schedule,
                                                  std::span<const double> t_grid) {
    std::vector<ScreenRow> rows;
    const int omega_steps = ens.step_of_time(ens.t0() + omega);
    for (double t : t_grid) {
        const int base = ens.step_of_time(t);
        for (int n : n_schedule) {
            const SquareMeanEstimate a = square_mean_norm(ens, base + n * omega_steps);
            const SquareMeanEstimate b = square_mean_norm(ens, base + (n + 1) * omega_steps);
            const double se = std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
            rows.push_back({t, n, std::abs(b.value - a.value), se});
        }
    }
    return rows;
}

PeriodicityReport classify_process(const PathEnsemble& ens, const PeriodicityPlan& plan) {
    plan.validate(ens.dt());
    const double horizon_needed = plan.required_horizon();
    const double horizon = ens.time_of_step(ens.last_step()) - ens.t0();
    if (horizon_needed > horizon + 1e-9) {
        throw std::out_of_range(
            "classify_process: ensemble horizon " + std::to_string(horizon) +
            " is shorter than the plan requirement " + std::to_string(horizon_needed));
    }

    PeriodicityReport report;
    report.notes.push_back(
        "uniform criteria are grid suprema over the configured offsets, not continuous-time suprema");
    report.notes.push_back(
        "the uniform-on-compacts criterion is not separately checkable on a finite grid; "
        "pointwise-style and uniform-on-[0,omega)-style grid criteria are reported");

    // Normalization: sup of E||X||^2 over every sampled cell.
    double norm = 0.0;
    for (double t : plan.t_grid) {
        const int base = ens.step_of_time(t);
        const int osteps = ens.step_of_time(ens.t0() + plan.omega);
        for (int n : plan.n_schedule) {
            norm = std::max(norm, square_mean_norm(ens, base + n * osteps).value);
            for (int p : plan.p_list) {
                norm = std::max(norm, square_mean_norm(ens, base + (n + p) * osteps).value);
            }
        }
    }
    report.norm_factor = norm;

    // Second-moment screen (necessary condition, checked at the last n).
    report.screen = second_moment_period_check(ens, plan.omega, plan.n_schedule, plan.t_grid);
    report.screen_pass = true;
    const int n_last = plan.n_schedule.back();
    for (const ScreenRow& row : report.screen) {
        if (row.n == n_last &&
            row.delta > plan.thresholds.screen_tol * norm + 3.0 * row.std_error) {
            report.screen_pass = false;
        }
    }

    if (norm == 0.0) {
        // Identically zero over every sampled cell: trivially periodic.
        report.verdict = ProcessClass::SquareMeanAsymptoticallyPeriodic;
        report.screen_pass = true;
        report.pointwise_pass = true;
        report.uniform_pass = true;
        report.notes.push_back("all sampled second moments are zero");
        return report;
    }

    if (!report.screen_pass) {
        report.verdict = ProcessClass::Inconclusive;
        report.notes.push_back("second-moment screen failed; Cauchy table skipped");
        return report;
    }

    // Full Cauchy table.
    const int n_first = plan.n_schedule.front();
    const double pw_tol = plan.thresholds.pointwise_tol * norm;
    const double un_tol = plan.thresholds.uniform_tol * norm;
    bool pointwise = true;
    double worst_ratio = 0.0;

    struct Cell {
        double first = 0.0;
        double last = 0.0;
        double last_se = 0.0;
    };
    std::vector<Cell> cells(plan.t_grid.size() * plan.p_list.size());

    for (std::size_t ti = 0; ti < plan.t_grid.size(); ++ti) {
        for (std::size_t pi = 0; pi < plan.p_list.size(); ++pi) {
            Cell& cell = cells[ti * plan.p_list.size() + pi];
            for (int n : plan.n_schedule) {
                const SquareMeanEstimate d =
                    shift_cauchy_metric(ens, plan.t_grid[ti], n, plan.p_list[pi], plan.omega);
                report.cauchy_table.push_back(
                    {plan.t_grid[ti], n, plan.p_list[pi], d.value, d.std_error});
                if (n == n_first) cell.first = d.value;
                if (n == n_last) {
                    cell.last = d.value;
                    cell.last_se = d.std_error;
                }
            }
        }
    }

    for (const Cell& cell : cells) {
        if (cell.last > pw_tol + 3.0 * cell.last_se) pointwise = false;
        if (cell.first > pw_tol) {
            const double ratio = cell.last / cell.first;
            worst_ratio = std::max(worst_ratio, ratio);
            if (ratio > plan.thresholds.decay_ratio) pointwise = false;
        }
    }
    report.worst_pointwise_ratio = worst_ratio;
    report.pointwise_pass = pointwise;

    // Uniform criterion on the grid sup.
    for (int n : plan.n_schedule) {
        SupCurveRow row{n, 0.0, 0.0};
        for (const CauchyRow& c : report.cauchy_table) {
            if (c.n == n) {
                row.sup = std::max(row.sup, c.value);
                row.max_std_error = std::max(row.max_std_error, c.std_error);
            }
        }
        report.sup_curve.push_back(row);
    }
    const SupCurveRow& sup_first = report.sup_curve.front();
    const SupCurveRow& sup_last = report.sup_curve.back();
    bool uniform = sup_last.sup <= un_tol + 3.0 * sup_last.max_std_error;
    if (sup_first.sup > un_tol) {
        report.uniform_ratio = sup_last.sup / sup_first.sup;
        if (report.uniform_ratio > plan.thresholds.decay_ratio) uniform = false;
    }
    report.uniform_pass = uniform && pointwise; // AP implies the PL conditions

    if (report.pointwise_pass && report.uniform_pass) {
        report.verdict = ProcessClass::SquareMeanAsymptoticallyPeriodic;
    } else if (report.pointwise_pass) {
        report.verdict = ProcessClass::SquareMeanPeriodicLimit;
    } else {
        report.verdict = ProcessClass::Inconclusive;
    }
    return report;
}

MeanFunctionEstimate periodic_part_estimate(const PathEnsemble& ens, double omega,
                                            std::span<const int> tail_n,
                                            std::span<const double> t_grid) {
    if (tail_n.empty()) throw ConfigError("periodic part estimate: empty tail");
    const int omega_steps = ens.step_of_time(ens.t0() + omega);
    MeanFunctionEstimate out;
    const int modes = ens.n_modes();

    auto mean_at = [&](double t) {
        SpectralField acc(modes);
        for (int n : tail_n) {
            const int step = ens.step_of_time(t) + n * omega_steps;
            for (int m = 0; m < modes; ++m) {
                const MeanVar mv = reduce_mean_var(ens.n_paths(), [&](std::int64_t p) {
                    return ens.field(static_cast<int>(p), step)[static_cast<std::size_t>(m)];
                });
                acc.coeffs[static_cast<std::size_t>(m)] += mv.mean;
            }
        }
        const double inv = 1.0 / static_cast<double>(tail_n.size());
        for (double& v : acc.coeffs) v *= inv;
        return acc;
    };

    for (double t : t_grid) {
        out.t.push_back(t);
        out.mean.push_back(mean_at(t));
    }
    const SpectralField at_zero = mean_at(t_grid.front());
    const SpectralField at_omega = mean_at(t_grid.front() + omega);
    double dist2 = 0.0;
    for (int m = 0; m < modes; ++m) {
        const double d = at_omega.coeffs[static_cast<std::size_t>(m)] -
                         at_zero.coeffs[static_cast<std::size_t>(m)];
        dist2 += d * d;
    }
    out.seam_residual = std::sqrt(dist2);
    return out;
}

} // namespace mildsim
