#pragma once

#include <span>
#include <string>
#include <vector>

#include "mildsim/ensemble.hpp"

namespace mildsim {

struct PeriodicityThresholds {
    double pointwise_tol = 1e-3; // relative to sup_t E||X||^2 over sampled cells
    double uniform_tol = 1e-3;
    double decay_ratio = 0.2;    // D(n_last) / D(n_first) must not exceed this
    double screen_tol = 0.1;     // second-moment screen, relative
};

struct PeriodicityPlan {
    double omega = 0.0;
    std::vector<double> t_grid;    // offsets in [0, omega), multiples of dt
    std::vector<int> n_schedule;   // strictly increasing
    std::vector<int> p_list = {1};
    PeriodicityThresholds thresholds;

    /// Every global step index the classifier will read (for streaming runs).
    std::vector<int> required_steps(double dt, double t0) const;
    double required_horizon() const; // latest time read, relative to t0
    void validate(double dt) const;
};

enum class ProcessClass {
    SquareMeanAsymptoticallyPeriodic,
    SquareMeanPeriodicLimit,
    Inconclusive,
};

std::string to_string(ProcessClass c);

struct CauchyRow {
    double t;
    int n;
    int p;
    double value; // D(n, p, t)
    double std_error;
};

struct SupCurveRow {
    int n;
    double sup;          // sup over (t, p) of D(n, p, t)
    double max_std_error;
};

struct ScreenRow {
    double t;
    int n;
    double delta; // |E||X(t+(n+1)omega)||^2 - E||X(t+n omega)||^2|
    double std_error;
};

struct PeriodicityReport {
    ProcessClass verdict = ProcessClass::Inconclusive;
    std::vector<CauchyRow> cauchy_table;
    std::vector<SupCurveRow> sup_curve;
    std::vector<ScreenRow> screen;
    double norm_factor = 0.0; // sup of E||X||^2 over sampled cells
    bool screen_pass = false;
    bool pointwise_pass = false;
    bool uniform_pass = false;
    double worst_pointwise_ratio = 0.0; // max over (t,p) of D(n_last)/D(n_first)
    double uniform_ratio = 0.0;
    std::vector<std::string> notes;
};

/// Certifies shift-Cauchy behavior on a simulated ensemble. Verdicts are
/// three-valued: failure to certify is Inconclusive, never a negative.
PeriodicityReport classify_process(const PathEnsemble& ens, const PeriodicityPlan& plan);

/// Necessary-condition screen: successive second moments along omega-shifts.
std::vector<ScreenRow> second_moment_period_check(const PathEnsemble& ens, double omega,
                                                  std::span<const int> n_schedule,
                                                  std::span<const double> t_grid);

struct MeanFunctionEstimate {
    std::vector<double> t;           // grid offsets, plus omega as the seam point
    std::vector<SpectralField> mean; // coefficient-wise tail average at each offset
    double seam_residual = 0.0;      // || m(omega) - m(0) ||
};

/// Tail-averaged mean function over [0, omega): the estimated limit's mean,
/// which must extend omega-periodically (checked at the window seam).
MeanFunctionEstimate periodic_part_estimate(const PathEnsemble& ens, double omega,
                                            std::span<const int> tail_n,
                                            std::span<const double> t_grid);

} // namespace mildsim
