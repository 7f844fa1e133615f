#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace mildsim {

/// Deterministic function on t >= 0 whose integer-period shifts f(t + n*omega)
/// converge pointwise as n grows. known_limit, when set, is the limit function
/// (itself omega-periodic); sup_bound is a uniform bound on |eval|.
struct PeriodicLimitFn {
    double omega = 0.0;
    std::function<double(double)> eval;
    std::function<double(double)> known_limit; // empty when unavailable
    double sup_bound = 0.0;
};

/// Shrinking spike half-widths k_n in (0,1), strictly decreasing to 0.
/// Index n >= 1 is the spike centered at t = 2n + 1.
struct SpikeFamily {
    std::function<double(int)> half_width;
    static SpikeFamily harmonic(); // k_n = 1/(n+1), all flank slopes rational
};

/// Unit spike train: value 1 at every odd integer; the spike at t = 1 ramps
/// linearly from 0 at t = 0 to 1 and back to 0 at t = 2; the spike at
/// t = 2n + 1 ramps over [2n+1 - k_n, 2n+1 + k_n]; value 0 elsewhere.
double eval_spike(double t, const SpikeFamily& fam);

/// Pointwise limit of the spike train under 2-shifts: 1 at odd integers
/// (within 1e-12), 0 otherwise. Discontinuous, hence never attained uniformly.
double eval_spike_limit(double t);

/// The spike train packaged with omega = 2 and its known limit.
PeriodicLimitFn spike_fn(SpikeFamily fam = SpikeFamily::harmonic());

struct PointwiseLimit {
    double limit = 0.0;    // Cauchy-stabilized value of f(t + n omega)
    bool converged = false;
    double last_delta = 0.0; // largest successive difference in the tail window
};

/// Tracks f(t + n*omega) for n = 0..n_max and declares convergence when all
/// successive differences over the last quarter of the schedule are <= tol.
PointwiseLimit estimate_pointwise_limit(const PeriodicLimitFn& f, double t, int n_max, double tol);

enum class FnClass { AsymptoticallyPeriodic, PeriodicLimitOnly, Undetermined };

std::string to_string(FnClass c);

struct SupDiscrepancyRow {
    int n;
    double sup_discrepancy; // sup over the grid of |f(t + n omega) - limit(t)|
};

struct PointwiseRow {
    double t;
    double limit;
    bool converged;
    double last_delta;
};

struct FnClassification {
    FnClass verdict = FnClass::Undetermined;
    std::vector<SupDiscrepancyRow> sup_table;
    std::vector<PointwiseRow> pointwise;
    bool all_pointwise_converged = false;
    bool uniform_converged = false;
    double tol = 0.0;
    int n_max = 0;
};

/// Grid classification of f: pointwise limits are estimated at horizon n_max;
/// the uniform (sup over grid) discrepancy is tabulated over sup_schedule.
/// The default schedule doubles from 1 and stays a factor >= 4 below n_max so
/// the sup is measured against an independently stabilized limit estimate.
FnClassification classify_deterministic(const PeriodicLimitFn& f, std::span<const double> grid,
                                        int n_max, double tol,
                                        std::vector<int> sup_schedule = {});

/// Helpers for composing test fixtures and registry expressions.
PeriodicLimitFn const_fn(double value, double omega);
PeriodicLimitFn sin_fn(double amplitude, double period);
PeriodicLimitFn decaying_sin_fn(double amplitude, double period, double rate);
PeriodicLimitFn sum_fn(PeriodicLimitFn a, PeriodicLimitFn b);
PeriodicLimitFn scale_fn(double c, PeriodicLimitFn f);
PeriodicLimitFn shift_fn(double a, PeriodicLimitFn f);

} // namespace mildsim
