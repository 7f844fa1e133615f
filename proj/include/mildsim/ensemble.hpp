#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mildsim/spectral_field.hpp"

namespace mildsim {

struct SquareMeanEstimate {
    double value = 0.0;     // estimate of E||.||^2
    double std_error = 0.0; // Monte Carlo standard error
    int n_paths = 0;
};

/// Monte Carlo ensemble of discretized paths in the spectral state space.
/// Storage may be restricted to a subset of time steps (streaming runs retain
/// only the slices a diagnostics plan needs); step indices are global.
class PathEnsemble {
public:
    PathEnsemble(int n_paths, int n_modes, double dt, double t0, std::vector<int> stored_steps);

    static PathEnsemble full(int n_paths, int n_modes, double dt, double t0, int n_steps);

    int n_paths() const { return n_paths_; }
    int n_modes() const { return n_modes_; }
    double dt() const { return dt_; }
    double t0() const { return t0_; }

    const std::vector<int>& stored_steps() const { return steps_; }
    int last_step() const { return steps_.back(); }
    /// True when every step 0..last_step is stored (required by the Gamma map).
    bool contiguous() const;
    bool has_step(int step) const;

    double time_of_step(int step) const { return t0_ + step * dt_; }
    /// Step index of a time that must be an integer multiple of dt past t0.
    int step_of_time(double t) const;

    std::span<double> field(int path, int step);
    std::span<const double> field(int path, int step) const;

    std::span<double> slice(int slice_index);
    std::span<const double> slice(int slice_index) const;
    int slice_of_step(int step) const;

    const std::vector<double>& raw() const { return data_; }

private:
    int n_paths_;
    int n_modes_;
    double dt_;
    double t0_;
    std::vector<int> steps_;
    std::vector<double> data_; // [slice][path][mode]
};

/// E||X(t_step)||^2 with Monte Carlo standard error.
SquareMeanEstimate square_mean_norm(const PathEnsemble& ens, int step);

/// D(n, p, t) = E||X(t + (n+p) omega) - X(t + n omega)||^2, pathwise.
/// Decay of D in n for every p is the checkable surrogate for the existence
/// of the shift limit of X at t.
SquareMeanEstimate shift_cauchy_metric(const PathEnsemble& ens, double t, int n, int p,
                                       double omega);

/// Pathwise algebra (used by closure properties and diagnostics fixtures).
PathEnsemble ensemble_sum(const PathEnsemble& a, const PathEnsemble& b);
PathEnsemble ensemble_scale(const PathEnsemble& a, double c);

} // namespace mildsim
