#include "mildsim/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mildsim/parallel.hpp"

namespace mildsim {

PathEnsemble::PathEnsemble(int n_paths, int n_modes, double dt, double t0,
                           std::vector<int> stored_steps)
    : n_paths_(n_paths), n_modes_(n_modes), dt_(dt), t0_(t0), steps_(std::move(stored_steps)) {
    if (n_paths < 1 || n_modes < 1) throw std::invalid_argument("ensemble: empty dimensions");
    if (!(dt > 0.0)) throw std::invalid_argument("ensemble: dt must be positive");
    if (steps_.empty()) throw std::invalid_argument("ensemble: no stored steps");
    if (!std::is_sorted(steps_.begin(), steps_.end()) ||
        std::adjacent_find(steps_.begin(), steps_.end()) != steps_.end() || steps_.front() < 0) {
        throw std::invalid_argument("ensemble: stored steps must be sorted, unique, nonnegative");
    }
    data_.assign(steps_.size() * static_cast<std::size_t>(n_paths_) * n_modes_, 0.0);
}

PathEnsemble PathEnsemble::full(int n_paths, int n_modes, double dt, double t0, int n_steps) {
    std::vector<int> steps(static_cast<std::size_t>(n_steps) + 1);
    for (int k = 0; k <= n_steps; ++k) steps[static_cast<std::size_t>(k)] = k;
    return PathEnsemble(n_paths, n_modes, dt, t0, std::move(steps));
}

bool PathEnsemble::contiguous() const {
    return steps_.front() == 0 && steps_.back() == static_cast<int>(steps_.size()) - 1;
}

bool PathEnsemble::has_step(int step) const {
    return std::binary_search(steps_.begin(), steps_.end(), step);
}

int PathEnsemble::step_of_time(double t) const {
    const double raw = (t - t0_) / dt_;
    const double rounded = std::round(raw);
    if (std::abs(raw - rounded) > 1e-9 * std::max(1.0, std::abs(raw))) {
        throw std::invalid_argument("ensemble: time is not an integer multiple of dt");
    }
    return static_cast<int>(rounded);
}

int PathEnsemble::slice_of_step(int step) const {
    const auto it = std::lower_bound(steps_.begin(), steps_.end(), step);
    if (it == steps_.end() || *it != step) {
        throw std::out_of_range("ensemble: step " + std::to_string(step) + " is not stored");
    }
    return static_cast<int>(it - steps_.begin());
}

std::span<double> PathEnsemble::field(int path, int step) {
    const std::size_t s = static_cast<std::size_t>(slice_of_step(step));
    const std::size_t base = (s * n_paths_ + path) * static_cast<std::size_t>(n_modes_);
    return {data_.data() + base, static_cast<std::size_t>(n_modes_)};
}

std::span<const double> PathEnsemble::field(int path, int step) const {
    const std::size_t s = static_cast<std::size_t>(slice_of_step(step));
    const std::size_t base = (s * n_paths_ + path) * static_cast<std::size_t>(n_modes_);
    return {data_.data() + base, static_cast<std::size_t>(n_modes_)};
}

std::span<double> PathEnsemble::slice(int slice_index) {
    const std::size_t base =
        static_cast<std::size_t>(slice_index) * n_paths_ * static_cast<std::size_t>(n_modes_);
    return {data_.data() + base, static_cast<std::size_t>(n_paths_) * n_modes_};
}

std::span<const double> PathEnsemble::slice(int slice_index) const {
    const std::size_t base =
        static_cast<std::size_t>(slice_index) * n_paths_ * static_cast<std::size_t>(n_modes_);
    return {data_.data() + base, static_cast<std::size_t>(n_paths_) * n_modes_};
}

SquareMeanEstimate square_mean_norm(const PathEnsemble& ens, int step) {
    const auto slice = ens.slice(ens.slice_of_step(step));
    const int modes = ens.n_modes();
    const MeanVar mv = reduce_mean_var(ens.n_paths(), [&](std::int64_t p) {
        return span_norm2(slice.subspan(static_cast<std::size_t>(p) * modes,
                                        static_cast<std::size_t>(modes)));
    });
    return {mv.mean, std::sqrt(mv.variance / ens.n_paths()), ens.n_paths()};
}

SquareMeanEstimate shift_cauchy_metric(const PathEnsemble& ens, double t, int n, int p,
                                       double omega) {
    const int omega_steps = ens.step_of_time(ens.t0() + omega);
    const int base = ens.step_of_time(t);
    const int step_a = base + n * omega_steps;
    const int step_b = base + (n + p) * omega_steps;
    if (step_b > ens.last_step()) {
        throw std::out_of_range("shift_cauchy_metric: t + (n+p)*omega exceeds the horizon");
    }
    const auto slice_a = ens.slice(ens.slice_of_step(step_a));
    const auto slice_b = ens.slice(ens.slice_of_step(step_b));
    const int modes = ens.n_modes();
    const MeanVar mv = reduce_mean_var(ens.n_paths(), [&](std::int64_t q) {
        const std::size_t at = static_cast<std::size_t>(q) * modes;
        return span_dist2(slice_a.subspan(at, static_cast<std::size_t>(modes)),
                          slice_b.subspan(at, static_cast<std::size_t>(modes)));
    });
    return {mv.mean, std::sqrt(mv.variance / ens.n_paths()), ens.n_paths()};
}

PathEnsemble ensemble_sum(const PathEnsemble& a, const PathEnsemble& b) {
    if (a.n_paths() != b.n_paths() || a.n_modes() != b.n_modes() ||
        a.stored_steps() != b.stored_steps()) {
        throw std::invalid_argument("ensemble_sum: layout mismatch");
    }
    PathEnsemble out(a.n_paths(), a.n_modes(), a.dt(), a.t0(), a.stored_steps());
    const std::size_t total = a.raw().size();
    auto* dst = out.slice(0).data();
    const auto* pa = a.raw().data();
    const auto* pb = b.raw().data();
    for (std::size_t i = 0; i < total; ++i) dst[i] = pa[i] + pb[i];
    return out;
}

PathEnsemble ensemble_scale(const PathEnsemble& a, double c) {
    PathEnsemble out(a.n_paths(), a.n_modes(), a.dt(), a.t0(), a.stored_steps());
    const std::size_t total = a.raw().size();
    auto* dst = out.slice(0).data();
    const auto* pa = a.raw().data();
    for (std::size_t i = 0; i < total; ++i) dst[i] = c * pa[i];
    return out;
}

} // namespace mildsim
