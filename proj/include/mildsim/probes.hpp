#pragma once

#include <functional>
#include <span>
#include <vector>

#include "mildsim/rng.hpp"
#include "mildsim/semigroup.hpp"

namespace mildsim {

/// A process sampled at arbitrary times, one realization per path index.
/// Deterministic inputs use n_paths = 1 and ignore the path argument.
struct SampledProcess {
    int n_paths = 1;
    std::function<void(int path, double time, std::span<double> out)> at;

    static SampledProcess deterministic(
        std::function<void(double, std::span<double>)> fn);
};

struct ProbeRow {
    int n;
    double level;     // E||X_n(t)||^2
    double level_se;
    double diff;      // E||X_{n+1}(t) - X_n(t)||^2
    double diff_se;
};

/// Tail drift convolutions X_n(t) = int_0^{n omega} T(t+s) F(n omega - s) ds,
/// integrated with exact per-step semigroup weights and left-frozen F.
/// Successive differences must decay toward 0 for a stable semigroup and
/// bounded F; the decay envelope is e^{-2 a n omega} up to a constant.
std::vector<ProbeRow> tail_convolution_probe_drift(const ExpStableSemigroup& sg,
                                                   const SampledProcess& F, double omega,
                                                   std::span<const int> n_list, double t,
                                                   double quad_dt);

/// Tail noise convolutions Y_n(t) = int_{-n omega}^0 T(t-s) G(s + n omega) dB(s),
/// Ito-discretized on the driver's step; increments at the same physical s are
/// shared across n so differences are computed pathwise.
std::vector<ProbeRow> tail_convolution_probe_noise(const ExpStableSemigroup& sg,
                                                   const SampledProcess& G,
                                                   const BrownianDriver& driver, double omega,
                                                   std::span<const int> n_list, double t,
                                                   int n_paths);

} // namespace mildsim
