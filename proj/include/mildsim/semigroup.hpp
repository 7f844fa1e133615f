#pragma once

#include <span>
#include <vector>

#include "mildsim/spectral_field.hpp"

namespace mildsim {

/// Exact per-step integration weights for one mode with generator eigenvalue
/// lambda over a step of length dt:
///   x <- decay * x + drift * f + noise_std * g * xi,   xi ~ N(0,1)
/// advances the mild form exactly for coefficients frozen over the step.
struct ConvolutionWeights {
    std::vector<double> decay;     // e^{lambda dt}
    std::vector<double> drift;     // (e^{lambda dt} - 1) / lambda
    std::vector<double> noise_std; // sqrt((e^{2 lambda dt} - 1) / (2 lambda))
};

/// Diagonal exponentially stable semigroup: ||T(t)|| <= M e^{-a t}.
class ExpStableSemigroup {
public:
    /// Dirichlet heat semigroup on [0,1]: lambda_n = -n^2 pi^2, M = 1, a = pi^2.
    static ExpStableSemigroup heat(int n_modes);

    /// Explicit eigenvalue list (all < 0); M = 1, a = -max(lambda).
    static ExpStableSemigroup scalar(std::vector<double> lambdas);

    double growth_constant() const { return growth_; } // M
    double decay_rate() const { return rate_; }        // a
    const std::vector<double>& modes() const { return modes_; }
    int n_modes() const { return static_cast<int>(modes_.size()); }

    /// T(t) v, mode-wise multiplication by e^{lambda_n t}. Requires t >= 0.
    SpectralField apply(double t, const SpectralField& v) const;
    void apply_into(double t, std::span<const double> in, std::span<double> out) const;

    ConvolutionWeights convolution_weights(double dt) const;

private:
    ExpStableSemigroup(double growth, double rate, std::vector<double> modes);
    double growth_;
    double rate_;
    std::vector<double> modes_;
};

inline ExpStableSemigroup heat_semigroup(int n_modes) { return ExpStableSemigroup::heat(n_modes); }
inline ExpStableSemigroup scalar_semigroup(std::vector<double> lambdas) {
    return ExpStableSemigroup::scalar(std::move(lambdas));
}

/// Scalar versions of the per-mode weights (also the lambda = 0 limits).
double decay_weight(double lambda, double dt);
double drift_weight(double lambda, double dt);
double noise_std_weight(double lambda, double dt);

} // namespace mildsim
