#include "mildsim/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mildsim/errors.hpp"

namespace mildsim {

ExpStableSemigroup::ExpStableSemigroup(double growth, double rate, std::vector<double> modes)
    : growth_(growth), rate_(rate), modes_(std::move(modes)) {}

ExpStableSemigroup ExpStableSemigroup::heat(int n_modes) {
    if (n_modes < 1) throw ConfigError("heat semigroup: n_modes must be >= 1");
    const double pi2 = std::numbers::pi * std::numbers::pi;
    std::vector<double> modes(static_cast<std::size_t>(n_modes));
    for (int n = 1; n <= n_modes; ++n) {
        modes[static_cast<std::size_t>(n - 1)] = -static_cast<double>(n) * n * pi2;
    }
    return ExpStableSemigroup(1.0, pi2, std::move(modes));
}

ExpStableSemigroup ExpStableSemigroup::scalar(std::vector<double> lambdas) {
    if (lambdas.empty()) throw ConfigError("scalar semigroup: eigenvalue list is empty");
    double max_lambda = lambdas.front();
    for (double l : lambdas) {
        if (!(l < 0.0)) throw ConfigError("scalar semigroup: all eigenvalues must be < 0");
        max_lambda = std::max(max_lambda, l);
    }
    return ExpStableSemigroup(1.0, -max_lambda, std::move(lambdas));
}

SpectralField ExpStableSemigroup::apply(double t, const SpectralField& v) const {
    SpectralField out(n_modes());
    apply_into(t, v.coeffs, out.coeffs);
    return out;
}

void ExpStableSemigroup::apply_into(double t, std::span<const double> in,
                                    std::span<double> out) const {
    if (t < 0.0) throw std::domain_error("semigroup apply: t must be >= 0");
    if (in.size() != modes_.size() || out.size() != modes_.size()) {
        throw std::invalid_argument("semigroup apply: field size does not match n_modes");
    }
    for (std::size_t m = 0; m < modes_.size(); ++m) {
        out[m] = std::exp(modes_[m] * t) * in[m];
    }
}

double decay_weight(double lambda, double dt) {
    if (lambda > 0.0) throw ConfigError("convolution weights: lambda > 0 violates stability");
    return std::exp(lambda * dt);
}

double drift_weight(double lambda, double dt) {
    if (lambda > 0.0) throw ConfigError("convolution weights: lambda > 0 violates stability");
    if (lambda == 0.0) return dt;
    // expm1 keeps the removable singularity accurate for |lambda dt| << 1.
    return std::expm1(lambda * dt) / lambda;
}

double noise_std_weight(double lambda, double dt) {
    if (lambda > 0.0) throw ConfigError("convolution weights: lambda > 0 violates stability");
    if (lambda == 0.0) return std::sqrt(dt);
    return std::sqrt(std::expm1(2.0 * lambda * dt) / (2.0 * lambda));
}

ConvolutionWeights ExpStableSemigroup::convolution_weights(double dt) const {
    if (!(dt > 0.0)) throw std::domain_error("convolution weights: dt must be positive");
    ConvolutionWeights w;
    const std::size_t n = modes_.size();
    w.decay.resize(n);
    w.drift.resize(n);
    w.noise_std.resize(n);
    for (std::size_t m = 0; m < n; ++m) {
        w.decay[m] = decay_weight(modes_[m], dt);
        w.drift[m] = drift_weight(modes_[m], dt);
        w.noise_std[m] = noise_std_weight(modes_[m], dt);
    }
    return w;
}

} // namespace mildsim
