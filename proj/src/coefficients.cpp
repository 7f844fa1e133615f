#include "mildsim/coefficients.hpp"

#include <stdexcept>

namespace mildsim {

SpectralField CoefficientFn::eval(double t, const SpectralField& x) const {
    SpectralField out(x.n_modes());
    eval_into(t, x.coeffs, out.coeffs);
    return out;
}

CoefficientFn zero_coefficient() {
    CoefficientFn f;
    f.lipschitz = 0.0;
    f.sup_bound = 0.0;
    f.is_zero = true;
    f.eval_into = [](double, std::span<const double>, std::span<double> out) {
        for (double& v : out) v = 0.0;
    };
    return f;
}

CoefficientFn constant_field(SpectralField c) {
    CoefficientFn f;
    f.lipschitz = 0.0;
    f.sup_bound = c.norm();
    auto coeffs = c.coeffs;
    f.eval_into = [coeffs](double, std::span<const double>, std::span<double> out) {
        if (out.size() != coeffs.size()) {
            throw std::invalid_argument("constant_field: mode count mismatch");
        }
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = coeffs[i];
    };
    return f;
}

CoefficientFn additive_profile(PeriodicLimitFn psi, int n_modes, int mode) {
    if (mode < 1 || mode > n_modes) throw std::invalid_argument("additive_profile: bad mode");
    CoefficientFn f;
    f.lipschitz = 0.0;
    f.sup_bound = psi.sup_bound;
    auto e = psi.eval;
    const std::size_t idx = static_cast<std::size_t>(mode - 1);
    f.eval_into = [e, idx](double t, std::span<const double>, std::span<double> out) {
        for (double& v : out) v = 0.0;
        out[idx] = e(t);
    };
    return f;
}

CoefficientFn linear_in_state(PeriodicLimitFn psi) {
    CoefficientFn f;
    f.lipschitz = psi.sup_bound * psi.sup_bound;
    auto e = psi.eval;
    f.eval_into = [e](double t, std::span<const double> x, std::span<double> out) {
        const double s = e(t);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = s * x[i];
    };
    return f;
}

} // namespace mildsim
