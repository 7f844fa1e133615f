#pragma once

#include <functional>
#include <limits>
#include <span>

#include "mildsim/periodic_limit.hpp"
#include "mildsim/spectral_field.hpp"

namespace mildsim {

/// Drift or diffusion coefficient (t, x) -> field, with its Lipschitz constant
/// in the squared-norm convention E||f(t,X)-f(t,Y)||^2 <= L E||X-Y||^2 and a
/// uniform bound on the output norm (+inf when unbounded).
struct CoefficientFn {
    std::function<void(double, std::span<const double>, std::span<double>)> eval_into;
    double lipschitz = 0.0;
    double sup_bound = std::numeric_limits<double>::infinity();
    bool is_zero = false;

    SpectralField eval(double t, const SpectralField& x) const;
};

CoefficientFn zero_coefficient();

/// f(t, x) = c (state-independent). L = 0, bound = ||c||.
CoefficientFn constant_field(SpectralField c);

/// f(t, x) = psi(t) * e_mode (state-independent periodic-limit forcing).
/// L = 0, bound = sup|psi|.
CoefficientFn additive_profile(PeriodicLimitFn psi, int n_modes, int mode);

/// f(t, x) = psi(t) * x. L = sup|psi|^2 in the squared-norm convention;
/// unbounded in x, so sup_bound is +inf.
CoefficientFn linear_in_state(PeriodicLimitFn psi);

} // namespace mildsim
