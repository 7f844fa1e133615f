#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <numbers>

#include "mildsim/errors.hpp"
#include "mildsim/rng.hpp"
#include "mildsim/semigroup.hpp"

using namespace mildsim;

namespace {

const double kPi2 = std::numbers::pi * std::numbers::pi;

SpectralField random_unit_field(int n_modes, int tag) {
    SpectralField f(n_modes);
    for (int m = 0; m < n_modes; ++m) {
        f.coeffs[static_cast<std::size_t>(m)] = standard_normal_at(404, tag, m);
    }
    const double nrm = f.norm();
    for (double& c : f.coeffs) c /= nrm;
    return f;
}

} // namespace

TEST_CASE("heat semigroup constants") {
    const ExpStableSemigroup sg = heat_semigroup(4);
    CHECK(sg.decay_rate() == doctest::Approx(kPi2).epsilon(1e-15));
    CHECK(sg.growth_constant() == 1.0);
    CHECK(sg.modes()[1] == doctest::Approx(-4.0 * kPi2).epsilon(1e-15));
    CHECK_THROWS_AS((void)heat_semigroup(0), ConfigError);
}

TEST_CASE("apply: identity at t = 0 and scalar exponential oracle") {
    const ExpStableSemigroup sg = heat_semigroup(4);
    const SpectralField v = random_unit_field(4, 1);
    const SpectralField same = sg.apply(0.0, v);
    for (int m = 0; m < 4; ++m) CHECK(same.coeffs[m] == v.coeffs[m]);

    const SpectralField e1 = SpectralField::unit_mode(4, 1);
    const SpectralField moved = sg.apply(0.1, e1);
    CHECK(moved.coeffs[0] == doctest::Approx(std::exp(-kPi2 * 0.1)).epsilon(1e-14));
    CHECK(moved.coeffs[0] == doctest::Approx(0.37268).epsilon(1e-4));

    CHECK_THROWS_AS((void)sg.apply(-0.5, v), std::domain_error);
    CHECK_THROWS_AS((void)sg.apply(0.5, SpectralField(3)), std::invalid_argument);
}

TEST_CASE("semigroup law holds to rounding") {
    const ExpStableSemigroup sg = heat_semigroup(8);
    for (int trial = 0; trial < 50; ++trial) {
        const SpectralField v = random_unit_field(8, 100 + trial);
        const double s = 0.01 + 0.05 * uniform_at(7, trial, 0);
        const double t = 0.01 + 0.05 * uniform_at(7, trial, 1);
        const SpectralField two_hops = sg.apply(t, sg.apply(s, v));
        const SpectralField one_hop = sg.apply(s + t, v);
        for (int m = 0; m < 8; ++m) {
            CHECK(two_hops.coeffs[m] ==
                  doctest::Approx(one_hop.coeffs[m]).epsilon(1e-12));
        }
    }
}

TEST_CASE("decay bound ||T(t)v|| <= M e^{-a t} on random unit fields") {
    const ExpStableSemigroup sg = heat_semigroup(32);
    for (int trial = 0; trial < 100; ++trial) {
        const SpectralField v = random_unit_field(32, trial);
        for (double t : {0.01, 0.1, 1.0}) {
            const double bound = sg.growth_constant() * std::exp(-sg.decay_rate() * t);
            CHECK(sg.apply(t, v).norm() <= bound * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("strong continuity at t -> 0") {
    const ExpStableSemigroup sg = heat_semigroup(16);
    const SpectralField v = random_unit_field(16, 9);
    double prev = 2.0;
    for (double t : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5}) {
        const SpectralField moved = sg.apply(t, v);
        double dist2 = 0.0;
        for (int m = 0; m < 16; ++m) {
            const double d = moved.coeffs[m] - v.coeffs[m];
            dist2 += d * d;
        }
        CHECK(dist2 < prev);
        prev = dist2;
    }
    CHECK(prev < 1e-4);
}

TEST_CASE("convolution weights: exact values and limits") {
    CHECK(decay_weight(-1.0, std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(decay_weight(-kPi2, 0.01) == doctest::Approx(std::exp(-0.09869604401089358)).epsilon(1e-14));

    // dt -> 0+ limits for lambda = -1.
    for (double dt : {1e-6, 1e-9, 1e-12}) {
        CHECK(drift_weight(-1.0, dt) == doctest::Approx(dt).epsilon(1e-5));
        CHECK(noise_std_weight(-1.0, dt) == doctest::Approx(std::sqrt(dt)).epsilon(1e-5));
    }

    // lambda = 0 handled via analytic limits.
    CHECK(drift_weight(0.0, 0.25) == 0.25);
    CHECK(noise_std_weight(0.0, 0.25) == std::sqrt(0.25));

    CHECK_THROWS_AS((void)drift_weight(1.0, 0.1), ConfigError);
    CHECK_THROWS_AS((void)scalar_semigroup({-1.0, 0.5}), ConfigError);
}

TEST_CASE("noise_std^2 equals the Ito isometry integral (quadrature oracle)") {
    const ExpStableSemigroup sg = heat_semigroup(6);
    const double dt = 0.01;
    const ConvolutionWeights w = sg.convolution_weights(dt);
    for (int m = 0; m < 6; ++m) {
        const double lam = sg.modes()[m];
        // Midpoint quadrature of int_0^dt e^{2 lam (dt - s)} ds.
        const int panels = 20000;
        const double h = dt / panels;
        double integral = 0.0;
        for (int j = 0; j < panels; ++j) {
            const double s = (j + 0.5) * h;
            integral += std::exp(2.0 * lam * (dt - s)) * h;
        }
        CHECK(w.noise_std[m] * w.noise_std[m] == doctest::Approx(integral).epsilon(1e-6));
    }
}

TEST_CASE("physical-space evaluation uses the orthonormal sine basis") {
    // Mode 1 with coefficient 1: u(x) = sqrt(2) sin(pi x), peak at x = 1/2.
    const std::vector<double> coeffs = {1.0, 0.0};
    const std::vector<double> xs = {0.0, 0.5, 1.0};
    const std::vector<double> u = to_physical(coeffs, xs);
    CHECK(u[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(u[1] == doctest::Approx(std::numbers::sqrt2).epsilon(1e-12));
    CHECK(std::abs(u[2]) < 1e-12);
}
