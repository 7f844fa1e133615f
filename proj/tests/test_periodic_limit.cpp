#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mildsim/periodic_limit.hpp"
#include "mildsim/rng.hpp"

using namespace mildsim;

namespace {

std::vector<double> uniform_grid(int points, double omega) {
    std::vector<double> g(points);
    for (int j = 0; j < points; ++j) g[j] = j * omega / points;
    return g;
}

} // namespace

TEST_CASE("spike values at anchors and on flanks") {
    const SpikeFamily fam = SpikeFamily::harmonic();
    CHECK(eval_spike(1.0, fam) == 1.0);
    CHECK(eval_spike(0.0, fam) == 0.0);
    CHECK(eval_spike(2.0, fam) == 0.0);
    // k_1 = 1/2: linear between (3, 1) and (3.5, 0).
    CHECK(eval_spike(3.0 + 0.25, fam) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(eval_spike(3.0, fam) == 1.0);
    CHECK(eval_spike(3.5, fam) == 0.0);
    CHECK(eval_spike(2.4, fam) == 0.0); // between spike supports
    CHECK(eval_spike(5.0, fam) == 1.0);
    CHECK_THROWS_AS((void)eval_spike(-0.1, fam), std::domain_error);
}

TEST_CASE("spike stays in [0,1] and is 1/k-Lipschitz on a window") {
    const SpikeFamily fam = SpikeFamily::harmonic();
    // Window [2, 12] contains spikes n = 1..5, so k_min = k_5 = 1/6.
    const double k_min = 1.0 / 6.0;
    for (int i = 0; i < 4000; ++i) {
        const double t = 2.0 + 10.0 * uniform_at(11, i, 0);
        const double u = 2.0 + 10.0 * uniform_at(11, i, 1);
        const double vt = eval_spike(t, fam);
        const double vu = eval_spike(u, fam);
        CHECK(vt >= 0.0);
        CHECK(vt <= 1.0);
        CHECK(std::abs(vt - vu) <= std::abs(t - u) / k_min + 1e-12);
    }
}

TEST_CASE("spike limit function b") {
    CHECK(eval_spike_limit(5.0) == 1.0);
    CHECK(eval_spike_limit(0.5) == 0.0);
    CHECK(eval_spike_limit(2.0) == 0.0);
    CHECK(eval_spike_limit(1.0) == 1.0);
    CHECK(eval_spike_limit(0.0) == 0.0);
    CHECK(eval_spike_limit(7.0 + 1e-13) == 1.0);
    CHECK(eval_spike_limit(7.0 + 1e-9) == 0.0);
}

TEST_CASE("pointwise limit estimation") {
    const PeriodicLimitFn spike = spike_fn();
    const PointwiseLimit at07 = estimate_pointwise_limit(spike, 0.7, 64, 1e-9);
    CHECK(at07.converged);
    CHECK(at07.limit == 0.0);

    const PeriodicLimitFn one = const_fn(1.0, 2.0);
    const PointwiseLimit c = estimate_pointwise_limit(one, 13.4, 16, 1e-12);
    CHECK(c.converged);
    CHECK(c.limit == 1.0);

    PeriodicLimitFn ramp;
    ramp.omega = 2.0;
    ramp.sup_bound = 1e18;
    ramp.eval = [](double t) { return t; };
    const PointwiseLimit r = estimate_pointwise_limit(ramp, 0.0, 64, 1e-9);
    CHECK_FALSE(r.converged);

    CHECK_THROWS_AS((void)estimate_pointwise_limit(one, 1.0, 1, 1e-9), std::invalid_argument);
}

TEST_CASE("spike classifies as periodic-limit only") {
    const PeriodicLimitFn spike = spike_fn();
    const std::vector<double> grid = uniform_grid(256, 2.0);

    SUBCASE("coarse horizon, tolerance above the grid flank step") {
        // Grid points j/128 from the peak change by j/128 per shift while the
        // spike still covers them; within the n_max=64 Cauchy window only
        // j <= 2 are still moving, so tol must clear 2/128.
        const FnClassification r = classify_deterministic(spike, grid, 64, 0.02);
        CHECK(r.verdict == FnClass::PeriodicLimitOnly);
        CHECK(r.all_pointwise_converged);
        CHECK_FALSE(r.uniform_converged);
    }

    SUBCASE("deep horizon with explicit sup schedule") {
        const FnClassification r =
            classify_deterministic(spike, grid, 512, 1e-9, {1, 2, 4, 8, 16});
        CHECK(r.verdict == FnClass::PeriodicLimitOnly);
        for (const auto& row : r.sup_table) {
            CHECK(row.sup_discrepancy >= 0.5); // each tested window holds a full spike
        }
        for (const auto& pt : r.pointwise) {
            CHECK(pt.converged);
            CHECK(pt.limit == eval_spike_limit(pt.t));
        }
    }
}

TEST_CASE("asymptotically periodic and degenerate fixtures") {
    const std::vector<double> grid = uniform_grid(64, 2.0);

    const PeriodicLimitFn ds = decaying_sin_fn(1.0, 2.0, 1.0);
    const FnClassification a = classify_deterministic(ds, grid, 64, 1e-6);
    CHECK(a.verdict == FnClass::AsymptoticallyPeriodic);

    const FnClassification z = classify_deterministic(const_fn(0.0, 2.0), grid, 16, 1e-9);
    CHECK(z.verdict == FnClass::AsymptoticallyPeriodic);

    PeriodicLimitFn ramp;
    ramp.omega = 2.0;
    ramp.sup_bound = 1e18;
    ramp.eval = [](double t) { return t; };
    const FnClassification u = classify_deterministic(ramp, grid, 64, 1e-6);
    CHECK(u.verdict == FnClass::Undetermined);
}

TEST_CASE("closure: sums and scalar multiples stay periodic-limit") {
    const std::vector<double> grid = uniform_grid(128, 2.0);
    const PeriodicLimitFn spike = spike_fn();
    const PeriodicLimitFn wave = sin_fn(0.7, 2.0);

    const FnClassification sum =
        classify_deterministic(sum_fn(spike, wave), grid, 512, 1e-9, {1, 2, 4, 8});
    CHECK(sum.verdict != FnClass::Undetermined);

    const FnClassification scaled =
        classify_deterministic(scale_fn(-2.5, spike), grid, 512, 1e-9, {1, 2, 4, 8});
    CHECK(scaled.verdict != FnClass::Undetermined);
    CHECK(scaled.verdict == FnClass::PeriodicLimitOnly);
}

TEST_CASE("shift invariance: f(. + a) stays periodic-limit") {
    const std::vector<double> grid = uniform_grid(128, 2.0);
    const PeriodicLimitFn shifted = shift_fn(0.25, spike_fn());
    const FnClassification r = classify_deterministic(shifted, grid, 512, 1e-9, {1, 2, 4});
    CHECK(r.verdict != FnClass::Undetermined);
}

TEST_CASE("estimated limit is omega-periodic and bounded (grid check)") {
    const PeriodicLimitFn spike = spike_fn();
    const std::vector<double> grid = uniform_grid(64, 2.0);
    const double tol = 1e-9;
    for (double t : grid) {
        const PointwiseLimit here = estimate_pointwise_limit(spike, t, 512, tol);
        const PointwiseLimit next = estimate_pointwise_limit(spike, t + 2.0, 512, tol);
        CHECK(std::abs(next.limit - here.limit) <= 2.0 * tol);
        CHECK(std::abs(here.limit) <= spike.sup_bound + tol);
    }
}

TEST_CASE("harmonic half-widths are strictly decreasing in (0,1)") {
    const SpikeFamily fam = SpikeFamily::harmonic();
    double prev = 1.0;
    for (int n = 1; n <= 64; ++n) {
        const double k = fam.half_width(n);
        CHECK(k > 0.0);
        CHECK(k < prev);
        prev = k;
    }
    CHECK(prev < 0.02); // heading to zero
}

TEST_CASE("known limit of the packaged spike is 2-periodic") {
    const PeriodicLimitFn spike = spike_fn();
    REQUIRE(static_cast<bool>(spike.known_limit));
    for (int i = 0; i < 200; ++i) {
        const double t = 20.0 * uniform_at(3, i, 0);
        CHECK(spike.known_limit(t + 2.0) == spike.known_limit(t));
    }
}

TEST_CASE("known limits of composed profiles are omega-periodic") {
    const PeriodicLimitFn ds = decaying_sin_fn(0.5, 2.0, 1.0);
    const PeriodicLimitFn combo = sum_fn(scale_fn(2.0, spike_fn()),
                                         sum_fn(sin_fn(1.0, 2.0), const_fn(0.25, 2.0)));
    for (const PeriodicLimitFn* f : {&ds, &combo}) {
        REQUIRE(static_cast<bool>(f->known_limit));
        for (int i = 0; i < 300; ++i) {
            const double t = 30.0 * uniform_at(909, i, 0);
            CHECK(std::abs(f->known_limit(t + f->omega) - f->known_limit(t)) <= 1e-12);
        }
    }
}
