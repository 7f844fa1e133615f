#include <doctest.h>

#include <cmath>
#include <vector>

#include "mildsim/periodic_limit.hpp"
#include "mildsim/probes.hpp"
#include "mildsim/rng.hpp"

using namespace mildsim;

namespace {

SampledProcess constant_process(double value) {
    return SampledProcess::deterministic(
        [value](double, std::span<double> out) { out[0] = value; });
}

} // namespace

TEST_CASE("drift probe: zero input gives zero tables") {
    const ExpStableSemigroup sg = scalar_semigroup({-1.0});
    const std::vector<int> ns = {1, 2, 4};
    const auto rows = tail_convolution_probe_drift(sg, constant_process(0.0), 1.0, ns, 0.0, 0.01);
    for (const auto& r : rows) {
        CHECK(r.level == 0.0);
        CHECK(r.diff == 0.0);
    }
}

TEST_CASE("drift probe: constant input matches the closed form to 1e-8") {
    // X_n(t) = (c/a) e^{-a t} (1 - e^{-a n omega}) for F == c, lambda = -a.
    const double a = 1.0, c = 2.0, omega = 1.0, t = 0.5;
    const ExpStableSemigroup sg = scalar_semigroup({-a});
    const std::vector<int> ns = {1, 2, 3, 4, 6, 8};
    const auto rows = tail_convolution_probe_drift(sg, constant_process(c), omega, ns, t, 1e-3);
    for (const auto& r : rows) {
        const double level = std::pow((c / a) * std::exp(-a * t) * (1.0 - std::exp(-a * r.n * omega)), 2);
        const double diff = std::pow((c / a) * std::exp(-a * t) *
                                         (std::exp(-a * r.n * omega) - std::exp(-a * (r.n + 1) * omega)),
                                     2);
        CHECK(r.level == doctest::Approx(level).epsilon(1e-8));
        CHECK(r.diff == doctest::Approx(diff).epsilon(1e-8));
    }
    // Successive differences decrease monotonically with the e^{-2 a n omega} envelope.
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].diff < rows[i - 1].diff);
    const double c_env = rows[0].diff * std::exp(2.0 * a * rows[0].n * omega);
    for (const auto& r : rows) {
        CHECK(r.diff <= c_env * std::exp(-2.0 * a * r.n * omega) * (1.0 + 1e-9));
    }
}

TEST_CASE("drift probe: periodic-limit input decays beyond the first shifts") {
    const ExpStableSemigroup sg = scalar_semigroup({-0.8});
    const SampledProcess spike_forcing = SampledProcess::deterministic(
        [fam = SpikeFamily::harmonic()](double u, std::span<double> out) {
            out[0] = eval_spike(u, fam);
        });
    const std::vector<int> ns = {2, 3, 4, 5, 6, 8, 10};
    const auto rows = tail_convolution_probe_drift(sg, spike_forcing, 2.0, ns, 0.0, 1.0 / 128.0);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].diff < rows[i - 1].diff);
}

TEST_CASE("noise probe: zero input gives zero tables") {
    const ExpStableSemigroup sg = scalar_semigroup({-1.0});
    const BrownianDriver driver(5, 0.01);
    const std::vector<int> ns = {1, 2};
    const auto rows = tail_convolution_probe_noise(sg, constant_process(0.0), driver, 1.0, ns, 0.0, 16);
    for (const auto& r : rows) {
        CHECK(r.level == 0.0);
        CHECK(r.diff == 0.0);
    }
}

TEST_CASE("noise probe: constant input matches the Ito isometry closed form") {
    // E||Y_n(t)||^2 = sigma^2 e^{-2 a t} (1 - e^{-2 a n omega}) / (2a).
    const double a = 1.0, sigma = 1.5, omega = 1.0, t = 0.5;
    const ExpStableSemigroup sg = scalar_semigroup({-a});
    const BrownianDriver driver(424242, 1.0 / 64.0);
    const std::vector<int> ns = {1, 2, 3, 4};
    const auto rows =
        tail_convolution_probe_noise(sg, constant_process(sigma), driver, omega, ns, t, 4000);
    for (const auto& r : rows) {
        const double level =
            sigma * sigma * std::exp(-2.0 * a * t) * (1.0 - std::exp(-2.0 * a * r.n * omega)) / (2.0 * a);
        const double diff = sigma * sigma * std::exp(-2.0 * a * t) *
                            (std::exp(-2.0 * a * r.n * omega) - std::exp(-2.0 * a * (r.n + 1) * omega)) /
                            (2.0 * a);
        CHECK(std::abs(r.level - level) <= 3.0 * r.level_se);
        CHECK(std::abs(r.diff - diff) <= 3.0 * r.diff_se);
    }
    // Monotone decrease and the Lemma-style envelope with K = sup E||G||^2.
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].diff < rows[i - 1].diff);
    const double K = sigma * sigma;
    const double envelope = 2.0 * K / (2.0 * a); // 2 M^2 K / (2a), M = 1
    for (const auto& r : rows) {
        CHECK(r.diff <= envelope * std::exp(-2.0 * a * r.n * omega) * (1.0 + 1e-9) + 3.0 * r.diff_se);
    }
}

TEST_CASE("noise probe: increments are shared across n (pathwise Cauchy device)") {
    // With constant G the common-region contributions cancel exactly, so the
    // difference is the fresh tail segment alone; its second moment is far
    // below the level of Y_n itself for large n.
    const ExpStableSemigroup sg = scalar_semigroup({-2.0});
    const BrownianDriver driver(777, 1.0 / 32.0);
    const std::vector<int> ns = {1, 4, 8};
    const auto rows =
        tail_convolution_probe_noise(sg, constant_process(1.0), driver, 1.0, ns, 0.0, 800);
    CHECK(rows.back().diff < 0.01 * rows.back().level);
}
