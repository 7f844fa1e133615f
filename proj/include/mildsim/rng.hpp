#pragma once

#include <cstdint>

namespace mildsim {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
// A draw is a pure function of (key, counter): any (path, step) address can be
// generated on any thread, in any order, with no stream state to coordinate.
struct PhiloxBlock {
    std::uint32_t x[4];
};

PhiloxBlock philox4x32(std::uint64_t key, std::uint64_t ctr_lo, std::uint64_t ctr_hi);

/// Standard normal variate addressed by (seed, path, step). Deterministic.
double standard_normal_at(std::uint64_t seed, std::uint64_t path, std::uint64_t step);

/// Uniform variate in (0,1) addressed the same way (independent of the normal
/// stream via a distinct key tweak).
double uniform_at(std::uint64_t seed, std::uint64_t path, std::uint64_t step);

/// Scalar Brownian increment source: increment(path, step) ~ N(0, dt), i.i.d.
/// across addresses and identical across runs, thread schedules and chunkings.
class BrownianDriver {
public:
    BrownianDriver(std::uint64_t seed, double dt);

    double dt() const { return dt_; }
    std::uint64_t seed() const { return seed_; }
    std::uint64_t step_offset() const { return offset_; }

    /// Brownian increment over [t0 + step*dt, t0 + (step+1)*dt).
    double increment(std::int64_t path, std::int64_t step) const;

    /// The same increment scaled to unit variance (dB / sqrt(dt)).
    double unit_normal(std::int64_t path, std::int64_t step) const;

    /// Weak-Markov shift: the returned driver's increment(path, step) equals
    /// this driver's increment(path, step + h_steps).
    BrownianDriver shifted(std::int64_t h_steps) const;

private:
    std::uint64_t seed_;
    double dt_;
    double sqrt_dt_;
    std::uint64_t offset_ = 0;
};

inline BrownianDriver shift_driver(const BrownianDriver& d, std::int64_t h_steps) {
    return d.shifted(h_steps);
}

} // namespace mildsim
