#include "mildsim/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mildsim {

namespace {

constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;

inline void mul_hi_lo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    lo = static_cast<std::uint32_t>(p);
    hi = static_cast<std::uint32_t>(p >> 32);
}

inline void philox_round(std::uint32_t c[4], const std::uint32_t k[2]) {
    std::uint32_t lo0, hi0, lo1, hi1;
    mul_hi_lo(kMul0, c[0], lo0, hi0);
    mul_hi_lo(kMul1, c[2], lo1, hi1);
    const std::uint32_t r0 = hi1 ^ c[1] ^ k[0];
    const std::uint32_t r1 = lo1;
    const std::uint32_t r2 = hi0 ^ c[3] ^ k[1];
    const std::uint32_t r3 = lo0;
    c[0] = r0;
    c[1] = r1;
    c[2] = r2;
    c[3] = r3;
}

// 53-bit uniform in (0,1); strictly positive so log() is safe.
inline double to_unit_double(std::uint32_t a, std::uint32_t b) {
    const std::uint64_t bits = (static_cast<std::uint64_t>(a) << 32) | b;
    return static_cast<double>(bits >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

} // namespace

PhiloxBlock philox4x32(std::uint64_t key, std::uint64_t ctr_lo, std::uint64_t ctr_hi) {
    std::uint32_t c[4] = {
        static_cast<std::uint32_t>(ctr_lo),
        static_cast<std::uint32_t>(ctr_lo >> 32),
        static_cast<std::uint32_t>(ctr_hi),
        static_cast<std::uint32_t>(ctr_hi >> 32),
    };
    std::uint32_t k[2] = {
        static_cast<std::uint32_t>(key),
        static_cast<std::uint32_t>(key >> 32),
    };
    for (int round = 0; round < 10; ++round) {
        philox_round(c, k);
        k[0] += kWeyl0;
        k[1] += kWeyl1;
    }
    return PhiloxBlock{{c[0], c[1], c[2], c[3]}};
}

double standard_normal_at(std::uint64_t seed, std::uint64_t path, std::uint64_t step) {
    const PhiloxBlock blk = philox4x32(seed, step, path);
    const double u1 = to_unit_double(blk.x[0], blk.x[1]);
    const double u2 = to_unit_double(blk.x[2], blk.x[3]);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double uniform_at(std::uint64_t seed, std::uint64_t path, std::uint64_t step) {
    // Key tweak keeps this stream disjoint from the normal stream.
    const PhiloxBlock blk = philox4x32(seed ^ 0x5bf03635f0a5a5d3ull, step, path);
    return to_unit_double(blk.x[0], blk.x[1]);
}

BrownianDriver::BrownianDriver(std::uint64_t seed, double dt) : seed_(seed), dt_(dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("BrownianDriver: dt must be positive");
    sqrt_dt_ = std::sqrt(dt);
}

double BrownianDriver::increment(std::int64_t path, std::int64_t step) const {
    return sqrt_dt_ * unit_normal(path, step);
}

double BrownianDriver::unit_normal(std::int64_t path, std::int64_t step) const {
    return standard_normal_at(seed_, static_cast<std::uint64_t>(path),
                              static_cast<std::uint64_t>(step) + offset_);
}

BrownianDriver BrownianDriver::shifted(std::int64_t h_steps) const {
    if (h_steps < 0) throw std::invalid_argument("shift_driver: h_steps must be >= 0");
    BrownianDriver out = *this;
    out.offset_ = offset_ + static_cast<std::uint64_t>(h_steps);
    return out;
}

} // namespace mildsim
