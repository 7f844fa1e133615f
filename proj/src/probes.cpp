#include "mildsim/probes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mildsim/errors.hpp"
#include "mildsim/parallel.hpp"
#include "mildsim/spectral_field.hpp"

namespace mildsim {

SampledProcess SampledProcess::deterministic(
    std::function<void(double, std::span<double>)> fn) {
    SampledProcess p;
    p.n_paths = 1;
    p.at = [fn = std::move(fn)](int, double time, std::span<double> out) { fn(time, out); };
    return p;
}

namespace {

std::vector<int> checked_n_list(std::span<const int> n_list) {
    if (n_list.empty()) throw ConfigError("tail probe: empty n list");
    std::vector<int> sorted(n_list.begin(), n_list.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    if (sorted.front() < 1) throw ConfigError("tail probe: n must be >= 1");
    return sorted;
}

struct Accumulator {
    std::vector<double> level1, level2, diff1, diff2;
    explicit Accumulator(std::size_t rows)
        : level1(rows, 0.0), level2(rows, 0.0), diff1(rows, 0.0), diff2(rows, 0.0) {}
    void add(std::size_t row, double level, double diff) {
        level1[row] += level;
        level2[row] += level * level;
        diff1[row] += diff;
        diff2[row] += diff * diff;
    }
};

std::vector<ProbeRow> finalize(const std::vector<int>& ns,
                               std::span<const Accumulator> partials, int n_paths) {
    std::vector<ProbeRow> rows(ns.size());
    const double n = static_cast<double>(n_paths);
    std::vector<double> buf(partials.size());
    auto combine = [&](auto select, std::size_t r) {
        for (std::size_t b = 0; b < partials.size(); ++b) buf[b] = select(partials[b])[r];
        return pairwise_sum(buf);
    };
    for (std::size_t r = 0; r < ns.size(); ++r) {
        const double l1 = combine([](const Accumulator& a) -> const std::vector<double>& { return a.level1; }, r);
        const double l2 = combine([](const Accumulator& a) -> const std::vector<double>& { return a.level2; }, r);
        const double d1 = combine([](const Accumulator& a) -> const std::vector<double>& { return a.diff1; }, r);
        const double d2 = combine([](const Accumulator& a) -> const std::vector<double>& { return a.diff2; }, r);
        ProbeRow row;
        row.n = ns[r];
        row.level = l1 / n;
        row.diff = d1 / n;
        row.level_se = 0.0;
        row.diff_se = 0.0;
        if (n_paths > 1) {
            const double lvar = std::max(0.0, (l2 - l1 * l1 / n) / (n - 1.0));
            const double dvar = std::max(0.0, (d2 - d1 * d1 / n) / (n - 1.0));
            row.level_se = std::sqrt(lvar / n);
            row.diff_se = std::sqrt(dvar / n);
        }
        rows[r] = row;
    }
    return rows;
}

} // namespace

std::vector<ProbeRow> tail_convolution_probe_drift(const ExpStableSemigroup& sg,
                                                   const SampledProcess& F, double omega,
                                                   std::span<const int> n_list, double t,
                                                   double quad_dt) {
    if (!(omega > 0.0) || !(quad_dt > 0.0)) throw ConfigError("drift probe: bad omega or dt");
    if (t < 0.0) throw std::domain_error("drift probe: t must be >= 0");
    const std::vector<int> ns = checked_n_list(n_list);
    const int max_n = ns.back();
    const long seg_steps = std::lround(omega / quad_dt);
    if (seg_steps < 1 || std::abs(seg_steps * quad_dt - omega) > 1e-9 * omega) {
        throw ConfigError("drift probe: omega must be an integer multiple of quad_dt");
    }
    const int n_modes = sg.n_modes();
    const auto& lambdas = sg.modes();
    const int n_paths = std::max(1, F.n_paths);

    const std::int64_t n_blocks = (n_paths + kParallelBlock - 1) / kParallelBlock;
    std::vector<Accumulator> partials(static_cast<std::size_t>(n_blocks), Accumulator(ns.size()));

    parallel_blocks(n_paths, [&](std::int64_t b, std::int64_t lo, std::int64_t hi) {
        Accumulator& acc = partials[static_cast<std::size_t>(b)];
        std::vector<double> x(static_cast<std::size_t>(n_modes));    // X_n(t)
        std::vector<double> prev(static_cast<std::size_t>(n_modes)); // X_{n-1}(t)
        std::vector<double> fbuf(static_cast<std::size_t>(n_modes));
        for (std::int64_t p = lo; p < hi; ++p) {
            std::fill(x.begin(), x.end(), 0.0);
            std::size_t row = 0;
            // X_n(t) = int_0^{n omega} T(t + n omega - u) F(u) du, built by
            // X_n = T(omega) X_{n-1} + (segment integral over [(n-1)omega, n omega)).
            for (int n = 1; n <= max_n + 1 && row < ns.size(); ++n) {
                std::copy(x.begin(), x.end(), prev.begin());
                const double c = t + n * omega;
                for (int m = 0; m < n_modes; ++m) {
                    x[static_cast<std::size_t>(m)] *=
                        std::exp(lambdas[static_cast<std::size_t>(m)] * omega);
                }
                for (long j = 0; j < seg_steps; ++j) {
                    const double u0 = (n - 1) * omega + static_cast<double>(j) * quad_dt;
                    const double u1 = u0 + quad_dt;
                    F.at(static_cast<int>(p), u0, fbuf);
                    for (int m = 0; m < n_modes; ++m) {
                        const double lam = lambdas[static_cast<std::size_t>(m)];
                        const double wgt =
                            lam == 0.0
                                ? quad_dt
                                : (std::exp(lam * (c - u1)) - std::exp(lam * (c - u0))) / (-lam);
                        x[static_cast<std::size_t>(m)] += wgt * fbuf[static_cast<std::size_t>(m)];
                    }
                }
                // After this pass x = X_n; prev = X_{n-1}. Emit when prev is a
                // requested index, so both X_n and X_{n+1} come from one sweep.
                if (n - 1 == ns[row]) {
                    acc.add(row, span_norm2(prev), span_dist2(x, prev));
                    ++row;
                }
            }
        }
    });
    return finalize(ns, partials, n_paths);
}

std::vector<ProbeRow> tail_convolution_probe_noise(const ExpStableSemigroup& sg,
                                                   const SampledProcess& G,
                                                   const BrownianDriver& driver, double omega,
                                                   std::span<const int> n_list, double t,
                                                   int n_paths) {
    if (!(omega > 0.0)) throw ConfigError("noise probe: omega must be positive");
    if (t < 0.0) throw std::domain_error("noise probe: t must be >= 0");
    if (n_paths < 1) throw ConfigError("noise probe: n_paths must be >= 1");
    const std::vector<int> ns = checked_n_list(n_list);
    const int max_n = ns.back();
    const double dt = driver.dt();
    const long seg_steps = std::lround(omega / dt);
    if (seg_steps < 1 || std::abs(seg_steps * dt - omega) > 1e-9 * omega) {
        throw ConfigError("noise probe: omega must be an integer multiple of the driver dt");
    }
    const int n_modes = sg.n_modes();
    const auto& lambdas = sg.modes();
    const ConvolutionWeights w = sg.convolution_weights(dt);

    const long max_steps = seg_steps * static_cast<long>(max_n + 1);
    const std::int64_t n_blocks = (n_paths + kParallelBlock - 1) / kParallelBlock;
    std::vector<Accumulator> partials(static_cast<std::size_t>(n_blocks), Accumulator(ns.size()));

    parallel_blocks(n_paths, [&](std::int64_t b, std::int64_t lo, std::int64_t hi) {
        Accumulator& acc = partials[static_cast<std::size_t>(b)];
        std::vector<double> xi(static_cast<std::size_t>(max_steps));
        std::vector<double> y(static_cast<std::size_t>(n_modes));
        std::vector<double> y_next(static_cast<std::size_t>(n_modes));
        std::vector<double> gbuf(static_cast<std::size_t>(n_modes));
        for (std::int64_t p = lo; p < hi; ++p) {
            // Step j spans s in [-(j+1)dt, -j dt); the increment address is
            // (path, j), shared by every n so differences cancel pathwise.
            for (long j = 0; j < max_steps; ++j) {
                xi[static_cast<std::size_t>(j)] = driver.unit_normal(p, j);
            }
            // Y_m(t) = sum_j e^{lambda (t + j dt)} noise_std G(m omega - (j+1) dt) xi_j
            auto eval_y = [&](int m_shift, std::span<double> out) {
                std::fill(out.begin(), out.end(), 0.0);
                const long steps = seg_steps * m_shift;
                for (long j = 0; j < steps; ++j) {
                    const double s_left = m_shift * omega - static_cast<double>(j + 1) * dt;
                    G.at(static_cast<int>(p), s_left, gbuf);
                    const double z = xi[static_cast<std::size_t>(j)];
                    for (int m = 0; m < n_modes; ++m) {
                        const double lam = lambdas[static_cast<std::size_t>(m)];
                        const double kern = std::exp(lam * (t + static_cast<double>(j) * dt)) *
                                            w.noise_std[static_cast<std::size_t>(m)];
                        out[static_cast<std::size_t>(m)] +=
                            kern * gbuf[static_cast<std::size_t>(m)] * z;
                    }
                }
            };
            std::size_t row = 0;
            for (int n = 1; n <= max_n && row < ns.size(); ++n) {
                if (n != ns[row]) continue;
                eval_y(n, y);
                eval_y(n + 1, y_next);
                acc.add(row, span_norm2(y), span_dist2(y_next, y));
                ++row;
            }
        }
    });
    return finalize(ns, partials, n_paths);
}

} // namespace mildsim
