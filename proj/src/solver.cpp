#include "mildsim/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mildsim/errors.hpp"
#include "mildsim/parallel.hpp"

namespace mildsim {

double contraction_constant(double M, double a, double L_f, double L_g) {
    if (!(a > 0.0)) throw ConfigError("contraction constant: decay rate a must be positive");
    if (M < 1.0) throw ConfigError("contraction constant: growth constant M must be >= 1");
    if (L_f < 0.0 || L_g < 0.0) throw ConfigError("contraction constant: negative Lipschitz constant");
    return 2.0 * M * M * (L_f / (a * a) + L_g / a);
}

GateResult example_gate(double psi_sup, double phi_sup) {
    if (psi_sup < 0.0 || phi_sup < 0.0) throw ConfigError("gate: sup norms must be >= 0");
    const double pi2 = std::numbers::pi * std::numbers::pi;
    GateResult r;
    r.lhs = psi_sup + phi_sup * pi2;
    r.rhs = pi2 * pi2 / 2.0;
    r.holds = r.lhs < r.rhs;
    return r;
}

namespace {

void validate_config(const ExpStableSemigroup& sg, const SolverConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw ConfigError("solver: dt must be positive");
    if (cfg.n_steps < 1) throw ConfigError("solver: n_steps must be >= 1");
    if (cfg.n_paths < 1) throw ConfigError("solver: n_paths must be >= 1");
    if (!cfg.initial_sampler && cfg.initial.n_modes() != sg.n_modes()) {
        throw ConfigError("solver: initial field does not match n_modes");
    }
}

void load_initial(const SolverConfig& cfg, int path, int n_modes, std::span<double> out) {
    if (cfg.initial_sampler) {
        const SpectralField f = cfg.initial_sampler(path);
        if (f.n_modes() != n_modes) throw ConfigError("solver: sampled initial field size mismatch");
        std::copy(f.coeffs.begin(), f.coeffs.end(), out.begin());
    } else {
        std::copy(cfg.initial.coeffs.begin(), cfg.initial.coeffs.end(), out.begin());
    }
}

// Advances one path through all steps. `coeff_state(k)` is the field the
// coefficients see at step k (the path's own state for integrate, the input
// ensemble's state for the Gamma map). `emit(k, x)` observes the state at
// step index k (including k = 0).
template <typename CoeffState, typename Emit>
void run_path(const ExpStableSemigroup& sg, const CoefficientFn& f, const CoefficientFn& g,
              const SolverConfig& cfg, const ConvolutionWeights& w, const BrownianDriver& driver,
              int path, std::span<double> x, std::span<double> fbuf, std::span<double> gbuf,
              CoeffState&& coeff_state, Emit&& emit) {
    const int n_modes = sg.n_modes();
    load_initial(cfg, path, n_modes, x);
    emit(0, x);
    for (int k = 0; k < cfg.n_steps; ++k) {
        const double tk = cfg.t0 + k * cfg.dt;
        const std::span<const double> base = coeff_state(k, x);
        if (!f.is_zero) f.eval_into(tk, base, fbuf);
        if (!g.is_zero) g.eval_into(tk, base, gbuf);
        const double xi = g.is_zero ? 0.0 : driver.unit_normal(path, k);
        bool finite = true;
        for (int m = 0; m < n_modes; ++m) {
            double v = w.decay[static_cast<std::size_t>(m)] * x[static_cast<std::size_t>(m)];
            if (!f.is_zero) v += w.drift[static_cast<std::size_t>(m)] * fbuf[static_cast<std::size_t>(m)];
            if (!g.is_zero) v += w.noise_std[static_cast<std::size_t>(m)] * gbuf[static_cast<std::size_t>(m)] * xi;
            x[static_cast<std::size_t>(m)] = v;
            finite = finite && std::isfinite(v);
        }
        if (!finite) {
            throw DivergenceError("integration diverged: non-finite state", k + 1);
        }
        emit(k + 1, x);
    }
}

} // namespace

PathEnsemble integrate(const ExpStableSemigroup& sg, const CoefficientFn& f,
                       const CoefficientFn& g, const SolverConfig& cfg) {
    validate_config(sg, cfg);
    const int n_modes = sg.n_modes();
    PathEnsemble out = PathEnsemble::full(cfg.n_paths, n_modes, cfg.dt, cfg.t0, cfg.n_steps);
    const ConvolutionWeights w = sg.convolution_weights(cfg.dt);
    const BrownianDriver driver(cfg.seed, cfg.dt);
    parallel_blocks(cfg.n_paths, [&](std::int64_t, std::int64_t lo, std::int64_t hi) {
        std::vector<double> x(static_cast<std::size_t>(n_modes));
        std::vector<double> fbuf(static_cast<std::size_t>(n_modes));
        std::vector<double> gbuf(static_cast<std::size_t>(n_modes));
        for (std::int64_t p = lo; p < hi; ++p) {
            run_path(
                sg, f, g, cfg, w, driver, static_cast<int>(p), x, fbuf, gbuf,
                [&](int, std::span<double> state) { return std::span<const double>(state); },
                [&](int k, std::span<const double> state) {
                    auto dst = out.field(static_cast<int>(p), k);
                    std::copy(state.begin(), state.end(), dst.begin());
                });
        }
    });
    return out;
}

SimulationSummary integrate_moments(const ExpStableSemigroup& sg, const CoefficientFn& f,
                                    const CoefficientFn& g, const SolverConfig& cfg,
                                    std::span<const int> keep_steps) {
    validate_config(sg, cfg);
    const int n_modes = sg.n_modes();
    std::vector<int> keep(keep_steps.begin(), keep_steps.end());
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    if (keep.empty()) keep.push_back(cfg.n_steps);
    if (keep.back() > cfg.n_steps || keep.front() < 0) {
        throw ConfigError("solver: retained step outside [0, n_steps]");
    }

    SimulationSummary summary{
        {}, PathEnsemble(cfg.n_paths, n_modes, cfg.dt, cfg.t0, keep)};
    const ConvolutionWeights w = sg.convolution_weights(cfg.dt);
    const BrownianDriver driver(cfg.seed, cfg.dt);

    const std::int64_t n_blocks = (cfg.n_paths + kParallelBlock - 1) / kParallelBlock;
    const std::size_t n_times = static_cast<std::size_t>(cfg.n_steps) + 1;
    // Per-block running sums of ||x||^2 and ||x||^4 per step, combined in
    // block order afterwards so results do not depend on the thread count.
    std::vector<std::vector<double>> sum1(static_cast<std::size_t>(n_blocks)),
        sum2(static_cast<std::size_t>(n_blocks));

    parallel_blocks(cfg.n_paths, [&](std::int64_t b, std::int64_t lo, std::int64_t hi) {
        auto& s1 = sum1[static_cast<std::size_t>(b)];
        auto& s2 = sum2[static_cast<std::size_t>(b)];
        s1.assign(n_times, 0.0);
        s2.assign(n_times, 0.0);
        std::vector<double> x(static_cast<std::size_t>(n_modes));
        std::vector<double> fbuf(static_cast<std::size_t>(n_modes));
        std::vector<double> gbuf(static_cast<std::size_t>(n_modes));
        for (std::int64_t p = lo; p < hi; ++p) {
            run_path(
                sg, f, g, cfg, w, driver, static_cast<int>(p), x, fbuf, gbuf,
                [&](int, std::span<double> state) { return std::span<const double>(state); },
                [&](int k, std::span<const double> state) {
                    const double v = span_norm2(state);
                    s1[static_cast<std::size_t>(k)] += v;
                    s2[static_cast<std::size_t>(k)] += v * v;
                    if (summary.slices.has_step(k)) {
                        auto dst = summary.slices.field(static_cast<int>(p), k);
                        std::copy(state.begin(), state.end(), dst.begin());
                    }
                });
        }
    });

    summary.moments.resize(n_times);
    std::vector<double> partial(static_cast<std::size_t>(n_blocks));
    const double n = static_cast<double>(cfg.n_paths);
    for (std::size_t k = 0; k < n_times; ++k) {
        for (std::size_t b = 0; b < static_cast<std::size_t>(n_blocks); ++b) partial[b] = sum1[b][k];
        const double s1 = pairwise_sum(partial);
        for (std::size_t b = 0; b < static_cast<std::size_t>(n_blocks); ++b) partial[b] = sum2[b][k];
        const double s2 = pairwise_sum(partial);
        const double mean = s1 / n;
        double se = 0.0;
        if (cfg.n_paths > 1) {
            const double var = std::max(0.0, (s2 - s1 * s1 / n) / (n - 1.0));
            se = std::sqrt(var / n);
        }
        summary.moments[k] = {cfg.t0 + static_cast<double>(k) * cfg.dt, mean, se};
    }
    return summary;
}

PathEnsemble gamma_apply(const PathEnsemble& X, const ExpStableSemigroup& sg,
                         const CoefficientFn& f, const CoefficientFn& g,
                         const SolverConfig& cfg) {
    validate_config(sg, cfg);
    if (X.n_paths() != cfg.n_paths || X.n_modes() != sg.n_modes() ||
        X.last_step() < cfg.n_steps || !X.contiguous()) {
        throw std::invalid_argument("gamma_apply: input ensemble does not match the config");
    }
    const int n_modes = sg.n_modes();
    PathEnsemble out = PathEnsemble::full(cfg.n_paths, n_modes, cfg.dt, cfg.t0, cfg.n_steps);
    const ConvolutionWeights w = sg.convolution_weights(cfg.dt);
    const BrownianDriver driver(cfg.seed, cfg.dt);
    parallel_blocks(cfg.n_paths, [&](std::int64_t, std::int64_t lo, std::int64_t hi) {
        std::vector<double> x(static_cast<std::size_t>(n_modes));
        std::vector<double> fbuf(static_cast<std::size_t>(n_modes));
        std::vector<double> gbuf(static_cast<std::size_t>(n_modes));
        for (std::int64_t p = lo; p < hi; ++p) {
            run_path(
                sg, f, g, cfg, w, driver, static_cast<int>(p), x, fbuf, gbuf,
                [&](int k, std::span<double>) { return X.field(static_cast<int>(p), k); },
                [&](int k, std::span<const double> state) {
                    auto dst = out.field(static_cast<int>(p), k);
                    std::copy(state.begin(), state.end(), dst.begin());
                });
        }
    });
    return out;
}

double sup_square_mean_distance(const PathEnsemble& a, const PathEnsemble& b) {
    if (a.stored_steps() != b.stored_steps() || a.n_paths() != b.n_paths() ||
        a.n_modes() != b.n_modes()) {
        throw std::invalid_argument("sup_square_mean_distance: layout mismatch");
    }
    const int modes = a.n_modes();
    double sup = 0.0;
    for (std::size_t s = 0; s < a.stored_steps().size(); ++s) {
        const auto sa = a.slice(static_cast<int>(s));
        const auto sb = b.slice(static_cast<int>(s));
        const MeanVar mv = reduce_mean_var(a.n_paths(), [&](std::int64_t p) {
            const std::size_t at = static_cast<std::size_t>(p) * modes;
            return span_dist2(sa.subspan(at, static_cast<std::size_t>(modes)),
                              sb.subspan(at, static_cast<std::size_t>(modes)));
        });
        sup = std::max(sup, mv.mean);
    }
    return sup;
}

double sup_square_mean_norm(const PathEnsemble& a) {
    const int modes = a.n_modes();
    double sup = 0.0;
    for (std::size_t s = 0; s < a.stored_steps().size(); ++s) {
        const auto sa = a.slice(static_cast<int>(s));
        const MeanVar mv = reduce_mean_var(a.n_paths(), [&](std::int64_t p) {
            return span_norm2(sa.subspan(static_cast<std::size_t>(p) * modes,
                                         static_cast<std::size_t>(modes)));
        });
        sup = std::max(sup, mv.mean);
    }
    return sup;
}

PicardResult picard_solve(const ExpStableSemigroup& sg, const CoefficientFn& f,
                          const CoefficientFn& g, const SolverConfig& cfg,
                          const PicardConfig& pc) {
    validate_config(sg, cfg);
    if (pc.max_iters < 1) throw ConfigError("picard: max_iters must be >= 1");
    const int n_modes = sg.n_modes();

    // X_0(t) == c0: bounded and trivially constructed.
    PathEnsemble current = PathEnsemble::full(cfg.n_paths, n_modes, cfg.dt, cfg.t0, cfg.n_steps);
    parallel_blocks(cfg.n_paths, [&](std::int64_t, std::int64_t lo, std::int64_t hi) {
        std::vector<double> init(static_cast<std::size_t>(n_modes));
        for (std::int64_t p = lo; p < hi; ++p) {
            load_initial(cfg, static_cast<int>(p), n_modes, init);
            for (int k = 0; k <= cfg.n_steps; ++k) {
                auto dst = current.field(static_cast<int>(p), k);
                std::copy(init.begin(), init.end(), dst.begin());
            }
        }
    });

    PicardResult result{std::move(current), 0, {}, false, pc.kappa < 1.0};
    for (int iter = 1; iter <= pc.max_iters; ++iter) {
        PathEnsemble next = gamma_apply(result.solution, sg, f, g, cfg);
        const double residual = sup_square_mean_distance(next, result.solution);
        result.residuals.push_back(residual);
        result.solution = std::move(next);
        result.iterations = iter;
        if (residual <= pc.tol) {
            result.converged = true;
            break;
        }
    }
    return result;
}

} // namespace mildsim
