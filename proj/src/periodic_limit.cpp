#include "mildsim/periodic_limit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mildsim {

SpikeFamily SpikeFamily::harmonic() {
    return SpikeFamily{[](int n) { return 1.0 / (n + 1.0); }};
}

double eval_spike(double t, const SpikeFamily& fam) {
    if (t < 0.0) throw std::domain_error("eval_spike: t must be >= 0");
    if (t <= 2.0) {
        // First spike: anchors (0,0), (1,1), (2,0).
        return 1.0 - std::abs(t - 1.0);
    }
    // Nearest odd center 2n+1 with n >= 1.
    const int n = static_cast<int>(std::lround((t - 1.0) / 2.0));
    const double center = 2.0 * n + 1.0;
    const double k = fam.half_width(n);
    if (!(k > 0.0 && k < 1.0)) throw std::domain_error("eval_spike: half-width outside (0,1)");
    const double d = std::abs(t - center);
    return d >= k ? 0.0 : 1.0 - d / k;
}

double eval_spike_limit(double t) {
    if (t < 0.0) return 0.0;
    const double nearest_odd = 2.0 * std::floor((t + 1.0) / 2.0) - 1.0;
    return (nearest_odd >= 1.0 && std::abs(t - nearest_odd) <= 1e-12) ? 1.0 : 0.0;
}

PeriodicLimitFn spike_fn(SpikeFamily fam) {
    PeriodicLimitFn f;
    f.omega = 2.0;
    f.sup_bound = 1.0;
    f.eval = [fam](double t) { return eval_spike(t, fam); };
    f.known_limit = [](double t) { return eval_spike_limit(t); };
    return f;
}

PointwiseLimit estimate_pointwise_limit(const PeriodicLimitFn& f, double t, int n_max,
                                        double tol) {
    if (n_max < 2) throw std::invalid_argument("estimate_pointwise_limit: n_max must be >= 2");
    if (t < 0.0) throw std::domain_error("estimate_pointwise_limit: t must be >= 0");
    PointwiseLimit out;
    const int window_start = n_max - std::max(1, n_max / 4);
    double prev = f.eval(t);
    double worst = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        const double cur = f.eval(t + n * f.omega);
        if (n > window_start) worst = std::max(worst, std::abs(cur - prev));
        prev = cur;
    }
    out.limit = prev;
    out.last_delta = worst;
    out.converged = worst <= tol;
    return out;
}

std::string to_string(FnClass c) {
    switch (c) {
        case FnClass::AsymptoticallyPeriodic: return "AsymptoticallyPeriodic";
        case FnClass::PeriodicLimitOnly: return "PeriodicLimitOnly";
        case FnClass::Undetermined: return "Undetermined";
    }
    return "Undetermined";
}

FnClassification classify_deterministic(const PeriodicLimitFn& f, std::span<const double> grid,
                                        int n_max, double tol, std::vector<int> sup_schedule) {
    if (grid.empty()) throw std::invalid_argument("classify_deterministic: grid is empty");
    if (sup_schedule.empty()) {
        for (int n = 1; n <= std::max(1, n_max / 4); n *= 2) sup_schedule.push_back(n);
    }

    FnClassification out;
    out.tol = tol;
    out.n_max = n_max;
    out.pointwise.reserve(grid.size());

    std::vector<double> limits(grid.size());
    bool all_converged = true;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const PointwiseLimit pl = estimate_pointwise_limit(f, grid[i], n_max, tol);
        limits[i] = pl.limit;
        all_converged = all_converged && pl.converged;
        out.pointwise.push_back({grid[i], pl.limit, pl.converged, pl.last_delta});
    }

    out.sup_table.reserve(sup_schedule.size());
    for (int n : sup_schedule) {
        double sup = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            sup = std::max(sup, std::abs(f.eval(grid[i] + n * f.omega) - limits[i]));
        }
        out.sup_table.push_back({n, sup});
    }

    out.all_pointwise_converged = all_converged;
    out.uniform_converged = !out.sup_table.empty() && out.sup_table.back().sup_discrepancy <= tol;
    if (all_converged && out.uniform_converged) {
        out.verdict = FnClass::AsymptoticallyPeriodic;
    } else if (all_converged) {
        out.verdict = FnClass::PeriodicLimitOnly;
    } else {
        out.verdict = FnClass::Undetermined;
    }
    return out;
}

PeriodicLimitFn const_fn(double value, double omega) {
    PeriodicLimitFn f;
    f.omega = omega;
    f.sup_bound = std::abs(value);
    f.eval = [value](double) { return value; };
    f.known_limit = f.eval;
    return f;
}

PeriodicLimitFn sin_fn(double amplitude, double period) {
    if (!(period > 0.0)) throw std::invalid_argument("sin_fn: period must be positive");
    PeriodicLimitFn f;
    f.omega = period;
    f.sup_bound = std::abs(amplitude);
    f.eval = [amplitude, period](double t) {
        return amplitude * std::sin(2.0 * std::numbers::pi * t / period);
    };
    f.known_limit = f.eval;
    return f;
}

PeriodicLimitFn decaying_sin_fn(double amplitude, double period, double rate) {
    if (!(period > 0.0)) throw std::invalid_argument("decaying_sin_fn: period must be positive");
    if (!(rate > 0.0)) throw std::invalid_argument("decaying_sin_fn: rate must be positive");
    PeriodicLimitFn f;
    f.omega = period;
    f.sup_bound = 2.0 * std::abs(amplitude);
    f.eval = [amplitude, period, rate](double t) {
        return amplitude * (std::sin(2.0 * std::numbers::pi * t / period) + std::exp(-rate * t));
    };
    f.known_limit = [amplitude, period](double t) {
        return amplitude * std::sin(2.0 * std::numbers::pi * t / period);
    };
    return f;
}

PeriodicLimitFn sum_fn(PeriodicLimitFn a, PeriodicLimitFn b) {
    if (a.omega != b.omega) throw std::invalid_argument("sum_fn: period mismatch");
    PeriodicLimitFn f;
    f.omega = a.omega;
    f.sup_bound = a.sup_bound + b.sup_bound;
    auto ea = a.eval;
    auto eb = b.eval;
    f.eval = [ea, eb](double t) { return ea(t) + eb(t); };
    if (a.known_limit && b.known_limit) {
        auto la = a.known_limit;
        auto lb = b.known_limit;
        f.known_limit = [la, lb](double t) { return la(t) + lb(t); };
    }
    return f;
}

PeriodicLimitFn scale_fn(double c, PeriodicLimitFn f) {
    PeriodicLimitFn out;
    out.omega = f.omega;
    out.sup_bound = std::abs(c) * f.sup_bound;
    auto e = f.eval;
    out.eval = [c, e](double t) { return c * e(t); };
    if (f.known_limit) {
        auto l = f.known_limit;
        out.known_limit = [c, l](double t) { return c * l(t); };
    }
    return out;
}

PeriodicLimitFn shift_fn(double a, PeriodicLimitFn f) {
    if (a < 0.0) throw std::invalid_argument("shift_fn: shift must be >= 0");
    PeriodicLimitFn out;
    out.omega = f.omega;
    out.sup_bound = f.sup_bound;
    auto e = f.eval;
    out.eval = [a, e](double t) { return e(t + a); };
    if (f.known_limit) {
        auto l = f.known_limit;
        out.known_limit = [a, l](double t) { return l(t + a); };
    }
    return out;
}

} // namespace mildsim
