#include "mildsim/spectral_field.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mildsim {

SpectralField SpectralField::unit_mode(int n_modes, int mode) {
    if (mode < 1 || mode > n_modes) throw std::invalid_argument("unit_mode: mode out of range");
    SpectralField f(n_modes);
    f.coeffs[static_cast<std::size_t>(mode - 1)] = 1.0;
    return f;
}

double SpectralField::norm2() const { return span_norm2(coeffs); }

double SpectralField::norm() const { return std::sqrt(norm2()); }

SpectralField& SpectralField::operator+=(const SpectralField& other) {
    if (other.n_modes() != n_modes()) throw std::invalid_argument("field sum: mode count mismatch");
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += other.coeffs[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double c) {
    for (double& v : coeffs) v *= c;
    return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) {
    a += b;
    return a;
}

SpectralField operator*(double c, SpectralField v) {
    v *= c;
    return v;
}

double span_norm2(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return acc;
}

double span_dist2(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

std::vector<double> to_physical(std::span<const double> coeffs, std::span<const double> x_grid) {
    std::vector<double> u(x_grid.size(), 0.0);
    const double sqrt2 = std::numbers::sqrt2;
    for (std::size_t j = 0; j < x_grid.size(); ++j) {
        double acc = 0.0;
        for (std::size_t m = 0; m < coeffs.size(); ++m) {
            acc += coeffs[m] * sqrt2 *
                   std::sin(static_cast<double>(m + 1) * std::numbers::pi * x_grid[j]);
        }
        u[j] = acc;
    }
    return u;
}

} // namespace mildsim
