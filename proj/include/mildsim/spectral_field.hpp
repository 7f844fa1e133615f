#pragma once

#include <span>
#include <vector>

namespace mildsim {

/// Element of the state space represented by coefficients in the orthonormal
/// Dirichlet sine basis phi_n(x) = sqrt(2) sin(n pi x); the norm is the
/// Euclidean norm of the coefficients (Parseval).
struct SpectralField {
    std::vector<double> coeffs;

    SpectralField() = default;
    explicit SpectralField(int n_modes) : coeffs(static_cast<std::size_t>(n_modes), 0.0) {}
    explicit SpectralField(std::vector<double> c) : coeffs(std::move(c)) {}

    static SpectralField unit_mode(int n_modes, int mode); // 1-based mode index

    int n_modes() const { return static_cast<int>(coeffs.size()); }
    double norm2() const;
    double norm() const;

    SpectralField& operator+=(const SpectralField& other);
    SpectralField& operator*=(double c);
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator*(double c, SpectralField v);

double span_norm2(std::span<const double> v);
double span_dist2(std::span<const double> a, std::span<const double> b);

/// Physical-space evaluation u(x) = sum_n c_n sqrt(2) sin(n pi x), for output.
std::vector<double> to_physical(std::span<const double> coeffs, std::span<const double> x_grid);

} // namespace mildsim
