#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cdh {

/// Argument outside the mathematical domain of an operation (t <= 0, alpha
/// outside (0,1), negative level, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The operation exists but not for this input (e.g. the inversion map in N = 2).
class Unsupported : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A numerical scheme failed one of its own guarantees (non-monotone nesting,
/// negative values, unresolved grid, ...).
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Spatial dimension N.
struct Dimension {
    int n = 3;

    constexpr Dimension() = default;
    constexpr explicit Dimension(int value) : n(value) {
        if (value < 1) throw DomainError("dimension must be >= 1, got " + std::to_string(value));
    }

    /// Drift of the log-coordinate map, N - 2.
    [[nodiscard]] constexpr double drift() const { return static_cast<double>(n - 2); }

    friend constexpr bool operator==(Dimension, Dimension) = default;
};

/// Surface area of the unit sphere in R^N, 2 pi^{N/2} / Gamma(N/2).
///
/// Gamma at integers and half-integers is evaluated in closed form, so the
/// constant is exact to rounding for every N.
inline double unit_sphere_area(Dimension dim) {
    const int n = dim.n;
    const double pi = std::numbers::pi;
    // Gamma(n/2)
    double gamma_half = 0.0;
    if (n % 2 == 0) {
        gamma_half = 1.0;  // (n/2 - 1)!
        for (int k = 2; k < n / 2; ++k) gamma_half *= k;
    } else {
        gamma_half = std::sqrt(pi);  // Gamma(1/2)
        for (int k = 1; k < n; k += 2) gamma_half *= 0.5 * k;
    }
    return 2.0 * std::pow(pi, 0.5 * n) / gamma_half;
}

inline void require_positive_time(double t, const char* what) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw DomainError(std::string(what) + ": time must be finite and > 0, got " + std::to_string(t));
}

}  // namespace cdh
