#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "cdh/core.hpp"
#include "cdh/erfc.hpp"

namespace cdh {

/// Parameters of an asymptotic profile. `mass` is meaningful for F-type
/// profiles (M_{u0}/omega_1 scaling), `level` for E-type profiles (u0(0) = K).
struct ProfileParams {
    Dimension dim{3};
    double mass = 0.0;
    double level = 0.0;
};

/// Range of the angular coordinate theta used by the non-radial F_N.
/// 0 <= theta_min <= theta_max <= 2 pi; equal endpoints describe the
/// degenerate (radial) case.
struct AngularRange {
    double theta_min = 0.0;
    double theta_max = 2.0 * std::numbers::pi;

    AngularRange() = default;
    AngularRange(double lo, double hi) : theta_min(lo), theta_max(hi) {
        constexpr double two_pi = 2.0 * std::numbers::pi;
        if (!(lo >= 0.0 && lo <= hi && hi <= two_pi + 1e-15))
            throw DomainError("angular range must satisfy 0 <= min <= max <= 2pi");
    }

    [[nodiscard]] double width() const { return theta_max - theta_min; }
    [[nodiscard]] bool contains(double theta) const { return theta >= theta_min && theta <= theta_max; }
};

/// Standard heat kernel on the line, (4 pi t)^{-1/2} exp(-y^2 / 4t).
inline double gaussian_kernel(double y, double t) {
    require_positive_time(t, "gaussian_kernel");
    return std::exp(-y * y / (4.0 * t)) / std::sqrt(4.0 * std::numbers::pi * t);
}

/// Similarity variable (log r + (N-2) t) / (2 sqrt t).
inline double similarity_variable(double r, double t, Dimension dim) {
    return (std::log(r) + dim.drift() * t) / (2.0 * std::sqrt(t));
}

/// Profile F(r, t): Gaussian in the moving log coordinate, 0 at the origin.
inline double profile_F(double r, double t, Dimension dim) {
    require_positive_time(t, "profile_F");
    if (r < 0.0) throw DomainError("profile_F: radius must be >= 0");
    if (r == 0.0) return 0.0;
    const double xi = similarity_variable(r, t, dim);
    return std::exp(-xi * xi) / std::sqrt(4.0 * std::numbers::pi * t);
}

/// F evaluated from the log radius directly; needed once e^{-(N-2)t}
/// underflows (N >= 3, t in the hundreds).
inline double profile_F_log(double log_r, double t, Dimension dim) {
    require_positive_time(t, "profile_F_log");
    const double y = log_r + dim.drift() * t;
    return std::exp(-y * y / (4.0 * t)) / std::sqrt(4.0 * std::numbers::pi * t);
}

/// Scaled limit (level/2) erfc(xi); equals `level` at r = 0, level/2 at the
/// hotspot radius and tends to 0 as r -> infinity. level = 2 gives bare erfc.
inline double profile_E(double r, double t, Dimension dim, double level) {
    require_positive_time(t, "profile_E");
    if (!(level >= 0.0) || !std::isfinite(level)) throw DomainError("profile_E: level must be finite and >= 0");
    if (r < 0.0) throw DomainError("profile_E: radius must be >= 0");
    if (r == 0.0) return level;
    return 0.5 * level * erfc_fn(similarity_variable(r, t, dim));
}

inline double profile_E_log(double log_r, double t, Dimension dim, double level) {
    require_positive_time(t, "profile_E_log");
    if (!(level >= 0.0) || !std::isfinite(level)) throw DomainError("profile_E_log: level must be finite and >= 0");
    return 0.5 * level * erfc_fn((log_r + dim.drift() * t) / (2.0 * std::sqrt(t)));
}

/// Non-radial solution theta * F(r, t); theta is the last spherical angle.
inline double profile_FN(double r, double theta, double t, Dimension dim,
                         const AngularRange& range = {}) {
    if (!range.contains(theta)) throw DomainError("profile_FN: theta outside the configured angular range");
    if (!(r > 0.0)) throw DomainError("profile_FN: radius must be > 0");
    return theta * profile_F(r, t, dim);
}

/// Two-branch N = 1 profile: alpha F on x <= 0, (1 - alpha) F on x > 0.
inline double profile_F1(double x, double t, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("profile_F1: alpha must lie in (0, 1)");
    const double f = profile_F(std::fabs(x), t, Dimension{1});
    return (x <= 0.0 ? alpha : 1.0 - alpha) * f;
}

/// F_1 from log|x| and the side of the origin; x itself overflows once t is
/// in the hundreds, since the profile lives near |x| = e^{t}.
inline double profile_F1_log(double log_abs_x, bool negative_side, double t, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("profile_F1_log: alpha must lie in (0, 1)");
    return (negative_side ? alpha : 1.0 - alpha) * profile_F_log(log_abs_x, t, Dimension{1});
}

/// Location and height of the spatial maximum of F.
struct Hotspot {
    double log_radius = 0.0;
    double radius = 0.0;  // underflows to 0 for large (N-2) t; log_radius stays exact
    double value = 0.0;
};

inline Hotspot hotspot(double t, Dimension dim) {
    require_positive_time(t, "hotspot");
    if (dim.n < 3) throw DomainError("hotspot: requires N >= 3");
    const double log_r = -dim.drift() * t;
    return {log_r, std::exp(log_r), 1.0 / std::sqrt(4.0 * std::numbers::pi * t)};
}

/// Large-time behaviour of F and E at fixed x != 0.
///
/// Decaying profiles behave like t^{power} exp(-exp_rate t). For N >= 3 both
/// F and E follow t^{-1/2} exp(-(N-2)^2 t / 4); E tends to 1 when N = 2 and
/// to 2 when N = 1.
struct DecayDescriptor {
    double f_power = -0.5;
    double f_exp_rate = 0.0;
    bool e_has_limit = false;
    double e_limit = 0.0;
    double e_power = -0.5;
    double e_exp_rate = 0.0;

    [[nodiscard]] std::string describe() const {
        std::string s = "F ~ t^" + std::to_string(f_power) + " exp(-" + std::to_string(f_exp_rate) + " t); ";
        if (e_has_limit) s += "E -> " + std::to_string(e_limit);
        else s += "E ~ t^" + std::to_string(e_power) + " exp(-" + std::to_string(e_exp_rate) + " t)";
        return s;
    }
};

inline DecayDescriptor decay_descriptor(Dimension dim) {
    const double rate = 0.25 * dim.drift() * dim.drift();
    DecayDescriptor d;
    d.f_exp_rate = rate;
    if (dim.n == 2) {
        d.e_has_limit = true;
        d.e_limit = 1.0;
    } else if (dim.n == 1) {
        d.e_has_limit = true;
        d.e_limit = 2.0;
    } else {
        d.e_exp_rate = rate;
    }
    return d;
}

}  // namespace cdh
