#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "cdh/core.hpp"

namespace cdh {

/// Samples of a function of the log coordinate y at a fixed time, together
/// with its limits as y -> -inf (tail_left) and y -> +inf (tail_right).
///
/// Holds v(y, t) of the log-coordinate map, and also w = K - v and psi = w_y.
struct LineField {
    std::vector<double> grid;
    std::vector<double> values;
    double time = 0.0;
    double tail_left = 0.0;
    double tail_right = 0.0;
    /// Pointwise error bound attached by the producer (0 for exact samples).
    double error_bound = 0.0;

    void validate() const {
        if (grid.size() != values.size() || grid.size() < 2)
            throw DomainError("LineField: grid and values must have equal size >= 2");
        for (std::size_t k = 1; k < grid.size(); ++k)
            if (!(grid[k] > grid[k - 1])) throw DomainError("LineField: grid must be strictly increasing");
        for (double v : values)
            if (!std::isfinite(v)) throw DomainError("LineField: values must be finite");
        if (!std::isfinite(tail_left) || !std::isfinite(tail_right))
            throw DomainError("LineField: tails must be finite");
        if (!(time >= 0.0)) throw DomainError("LineField: time must be >= 0");
    }

    [[nodiscard]] std::size_t size() const { return grid.size(); }
};

/// Radial function u(|x|, t) sampled at radii r_k > 0.
///
/// Radii are stored through their logarithms: for N >= 3 the interesting part
/// of the solution sits at r ~ exp(-(N-2) t), which underflows a double long
/// before the asymptotic regime is reached.
struct RadialField {
    std::vector<double> log_radii;
    std::vector<double> values;
    double time = 0.0;
    Dimension dim{3};
    /// u at r = 0 (possibly a declared limit).
    double origin_value = 0.0;

    void validate(double negativity_tolerance = 1e-12) const {
        if (log_radii.size() != values.size() || log_radii.empty())
            throw DomainError("RadialField: radii and values must have equal non-zero size");
        for (std::size_t k = 1; k < log_radii.size(); ++k)
            if (!(log_radii[k] > log_radii[k - 1]))
                throw DomainError("RadialField: radii must be strictly increasing");
        for (double v : values)
            if (!std::isfinite(v) || v < -negativity_tolerance)
                throw DomainError("RadialField: values must be finite and nonnegative");
        if (!(origin_value >= 0.0)) throw DomainError("RadialField: origin value must be >= 0");
    }

    [[nodiscard]] double radius(std::size_t k) const { return std::exp(log_radii[k]); }
    [[nodiscard]] std::size_t size() const { return values.size(); }
};

inline std::vector<double> uniform_grid(double lo, double hi, std::size_t points) {
    if (points < 2 || !(hi > lo)) throw DomainError("uniform_grid: need hi > lo and >= 2 points");
    std::vector<double> g(points);
    const double h = (hi - lo) / static_cast<double>(points - 1);
    for (std::size_t k = 0; k < points; ++k) g[k] = lo + h * static_cast<double>(k);
    g.back() = hi;
    return g;
}

enum class Scheme { kernel, crank_nicolson };

inline const char* to_string(Scheme s) { return s == Scheme::kernel ? "kernel" : "crank_nicolson"; }

/// Time-ordered immutable snapshots of one solution.
///
/// Kernel snapshots are LineFields in the moving frame y = log r + (N-2) t;
/// Crank-Nicolson snapshots are RadialFields on the annulus grid.
struct SolutionTrajectory {
    struct Snapshot {
        double time = 0.0;
        std::variant<LineField, RadialField> field;
    };

    std::vector<Snapshot> snapshots;
    Scheme scheme = Scheme::kernel;
    Dimension dim{3};
    double residual_bound = 0.0;
    /// int v_0 dy of the initial datum (M_{u0} / omega_1); NaN when not integrable.
    double initial_line_mass = std::numeric_limits<double>::quiet_NaN();

    void validate() const {
        for (std::size_t k = 1; k < snapshots.size(); ++k)
            if (!(snapshots[k].time > snapshots[k - 1].time))
                throw DomainError("SolutionTrajectory: snapshot times must be strictly increasing");
    }
};

}  // namespace cdh
