#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cdh/core.hpp"
#include "cdh/erfc.hpp"
#include "cdh/interpolation.hpp"

namespace cdh {

// Initial-data families. Every family is written in the log coordinate
// y = log r, i.e. as v0(y) = u0(e^y); the radial datum is u0(r) = v0(log r).

/// height on r1 <= r <= r2, zero elsewhere.
struct AnnulusIndicator {
    double r1 = 1.0;
    double r2 = std::numbers::e;
    double height = 1.0;
};

/// height * exp(-((y - center) / width)^2).
struct GaussianBumpInY {
    double center = 0.0;
    double width = 1.0;
    double height = 1.0;
};

/// Logistic step K / (1 + (r / transition_radius)^sharpness), i.e.
/// K / (1 + exp(sharpness (y - log transition_radius))). sharpness = +inf
/// gives the sharp step K on r < transition_radius.
struct StepToK {
    double K = 1.0;
    double transition_radius = std::numbers::e;
    double sharpness = 4.0;
};

/// (K / 2) erfc(y - shift): the E-type profile at time 1/4, shifted.
struct SmoothErfcLike {
    double K = 1.0;
    double shift = 0.0;
};

/// Samples (r_k, u_k), monotone cubic in log r between samples, declared
/// limits outside the sampled range.
struct Tabulated {
    std::vector<double> radii;
    std::vector<double> values;
    double tail_left = 0.0;   // u at r -> 0 (the origin value)
    double tail_right = 0.0;  // u as r -> infinity
};

/// u0 == value.
struct Constant {
    double value = 0.0;
};

using DatumComponent = std::variant<AnnulusIndicator, GaussianBumpInY, StepToK, SmoothErfcLike, Tabulated, Constant>;

inline const char* family_name(const DatumComponent& c) {
    static constexpr const char* names[] = {"annulus_indicator", "gaussian_bump_in_y", "step_to_K",
                                            "smooth_erfc_like", "tabulated", "constant"};
    return names[c.index()];
}

/// Description of the initial datum u0 >= 0: a sum of family components in a
/// given dimension. Sums arise naturally for ordered pairs (u0 + bump) and are
/// solved by superposition.
class InitialDatum {
public:
    InitialDatum() = default;
    InitialDatum(DatumComponent component, Dimension dim) : dim_(dim) { add(std::move(component)); }

    InitialDatum& add(DatumComponent component) {
        validate(component);
        if (auto* tab = std::get_if<Tabulated>(&component)) {
            std::vector<double> ys(tab->radii.size());
            for (std::size_t k = 0; k < ys.size(); ++k) ys[k] = std::log(tab->radii[k]);
            interpolants_.push_back(monotone_cubic(std::move(ys), tab->values));
        } else {
            interpolants_.emplace_back();
        }
        parts_.push_back(std::move(component));
        return *this;
    }

    [[nodiscard]] Dimension dim() const { return dim_; }
    void set_dim(Dimension d) { dim_ = d; }
    [[nodiscard]] const std::vector<DatumComponent>& parts() const { return parts_; }

    /// v0(y) = u0(e^y).
    [[nodiscard]] double line_value(double y) const {
        double sum = 0.0;
        for (std::size_t i = 0; i < parts_.size(); ++i) sum += component_value(i, y);
        return sum;
    }

    /// u0(r), with the origin value at r = 0.
    [[nodiscard]] double radial_value(double r) const {
        if (r < 0.0) throw DomainError("InitialDatum: radius must be >= 0");
        return r == 0.0 ? origin_value() : line_value(std::log(r));
    }

    /// dv0/dy; nullopt when the datum has a jump (no classical gradient).
    [[nodiscard]] std::optional<double> line_derivative(double y) const {
        if (!jumps().empty()) return std::nullopt;
        double sum = 0.0;
        for (std::size_t i = 0; i < parts_.size(); ++i) sum += component_derivative(i, y);
        return sum;
    }

    [[nodiscard]] double tail_left() const {
        double s = 0.0;
        for (const auto& p : parts_) s += component_tails(p).first;
        return s;
    }
    [[nodiscard]] double tail_right() const {
        double s = 0.0;
        for (const auto& p : parts_) s += component_tails(p).second;
        return s;
    }
    [[nodiscard]] double origin_value() const { return tail_left(); }

    /// Positions (in y) of jump discontinuities of v0.
    [[nodiscard]] std::vector<double> jumps() const {
        std::vector<double> out;
        for (const auto& p : parts_) {
            if (auto* a = std::get_if<AnnulusIndicator>(&p)) {
                if (a->height != 0.0) {
                    out.push_back(std::log(a->r1));
                    out.push_back(std::log(a->r2));
                }
            } else if (auto* s = std::get_if<StepToK>(&p)) {
                if (std::isinf(s->sharpness)) out.push_back(std::log(s->transition_radius));
            } else if (auto* tab = std::get_if<Tabulated>(&p)) {
                if (tab->values.front() != tab->tail_left) out.push_back(std::log(tab->radii.front()));
                if (tab->values.back() != tab->tail_right) out.push_back(std::log(tab->radii.back()));
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Tail-split decomposition v0 = tail_left H(y) + tail_right (1 - H(y)) + R(y),
    /// H the complementary Heaviside function (1 for y < 0). R is integrable;
    /// outside [support_lo, support_hi] it is below `outside_bound` in L1.
    struct LineDecomposition {
        double tail_left = 0.0;
        double tail_right = 0.0;
        double support_lo = 0.0;
        double support_hi = 0.0;
        double outside_bound = 0.0;
        double remainder_sup = 0.0;
        double feature_scale = std::numeric_limits<double>::infinity();
        std::vector<double> breakpoints;  // sorted, includes 0 when tails differ
        bool empty_support = true;
    };

    [[nodiscard]] LineDecomposition decomposition() const {
        LineDecomposition d;
        d.tail_left = tail_left();
        d.tail_right = tail_right();
        auto extend = [&](double lo, double hi) {
            if (d.empty_support) {
                d.support_lo = lo;
                d.support_hi = hi;
                d.empty_support = false;
            } else {
                d.support_lo = std::min(d.support_lo, lo);
                d.support_hi = std::max(d.support_hi, hi);
            }
        };
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            const auto& p = parts_[i];
            if (auto* a = std::get_if<AnnulusIndicator>(&p)) {
                const double lo = std::log(a->r1), hi = std::log(a->r2);
                if (a->height == 0.0) continue;
                extend(lo, hi);
                d.breakpoints.insert(d.breakpoints.end(), {lo, hi});
                d.remainder_sup += a->height;
                d.feature_scale = std::min(d.feature_scale, hi - lo);
            } else if (auto* g = std::get_if<GaussianBumpInY>(&p)) {
                if (g->height == 0.0) continue;
                constexpr double span = 9.0;
                extend(g->center - span * g->width, g->center + span * g->width);
                d.outside_bound += g->height * g->width * std::sqrt(std::numbers::pi) * erfc_fn(span);
                d.remainder_sup += g->height;
                d.feature_scale = std::min(d.feature_scale, g->width);
            } else if (auto* s = std::get_if<StepToK>(&p)) {
                const double yc = std::log(s->transition_radius);
                d.remainder_sup += s->K;
                d.breakpoints.push_back(0.0);
                if (std::isinf(s->sharpness)) {
                    extend(std::min(0.0, yc), std::max(0.0, yc));
                    d.breakpoints.push_back(yc);
                } else {
                    // logistic tails decay like K e^{-sharpness |y - yc|}
                    const double len = (std::log(std::max(s->K / s->sharpness, 1.0)) + 42.0) / s->sharpness;
                    extend(std::min(0.0, yc) - len, std::max(0.0, yc) + len);
                    d.outside_bound += 2.0 * s->K * std::exp(-s->sharpness * len) / s->sharpness;
                    d.feature_scale = std::min(d.feature_scale, 1.0 / s->sharpness);
                }
            } else if (auto* e = std::get_if<SmoothErfcLike>(&p)) {
                constexpr double len = 7.0;
                extend(std::min(0.0, e->shift) - len, std::max(0.0, e->shift) + len);
                d.breakpoints.push_back(0.0);
                d.outside_bound += e->K * std::exp(-len * len);
                d.remainder_sup += e->K;
                d.feature_scale = std::min(d.feature_scale, 0.5);
            } else if (auto* tab = std::get_if<Tabulated>(&p)) {
                const auto nodes = interpolants_[i].nodes();
                extend(std::min(0.0, nodes.front()), std::max(0.0, nodes.back()));
                d.breakpoints.insert(d.breakpoints.end(), nodes.begin(), nodes.end());
                d.breakpoints.push_back(0.0);
                double sup = std::max(tab->tail_left, tab->tail_right);
                for (double v : tab->values) sup = std::max(sup, v);
                d.remainder_sup += sup;
            }
        }
        if (d.tail_left != d.tail_right) d.breakpoints.push_back(0.0);
        std::sort(d.breakpoints.begin(), d.breakpoints.end());
        d.breakpoints.erase(std::unique(d.breakpoints.begin(), d.breakpoints.end()), d.breakpoints.end());
        return d;
    }

    /// R(y) = v0(y) - tail_left H(y) - tail_right (1 - H(y)).
    [[nodiscard]] double remainder(double y) const {
        const double step = y < 0.0 ? tail_left() : tail_right();
        return line_value(y) - step;
    }

    /// Characteristic extent |y| of the datum's features (>= 1), used to pad
    /// evaluation windows. Gaussian bumps reach 6 widths (e^{-36} of the
    /// height), enough for mass sums on the t = 0 grid.
    [[nodiscard]] double extent() const {
        double a = 1.0;
        for (const auto& p : parts_) a = std::max(a, component_core_extent(p));
        return a;
    }

private:
    static void validate(const DatumComponent& c) {
        auto finite_nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
        if (auto* a = std::get_if<AnnulusIndicator>(&c)) {
            if (!(a->r1 > 0.0 && a->r2 > a->r1 && std::isfinite(a->r2)) || !finite_nonneg(a->height))
                throw DomainError("annulus_indicator: need 0 < r1 < r2 < inf and height >= 0");
        } else if (auto* g = std::get_if<GaussianBumpInY>(&c)) {
            if (!(g->width > 0.0) || !std::isfinite(g->center) || !finite_nonneg(g->height))
                throw DomainError("gaussian_bump_in_y: need width > 0 and height >= 0");
        } else if (auto* s = std::get_if<StepToK>(&c)) {
            if (!(s->K > 0.0 && std::isfinite(s->K)) || !(s->transition_radius > 0.0) || !(s->sharpness > 0.0))
                throw DomainError("step_to_K: need K > 0, transition_radius > 0, sharpness > 0");
        } else if (auto* e = std::get_if<SmoothErfcLike>(&c)) {
            if (!(e->K > 0.0 && std::isfinite(e->K)) || !std::isfinite(e->shift))
                throw DomainError("smooth_erfc_like: need K > 0 and finite shift");
        } else if (auto* t = std::get_if<Tabulated>(&c)) {
            if (t->radii.size() < 2 || t->radii.size() != t->values.size())
                throw DomainError("tabulated: need >= 2 samples with matching values");
            for (std::size_t k = 0; k < t->radii.size(); ++k) {
                if (!(t->radii[k] > 0.0) || (k > 0 && !(t->radii[k] > t->radii[k - 1])))
                    throw DomainError("tabulated: radii must be positive and strictly increasing");
                if (!finite_nonneg(t->values[k])) throw DomainError("tabulated: values must be >= 0");
            }
            if (!finite_nonneg(t->tail_left) || !finite_nonneg(t->tail_right))
                throw DomainError("tabulated: tails must be >= 0");
        } else if (auto* k = std::get_if<Constant>(&c)) {
            if (!finite_nonneg(k->value)) throw DomainError("constant: value must be >= 0");
        }
    }

    static std::pair<double, double> component_tails(const DatumComponent& c) {
        if (auto* s = std::get_if<StepToK>(&c)) return {s->K, 0.0};
        if (auto* e = std::get_if<SmoothErfcLike>(&c)) return {e->K, 0.0};
        if (auto* t = std::get_if<Tabulated>(&c)) return {t->tail_left, t->tail_right};
        if (auto* k = std::get_if<Constant>(&c)) return {k->value, k->value};
        return {0.0, 0.0};
    }

    static double component_core_extent(const DatumComponent& c) {
        if (auto* a = std::get_if<AnnulusIndicator>(&c)) return std::max(std::fabs(std::log(a->r1)), std::fabs(std::log(a->r2)));
        if (auto* g = std::get_if<GaussianBumpInY>(&c)) return std::fabs(g->center) + 6.0 * g->width;
        if (auto* s = std::get_if<StepToK>(&c)) {
            const double w = std::isinf(s->sharpness) ? 0.0 : 5.0 / s->sharpness;
            return std::fabs(std::log(s->transition_radius)) + w;
        }
        if (auto* e = std::get_if<SmoothErfcLike>(&c)) return std::fabs(e->shift) + 3.0;
        if (auto* t = std::get_if<Tabulated>(&c))
            return std::max(std::fabs(std::log(t->radii.front())), std::fabs(std::log(t->radii.back())));
        return 0.0;
    }

    static double logistic(double z) {  // 1 / (1 + e^z), overflow-safe
        if (z > 0.0) {
            const double e = std::exp(-z);
            return e / (1.0 + e);
        }
        return 1.0 / (1.0 + std::exp(z));
    }

    [[nodiscard]] double component_value(std::size_t i, double y) const {
        const auto& c = parts_[i];
        if (auto* a = std::get_if<AnnulusIndicator>(&c))
            return (y >= std::log(a->r1) && y <= std::log(a->r2)) ? a->height : 0.0;
        if (auto* g = std::get_if<GaussianBumpInY>(&c)) {
            const double z = (y - g->center) / g->width;
            return g->height * std::exp(-z * z);
        }
        if (auto* s = std::get_if<StepToK>(&c)) {
            const double yc = std::log(s->transition_radius);
            if (std::isinf(s->sharpness)) return y < yc ? s->K : 0.0;
            return s->K * logistic(s->sharpness * (y - yc));
        }
        if (auto* e = std::get_if<SmoothErfcLike>(&c)) return 0.5 * e->K * erfc_fn(y - e->shift);
        if (auto* t = std::get_if<Tabulated>(&c)) {
            const auto& f = interpolants_[i];
            if (y < f.front()) return t->tail_left;
            if (y > f.back()) return t->tail_right;
            return f(y);
        }
        return std::get<Constant>(c).value;
    }

    [[nodiscard]] double component_derivative(std::size_t i, double y) const {
        const auto& c = parts_[i];
        if (auto* g = std::get_if<GaussianBumpInY>(&c)) {
            const double z = (y - g->center) / g->width;
            return -2.0 * z / g->width * g->height * std::exp(-z * z);
        }
        if (auto* s = std::get_if<StepToK>(&c)) {
            const double p = logistic(s->sharpness * (y - std::log(s->transition_radius)));
            return -s->K * s->sharpness * p * (1.0 - p);
        }
        if (auto* e = std::get_if<SmoothErfcLike>(&c)) {
            const double z = y - e->shift;
            return -e->K * std::numbers::inv_sqrtpi * std::exp(-z * z);
        }
        if (std::holds_alternative<Tabulated>(c)) {
            const auto& f = interpolants_[i];
            if (y < f.front() || y > f.back()) return 0.0;
            return f.derivative(y);
        }
        return 0.0;
    }

    std::vector<DatumComponent> parts_;
    std::vector<CubicHermite> interpolants_;
    Dimension dim_{3};
};

}  // namespace cdh
