#include "imagearc/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "imagearc/errors.hpp"

namespace imagearc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Beyond this radius tanh(t/2) rounds to 1 in double precision.
constexpr double kMaxFiniteRadius = 35.0;
constexpr double kAreaStep = 5.0;

void require_compatible(const MapExpr& f, MetricId arc_domain) {
    if (f.domain() && *f.domain() != arc_domain) {
        throw DomainError("map domain " + std::string(to_string(*f.domain())) + " does not match the arc's " +
                          std::string(to_string(arc_domain)) + " domain");
    }
}

// Theta-integral of ||f'||^2 over the hyperbolic circle of radius t about 0.
double circle_energy(const MapExpr& g, double t, MetricId target, double abs_tol, double rel_tol) {
    const double r = std::tanh(0.5 * t);
    const double c = std::cosh(0.5 * t);
    const double source = 2.0 * c * c;
    return periodic_trapezoid(
        [&](double theta) {
            const double n = deriv_norm_with_density(g, std::polar(r, theta), source, target);
            return n * n;
        },
        abs_tol, rel_tol);
}

QuadResult annulus_area(const MapExpr& g, double t0, double t1, MetricId target, const QuadConfig& q) {
    const double span = std::max(1.0, t1 - t0);
    return adaptive_integrate(
        [&](double t) {
            const double s = std::sinh(t);
            if (s == 0.0) return 0.0;
            const double inner_abs = 0.1 * q.abs_tol / (s * span);
            return s * circle_energy(g, t, target, inner_abs, 0.1 * q.rel_tol);
        },
        t0, t1, q);
}

}  // namespace

RadialArc RadialArc::disc(double theta, double rho_max) {
    RadialArc a{MetricId::HyperbolicDisc, theta, 0.0, rho_max};
    a.validate();
    return a;
}

RadialArc RadialArc::half_plane(Complex base_offset, double rho_max) {
    RadialArc a{MetricId::HyperbolicHalfPlane, 0.0, base_offset, rho_max};
    a.validate();
    return a;
}

void RadialArc::validate() const {
    if (domain != MetricId::HyperbolicDisc && domain != MetricId::HyperbolicHalfPlane) {
        throw ConstructionError("radial arcs live in the hyperbolic disc or half-plane");
    }
    if (!(rho_max > 0.0) || !std::isfinite(rho_max)) throw ConstructionError("rho_max must be positive and finite");
    if (domain == MetricId::HyperbolicHalfPlane && base_offset.imag() + 1.0 <= 0.0) {
        throw ConstructionError("half-plane arc must start inside the half-plane");
    }
}

Complex radial_point(const RadialArc& arc, double t) {
    if (!(t >= 0.0 && t <= arc.rho_max)) throw DomainError("arc parameter outside [0, rho_max]");
    if (arc.domain == MetricId::HyperbolicDisc) return std::polar(std::tanh(0.5 * t), arc.theta);
    return arc.base_offset + Complex(0.0, std::exp(t));
}

double radial_density(const RadialArc& arc, double t) {
    if (arc.domain == MetricId::HyperbolicDisc) {
        const double c = std::cosh(0.5 * t);
        return 2.0 * c * c;
    }
    return 1.0 / (arc.base_offset.imag() + std::exp(t));
}

QuadResult arc_length_between(const MapExpr& f, const RadialArc& arc, double t0, double t1, MetricId target,
                              const QuadConfig& q) {
    arc.validate();
    require_compatible(f, arc.domain);
    if (t0 == t1) return {};
    return adaptive_integrate(
        [&](double t) { return deriv_norm_with_density(f, radial_point(arc, t), radial_density(arc, t), target); },
        t0, t1, q);
}

double arc_length(const MapExpr& f, const RadialArc& arc, MetricId target, const QuadConfig& q) {
    return arc_length_between(f, arc, 0.0, arc.rho_max, target, q).value;
}

std::vector<GrowthSample> length_profile(const MapExpr& f, const RadialArc& arc, std::span<const double> rhos,
                                         MetricId target, const QuadConfig& q) {
    std::vector<double> sorted(rhos.begin(), rhos.end());
    std::sort(sorted.begin(), sorted.end());
    RadialArc full = arc;
    full.rho_max = std::max(arc.rho_max, sorted.empty() ? arc.rho_max : sorted.back());
    std::vector<GrowthSample> out;
    out.reserve(sorted.size());
    double previous = 0.0;
    double length = 0.0;
    for (const double rho : sorted) {
        if (!(rho > 0.0)) throw DomainError("profile radii must be positive");
        length += arc_length_between(f, full, previous, rho, target, q).value;
        previous = rho;
        out.push_back({rho, length});
    }
    return out;
}

QuadResult area(const MapExpr& f, double rho, MetricId target, const QuadConfig& q) {
    q.validate();
    if (!(rho > 0.0)) throw DomainError("area radius must be positive");
    const MapExpr g = f.domain() == MetricId::HyperbolicHalfPlane ? MapExpr::compose(f, MapExpr::inverse_cayley()) : f;

    if (std::isfinite(rho)) {
        if (rho > kMaxFiniteRadius) throw DomainError("finite area radius beyond double-precision range");
        return annulus_area(g, 0.0, rho, target, q);
    }

    QuadResult total;
    double lo = 0.0;
    double previous_increment = INFINITY;
    int growing = 0;
    for (double hi = kAreaStep; hi <= kMaxFiniteRadius; hi += kAreaStep) {
        QuadResult inc;
        try {
            inc = annulus_area(g, lo, hi, target, q);
        } catch (const PrecisionError&) {
            // Growing increments followed by a band too sharp to resolve is
            // the signature of a blow-up at the boundary. A band that only
            // fails the requested tolerance is re-measured coarsely to tell
            // whether it is still growing.
            bool grows = growing >= 1;
            if (!grows && lo > 0.0) {
                try {
                    const QuadResult coarse = annulus_area(g, lo, hi, target, QuadConfig{1e-6, 1e-6, q.max_depth});
                    grows = std::abs(coarse.value) >= std::abs(previous_increment);
                } catch (const PrecisionError&) {
                }
            }
            if (grows) {
                throw DivergenceError("image area diverges (growing bands could not be resolved)", total.value);
            }
            throw;
        }
        total.value += inc.value;
        total.error_bound += inc.error_bound;
        lo = hi;
        const double tol = std::max(q.abs_tol, q.rel_tol * std::abs(total.value));
        if (hi > kAreaStep && std::abs(inc.value) < tol) {
            total.error_bound += std::abs(inc.value);
            return total;
        }
        if (hi + kAreaStep > kMaxFiniteRadius) {
            // Out of radius: accept a geometrically decaying tail that is
            // already below tolerance, using its geometric sum as the estimate.
            const double ratio = std::abs(inc.value) / std::abs(previous_increment);
            if (ratio < 0.5) {
                const double rest = std::abs(inc.value) * ratio / (1.0 - ratio);
                if (rest < tol) {
                    total.value += std::copysign(rest, inc.value);
                    total.error_bound += rest;
                    return total;
                }
            }
            break;
        }
        growing = std::abs(inc.value) >= std::abs(previous_increment) ? growing + 1 : 0;
        if (growing >= 3) throw DivergenceError("image area diverges (tail increments are not shrinking)", total.value);
        previous_increment = inc.value;
    }
    throw DivergenceError("image area did not settle below tolerance by the largest representable radius",
                          total.value);
}

double area_from_coefficients(std::span<const Complex> coefficients, double r) {
    if (!(r > 0.0 && r <= 1.0)) throw DomainError("coefficient area radius must lie in (0, 1]");
    double sum = 0.0;
    double r2n = 1.0;
    for (std::size_t n = 1; n < coefficients.size(); ++n) {
        r2n *= r * r;
        sum += static_cast<double>(n) * std::norm(coefficients[n]) * r2n;
    }
    return std::numbers::pi * sum;
}

double hyperbolic_radius(double r) {
    if (!(r >= 0.0 && r <= 1.0)) throw DomainError("Euclidean radius must lie in [0, 1]");
    if (r == 1.0) return INFINITY;
    return std::log1p(r) - std::log1p(-r);
}

double periodic_trapezoid(const std::function<double(double)>& g, double abs_tol, double rel_tol) {
    constexpr std::size_t kStart = 16;
    constexpr std::size_t kMax = std::size_t{1} << 20;
    // Neumaier-compensated running sum; the rounding floor keeps tolerances
    // below what a sum of n doubles can resolve from stalling refinement.
    double sum = 0.0, carry = 0.0, mass = 0.0;
    const auto add = [&](double v) {
        const double t = sum + v;
        carry += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
        sum = t;
        mass += std::abs(v);
    };
    std::size_t n = kStart;
    for (std::size_t j = 0; j < n; ++j) add(g(kTwoPi * static_cast<double>(j) / static_cast<double>(n)));
    double estimate = kTwoPi * (sum + carry) / static_cast<double>(n);
    while (n < kMax) {
        for (std::size_t j = 0; j < n; ++j) add(g(kTwoPi * (static_cast<double>(j) + 0.5) / static_cast<double>(n)));
        n *= 2;
        const double refined = kTwoPi * (sum + carry) / static_cast<double>(n);
        const double change = std::abs(refined - estimate);
        estimate = refined;
        const double floor = 16.0 * std::numeric_limits<double>::epsilon() * kTwoPi * mass / static_cast<double>(n);
        if (n >= 2 * kStart && change <= std::max({abs_tol, rel_tol * std::abs(refined), floor})) return refined;
    }
    throw PrecisionError("angular trapezoid rule did not converge", estimate, INFINITY);
}

}  // namespace imagearc
