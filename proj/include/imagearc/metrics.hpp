#pragma once

#include <complex>
#include <optional>
#include <string_view>

namespace imagearc {

using Complex = std::complex<double>;

/// A point of the extended plane: a finite complex value or infinity.
class SpherePoint {
public:
    SpherePoint(Complex z) : value_(z) {}  // NOLINT(google-explicit-constructor)
    SpherePoint(double x) : value_(Complex(x, 0.0)) {}  // NOLINT(google-explicit-constructor)

    static SpherePoint infinity() { return SpherePoint(); }

    bool is_infinite() const noexcept { return !value_.has_value(); }
    bool is_finite() const noexcept { return value_.has_value(); }

    /// The finite value; throws DomainError at infinity.
    Complex finite() const;

    friend bool operator==(const SpherePoint& a, const SpherePoint& b) { return a.value_ == b.value_; }

private:
    SpherePoint() = default;
    std::optional<Complex> value_;
};

enum class MetricId { Euclidean, HyperbolicDisc, HyperbolicHalfPlane, Spherical };

std::string_view to_string(MetricId m);

/// True when z lies in the natural domain of the metric.
bool in_domain(MetricId m, const SpherePoint& z);

/// Density of the metric: 1, 2/(1-|z|^2), 1/Im z or 2/(1+|z|^2).
/// Spherical density at infinity is 0.
double density(MetricId m, const SpherePoint& z);

/// Geodesic distance. Hyperbolic forms use log((1+u)/(1-u)); the spherical
/// distance uses the atan2 form of 2 asin(k/2).
double distance(MetricId m, const SpherePoint& z1, const SpherePoint& z2);

/// Chordal distance between stereographic images on the unit sphere, in [0, 2].
double chordal(const SpherePoint& w1, const SpherePoint& w2);

/// Local stretch factor of a map with value `value` and derivative
/// `derivative` (finite chart, or derivative of 1/f when `value` is
/// infinite), given the source density at the base point.
double stretch(const SpherePoint& value, Complex derivative, double source_density, MetricId target);

/// z -> (a z + b) / (c z + d), ad - bc != 0.
struct MobiusTransform {
    Complex a{1.0}, b{0.0}, c{0.0}, d{1.0};

    MobiusTransform() = default;
    MobiusTransform(Complex a_, Complex b_, Complex c_, Complex d_);

    Complex determinant() const { return a * d - b * c; }
    MobiusTransform inverse() const;

    friend bool operator==(const MobiusTransform&, const MobiusTransform&) = default;
};

SpherePoint mobius_apply(const MobiusTransform& t, const SpherePoint& z);

/// Derivative of t at a finite z with finite image.
Complex mobius_derivative(const MobiusTransform& t, Complex z);

/// (outer ∘ inner)
MobiusTransform mobius_compose(const MobiusTransform& outer, const MobiusTransform& inner);

/// z -> (r z + z0)/(1 + conj(z0) r z): maps the unit disc onto the hyperbolic
/// ball about z0 whose Euclidean radius at the origin is r.
MobiusTransform disc_automorphism(Complex z0, double r);

/// z -> (z - i)/(z + i): upper half-plane onto the unit disc, i -> 0.
MobiusTransform cayley();

/// Inverse of cayley(): z -> i (1 + z)/(1 - z).
MobiusTransform inverse_cayley();

}  // namespace imagearc
