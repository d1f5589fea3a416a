#include "imagearc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "imagearc/errors.hpp"

namespace imagearc {

namespace {

std::string describe(const SpherePoint& z) {
    if (z.is_infinite()) return "infinity";
    const Complex v = z.finite();
    return std::to_string(v.real()) + (v.imag() < 0 ? "" : "+") + std::to_string(v.imag()) + "i";
}

void require_domain(MetricId m, const SpherePoint& z) {
    if (!in_domain(m, z)) {
        throw DomainError("point " + describe(z) + " outside the domain of the " +
                          std::string(to_string(m)) + " metric");
    }
}

// 2/(1+|w|^2) without overflow.
double spherical_density(Complex w) {
    const double r = std::abs(w);
    if (r <= 1.0) return 2.0 / (1.0 + r * r);
    const double s = 1.0 / r;
    return 2.0 * s * s / (1.0 + s * s);
}

}  // namespace

Complex SpherePoint::finite() const {
    if (!value_) throw DomainError("point at infinity has no finite value");
    return *value_;
}

std::string_view to_string(MetricId m) {
    switch (m) {
        case MetricId::Euclidean: return "Euclidean";
        case MetricId::HyperbolicDisc: return "HyperbolicDisc";
        case MetricId::HyperbolicHalfPlane: return "HyperbolicHalfPlane";
        case MetricId::Spherical: return "Spherical";
    }
    return "?";
}

bool in_domain(MetricId m, const SpherePoint& z) {
    if (m == MetricId::Spherical) return true;
    if (z.is_infinite()) return false;
    const Complex v = z.finite();
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    switch (m) {
        case MetricId::Euclidean: return true;
        case MetricId::HyperbolicDisc: return std::abs(v) < 1.0;
        case MetricId::HyperbolicHalfPlane: return v.imag() > 0.0;
        case MetricId::Spherical: return true;
    }
    return false;
}

double density(MetricId m, const SpherePoint& z) {
    require_domain(m, z);
    if (z.is_infinite()) return 0.0;
    const Complex v = z.finite();
    switch (m) {
        case MetricId::Euclidean: return 1.0;
        case MetricId::HyperbolicDisc: {
            const double r = std::abs(v);
            return 2.0 / ((1.0 - r) * (1.0 + r));
        }
        case MetricId::HyperbolicHalfPlane: return 1.0 / v.imag();
        case MetricId::Spherical: return spherical_density(v);
    }
    return 0.0;
}

double distance(MetricId m, const SpherePoint& z1, const SpherePoint& z2) {
    require_domain(m, z1);
    require_domain(m, z2);
    if (m == MetricId::Spherical) {
        // sin(d/2) = |w-w'|/N, cos(d/2) = |1 + conj(w) w'|/N.
        if (z1.is_infinite() && z2.is_infinite()) return 0.0;
        if (z1.is_infinite() || z2.is_infinite()) {
            const Complex w = z1.is_infinite() ? z2.finite() : z1.finite();
            return 2.0 * std::atan2(1.0, std::abs(w));
        }
        const Complex w1 = z1.finite();
        const Complex w2 = z2.finite();
        return 2.0 * std::atan2(std::abs(w1 - w2), std::abs(1.0 + std::conj(w1) * w2));
    }
    const Complex a = z1.finite();
    const Complex b = z2.finite();
    switch (m) {
        case MetricId::Euclidean: return std::abs(a - b);
        case MetricId::HyperbolicDisc: {
            const double u = std::abs(a - b) / std::abs(1.0 - std::conj(b) * a);
            return std::log((1.0 + u) / (1.0 - u));
        }
        case MetricId::HyperbolicHalfPlane: {
            const double u = std::abs(a - b) / std::abs(a - std::conj(b));
            return std::log((1.0 + u) / (1.0 - u));
        }
        default: break;
    }
    return 0.0;
}

double chordal(const SpherePoint& w1, const SpherePoint& w2) {
    if (w1.is_infinite() && w2.is_infinite()) return 0.0;
    if (w1.is_infinite() || w2.is_infinite()) {
        const double r = std::abs(w1.is_infinite() ? w2.finite() : w1.finite());
        if (r <= 1.0) return 2.0 / std::hypot(1.0, r);
        return 2.0 / (r * std::hypot(1.0, 1.0 / r));
    }
    Complex a = w1.finite();
    Complex b = w2.finite();
    // Inversion is an isometry of the sphere; use it to keep moduli <= 1
    // where that avoids overflow.
    if (std::abs(a) > 1.0 && std::abs(b) > 1.0) {
        a = 1.0 / a;
        b = 1.0 / b;
    }
    return 2.0 * std::abs(a - b) / (std::hypot(1.0, std::abs(a)) * std::hypot(1.0, std::abs(b)));
}

double stretch(const SpherePoint& value, Complex derivative, double source_density, MetricId target) {
    if (target == MetricId::Spherical) {
        if (value.is_infinite()) return 2.0 * std::abs(derivative) / source_density;
        const Complex w = value.finite();
        const double r = std::abs(w);
        if (r > 1.0) {
            // chart of 1/f: (1/f)' = -f'/f^2
            const Complex g = 1.0 / w;
            const Complex dg = -derivative * g * g;
            return std::abs(dg) * spherical_density(g) / source_density;
        }
        return std::abs(derivative) * spherical_density(w) / source_density;
    }
    if (!in_domain(target, value)) {
        throw RangeError("image point " + describe(value) + " outside the " +
                         std::string(to_string(target)) + " target");
    }
    return std::abs(derivative) * density(target, value) / source_density;
}

MobiusTransform::MobiusTransform(Complex a_, Complex b_, Complex c_, Complex d_) : a(a_), b(b_), c(c_), d(d_) {
    const Complex det = a * d - b * c;
    const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
    if (!(scale > 0.0) || std::abs(det) <= 1e-14 * scale * scale) {
        throw ConstructionError("degenerate Mobius transformation (ad - bc = 0)");
    }
}

MobiusTransform MobiusTransform::inverse() const { return {d, -b, -c, a}; }

SpherePoint mobius_apply(const MobiusTransform& t, const SpherePoint& z) {
    if (z.is_infinite()) {
        if (t.c == Complex(0.0)) return SpherePoint::infinity();
        return t.a / t.c;
    }
    const Complex v = z.finite();
    const Complex den = t.c * v + t.d;
    if (den == Complex(0.0)) return SpherePoint::infinity();
    return (t.a * v + t.b) / den;
}

Complex mobius_derivative(const MobiusTransform& t, Complex z) {
    const Complex den = t.c * z + t.d;
    return t.determinant() / (den * den);
}

MobiusTransform mobius_compose(const MobiusTransform& outer, const MobiusTransform& inner) {
    return {outer.a * inner.a + outer.b * inner.c, outer.a * inner.b + outer.b * inner.d,
            outer.c * inner.a + outer.d * inner.c, outer.c * inner.b + outer.d * inner.d};
}

MobiusTransform disc_automorphism(Complex z0, double r) {
    if (!(std::abs(z0) < 1.0)) throw ConstructionError("disc automorphism centre must satisfy |z0| < 1");
    if (!(r > 0.0 && r <= 1.0)) throw ConstructionError("disc automorphism radius must lie in (0, 1]");
    return {Complex(r), z0, std::conj(z0) * r, Complex(1.0)};
}

MobiusTransform cayley() {
    using namespace std::complex_literals;
    return {1.0, -1.0i, 1.0, 1.0i};
}

MobiusTransform inverse_cayley() {
    using namespace std::complex_literals;
    return {1.0i, 1.0i, -1.0, 1.0};
}

}  // namespace imagearc
