#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "imagearc/metrics.hpp"

namespace imagearc {

struct MapNode;

/// Immutable analytic-map expression tree with domain/codomain tags.
///
/// Tags are inferred at construction: leaves such as Scale or Exp are
/// generic (no tag) and adopt the tags of what they are composed with.
/// A composition whose inner codomain cannot flow into the outer domain
/// throws CompositionError.
class MapExpr {
public:
    static MapExpr identity();
    static MapExpr constant(Complex c);
    static MapExpr scale(Complex factor);
    static MapExpr shift(Complex offset);
    static MapExpr power_series(std::vector<Complex> coefficients);
    static MapExpr mobius(const MobiusTransform& t);
    static MapExpr cayley();
    static MapExpr inverse_cayley();
    static MapExpr koebe();
    static MapExpr exp();
    static MapExpr log();
    /// Disc Blaschke product with factors (a - z)/(1 - conj(a) z) * |a|/a.
    static MapExpr blaschke_disc(std::vector<Complex> zeros);
    /// Half-plane Blaschke product with factors s_n (i y_n - z)/(i y_n + z).
    /// Empty `signs` means all +1.
    static MapExpr blaschke_half_plane(std::vector<double> heights, std::vector<int> signs = {});

    static MapExpr product(const MapExpr& l, const MapExpr& r);
    static MapExpr quotient(const MapExpr& numerator, const MapExpr& denominator);
    /// outer ∘ inner
    static MapExpr compose(const MapExpr& outer, const MapExpr& inner);

    const MapNode& node() const { return *node_; }
    std::optional<MetricId> domain() const;
    std::optional<MetricId> codomain() const;

    /// Metric used as the source density when none is given explicitly.
    MetricId source_metric() const { return domain().value_or(MetricId::HyperbolicDisc); }

    friend bool operator==(const MapExpr& a, const MapExpr& b);

private:
    explicit MapExpr(std::shared_ptr<const MapNode> n) : node_(std::move(n)) {}
    static MapExpr from_node(MapNode n);
    std::shared_ptr<const MapNode> node_;
};

MapExpr operator*(const MapExpr& l, const MapExpr& r);
MapExpr operator/(const MapExpr& l, const MapExpr& r);

namespace node {
struct Identity {
    bool operator==(const Identity&) const = default;
};
struct Constant {
    Complex value;
    bool operator==(const Constant&) const = default;
};
struct Scale {
    Complex factor;
    bool operator==(const Scale&) const = default;
};
struct Shift {
    Complex offset;
    bool operator==(const Shift&) const = default;
};
struct PowerSeries {
    std::vector<Complex> coefficients;
    bool operator==(const PowerSeries&) const = default;
};
struct Mobius {
    MobiusTransform transform;
    bool operator==(const Mobius&) const = default;
};
struct Cayley {
    bool operator==(const Cayley&) const = default;
};
struct InverseCayley {
    bool operator==(const InverseCayley&) const = default;
};
struct Koebe {
    bool operator==(const Koebe&) const = default;
};
struct Exp {
    bool operator==(const Exp&) const = default;
};
struct Log {
    bool operator==(const Log&) const = default;
};
struct BlaschkeDisc {
    std::vector<Complex> zeros;
    bool operator==(const BlaschkeDisc&) const = default;
};
struct BlaschkeHalfPlane {
    std::vector<double> heights;
    std::vector<int> signs;
    bool operator==(const BlaschkeHalfPlane&) const = default;
};
struct Product {
    MapExpr left, right;
    bool operator==(const Product&) const = default;
};
struct Quotient {
    MapExpr numerator, denominator;
    bool operator==(const Quotient&) const = default;
};
struct Compose {
    MapExpr outer, inner;
    bool operator==(const Compose&) const = default;
};
}  // namespace node

struct MapNode {
    using Variant = std::variant<node::Identity, node::Constant, node::Scale, node::Shift, node::PowerSeries,
                                 node::Mobius, node::Cayley, node::InverseCayley, node::Koebe, node::Exp,
                                 node::Log, node::BlaschkeDisc, node::BlaschkeHalfPlane, node::Product,
                                 node::Quotient, node::Compose>;
    Variant kind;
    std::optional<MetricId> domain;
    std::optional<MetricId> codomain;
};

/// The transform when f is a single linear-fractional leaf (identity, scale,
/// shift, Möbius, Cayley maps).
std::optional<MobiusTransform> linear_fractional_form(const MapExpr& f);

/// Value and first derivative. When the value is infinite the derivative
/// is that of 1/f (pole chart).
struct Jet {
    SpherePoint value;
    Complex derivative;
};

/// f = p/q with f' = (p' q - p q')/q^2; defined up to a common scalar.
/// Valid at poles and at infinity-valued intermediate points.
struct HomogeneousJet {
    Complex p, q, dp, dq;

    Jet to_jet() const;
    /// |f'| * 2/(1+|f|^2), chart-free.
    double spherical_derivative() const;
};

enum class DomainPolicy {
    Strict,    ///< z must lie in the open domain of the top-level tag
    Extended,  ///< evaluate wherever the formulas are finite (closed disc, boundary samples)
};

HomogeneousJet evaluate_homogeneous(const MapExpr& f, Complex z, DomainPolicy policy = DomainPolicy::Strict);
Jet evaluate(const MapExpr& f, Complex z, DomainPolicy policy = DomainPolicy::Strict);

/// ||f'(z)||_{A->B} with A = f.source_metric().
double deriv_norm(const MapExpr& f, Complex z, MetricId target);
/// ||f'(z)||_{A->B} with an explicit source metric.
double deriv_norm(const MapExpr& f, Complex z, MetricId source, MetricId target);
/// Stretch factor with a caller-supplied source density (used along
/// parametrized geodesics where the density is known in closed form).
double deriv_norm_with_density(const MapExpr& f, Complex z, double source_density, MetricId target,
                               DomainPolicy policy = DomainPolicy::Extended);

/// max over M uniform samples of | |f(e^{i theta})| - 1 |.
double boundary_modulus_check(const MapExpr& f, std::size_t samples);

/// max |f(-conj z) - conj f(z)| over the samples.
double symmetry_check(const MapExpr& f, std::span<const Complex> samples);

/// Heights rule n -> y_n (n >= 1); nullopt ends a finite list.
using HeightRule = std::function<std::optional<double>(std::size_t)>;

struct TruncatedBlaschke {
    MapExpr product;
    /// Bound on |log|B| - log|B_N|| on {|z| <= radius} in the half-plane.
    double tail_bound;
    double radius;
};

/// First N factors of the half-plane Blaschke product with zeros i y_n and
/// a certified bound on the log-modulus of the discarded tail, valid for
/// |z| <= radius <= y_{N+1}/2.
TruncatedBlaschke truncate_blaschke(const HeightRule& heights, std::size_t count, double radius);

/// Log-modulus tail bound sum_{n>N} 2 artanh(R/y_n); split out for scenarios
/// that own their own factor lists.
double blaschke_tail_bound(const HeightRule& heights, std::size_t count, double radius);

}  // namespace imagearc
