#include "imagearc/maps.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "imagearc/errors.hpp"

namespace imagearc {

namespace {

using namespace std::complex_literals;

std::string tag_name(std::optional<MetricId> t) { return t ? std::string(to_string(*t)) : "generic"; }

// Can a value tagged `from` be fed to a map whose domain is tagged `to`?
bool flows_into(std::optional<MetricId> from, std::optional<MetricId> to) {
    if (!from || !to || *from == *to) return true;
    if (*to == MetricId::Spherical) return true;
    if (*to == MetricId::Euclidean)
        return *from == MetricId::HyperbolicDisc || *from == MetricId::HyperbolicHalfPlane;
    return false;
}

std::optional<MetricId> unify_domains(std::optional<MetricId> a, std::optional<MetricId> b, const char* op) {
    if (a && b && *a != *b) {
        throw CompositionError(std::string(op) + " of maps with different domains: " + tag_name(a) + " and " +
                               tag_name(b));
    }
    return a ? a : b;
}

bool is_finite(Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

HomogeneousJet finite_jet(Complex value, Complex derivative) { return {value, 1.0, derivative, 0.0}; }

HomogeneousJet multiply(const HomogeneousJet& a, const HomogeneousJet& b) {
    return {a.p * b.p, a.q * b.q, a.dp * b.p + a.p * b.dp, a.dq * b.q + a.q * b.dq};
}

void rescale(HomogeneousJet& j) {
    const double m = std::max(std::abs(j.p), std::abs(j.q));
    if (m > 0.0 && (m > 1e150 || m < 1e-150)) {
        const double s = 1.0 / m;
        j.p *= s;
        j.q *= s;
        j.dp *= s;
        j.dq *= s;
    }
}

// z -> (a z + b)/(c z + d) applied to a homogeneous jet; exact at poles.
HomogeneousJet apply_linear_fractional(const MobiusTransform& t, const HomogeneousJet& j) {
    return {t.a * j.p + t.b * j.q, t.c * j.p + t.d * j.q, t.a * j.dp + t.b * j.dq, t.c * j.dp + t.d * j.dq};
}

std::optional<MobiusTransform> as_linear_fractional(const MapNode& n) {
    return std::visit(
        [](const auto& k) -> std::optional<MobiusTransform> {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, node::Identity>) {
                return MobiusTransform{};
            } else if constexpr (std::is_same_v<K, node::Scale>) {
                if (k.factor == Complex(0.0)) return std::nullopt;
                return MobiusTransform(k.factor, 0.0, 0.0, 1.0);
            } else if constexpr (std::is_same_v<K, node::Shift>) {
                return MobiusTransform(1.0, k.offset, 0.0, 1.0);
            } else if constexpr (std::is_same_v<K, node::Mobius>) {
                return k.transform;
            } else if constexpr (std::is_same_v<K, node::Cayley>) {
                return imagearc::cayley();
            } else if constexpr (std::is_same_v<K, node::InverseCayley>) {
                return imagearc::inverse_cayley();
            } else {
                return std::nullopt;
            }
        },
        n.kind);
}

HomogeneousJet eval_node(const MapNode& n, Complex z);
HomogeneousJet eval_at_infinity(const MapNode& n);

// Evaluate `outer` at the (possibly infinite) value carried by `inner`.
HomogeneousJet eval_composed(const MapNode& outer, const HomogeneousJet& inner) {
    if (const auto* c = std::get_if<node::Constant>(&outer.kind)) return finite_jet(c->value, 0.0);
    if (auto t = as_linear_fractional(outer)) return apply_linear_fractional(*t, inner);
    if (std::abs(inner.q) == 0.0 || !is_finite(inner.p / inner.q)) {
        // Through the chart w = 1/inner, which vanishes here.
        const Complex dw = (inner.dq * inner.p - inner.q * inner.dp) / (inner.p * inner.p);
        HomogeneousJet j = eval_at_infinity(outer);
        j.dp *= dw;
        j.dq *= dw;
        return j;
    }
    const Complex w = inner.p / inner.q;
    const Complex dw = (inner.dp * inner.q - inner.p * inner.dq) / (inner.q * inner.q);
    HomogeneousJet j = eval_node(outer, w);
    j.dp *= dw;
    j.dq *= dw;
    return j;
}

HomogeneousJet eval_node(const MapNode& n, Complex z) {
    return std::visit(
        [&](const auto& k) -> HomogeneousJet {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, node::Identity>) {
                return finite_jet(z, 1.0);
            } else if constexpr (std::is_same_v<K, node::Constant>) {
                return finite_jet(k.value, 0.0);
            } else if constexpr (std::is_same_v<K, node::Scale>) {
                return finite_jet(k.factor * z, k.factor);
            } else if constexpr (std::is_same_v<K, node::Shift>) {
                return finite_jet(z + k.offset, 1.0);
            } else if constexpr (std::is_same_v<K, node::PowerSeries>) {
                Complex v = 0.0, d = 0.0;
                for (auto it = k.coefficients.rbegin(); it != k.coefficients.rend(); ++it) {
                    d = d * z + v;
                    v = v * z + *it;
                }
                return finite_jet(v, d);
            } else if constexpr (std::is_same_v<K, node::Mobius>) {
                const auto& t = k.transform;
                return {t.a * z + t.b, t.c * z + t.d, t.a, t.c};
            } else if constexpr (std::is_same_v<K, node::Cayley>) {
                return {z - 1.0i, z + 1.0i, 1.0, 1.0};
            } else if constexpr (std::is_same_v<K, node::InverseCayley>) {
                return {1.0i * (1.0 + z), 1.0 - z, 1.0i, -1.0};
            } else if constexpr (std::is_same_v<K, node::Koebe>) {
                const Complex w = 1.0 - z;
                return {z, w * w, 1.0, -2.0 * w};
            } else if constexpr (std::is_same_v<K, node::Exp>) {
                const Complex e = std::exp(z);
                if (!is_finite(e)) throw EvaluationError("exp overflow (essential singularity at infinity)");
                return finite_jet(e, e);
            } else if constexpr (std::is_same_v<K, node::Log>) {
                if (z == Complex(0.0)) throw EvaluationError("log branch point at 0");
                return finite_jet(std::log(z), 1.0 / z);
            } else if constexpr (std::is_same_v<K, node::BlaschkeDisc>) {
                HomogeneousJet acc{1.0, 1.0, 0.0, 0.0};
                for (const Complex a : k.zeros) {
                    const Complex u = a == Complex(0.0) ? Complex(1.0) : std::abs(a) / a;
                    acc = multiply(acc, {u * (a - z), 1.0 - std::conj(a) * z, -u, -std::conj(a)});
                    rescale(acc);
                }
                return acc;
            } else if constexpr (std::is_same_v<K, node::BlaschkeHalfPlane>) {
                HomogeneousJet acc{1.0, 1.0, 0.0, 0.0};
                for (std::size_t i = 0; i < k.heights.size(); ++i) {
                    const double s = k.signs[i];
                    const Complex iy = 1.0i * k.heights[i];
                    acc = multiply(acc, {s * (iy - z), iy + z, -s, 1.0});
                    rescale(acc);
                }
                return acc;
            } else if constexpr (std::is_same_v<K, node::Product>) {
                HomogeneousJet j = multiply(eval_node(k.left.node(), z), eval_node(k.right.node(), z));
                rescale(j);
                return j;
            } else if constexpr (std::is_same_v<K, node::Quotient>) {
                const HomogeneousJet a = eval_node(k.numerator.node(), z);
                const HomogeneousJet b = eval_node(k.denominator.node(), z);
                HomogeneousJet j{a.p * b.q, a.q * b.p, a.dp * b.q + a.p * b.dq, a.dq * b.p + a.q * b.dp};
                if (j.p == Complex(0.0) && j.q == Complex(0.0)) {
                    throw IndeterminateError("0/0: numerator and denominator vanish together");
                }
                rescale(j);
                return j;
            } else if constexpr (std::is_same_v<K, node::Compose>) {
                return eval_composed(k.outer.node(), eval_node(k.inner.node(), z));
            }
        },
        n.kind);
}

// Jet of n(1/w) at w = 0, derivatives taken in w.
HomogeneousJet eval_at_infinity(const MapNode& n) {
    if (const auto* sc = std::get_if<node::Scale>(&n.kind); sc && sc->factor == Complex(0.0)) {
        return finite_jet(0.0, 0.0);
    }
    // (a + b w)/(c + d w)
    if (auto t = as_linear_fractional(n)) return {t->a, t->c, t->b, t->d};
    return std::visit(
        [&](const auto& k) -> HomogeneousJet {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, node::Constant>) {
                return finite_jet(k.value, 0.0);
            } else if constexpr (std::is_same_v<K, node::PowerSeries>) {
                // sum c_n w^{d-n} / w^d
                std::size_t d = k.coefficients.size() - 1;
                while (d > 0 && k.coefficients[d] == Complex(0.0)) --d;
                if (d == 0) return finite_jet(k.coefficients[0], 0.0);
                return {k.coefficients[d], 0.0, k.coefficients[d - 1], d == 1 ? 1.0 : 0.0};
            } else if constexpr (std::is_same_v<K, node::Koebe>) {
                // w/(w - 1)^2
                return {0.0, 1.0, 1.0, -2.0};
            } else if constexpr (std::is_same_v<K, node::BlaschkeDisc>) {
                HomogeneousJet acc{1.0, 1.0, 0.0, 0.0};
                for (const Complex a : k.zeros) {
                    const Complex u = a == Complex(0.0) ? Complex(1.0) : std::abs(a) / a;
                    // u (a w - 1)/(w - conj a)
                    acc = multiply(acc, {-u, -std::conj(a), u * a, 1.0});
                    rescale(acc);
                }
                return acc;
            } else if constexpr (std::is_same_v<K, node::BlaschkeHalfPlane>) {
                HomogeneousJet acc{1.0, 1.0, 0.0, 0.0};
                for (std::size_t i = 0; i < k.heights.size(); ++i) {
                    const double s = k.signs[i];
                    const Complex iy = 1.0i * k.heights[i];
                    // s (i y w - 1)/(i y w + 1)
                    acc = multiply(acc, {-s, 1.0, s * iy, iy});
                    rescale(acc);
                }
                return acc;
            } else if constexpr (std::is_same_v<K, node::Product>) {
                HomogeneousJet j = multiply(eval_at_infinity(k.left.node()), eval_at_infinity(k.right.node()));
                rescale(j);
                return j;
            } else if constexpr (std::is_same_v<K, node::Quotient>) {
                const HomogeneousJet a = eval_at_infinity(k.numerator.node());
                const HomogeneousJet b = eval_at_infinity(k.denominator.node());
                HomogeneousJet j{a.p * b.q, a.q * b.p, a.dp * b.q + a.p * b.dq, a.dq * b.p + a.q * b.dp};
                if (j.p == Complex(0.0) && j.q == Complex(0.0)) {
                    throw IndeterminateError("0/0 at infinity: numerator and denominator vanish together");
                }
                rescale(j);
                return j;
            } else if constexpr (std::is_same_v<K, node::Compose>) {
                return eval_composed(k.outer.node(), eval_at_infinity(k.inner.node()));
            } else {
                throw EvaluationError("composition through infinity is not evaluable for this outer map");
            }
        },
        n.kind);
}

}  // namespace

// Construction ---------------------------------------------------------------

MapExpr MapExpr::from_node(MapNode n) { return MapExpr(std::make_shared<const MapNode>(std::move(n))); }

std::optional<MetricId> MapExpr::domain() const { return node_->domain; }
std::optional<MetricId> MapExpr::codomain() const { return node_->codomain; }

std::optional<MobiusTransform> linear_fractional_form(const MapExpr& f) { return as_linear_fractional(f.node()); }

bool operator==(const MapExpr& a, const MapExpr& b) {
    if (a.node_ == b.node_) return true;
    return a.node_->kind == b.node_->kind;
}

MapExpr MapExpr::identity() { return from_node({node::Identity{}, std::nullopt, std::nullopt}); }

MapExpr MapExpr::constant(Complex c) {
    if (!is_finite(c)) throw ConstructionError("constant must be finite");
    return from_node({node::Constant{c}, std::nullopt, std::nullopt});
}

MapExpr MapExpr::scale(Complex factor) {
    if (!is_finite(factor)) throw ConstructionError("scale factor must be finite");
    return from_node({node::Scale{factor}, std::nullopt, std::nullopt});
}

MapExpr MapExpr::shift(Complex offset) {
    if (!is_finite(offset)) throw ConstructionError("shift offset must be finite");
    return from_node({node::Shift{offset}, std::nullopt, std::nullopt});
}

MapExpr MapExpr::power_series(std::vector<Complex> coefficients) {
    if (coefficients.empty()) throw ConstructionError("power series needs at least one coefficient");
    for (const Complex c : coefficients)
        if (!is_finite(c)) throw ConstructionError("power series coefficients must be finite");
    return from_node({node::PowerSeries{std::move(coefficients)}, std::nullopt, std::nullopt});
}

MapExpr MapExpr::mobius(const MobiusTransform& t) {
    // Re-validate: aggregate assignment can bypass the checking constructor.
    const MobiusTransform checked(t.a, t.b, t.c, t.d);
    return from_node({node::Mobius{checked}, std::nullopt, std::nullopt});
}

MapExpr MapExpr::cayley() {
    return from_node({node::Cayley{}, MetricId::HyperbolicHalfPlane, MetricId::HyperbolicDisc});
}

MapExpr MapExpr::inverse_cayley() {
    return from_node({node::InverseCayley{}, MetricId::HyperbolicDisc, MetricId::HyperbolicHalfPlane});
}

MapExpr MapExpr::koebe() { return from_node({node::Koebe{}, MetricId::HyperbolicDisc, MetricId::Euclidean}); }

MapExpr MapExpr::exp() { return from_node({node::Exp{}, std::nullopt, std::nullopt}); }

MapExpr MapExpr::log() { return from_node({node::Log{}, std::nullopt, std::nullopt}); }

MapExpr MapExpr::blaschke_disc(std::vector<Complex> zeros) {
    for (const Complex a : zeros) {
        if (!(std::abs(a) < 1.0)) throw ConstructionError("disc Blaschke zeros must satisfy |a| < 1");
    }
    return from_node({node::BlaschkeDisc{std::move(zeros)}, MetricId::HyperbolicDisc, MetricId::HyperbolicDisc});
}

MapExpr MapExpr::blaschke_half_plane(std::vector<double> heights, std::vector<int> signs) {
    if (signs.empty()) signs.assign(heights.size(), 1);
    if (signs.size() != heights.size())
        throw ConstructionError("half-plane Blaschke signs list must match the heights list");
    for (const double y : heights)
        if (!(y > 0.0) || !std::isfinite(y)) throw ConstructionError("half-plane Blaschke heights must be positive");
    for (const int s : signs)
        if (s != 1 && s != -1) throw ConstructionError("half-plane Blaschke signs must be +1 or -1");
    return from_node({node::BlaschkeHalfPlane{std::move(heights), std::move(signs)}, MetricId::HyperbolicHalfPlane,
                      MetricId::HyperbolicDisc});
}

MapExpr MapExpr::product(const MapExpr& l, const MapExpr& r) {
    const auto dom = unify_domains(l.domain(), r.domain(), "product");
    std::optional<MetricId> cod;
    if (l.codomain() == MetricId::HyperbolicDisc && r.codomain() == MetricId::HyperbolicDisc) {
        cod = MetricId::HyperbolicDisc;
    } else if (l.codomain() == MetricId::Spherical || r.codomain() == MetricId::Spherical) {
        cod = MetricId::Spherical;
    } else if (l.codomain() || r.codomain()) {
        cod = MetricId::Euclidean;
    }
    return from_node({node::Product{l, r}, dom, cod});
}

MapExpr MapExpr::quotient(const MapExpr& numerator, const MapExpr& denominator) {
    const auto dom = unify_domains(numerator.domain(), denominator.domain(), "quotient");
    return from_node({node::Quotient{numerator, denominator}, dom, MetricId::Spherical});
}

MapExpr MapExpr::compose(const MapExpr& outer, const MapExpr& inner) {
    if (!flows_into(inner.codomain(), outer.domain())) {
        throw CompositionError("cannot compose: inner codomain " + tag_name(inner.codomain()) +
                               " does not match outer domain " + tag_name(outer.domain()));
    }
    const auto dom = inner.domain() ? inner.domain() : outer.domain();
    const auto cod = outer.codomain() ? outer.codomain() : inner.codomain();
    return from_node({node::Compose{outer, inner}, dom, cod});
}

MapExpr operator*(const MapExpr& l, const MapExpr& r) { return MapExpr::product(l, r); }
MapExpr operator/(const MapExpr& l, const MapExpr& r) { return MapExpr::quotient(l, r); }

// Evaluation ------------------------------------------------------------------

Jet HomogeneousJet::to_jet() const {
    if (p == Complex(0.0) && q == Complex(0.0)) throw IndeterminateError("0/0 in homogeneous value");
    if (q == Complex(0.0) || std::abs(q) < 1e-300 * std::abs(p)) {
        return {SpherePoint::infinity(), (dq * p - q * dp) / (p * p)};
    }
    return {SpherePoint(p / q), (dp * q - p * dq) / (q * q)};
}

double HomogeneousJet::spherical_derivative() const {
    // Scale first so that |p|^2 + |q|^2 cannot overflow.
    const double m = std::max(std::abs(p), std::abs(q));
    if (m == 0.0) throw IndeterminateError("0/0 in homogeneous value");
    const Complex ps = p / m, qs = q / m, dps = dp / m, dqs = dq / m;
    return 2.0 * std::abs(dps * qs - ps * dqs) / (std::norm(ps) + std::norm(qs));
}

HomogeneousJet evaluate_homogeneous(const MapExpr& f, Complex z, DomainPolicy policy) {
    if (!is_finite(z)) throw DomainError("evaluation point must be finite");
    if (policy == DomainPolicy::Strict && f.domain() && !in_domain(*f.domain(), z)) {
        throw DomainError("point outside the map's " + tag_name(f.domain()) + " domain");
    }
    HomogeneousJet j = eval_node(f.node(), z);
    if (!is_finite(j.p) || !is_finite(j.q) || !is_finite(j.dp) || !is_finite(j.dq)) {
        throw EvaluationError("map not evaluable at this point (non-finite intermediate)");
    }
    return j;
}

Jet evaluate(const MapExpr& f, Complex z, DomainPolicy policy) { return evaluate_homogeneous(f, z, policy).to_jet(); }

double deriv_norm_with_density(const MapExpr& f, Complex z, double source_density, MetricId target,
                               DomainPolicy policy) {
    const HomogeneousJet j = evaluate_homogeneous(f, z, policy);
    if (target == MetricId::Spherical) return j.spherical_derivative() / source_density;
    const Jet jet = j.to_jet();
    return stretch(jet.value, jet.derivative, source_density, target);
}

double deriv_norm(const MapExpr& f, Complex z, MetricId source, MetricId target) {
    if (!in_domain(source, z)) {
        throw DomainError("point outside the " + std::string(to_string(source)) + " source domain");
    }
    return deriv_norm_with_density(f, z, density(source, z), target, DomainPolicy::Strict);
}

double deriv_norm(const MapExpr& f, Complex z, MetricId target) { return deriv_norm(f, z, f.source_metric(), target); }

double boundary_modulus_check(const MapExpr& f, std::size_t samples) {
    double worst = 0.0;
    for (std::size_t j = 0; j < samples; ++j) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(samples);
        const Jet v = evaluate(f, std::polar(1.0, theta), DomainPolicy::Extended);
        const double dev = v.value.is_infinite() ? INFINITY : std::abs(std::abs(v.value.finite()) - 1.0);
        worst = std::max(worst, dev);
    }
    return worst;
}

double symmetry_check(const MapExpr& f, std::span<const Complex> samples) {
    double worst = 0.0;
    for (const Complex z : samples) {
        const SpherePoint a = evaluate(f, -std::conj(z), DomainPolicy::Extended).value;
        const SpherePoint b = evaluate(f, z, DomainPolicy::Extended).value;
        double dev = 0.0;
        if (a.is_infinite() != b.is_infinite()) {
            dev = INFINITY;
        } else if (a.is_finite()) {
            dev = std::abs(a.finite() - std::conj(b.finite()));
        }
        worst = std::max(worst, dev);
    }
    return worst;
}

// Truncation ------------------------------------------------------------------

namespace {

constexpr std::size_t kDivergenceProbe = 10000;
constexpr std::size_t kExplicitTailTerms = std::size_t{1} << 20;

// Local growth exponent p of y_n ~ n^p between n/2 and n.
std::optional<double> growth_exponent(const HeightRule& heights, std::size_t n) {
    const auto lo = heights(n / 2);
    const auto hi = heights(n);
    if (!lo || !hi) return std::nullopt;
    if (!std::isfinite(*hi)) return INFINITY;
    return std::log2(*hi / *lo);
}

}  // namespace

double blaschke_tail_bound(const HeightRule& heights, std::size_t count, double radius) {
    if (const auto p = growth_exponent(heights, kDivergenceProbe); p && *p <= 1.0 + 1e-6) {
        throw ConstructionError("heights rule violates the Blaschke condition (sum 1/y_n diverges)");
    }
    double sum = 0.0;
    for (std::size_t n = count + 1;; ++n) {
        const auto y = heights(n);
        if (!y) break;
        if (!std::isfinite(*y)) break;
        if (!(radius < *y)) throw ConstructionError("tail bound requested outside the certified region");
        const double term = 2.0 * std::atanh(radius / *y);
        sum += term;
        if (n > count + 16 && term < 1e-18 * sum) break;
        if (n - count >= kExplicitTailTerms) {
            // sum_{m>n} C/m^p ~ C n^{1-p}/(p-1) = term * n/(p-1)
            const auto p = growth_exponent(heights, n);
            if (!p || *p <= 1.0) throw ConstructionError("heights rule violates the Blaschke condition");
            if (std::isfinite(*p)) sum += term * static_cast<double>(n) / (*p - 1.0);
            break;
        }
    }
    return sum;
}

TruncatedBlaschke truncate_blaschke(const HeightRule& heights, std::size_t count, double radius) {
    if (count < 1) throw ConstructionError("truncation needs at least one factor");
    if (!(radius > 0.0)) throw ConstructionError("certification radius must be positive");
    std::vector<double> ys;
    ys.reserve(count);
    for (std::size_t n = 1; n <= count; ++n) {
        const auto y = heights(n);
        if (!y) break;
        if (!(*y > 0.0) || (!ys.empty() && !(*y > ys.back())))
            throw ConstructionError("heights must be positive and strictly increasing");
        ys.push_back(*y);
    }
    if (const auto next = heights(ys.size() + 1); next && ys.size() == count && radius > *next / 2.0) {
        throw ConstructionError("radius exceeds half the first discarded height; tail bound not certified");
    }
    const double tail = ys.size() < count ? 0.0 : blaschke_tail_bound(heights, count, radius);
    return {MapExpr::blaschke_half_plane(std::move(ys)), tail, radius};
}

}  // namespace imagearc
