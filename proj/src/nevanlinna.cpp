#include "imagearc/nevanlinna.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Core>
#include <unsupported/Eigen/FFT>
#include <unsupported/Eigen/Polynomials>

#include "imagearc/errors.hpp"

namespace imagearc {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kBoundaryGap = 1e-6;
constexpr double kTailLimit = 1e-8;

using Points = std::vector<SpherePoint>;

bool near(const SpherePoint& a, const SpherePoint& b) {
    if (a.is_infinite() || b.is_infinite()) return a.is_infinite() && b.is_infinite();
    return std::abs(a.finite() - b.finite()) <= 1e-10 * std::max(1.0, std::abs(a.finite()));
}

void append(Points& to, const Points& from) { to.insert(to.end(), from.begin(), from.end()); }

// Removes coincident zero/pole pairs.
void cancel(Divisor& d) {
    Points zeros;
    for (const SpherePoint& z : d.zeros) {
        auto it = std::find_if(d.poles.begin(), d.poles.end(), [&](const SpherePoint& p) { return near(p, z); });
        if (it != d.poles.end()) {
            d.poles.erase(it);
        } else {
            zeros.push_back(z);
        }
    }
    d.zeros = std::move(zeros);
}

void dedupe(Points& pts) {
    Points out;
    for (const SpherePoint& p : pts) {
        if (std::none_of(out.begin(), out.end(), [&](const SpherePoint& q) { return near(p, q); })) out.push_back(p);
    }
    pts = std::move(out);
}

std::vector<Complex> trimmed(std::span<const Complex> c) {
    std::vector<Complex> out(c.begin(), c.end());
    while (!out.empty() && out.back() == Complex(0.0)) out.pop_back();
    return out;
}

Points finite_points(const std::vector<Complex>& zs) { return Points(zs.begin(), zs.end()); }

// Preimages of w under the map, with multiplicity.
Points preimages(const MapExpr& f, const SpherePoint& w) {
    if (auto t = linear_fractional_form(f)) return {mobius_apply(t->inverse(), w)};
    const MapNode& n = f.node();
    if (const auto* c = std::get_if<node::Constant>(&n.kind)) {
        if (w.is_finite() && w.finite() == c->value) throw UnsupportedError("constant map attains the value everywhere");
        return {};
    }
    if (const auto* ps = std::get_if<node::PowerSeries>(&n.kind)) {
        std::vector<Complex> c = trimmed(ps->coefficients);
        const std::size_t degree = c.empty() ? 0 : c.size() - 1;
        if (w.is_infinite()) return Points(degree, SpherePoint::infinity());
        if (degree == 0) {
            if (!c.empty() && c[0] != w.finite()) return {};
            throw UnsupportedError("constant map attains the value everywhere");
        }
        c[0] -= w.finite();
        return finite_points(polynomial_roots(c));
    }
    if (std::holds_alternative<node::Koebe>(n.kind)) {
        if (w.is_infinite()) return {Complex(1.0), Complex(1.0)};
        const Complex v = w.finite();
        if (v == Complex(0.0)) return {Complex(0.0), SpherePoint::infinity()};
        // v (1 - z)^2 = z
        const std::array<Complex, 3> c{v, -(2.0 * v + 1.0), v};
        return finite_points(polynomial_roots(c));
    }
    if (w.is_finite() && w.finite() == Complex(0.0)) return divisor(f).zeros;
    if (w.is_infinite()) return divisor(f).poles;
    throw UnsupportedError("preimages of a general value are only computed for rational inner maps");
}

Points essential_points(const MapExpr& f) {
    const MapNode& n = f.node();
    if (std::holds_alternative<node::Exp>(n.kind)) return {SpherePoint::infinity()};
    if (const auto* p = std::get_if<node::Product>(&n.kind)) {
        Points out = essential_points(p->left);
        append(out, essential_points(p->right));
        return out;
    }
    if (const auto* q = std::get_if<node::Quotient>(&n.kind)) {
        Points out = essential_points(q->numerator);
        append(out, essential_points(q->denominator));
        return out;
    }
    if (const auto* c = std::get_if<node::Compose>(&n.kind)) {
        Points out = essential_points(c->inner);
        for (const SpherePoint& e : essential_points(c->outer)) append(out, preimages(c->inner, e));
        return out;
    }
    return {};
}

Complex disc_factor(Complex a, Complex z) {
    const Complex u = a == Complex(0.0) ? Complex(1.0) : std::abs(a) / a;
    return u * (a - z) / (1.0 - std::conj(a) * z);
}

Complex blaschke(const std::vector<Complex>& zeros, Complex z) {
    Complex acc = 1.0;
    for (const Complex a : zeros) acc *= disc_factor(a, z);
    return acc;
}

// log k(w, 0) and log k(w, inf), cancellation-free on both hemispheres.
double log_chordal_to_zero(double m) {
    if (m <= 1.0) return std::numbers::ln2 + std::log(m) - 0.5 * std::log1p(m * m);
    return std::numbers::ln2 - 0.5 * std::log1p(1.0 / (m * m));
}
double log_chordal_to_infinity(double m) {
    if (m <= 1.0) return std::numbers::ln2 - 0.5 * std::log1p(m * m);
    return std::numbers::ln2 - std::log(m) - 0.5 * std::log1p(1.0 / (m * m));
}

double modulus(const SpherePoint& w) { return w.is_infinite() ? INFINITY : std::abs(w.finite()); }

struct DiscDivisor {
    std::vector<Complex> zeros;
    std::vector<Complex> poles;
};

// Zeros and poles strictly inside the disc; rejects points on or near the circle.
DiscDivisor disc_divisor(const MapExpr& g) {
    const Divisor d = divisor(g);
    for (const SpherePoint& e : d.essential) {
        if (e.is_finite() && std::abs(e.finite()) <= 1.0 + kBoundaryGap) {
            throw UnsupportedError("essential singularity in the closed disc");
        }
    }
    DiscDivisor out;
    auto collect = [](const Points& pts, std::vector<Complex>& into) {
        for (const SpherePoint& p : pts) {
            if (p.is_infinite()) continue;
            const double m = std::abs(p.finite());
            if (std::abs(m - 1.0) <= kBoundaryGap) {
                throw BoundarySingularityError("zero or pole within 1e-6 of the unit circle");
            }
            if (m < 1.0) into.push_back(p.finite());
        }
    };
    collect(d.zeros, out.zeros);
    collect(d.poles, out.poles);
    return out;
}

double boundary_modulus(const MapExpr& g, double theta) {
    const double m = modulus(evaluate(g, std::polar(1.0, theta), DomainPolicy::Extended).value);
    if (m == 0.0 || !std::isfinite(m)) throw BoundarySingularityError("f takes the value 0 or infinity on the circle");
    return m;
}

std::vector<Complex> fourier(const std::vector<double>& samples) {
    const std::size_t m = samples.size();
    std::vector<Complex> in(samples.begin(), samples.end());
    std::vector<Complex> spectrum;
    Eigen::FFT<double> fft;
    fft.fwd(spectrum, in);
    std::vector<Complex> ordered(m);
    const std::size_t half = m / 2;
    for (std::size_t i = 0; i < m; ++i) {
        // index i <-> frequency n = i - M/2
        const std::size_t k = (i + half) % m;
        ordered[i] = spectrum[k] / static_cast<double>(m);
    }
    // Mean of real data.
    ordered[half] = ordered[half].real();
    return ordered;
}

// c_0 + 2 sum_{n >= 1} c_n z^n: analytic function with real part the harmonic
// extension and imaginary part the zero-mean conjugate.
Complex analytic_extension(const std::vector<Complex>& ordered, Complex z) {
    const std::size_t half = ordered.size() / 2;
    Complex acc = 0.0;
    for (std::size_t n = half - 1; n >= 1; --n) acc = acc * z + 2.0 * ordered[half + n];
    return acc * z + ordered[half];
}

double tail_ratio(const std::vector<Complex>& ordered) {
    const std::size_t m = ordered.size();
    const std::size_t half = m / 2;
    double total = 0.0, tail = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double e = std::norm(ordered[i]);
        total += e;
        const std::size_t n = i >= half ? i - half : half - i;
        if (n >= m / 4) tail += e;
    }
    return total > 0.0 ? tail / total : 0.0;
}

bool power_of_two(std::size_t m) { return m != 0 && (m & (m - 1)) == 0; }

}  // namespace

MapExpr on_disc(const MapExpr& f) {
    if (f.domain() == MetricId::HyperbolicHalfPlane) return MapExpr::compose(f, MapExpr::inverse_cayley());
    return f;
}

double shimizu_S(const MapExpr& f, double r, const QuadConfig& q) {
    if (!(r > 0.0 && r < 1.0)) throw DomainError("Shimizu radius must lie in (0, 1)");
    QuadConfig scaled = q;
    scaled.abs_tol = q.abs_tol * kFourPi;
    return area(f, hyperbolic_radius(r), MetricId::Spherical, scaled).value / kFourPi;
}

double shimizu_T(const MapExpr& f, double r, const QuadConfig& q) {
    if (!(r > 0.0 && r < 1.0)) throw DomainError("Shimizu radius must lie in (0, 1)");
    q.validate();
    const MapExpr g = on_disc(f);
    const double inner_abs = 0.1 * q.abs_tol * kFourPi / std::max(r, 1e-3);
    const QuadResult res = adaptive_integrate(
        [&](double s) {
            if (s <= 0.0 || s >= r) return 0.0;
            const double energy = periodic_trapezoid(
                [&](double theta) {
                    const double n = deriv_norm_with_density(g, std::polar(s, theta), 1.0, MetricId::Spherical);
                    return n * n;
                },
                inner_abs, 0.1 * q.rel_tol);
            return s * std::log(r / s) * energy;
        },
        0.0, r, QuadConfig{q.abs_tol * kFourPi, q.rel_tol, q.max_depth}, Singularities{true, false, {}});
    return res.value / kFourPi;
}

CharacteristicCurve characteristic_curve(const MapExpr& f, std::span<const double> radii, const QuadConfig& q) {
    CharacteristicCurve c;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (i > 0 && !(radii[i] > radii[i - 1])) throw DomainError("characteristic radii must be strictly increasing");
        c.radii.push_back(radii[i]);
        c.S_values.push_back(shimizu_S(f, radii[i], q));
        c.T_values.push_back(shimizu_T(f, radii[i], q));
    }
    return c;
}

std::vector<Complex> polynomial_roots(std::span<const Complex> coefficients) {
    const std::vector<Complex> c = trimmed(coefficients);
    if (c.empty()) throw UnsupportedError("the zero polynomial has no finite root set");
    if (c.size() == 1) return {};
    std::vector<Complex> roots;
    if (c.size() == 2) {
        roots.push_back(-c[0] / c[1]);
    } else {
        Eigen::VectorXcd poly(static_cast<Eigen::Index>(c.size()));
        for (std::size_t i = 0; i < c.size(); ++i) poly[static_cast<Eigen::Index>(i)] = c[i];
        Eigen::PolynomialSolver<Complex, Eigen::Dynamic> solver(poly);
        for (Eigen::Index i = 0; i < solver.roots().size(); ++i) roots.push_back(solver.roots()[i]);
    }
    for (Complex& z : roots) {
        for (int it = 0; it < 3; ++it) {
            Complex v = 0.0, d = 0.0;
            for (auto k = c.rbegin(); k != c.rend(); ++k) {
                d = d * z + v;
                v = v * z + *k;
            }
            if (d == Complex(0.0)) break;
            const Complex step = v / d;
            if (!std::isfinite(std::abs(step))) break;
            z -= step;
        }
    }
    return roots;
}

Divisor divisor(const MapExpr& f) {
    if (auto t = linear_fractional_form(f)) {
        return {{mobius_apply(t->inverse(), 0.0)}, {mobius_apply(t->inverse(), SpherePoint::infinity())}, {}};
    }
    const MapNode& n = f.node();
    return std::visit(
        [&](const auto& k) -> Divisor {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, node::Constant>) {
                if (k.value == Complex(0.0)) throw UnsupportedError("identically zero map has no divisor");
                return {};
            } else if constexpr (std::is_same_v<K, node::Scale>) {
                throw UnsupportedError("identically zero map has no divisor");
            } else if constexpr (std::is_same_v<K, node::PowerSeries>) {
                const std::vector<Complex> c = trimmed(k.coefficients);
                Divisor d;
                d.zeros = finite_points(polynomial_roots(c));
                d.poles = Points(c.size() - 1, SpherePoint::infinity());
                return d;
            } else if constexpr (std::is_same_v<K, node::Koebe>) {
                return {{Complex(0.0), SpherePoint::infinity()}, {Complex(1.0), Complex(1.0)}, {}};
            } else if constexpr (std::is_same_v<K, node::Exp>) {
                return {{}, {}, {SpherePoint::infinity()}};
            } else if constexpr (std::is_same_v<K, node::Log>) {
                throw UnsupportedError("log is not meromorphic");
            } else if constexpr (std::is_same_v<K, node::BlaschkeDisc>) {
                Divisor d;
                for (const Complex a : k.zeros) {
                    d.zeros.push_back(a);
                    d.poles.push_back(a == Complex(0.0) ? SpherePoint::infinity() : SpherePoint(1.0 / std::conj(a)));
                }
                return d;
            } else if constexpr (std::is_same_v<K, node::BlaschkeHalfPlane>) {
                Divisor d;
                for (const double y : k.heights) {
                    d.zeros.push_back(Complex(0.0, y));
                    d.poles.push_back(Complex(0.0, -y));
                }
                return d;
            } else if constexpr (std::is_same_v<K, node::Product>) {
                Divisor a = divisor(k.left);
                const Divisor b = divisor(k.right);
                append(a.zeros, b.zeros);
                append(a.poles, b.poles);
                append(a.essential, b.essential);
                cancel(a);
                dedupe(a.essential);
                return a;
            } else if constexpr (std::is_same_v<K, node::Quotient>) {
                Divisor a = divisor(k.numerator);
                const Divisor b = divisor(k.denominator);
                append(a.zeros, b.poles);
                append(a.poles, b.zeros);
                append(a.essential, b.essential);
                cancel(a);
                dedupe(a.essential);
                return a;
            } else if constexpr (std::is_same_v<K, node::Compose>) {
                const Divisor outer = divisor(k.outer);
                Divisor d;
                for (const SpherePoint& z : outer.zeros) append(d.zeros, preimages(k.inner, z));
                for (const SpherePoint& p : outer.poles) append(d.poles, preimages(k.inner, p));
                d.essential = essential_points(f);
                cancel(d);
                dedupe(d.essential);
                return d;
            } else {
                throw UnsupportedError("no divisor rule for this node");
            }
        },
        n.kind);
}

Complex Decomposition::f0(Complex z) const {
    return 0.5 * blaschke(b0_zeros, z) *
           std::exp(analytic_extension(u0_fourier, z) + Complex(0.0, phase));
}

Complex Decomposition::finf(Complex z) const {
    return 0.5 * blaschke(binf_poles, z) * std::exp(analytic_extension(uinf_fourier, z));
}

double Decomposition::norm(Complex z) const { return std::hypot(std::abs(f0(z)), std::abs(finf(z))); }

double Decomposition::tail_energy_ratio() const { return std::max(tail_ratio(u0_fourier), tail_ratio(uinf_fourier)); }

Decomposition fatou_decompose(const MapExpr& f, std::size_t boundary_samples) {
    if (!power_of_two(boundary_samples) || boundary_samples < 256) {
        throw ConstructionError("boundary sample count must be a power of two >= 256");
    }
    const MapExpr g = on_disc(f);
    const DiscDivisor dd = disc_divisor(g);

    const std::size_t m = boundary_samples;
    std::vector<double> u0(m), uinf(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double a = boundary_modulus(g, kTwoPi * static_cast<double>(j) / static_cast<double>(m));
        u0[j] = log_chordal_to_zero(a);
        uinf[j] = log_chordal_to_infinity(a);
    }

    Decomposition d;
    d.b0_zeros = dd.zeros;
    d.binf_poles = dd.poles;
    d.boundary_samples = m;
    d.u0_fourier = fourier(u0);
    d.uinf_fourier = fourier(uinf);
    const double tail = d.tail_energy_ratio();
    if (tail > kTailLimit) {
        std::ostringstream msg;
        msg << "Fourier tail carries " << tail << " of the boundary energy; increase M beyond " << m;
        throw ResolutionError(msg.str());
    }

    // Pick a reference point well away from the divisor to fix the rotation.
    Complex best = 0.0;
    double best_gap = -1.0;
    for (const double radius : {0.0, 0.3, 0.6}) {
        for (int k = 0; k < (radius == 0.0 ? 1 : 8); ++k) {
            const Complex c = std::polar(radius, kTwoPi * k / 8.0 + 0.1);
            double gap = INFINITY;
            for (const Complex a : dd.zeros) gap = std::min(gap, std::abs(a - c));
            for (const Complex a : dd.poles) gap = std::min(gap, std::abs(a - c));
            if (gap > best_gap) {
                best_gap = gap;
                best = c;
            }
        }
    }
    const Jet ref = evaluate(g, best, DomainPolicy::Extended);
    if (ref.value.is_infinite()) throw EvaluationError("reference point hit a pole");
    const Complex ratio = ref.value.finite() * blaschke(dd.poles, best) /
                          (blaschke(dd.zeros, best) *
                           std::exp(analytic_extension(d.u0_fourier, best) - analytic_extension(d.uinf_fourier, best)));
    d.phase = std::arg(ratio);
    return d;
}

Decomposition fatou_decompose_auto(const MapExpr& f) {
    constexpr std::size_t kMaxSamples = std::size_t{1} << 22;
    for (std::size_t m = 4096;; m *= 2) {
        try {
            return fatou_decompose(f, m);
        } catch (const ResolutionError&) {
            if (m >= kMaxSamples) throw;
        }
    }
}

double origin_identity_T(const MapExpr& f, std::size_t boundary_samples) {
    if (boundary_samples < 16) throw ConstructionError("at least 16 boundary samples are required");
    const MapExpr g = on_disc(f);
    const SpherePoint f0 = evaluate(g, 0.0, DomainPolicy::Extended).value;
    const double m0 = modulus(f0);
    if (m0 == 0.0 || !std::isfinite(m0)) throw NormalizationError("f(0) must be finite and nonzero");
    const DiscDivisor dd = disc_divisor(g);

    double counting = 0.0;
    for (const Complex a : dd.zeros) counting -= std::log(std::abs(a));

    const double centre = log_chordal_to_zero(m0);
    double proximity = 0.0;
    for (std::size_t j = 0; j < boundary_samples; ++j) {
        const double theta = kTwoPi * static_cast<double>(j) / static_cast<double>(boundary_samples);
        proximity += centre - log_chordal_to_zero(boundary_modulus(g, theta));
    }
    return counting + proximity / static_cast<double>(boundary_samples);
}

double uniform_characteristic_delta(const Decomposition& d, std::span<const Complex> probes) {
    if (probes.empty()) throw DomainError("at least one probe point is required");
    double best = INFINITY;
    for (const Complex z : probes) {
        if (!(std::abs(z) < 1.0)) throw DomainError("probe points must lie in the open disc");
        best = std::min(best, d.norm(z));
    }
    return best;
}

double uniform_characteristic_delta(const MapExpr& f, std::span<const Complex> probes, std::size_t boundary_samples) {
    return uniform_characteristic_delta(fatou_decompose(f, boundary_samples), probes);
}

double uniform_characteristic_delta(const MapExpr& f0, const MapExpr& finf, std::span<const Complex> probes) {
    if (probes.empty()) throw DomainError("at least one probe point is required");
    double best = INFINITY;
    for (const Complex z : probes) {
        const double a = modulus(evaluate(f0, z).value);
        const double b = modulus(evaluate(finf, z).value);
        if (!std::isfinite(a) || !std::isfinite(b)) throw RangeError("f0 and f_inf must be bounded at the probes");
        best = std::min(best, std::hypot(a, b));
    }
    return best;
}

DecompositionResiduals decomposition_residuals(const MapExpr& f, const Decomposition& d, std::size_t interior,
                                               unsigned seed) {
    const MapExpr g = on_disc(f);
    const std::size_t m = d.boundary_samples;
    DecompositionResiduals r;
    for (std::size_t j = 0; j < m; ++j) {
        const Complex z = std::polar(1.0, kTwoPi * (static_cast<double>(j) + 0.5) / static_cast<double>(m));
        r.boundary = std::max(r.boundary, std::abs(std::norm(d.f0(z)) + std::norm(d.finf(z)) - 1.0));
    }
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t k = 0; k < interior; ++k) {
        const Complex z = std::polar(0.95 * std::sqrt(unit(rng)), kTwoPi * unit(rng));
        const SpherePoint v = evaluate(g, z, DomainPolicy::Extended).value;
        const Complex q = d.f0(z) / d.finf(z);
        const double err = v.is_infinite() ? std::abs(d.finf(z) / d.f0(z))
                                           : std::abs(q - v.finite()) / std::max(std::abs(v.finite()), 1e-300);
        r.quotient = std::max(r.quotient, err);
    }
    try {
        const double t = origin_identity_T(f, m);
        r.origin = std::abs(std::norm(d.f0(0.0)) + std::norm(d.finf(0.0)) - std::exp(-2.0 * t));
    } catch (const NormalizationError&) {
        r.origin = NAN;
    }
    return r;
}

std::string to_manifest(const Decomposition& d) {
    std::ostringstream out;
    out.precision(17);
    out << "samples " << d.boundary_samples << "\nphase " << d.phase << "\nzeros " << d.b0_zeros.size() << '\n';
    for (const Complex z : d.b0_zeros) out << z.real() << ' ' << z.imag() << '\n';
    out << "poles " << d.binf_poles.size() << '\n';
    for (const Complex z : d.binf_poles) out << z.real() << ' ' << z.imag() << '\n';
    const auto coefficients = [&](const char* name, const std::vector<Complex>& c) {
        out << name << ' ' << c.size() << '\n';
        const long half = static_cast<long>(c.size() / 2);
        for (std::size_t i = 0; i < c.size(); ++i) {
            out << static_cast<long>(i) - half << ' ' << c[i].real() << ' ' << c[i].imag() << '\n';
        }
    };
    coefficients("u0", d.u0_fourier);
    coefficients("uinf", d.uinf_fourier);
    return out.str();
}

}  // namespace imagearc
