#include "imagearc/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include <Eigen/Dense>

#include "imagearc/errors.hpp"

namespace imagearc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFourPi = 4.0 * kPi;

std::string number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string complex_text(Complex z) {
    const std::string im = number(z.imag());
    return number(z.real()) + (im.front() == '-' ? "" : "+") + im + "i";
}

double safe_ratio(double lhs, double rhs) {
    if (rhs > 0.0) return lhs / rhs;
    return lhs == 0.0 ? 0.0 : INFINITY;
}

void require_disc_map(const MapExpr& f) {
    if (f.domain() == MetricId::HyperbolicHalfPlane) throw DomainError("this check expects a map on the disc");
}

VerdictReport report(std::string name) {
    VerdictReport r;
    r.name = std::move(name);
    return r;
}

// Largest value of g over a point set (NaN wins).
struct Extremum {
    double value = 0.0;
    Complex at = 0.0;
};

Extremum max_over(std::span<const Complex> points, const std::function<double(Complex)>& g) {
    Extremum e{-INFINITY, 0.0};
    for (const Complex z : points) {
        const double v = g(z);
        if (v > e.value || std::isnan(v)) {
            e = {v, z};
            if (std::isnan(v)) break;
        }
    }
    return e;
}

double height_squared(std::size_t n) { return static_cast<double>(n) * static_cast<double>(n); }

}  // namespace

std::string_view to_string(Status s) {
    switch (s) {
        case Status::Pass: return "PASS";
        case Status::Fail: return "FAIL";
        case Status::Inapplicable: return "INAPPLICABLE";
    }
    return "?";
}

std::string_view to_string(TailBehaviour b) {
    switch (b) {
        case TailBehaviour::Convergent: return "convergent";
        case TailBehaviour::Divergent: return "divergent";
        case TailBehaviour::Inconclusive: return "inconclusive";
    }
    return "?";
}

std::string VerdictReport::line() const {
    std::string w = "-";
    if (const auto* z = std::get_if<Complex>(&witness)) w = complex_text(*z);
    if (const auto* x = std::get_if<double>(&witness)) w = number(*x);
    return name + " | " + std::string(to_string(status)) + " | " + number(worst_ratio) + " | " + w;
}

std::vector<Complex> ProbeGrid::points() const {
    if (radii < 2 || angles < 1 || !(rho_max > 0.0)) throw ConstructionError("probe grid needs >= 2 radii, >= 1 angle");
    std::vector<Complex> out{0.0};
    for (std::size_t i = 1; i < radii; ++i) {
        const double r = std::tanh(0.5 * rho_max * static_cast<double>(i) / static_cast<double>(radii - 1));
        for (std::size_t j = 0; j < angles; ++j) {
            out.push_back(std::polar(r, 2.0 * kPi * static_cast<double>(j) / static_cast<double>(angles)));
        }
    }
    return out;
}

// Area bounds -----------------------------------------------------------------

VerdictReport check_area_derivative_bound(const MapExpr& f, AreaBound kind, std::span<const Complex> grid,
                                          const QuadConfig& q) {
    require_disc_map(f);
    const MetricId target = kind == AreaBound::HyperbolicToEuclidean ? MetricId::Euclidean : MetricId::HyperbolicDisc;
    VerdictReport r = report(kind == AreaBound::HyperbolicToEuclidean ? "area-derivative H->E" : "area-derivative H->H");
    double a = 0.0;
    try {
        a = area(f, kInfiniteRadius, target, q).value;
    } catch (const DivergenceError& e) {
        r.status = Status::Inapplicable;
        r.note = "image area diverges";
        r.details.push_back({"partial area", e.last_value()});
        return r;
    }
    const Extremum worst = max_over(grid, [&](Complex z) {
        const double n = deriv_norm(f, z, MetricId::HyperbolicDisc, target);
        return safe_ratio(kFourPi * n * n, a);
    });
    r.worst_ratio = worst.value;
    r.witness = worst.at;
    r.details.push_back({"area", a});
    r.status = worst.value <= 1.0 + 1e-9 ? Status::Pass : Status::Fail;
    return r;
}

VerdictReport check_localized_bound(const MapExpr& f, Complex z0, double delta, const QuadConfig& q) {
    require_disc_map(f);
    if (!(std::abs(z0) < 1.0)) throw DomainError("centre must lie in the disc");
    if (!(delta > 0.0)) throw DomainError("radius must be positive");
    VerdictReport r = report("localized area-derivative");
    const MapExpr moved = MapExpr::compose(f, MapExpr::mobius(disc_automorphism(z0, 1.0)));
    const double a = area(moved, delta, MetricId::Euclidean, q).value;
    const double lhs = std::tanh(0.5 * delta) * deriv_norm(f, z0, MetricId::HyperbolicDisc, MetricId::Euclidean);
    const double rhs = std::sqrt(a / kFourPi);
    r.worst_ratio = safe_ratio(lhs, rhs);
    r.witness = z0;
    r.details = {{"lhs", lhs}, {"rhs", rhs}, {"local area", a}};
    r.status = r.worst_ratio <= 1.0 + 1e-9 ? Status::Pass : Status::Fail;
    return r;
}

VerdictReport check_spherical_bound(const MapExpr& f, const ProbeGrid& grid, const QuadConfig& q) {
    require_disc_map(f);
    VerdictReport r = report("spherical-area bound");
    double a = 0.0;
    try {
        a = area(f, kInfiniteRadius, MetricId::Spherical, q).value;
    } catch (const DivergenceError& e) {
        r.status = Status::Inapplicable;
        r.note = "spherical image area diverges";
        r.details.push_back({"partial area", e.last_value()});
        return r;
    }
    r.details.push_back({"A_S", a});
    if (a >= 2.0 * kPi) {
        r.status = Status::Inapplicable;
        r.note = "hypothesis violated: A_S >= 2 pi";
        return r;
    }
    const auto constant = [&](const ProbeGrid& g) {
        const std::vector<Complex> pts = g.points();
        return max_over(pts, [&](Complex z) {
            return safe_ratio(deriv_norm(f, z, MetricId::HyperbolicDisc, MetricId::Spherical), std::sqrt(a));
        });
    };
    const Extremum coarse = constant(grid);
    const Extremum fine = constant(grid.refined());
    r.details.push_back({"c* coarse", coarse.value});
    r.details.push_back({"c* fine", fine.value});
    r.witness = fine.at;
    r.worst_ratio = coarse.value > 0.0 ? fine.value / coarse.value : (fine.value == 0.0 ? 1.0 : INFINITY);
    r.status = std::isfinite(fine.value) && r.worst_ratio <= 1.05 ? Status::Pass : Status::Fail;
    return r;
}

// Growth ----------------------------------------------------------------------

GrowthFit growth_fit(std::span<const GrowthSample> samples, GrowthModel model) {
    if (samples.size() < 4) throw DomainError("growth fit needs at least 4 samples");
    const auto n = static_cast<Eigen::Index>(samples.size());
    Eigen::MatrixXd x(n, 2);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const GrowthSample& s = samples[static_cast<std::size_t>(i)];
        if (i > 0 && !(s.rho > samples[static_cast<std::size_t>(i) - 1].rho)) {
            throw DomainError("growth samples must have strictly increasing rho");
        }
        if (!(s.length > 0.0)) throw DomainError("growth fit needs positive lengths");
        if (model == GrowthModel::PowerLaw && !(s.rho > 0.0)) throw DomainError("power-law fit needs rho > 0");
        x(i, 0) = model == GrowthModel::PowerLaw ? std::log(s.rho) : s.rho;
        x(i, 1) = 1.0;
        y(i) = std::log(s.length);
    }
    const Eigen::Vector2d coef = x.colPivHouseholderQr().solve(y);
    GrowthFit fit;
    fit.samples.assign(samples.begin(), samples.end());
    fit.model = model;
    fit.exponent = coef(0);
    fit.constant = coef(1);
    fit.residual = std::sqrt((x * coef - y).squaredNorm() / static_cast<double>(n));
    for (const GrowthSample& s : samples) fit.sqrt_tail.push_back(s.rho > 0.0 ? s.length / std::sqrt(s.rho) : INFINITY);
    return fit;
}

VerdictReport check_sqrt_trend(const std::string& name, const MapExpr& f, double theta, MetricId target,
                               std::span<const double> rhos, double drop, const QuadConfig& q) {
    require_disc_map(f);
    if (rhos.size() < 2) throw DomainError("trend check needs at least two radii");
    VerdictReport r = report(name);
    const double rho_max = *std::max_element(rhos.begin(), rhos.end());
    const std::vector<GrowthSample> profile = length_profile(f, RadialArc::disc(theta, rho_max), rhos, target, q);
    std::vector<double> seq;
    for (const GrowthSample& s : profile) {
        seq.push_back(s.length / std::sqrt(s.rho));
        r.details.push_back({"L/sqrt(rho) at rho=" + number(s.rho), seq.back()});
    }
    bool decreasing = true;
    r.worst_ratio = -INFINITY;
    for (std::size_t i = 1; i < seq.size(); ++i) {
        const double ratio = safe_ratio(seq[i], seq[i - 1]);
        decreasing = decreasing && ratio < 1.0;
        if (ratio > r.worst_ratio) {
            r.worst_ratio = ratio;
            r.witness = profile[i].rho;
        }
    }
    bool dropped = true;
    if (drop > 0.0) {
        const double ratio = safe_ratio(seq.back(), drop * seq.front());
        r.details.push_back({"last/(drop*first)", ratio});
        dropped = ratio < 1.0;
        if (ratio > r.worst_ratio) {
            r.worst_ratio = ratio;
            r.witness = profile.back().rho;
        }
    }
    r.status = decreasing && dropped ? Status::Pass : Status::Fail;
    if (!decreasing) r.note = "L/sqrt(rho) is not strictly decreasing";
    else if (!dropped) r.note = "last value is not below the required fraction of the first";
    return r;
}

TailTest classify_area_tail(const std::function<double(double)>& area_at, double alpha, double delta, double t_max) {
    if (!(alpha > 1.0)) throw DomainError("alpha must exceed 1");
    if (!(delta > 0.0)) throw DomainError("delta must be positive");
    const double weight = delta / std::tanh(0.5 * delta);
    TailTest t;
    const QuadConfig cfg{1e-14, 1e-7, 30};
    for (double s = 1.0; delta + 2.0 * s <= t_max; s *= 2.0) {
        const QuadResult inc = adaptive_integrate(
            [&](double u) { return weight * area_at(delta + u) / std::pow(u, alpha); }, s, 2.0 * s, cfg);
        t.window_starts.push_back(s);
        t.increments.push_back(inc.value);
    }
    if (t.increments.size() < 3) return t;
    // Judge the last three windows; early windows still see A(t) ramping up.
    bool shrinking = true, growing = true;
    for (std::size_t i = t.increments.size() - 2; i < t.increments.size(); ++i) {
        const double a = std::abs(t.increments[i - 1]);
        const double b = std::abs(t.increments[i]);
        const double ratio = a > 0.0 ? b / a : (b == 0.0 ? 0.0 : INFINITY);
        shrinking = shrinking && ratio < 1.0;
        growing = growing && ratio >= 1.0;
    }
    if (shrinking) t.behaviour = TailBehaviour::Convergent;
    else if (growing) t.behaviour = TailBehaviour::Divergent;
    return t;
}

namespace {

VerdictReport tail_verdict(const TailTest& t, double alpha, double delta) {
    VerdictReport r = report("alpha-growth");
    r.witness = alpha;
    r.details.push_back({"alpha", alpha});
    r.details.push_back({"delta", delta});
    r.worst_ratio = 0.0;
    for (std::size_t i = 0; i < t.increments.size(); ++i) {
        r.details.push_back({"increment from s=" + number(t.window_starts[i]), t.increments[i]});
        if (i + 2 >= t.increments.size() && i > 0) {
            r.worst_ratio = std::max(r.worst_ratio, safe_ratio(std::abs(t.increments[i]), std::abs(t.increments[i - 1])));
        }
    }
    r.note = "tail integral " + std::string(to_string(t.behaviour));
    r.status = t.behaviour == TailBehaviour::Convergent ? Status::Pass : Status::Inapplicable;
    return r;
}

}  // namespace

VerdictReport alpha_growth_check(const std::function<double(double)>& area_at, double alpha, double delta) {
    return tail_verdict(classify_area_tail(area_at, alpha, delta), alpha, delta);
}

VerdictReport alpha_growth_check(const MapExpr& f, double alpha, double delta, const QuadConfig& q) {
    require_disc_map(f);
    const TailTest t = classify_area_tail(
        [&](double s) { return area(f, s, MetricId::Euclidean, q).value; }, alpha, delta);
    VerdictReport r = tail_verdict(t, alpha, delta);
    if (t.behaviour != TailBehaviour::Convergent) return r;

    const std::vector<double> rhos{4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0};
    r.worst_ratio = -INFINITY;
    for (int k = 0; k < 8; ++k) {
        const double theta = 2.0 * kPi * k / 8.0;
        const auto profile = length_profile(f, RadialArc::disc(theta, rhos.back()), rhos, MetricId::Euclidean,
                                            QuadConfig::lengths());
        for (std::size_t i = profile.size() - 2; i < profile.size(); ++i) {
            const double prev = profile[i - 1].length / std::pow(profile[i - 1].rho, 0.5 * alpha);
            const double cur = profile[i].length / std::pow(profile[i].rho, 0.5 * alpha);
            const double ratio = safe_ratio(cur, prev);
            if (ratio > r.worst_ratio) {
                r.worst_ratio = ratio;
                r.witness = theta;
            }
        }
    }
    r.status = r.worst_ratio < 1.0 ? Status::Pass : Status::Fail;
    if (r.status == Status::Fail) r.note += "; L_E/rho^(alpha/2) not eventually decreasing";
    return r;
}

VerdictReport schwarz_pick_check(const MapExpr& f, std::span<const Complex> points, std::span<const RadialArc> arcs,
                                 const QuadConfig& q) {
    VerdictReport r = report("schwarz-pick");
    const Extremum pointwise =
        max_over(points, [&](Complex z) { return deriv_norm(f, z, MetricId::HyperbolicDisc, MetricId::HyperbolicDisc); });
    r.worst_ratio = pointwise.value;
    r.witness = pointwise.at;
    bool ok = points.empty() || pointwise.value <= 1.0 + 1e-10;
    for (const RadialArc& arc : arcs) {
        std::vector<double> rhos;
        for (int k = 1; k <= 8; ++k) rhos.push_back(arc.rho_max * k / 8.0);
        for (const GrowthSample& s : length_profile(f, arc, rhos, MetricId::HyperbolicDisc, q)) {
            ok = ok && s.length <= s.rho + 1e-6;
            if (s.length / s.rho > r.worst_ratio) {
                r.worst_ratio = s.length / s.rho;
                r.witness = radial_point(arc, s.rho);
            }
        }
    }
    r.details.push_back({"max pointwise norm", pointwise.value});
    r.status = ok ? Status::Pass : Status::Fail;
    return r;
}

VerdictReport check_uniform_char_length_bound(const MapExpr& f0, const MapExpr& finf, double delta,
                                              std::span<const RadialArc> arcs, const ProbeGrid& grid,
                                              const QuadConfig& q) {
    if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("delta must lie in (0, 1]");
    VerdictReport r = report("uniform-characteristic length bound");
    const std::vector<Complex> pts = grid.points();

    struct Pair {
        Jet a, b;
        double norm;
    };
    std::vector<Pair> values;
    values.reserve(pts.size());
    double smallest = INFINITY;
    Complex smallest_at = 0.0;
    for (const Complex z : pts) {
        const Jet a = evaluate(f0, z);
        const Jet b = evaluate(finf, z);
        if (a.value.is_infinite() || b.value.is_infinite()) {
            r.status = Status::Inapplicable;
            r.note = "hypothesis violated: f0 or f_inf unbounded";
            r.witness = z;
            return r;
        }
        const double n = std::hypot(std::abs(a.value.finite()), std::abs(b.value.finite()));
        if (n > 1.0 + 1e-12) {
            r.status = Status::Inapplicable;
            r.note = "hypothesis violated: |f0|^2 + |f_inf|^2 > 1";
            r.witness = z;
            return r;
        }
        if (n < smallest) {
            smallest = n;
            smallest_at = z;
        }
        values.push_back({a, b, n});
    }
    r.details.push_back({"min (|f0|^2+|f_inf|^2)^(1/2)", smallest});
    if (smallest < delta - 1e-12) {
        r.status = Status::Inapplicable;
        r.note = "hypothesis violated: delta exceeds the probed lower bound";
        r.witness = smallest_at;
        return r;
    }

    const MapExpr f = MapExpr::quotient(f0, finf);
    bool ok = true;
    r.worst_ratio = 0.0;
    double worst_sp = 0.0;
    const auto consider = [&](double lhs, double rhs, double tol, Witness w) {
        ok = ok && lhs <= rhs + tol;
        const double ratio = safe_ratio(lhs, rhs);
        if (ratio > r.worst_ratio) {
            r.worst_ratio = ratio;
            r.witness = w;
        }
    };
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Complex z = pts[i];
        const double w = 1.0 - std::norm(z);
        const double sp = std::hypot(std::abs(values[i].a.derivative), std::abs(values[i].b.derivative)) * w;
        worst_sp = std::max(worst_sp, sp);
        consider(sp, 2.0, 1e-8, z);
        const double dn = deriv_norm(f, z, MetricId::HyperbolicDisc, MetricId::Spherical);
        consider(dn, 2.0 / values[i].norm, 1e-8, z);
        consider(dn, 2.0 / delta, 1e-8, z);
    }
    r.details.push_back({"max ||F'||(1-|z|^2)", worst_sp});
    for (const RadialArc& arc : arcs) {
        std::vector<double> rhos;
        for (double rho = 1.0; rho <= arc.rho_max + 1e-12; rho += 1.0) rhos.push_back(rho);
        if (rhos.empty() || rhos.back() < arc.rho_max) rhos.push_back(arc.rho_max);
        for (const GrowthSample& s : length_profile(f, arc, rhos, MetricId::Spherical, q)) {
            consider(s.length, 2.0 / delta * s.rho, 1e-6, radial_point(arc, s.rho));
        }
    }
    r.status = ok ? Status::Pass : Status::Fail;
    return r;
}

// Scenarios -------------------------------------------------------------------

ScenarioReport scenario_annulus(double R, double rho_max, const QuadConfig& q) {
    if (!(R > 1.0)) throw DomainError("annulus radius R must exceed 1");
    if (!(rho_max > 0.0)) throw DomainError("rho_max must be positive");
    using namespace std::complex_literals;
    const double beta = 2.0 * std::log(R) / kPi;
    const MapExpr cover = MapExpr::compose(
        MapExpr::exp(),
        MapExpr::compose(MapExpr::scale(1.0i * beta), MapExpr::compose(MapExpr::shift(-0.5i * kPi), MapExpr::log())));
    const double period = 2.0 * kPi / beta;
    const RadialArc arc = RadialArc::half_plane(0.0, std::max(rho_max, period));

    std::vector<double> rhos;
    for (int k = 1; k <= 32; ++k) rhos.push_back(rho_max * k / 32.0);
    ScenarioReport out;
    out.samples = length_profile(cover, arc, rhos, MetricId::Spherical, q);
    out.fit = growth_fit(out.samples, GrowthModel::PowerLaw);

    std::vector<double> periods;
    for (int n = 1; n * period <= rho_max + 1e-12 || n == 1; ++n) periods.push_back(n * period);
    const auto per = length_profile(cover, arc, periods, MetricId::Spherical, q);
    double residual = 0.0;
    for (std::size_t n = 0; n < per.size(); ++n) {
        residual = std::max(residual, std::abs(per[n].length - static_cast<double>(n + 1) * per[0].length));
    }
    const double circuit_error = std::abs(per[0].length - 2.0 * kPi);

    VerdictReport& v = out.verdict;
    v.name = "annulus";
    v.witness = R;
    v.details = {{"beta", beta},
                 {"period", period},
                 {"L_S(period)", per[0].length},
                 {"periodicity residual", residual},
                 {"exponent", out.fit.exponent},
                 {"fit residual", out.fit.residual}};
    v.worst_ratio = std::max({std::abs(out.fit.exponent - 1.0) / 0.05, residual / 1e-8, circuit_error / 1e-8});
    v.status = v.worst_ratio <= 1.0 ? Status::Pass : Status::Fail;
    return out;
}

ScenarioReport scenario_symmetric_blaschke(std::size_t N, double rho_max, const QuadConfig& q) {
    if (N < 8) throw DomainError("symmetric Blaschke truncation needs N >= 8");
    if (!(rho_max > 0.0)) throw DomainError("rho_max must be positive");
    const double R = std::exp(rho_max);
    if (R > std::ldexp(1.0, static_cast<int>(N))) {
        throw ResolutionError("arc leaves the certified region |z| <= y_{N+1}/2; increase N");
    }
    const HeightRule powers = [](std::size_t n) -> std::optional<double> { return std::ldexp(1.0, static_cast<int>(n)); };
    // Upper tail on |z| <= R, lower tail (after z -> -1/z) on |z| >= 1.
    const double tail = blaschke_tail_bound(powers, N, R) + blaschke_tail_bound(powers, N, 1.0);
    if (tail > 1e-3) throw ResolutionError("truncation tail bound " + number(tail) + " exceeds 1e-3; increase N");

    std::vector<double> heights;
    std::vector<int> signs;
    const int n = static_cast<int>(N);
    for (int k = -n; k <= n; ++k) {
        heights.push_back(std::ldexp(1.0, k));
        signs.push_back(k < 0 ? -1 : 1);
    }
    const MapExpr b = MapExpr::blaschke_half_plane(heights, signs);
    const RadialArc arc = RadialArc::half_plane(0.0, rho_max);

    std::vector<double> rhos;
    for (int k = 1; k <= 32; ++k) rhos.push_back(rho_max * k / 32.0);
    ScenarioReport out;
    out.samples = length_profile(b, arc, rhos, MetricId::Spherical, q);
    out.fit = growth_fit(out.samples, GrowthModel::PowerLaw);

    std::vector<Complex> probes;
    for (int i = 0; i <= 8; ++i) {
        for (int j = 1; j < 8; ++j) probes.push_back(std::polar(std::exp(rho_max * i / 8.0), kPi * j / 8.0));
    }
    const double symmetry = symmetry_check(b, probes);
    double realness = 0.0;
    for (int k = 0; k < 100; ++k) {
        const SpherePoint w = evaluate(b, Complex(0.0, std::exp(rho_max * k / 99.0))).value;
        realness = std::max(realness, w.is_finite() ? std::abs(w.finite().imag()) : INFINITY);
    }

    VerdictReport& v = out.verdict;
    v.name = "symmetric-blaschke";
    v.witness = static_cast<double>(N);
    v.details = {{"tail bound", tail},
                 {"symmetry deviation", symmetry},
                 {"max |Im B(iy)|", realness},
                 {"exponent", out.fit.exponent},
                 {"fit residual", out.fit.residual}};
    v.worst_ratio =
        std::max({std::abs(out.fit.exponent - 1.0) / 0.05, symmetry / 1e-10, realness / 1e-10, tail / 1e-3});
    v.status = v.worst_ratio <= 1.0 ? Status::Pass : Status::Fail;
    return out;
}

QuotientConstruction blaschke_quotient(std::size_t n_max) {
    if (n_max < 2) throw DomainError("n_max must be at least 2");
    const double y_max = height_squared(n_max);
    // Certified region: |z +- 1| <= y_max + 1 <= y_{N+1}/2.
    std::size_t factors = n_max;
    while (height_squared(factors + 1) < 2.0 * (y_max + 1.0)) ++factors;
    // On the axis |f| = 1, so ||f'||_{H->S} = y |(log f)'|. Each discarded pair
    // contributes at most (128/9) |z| / y_n^3 to |(log f)'|, and
    // sum_{n>N} n^-6 <= 1/(5 N^5); integrating y^2 dt up to log y_max gives
    // the bound below.
    const auto bound = [&](std::size_t N) {
        return (64.0 / 9.0) * (y_max * y_max - 1.0) / (5.0 * std::pow(static_cast<double>(N), 5.0));
    };
    while (bound(factors) > 1e-3) ++factors;

    std::vector<double> heights;
    for (std::size_t k = 1; k <= factors; ++k) heights.push_back(height_squared(k));
    const MapExpr b = MapExpr::blaschke_half_plane(heights);
    const MapExpr f = MapExpr::quotient(MapExpr::compose(b, MapExpr::shift(1.0)), MapExpr::compose(b, MapExpr::shift(-1.0)));
    return {f, factors, bound(factors)};
}

ScenarioReport scenario_blaschke_quotient(std::size_t n_max, const QuadConfig& q) {
    if (n_max < 10) throw DomainError("blaschke-quotient scenario needs n_max >= 10");
    const QuotientConstruction c = blaschke_quotient(n_max);
    const double y_max = height_squared(n_max);
    const RadialArc arc = RadialArc::half_plane(0.0, std::log(y_max));

    std::vector<double> rhos;
    for (std::size_t n = 2; n <= n_max; ++n) rhos.push_back(std::log(height_squared(n)));
    ScenarioReport out;
    out.samples = length_profile(c.f, arc, rhos, MetricId::Spherical, q);

    double modulus = 0.0;
    for (int k = 0; k < 100; ++k) {
        const SpherePoint w = evaluate(c.f, Complex(0.0, std::pow(y_max, k / 99.0))).value;
        modulus = std::max(modulus, w.is_finite() ? std::abs(std::abs(w.finite()) - 1.0) : INFINITY);
    }

    double ratio_lo = INFINITY, ratio_hi = -INFINITY;
    const std::size_t first_checked = (3 * n_max + 3) / 4;
    std::vector<GrowthSample> upper;
    for (std::size_t n = 2; n <= n_max; ++n) {
        const GrowthSample& s = out.samples[n - 2];
        if (n >= first_checked) {
            const double ratio = s.length / (2.0 * kPi * static_cast<double>(n));
            ratio_lo = std::min(ratio_lo, ratio);
            ratio_hi = std::max(ratio_hi, ratio);
        }
        if (2 * n >= n_max) upper.push_back(s);
    }
    out.fit = growth_fit(upper, GrowthModel::Exponential);

    VerdictReport& v = out.verdict;
    v.name = "blaschke-quotient";
    v.witness = static_cast<double>(n_max);
    v.details = {{"factors", static_cast<double>(c.factors)},
                 {"length tail bound", c.length_tail_bound},
                 {"max ||f(iy)|-1|", modulus},
                 {"min L_S/(2 pi n)", ratio_lo},
                 {"max L_S/(2 pi n)", ratio_hi},
                 {"rate", out.fit.exponent},
                 {"constant", out.fit.constant},
                 {"fit residual", out.fit.residual}};
    v.worst_ratio = std::max({modulus / 1e-8, std::abs(ratio_lo - 1.0) / 0.15, std::abs(ratio_hi - 1.0) / 0.15,
                              std::abs(out.fit.exponent - 0.5) / 0.05});
    v.status = v.worst_ratio <= 1.0 ? Status::Pass : Status::Fail;
    return out;
}

}  // namespace imagearc
