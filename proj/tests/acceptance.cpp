// Acceptance run: one line per criterion, nonzero exit if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "gen.hpp"
#include "imagearc/errors.hpp"
#include "imagearc/funcspec.hpp"
#include "imagearc/geodesics.hpp"
#include "imagearc/nevanlinna.hpp"
#include "imagearc/verifier.hpp"

using namespace imagearc;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double detail(const VerdictReport& r, const std::string& key) {
    for (const DetailRow& d : r.details) {
        if (d.key == key) return d.value;
    }
    throw Error("missing detail " + key);
}

Outcome identity_sharpness() {
    const VerdictReport r =
        check_area_derivative_bound(MapExpr::identity(), AreaBound::HyperbolicToEuclidean, ProbeGrid{}.points());
    return {std::abs(r.worst_ratio - 1.0) <= 1e-9, "ratio " + num(r.worst_ratio)};
}

Outcome scaled_identity_family() {
    Outcome o{true, ""};
    const std::vector<Complex> grid = ProbeGrid{}.points();
    for (double eps : {0.5, 0.1, 0.01}) {
        const MapExpr f = MapExpr::scale(eps);
        const double closed = 4.0 * kPi * eps * eps / (1.0 - eps * eps);
        const double quad = area(f, kInfiniteRadius, MetricId::HyperbolicDisc, sharp_config()).value;
        const double ratio = check_area_derivative_bound(f, AreaBound::HyperbolicToHyperbolic, grid).worst_ratio;
        o.pass = o.pass && rel(quad, closed) <= 1e-6 && std::abs(ratio - (1.0 - eps * eps)) <= 1e-9;
        o.detail += "eps=" + num(eps) + " ratio " + num(ratio) + " area rel err " + num(rel(quad, closed)) + "; ";
    }
    return o;
}

Outcome scaled_koebe_family() {
    Outcome o{true, ""};
    for (double lambda : {1.0, 10.0, 100.0}) {
        const MapExpr f = MapExpr::compose(MapExpr::scale(lambda), MapExpr::koebe());
        const double a = area(f, kInfiniteRadius, MetricId::Spherical).value;
        const double n = deriv_norm(f, 0.0, MetricId::HyperbolicDisc, MetricId::Spherical);
        o.pass = o.pass && std::abs(a - 4.0 * kPi) <= 1e-4 && std::abs(n - lambda) <= 1e-9;
        o.detail += "lambda=" + num(lambda) + " A_S " + num(a) + " norm " + num(n) + "; ";
    }
    return o;
}

Outcome coefficient_areas() {
    gen::Gen g(1004);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        const std::vector<Complex> c = g.polynomial(8);
        const MapExpr f = MapExpr::power_series(c);
        for (double r : {0.2, 0.5, 0.7, 0.9, 0.99}) {
            const double quad = area(f, hyperbolic_radius(r), MetricId::Euclidean).value;
            worst = std::max(worst, rel(quad, area_from_coefficients(c, r)));
        }
    }
    return {worst <= 1e-6, "max rel err " + num(worst)};
}

const std::vector<double> kTrendRhos{4.0, 6.0, 8.0, 10.0, 12.0};

std::string trend_detail(const VerdictReport& r) {
    std::string s = "worst " + num(r.worst_ratio);
    for (const DetailRow& d : r.details) s += ", " + d.key + " " + num(d.value);
    return s;
}

Outcome keogh_trend() {
    const VerdictReport r = check_sqrt_trend("keogh", MapExpr::compose(MapExpr::koebe(), MapExpr::scale(0.9)), kPi,
                                             MetricId::Euclidean, kTrendRhos, 0.5);
    return {r.passed(), trend_detail(r)};
}

Outcome bounded_image_trends() {
    const VerdictReport h =
        check_sqrt_trend("hyperbolic", MapExpr::scale(0.9), kPi, MetricId::HyperbolicDisc, kTrendRhos);
    const VerdictReport s = check_sqrt_trend("spherical", MapExpr::compose(MapExpr::koebe(), MapExpr::scale(0.9)), kPi,
                                             MetricId::Spherical, kTrendRhos);
    return {h.passed() && s.passed(), "H " + num(h.worst_ratio) + ", S " + num(s.worst_ratio)};
}

Outcome schwarz_pick_suite() {
    gen::Gen g(1007);
    double worst_point = 0.0, worst_length = 0.0;
    int passed = 0;
    for (int k = 0; k < 200; ++k) {
        std::vector<Complex> pts;
        for (int i = 0; i < 10; ++i) pts.push_back(g.in_disc(0.999));
        const std::vector<RadialArc> arcs{RadialArc::disc(g.uniform(0.0, 2.0 * kPi), 8.0)};
        const VerdictReport r = schwarz_pick_check(g.disc_self_map(), pts, arcs);
        worst_point = std::max(worst_point, detail(r, "max pointwise norm"));
        worst_length = std::max(worst_length, r.worst_ratio);
        passed += r.passed() ? 1 : 0;
    }
    return {passed == 200, num(passed) + "/200 maps, max norm " + num(worst_point) + ", max L_H/rho or norm " +
                               num(worst_length)};
}

Outcome annulus() {
    const ScenarioReport s = scenario_annulus(std::exp(1.0), 40.0);
    const double residual = detail(s.verdict, "periodicity residual");
    return {s.fit.exponent >= 0.95 && s.fit.exponent <= 1.05 && residual < 1e-8,
            "exponent " + num(s.fit.exponent) + ", periodicity residual " + num(residual)};
}

Outcome blaschke_quotient_growth() {
    const std::size_t n_max = 40;
    const ScenarioReport s = scenario_blaschke_quotient(n_max);
    const MapExpr f = blaschke_quotient(n_max).f;
    const double y_max = double(n_max * n_max);
    double modulus = 0.0;
    for (int k = 0; k < 100; ++k) {
        const SpherePoint w = evaluate(f, Complex(0.0, std::pow(y_max, k / 99.0))).value;
        modulus = std::max(modulus, w.is_finite() ? std::abs(std::abs(w.finite()) - 1.0) : INFINITY);
    }
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t n = 30; n <= n_max; ++n) {
        const GrowthSample& g = s.samples.at(n - 2);
        if (std::abs(g.rho - 2.0 * std::log(double(n))) > 1e-12) throw Error("unexpected sample layout");
        const double ratio = g.length / (2.0 * kPi * double(n));
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    const double rate = s.fit.exponent;
    return {modulus <= 1e-8 && lo >= 0.85 && hi <= 1.15 && rate >= 0.45 && rate <= 0.55,
            "max ||f(iy)|-1| " + num(modulus) + ", L_S/(2 pi n) in [" + num(lo) + ", " + num(hi) + "], rate " +
                num(rate)};
}

Outcome fatou_identities() {
    gen::Gen g(1010);
    double boundary = 0.0, quotient = 0.0, origin = 0.0;
    for (int k = 0; k < 10; ++k) {
        const MapExpr f = g.blaschke_quotient();
        const DecompositionResiduals r = decomposition_residuals(f, fatou_decompose_auto(f));
        boundary = std::max(boundary, r.boundary);
        quotient = std::max(quotient, r.quotient);
        origin = std::max(origin, std::isnan(r.origin) ? INFINITY : r.origin);
    }
    return {boundary <= 1e-6 && quotient <= 1e-8 && origin <= 1e-6,
            "boundary " + num(boundary) + ", quotient " + num(quotient) + ", origin " + num(origin)};
}

Outcome characteristic_derivative() {
    const MapExpr f = MapExpr::compose(MapExpr::koebe(), MapExpr::scale(0.5));
    const QuadConfig tight{1e-13, 1e-13, 40};
    const double h = 1e-3;
    double worst = 0.0;
    for (int i = 1; i <= 9; ++i) {
        const double r = 0.1 * i;
        const double dT = (shimizu_T(f, r + h, tight) - shimizu_T(f, r - h, tight)) / (2.0 * h);
        worst = std::max(worst, rel(dT, shimizu_S(f, r, tight) / r));
    }
    return {worst <= 1e-4, "max rel err " + num(worst)};
}

Outcome uniform_characteristic_bound() {
    const MapExpr half = MapExpr::constant(0.5);
    const MapExpr f0 = MapExpr::product(half, MapExpr::blaschke_disc({0.5}));
    const ProbeGrid grid{32, 64, 12.0};
    const std::vector<Complex> pts = grid.points();
    const double delta = uniform_characteristic_delta(f0, half, pts);
    std::vector<RadialArc> arcs;
    for (int k = 0; k < 8; ++k) arcs.push_back(RadialArc::disc(2.0 * kPi * k / 8.0, 10.0));
    const VerdictReport r = check_uniform_char_length_bound(f0, half, delta, arcs, grid);
    return {delta >= 0.35 && r.passed(), "delta " + num(delta) + ", " + r.line()};
}

std::size_t token_start(const std::string& s, std::size_t i) {
    while (i > 0 && (std::isalnum(static_cast<unsigned char>(s[i - 1])) || s[i - 1] == '_')) --i;
    return i;
}

Outcome parser_round_trip() {
    gen::Gen g(1013);
    int trips = 0;
    for (int k = 0; k < 100; ++k) {
        const MapExpr f = g.tree(4);
        trips += parse(unparse(f)) == f ? 1 : 0;
    }

    const MapExpr b = MapExpr::blaschke_half_plane({1.0, 4.0, 9.0, 16.0});
    const bool examples =
        parse("koebe()") == MapExpr::koebe() &&
        parse("scale(0.5+0i) . koebe()") == MapExpr::compose(MapExpr::scale(0.5), MapExpr::koebe()) &&
        parse("blaschke_hp([1,4,9,16]) . shift(1+0i) / blaschke_hp([1,4,9,16]) . shift(-1+0i)") ==
            MapExpr::quotient(MapExpr::compose(b, MapExpr::shift(1.0)), MapExpr::compose(b, MapExpr::shift(-1.0))) &&
        unparse(MapExpr::koebe()) == "koebe()" &&
        unparse(MapExpr::compose(MapExpr::scale(2.0), MapExpr::identity())) == "scale(2+0i) . z()";

    const std::string illegal = "#$@!?;&%`~^|";
    int exact = 0;
    for (int k = 0; k < 300; ++k) {
        std::string text = unparse(g.tree(3));
        const auto at = static_cast<std::size_t>(g.integer(0, static_cast<int>(text.size())));
        const std::size_t start = token_start(text, at);
        text.insert(at, 1, illegal[static_cast<std::size_t>(g.integer(0, int(illegal.size()) - 1))]);
        try {
            parse(text);
        } catch (const ParseError& e) {
            exact += e.position() == at || e.position() == start ? 1 : 0;
        }
    }
    return {trips == 100 && examples && exact == 300, num(trips) + "/100 round trips, examples " +
                                                          (examples ? "ok" : "wrong") + ", " + num(exact) +
                                                          "/300 fuzz positions exact"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"identity sharpness (H->E)", identity_sharpness},
        {"eps z sharpness family (H->H)", scaled_identity_family},
        {"lambda koebe spherical counterexample", scaled_koebe_family},
        {"coefficient/quadrature area agreement", coefficient_areas},
        {"Euclidean o(rho^1/2) trend with halving", keogh_trend},
        {"hyperbolic and spherical o(rho^1/2) trends", bounded_image_trends},
        {"Schwarz-Pick suite", schwarz_pick_suite},
        {"annulus cover scenario", annulus},
        {"Blaschke quotient scenario", blaschke_quotient_growth},
        {"quotient decomposition identities", fatou_identities},
        {"T' = S/r", characteristic_derivative},
        {"uniform characteristic length bound", uniform_characteristic_bound},
        {"parser round trip and fuzz positions", parser_round_trip},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += o.pass ? 0 : 1;
        std::printf("criterion %2zu | %s | %s | %s (%.1fs)\n", i + 1, o.pass ? "PASS" : "FAIL",
                    criteria[i].first.c_str(), o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
