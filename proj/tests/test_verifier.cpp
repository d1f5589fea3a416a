#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gen.hpp"
#include "imagearc/errors.hpp"
#include "imagearc/verifier.hpp"

using namespace imagearc;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<GrowthSample> synthetic(double (*law)(double)) {
    std::vector<GrowthSample> out;
    for (int k = 1; k <= 12; ++k) out.push_back({double(k), law(double(k))});
    return out;
}

std::vector<Complex> small_grid() { return ProbeGrid{8, 16, 6.0}.points(); }

}  // namespace

TEST_CASE("area-derivative bound is sharp for the identity") {
    const auto grid = ProbeGrid{}.points();
    const VerdictReport r = check_area_derivative_bound(MapExpr::identity(), AreaBound::HyperbolicToEuclidean, grid);
    CHECK(r.passed());
    CHECK(std::abs(r.worst_ratio - 1.0) < 1e-9);
    CHECK(std::get<Complex>(r.witness) == Complex(0.0));
}

TEST_CASE("area-derivative bound for eps z into the disc") {
    const auto grid = small_grid();
    const VerdictReport r =
        check_area_derivative_bound(MapExpr::scale(0.1), AreaBound::HyperbolicToHyperbolic, grid);
    CHECK(r.passed());
    CHECK(r.worst_ratio == Approx(0.99).epsilon(1e-9));
}

TEST_CASE("property: random polynomials stay strictly below the bound") {
    gen::Gen g(51);
    const auto grid = small_grid();
    for (int k = 0; k < 5; ++k) {
        std::vector<Complex> c(6);
        for (Complex& a : c) a = g.complex(1.0);
        const VerdictReport r = check_area_derivative_bound(MapExpr::power_series(c), AreaBound::HyperbolicToEuclidean,
                                                            grid, QuadConfig::areas());
        CHECK(r.passed());
        CHECK(r.worst_ratio < 1.0);
    }
}

TEST_CASE("property: worst ratio is invariant under grid-preserving rotations") {
    const auto grid = small_grid();
    const MapExpr f = MapExpr::power_series({0.0, 1.0, Complex(0.3, 0.2), -0.1});
    const double base = check_area_derivative_bound(f, AreaBound::HyperbolicToEuclidean, grid).worst_ratio;
    for (int j = 1; j < 16; j += 5) {
        const MapExpr rot = MapExpr::compose(f, MapExpr::scale(std::polar(1.0, 2.0 * kPi * j / 16.0)));
        CHECK(check_area_derivative_bound(rot, AreaBound::HyperbolicToEuclidean, grid).worst_ratio ==
              Approx(base).epsilon(1e-10));
    }
}

TEST_CASE("divergent image area makes the area bound inapplicable") {
    const VerdictReport r =
        check_area_derivative_bound(MapExpr::koebe(), AreaBound::HyperbolicToEuclidean, small_grid());
    CHECK(r.status == Status::Inapplicable);
}

TEST_CASE("localized bound") {
    for (double delta : {0.5, 1.0, 3.0}) {
        const VerdictReport r = check_localized_bound(MapExpr::identity(), 0.0, delta);
        CHECK(r.passed());
        CHECK(r.worst_ratio == Approx(1.0).epsilon(1e-9));
    }
    const VerdictReport k = check_localized_bound(MapExpr::koebe(), Complex(0.0, 0.3), 1.0);
    CHECK(k.passed());
    CHECK(k.worst_ratio < 1.0 - 1e-6);
    const VerdictReport sq = check_localized_bound(MapExpr::power_series({0.0, 0.0, 1.0}), 0.0, 2.0);
    CHECK(sq.passed());
    CHECK(sq.worst_ratio < 1.0 - 1e-6);
}

TEST_CASE("spherical bound") {
    const VerdictReport small = check_spherical_bound(MapExpr::scale(0.1));
    CHECK(small.passed());
    CHECK(std::isfinite(small.details.at(1).value));

    for (double lambda : {1.0, 10.0}) {
        const MapExpr f = MapExpr::compose(MapExpr::scale(lambda), MapExpr::koebe());
        CHECK(check_spherical_bound(f, ProbeGrid{8, 16, 6.0}).status == Status::Inapplicable);
        CHECK(deriv_norm(f, 0.0, MetricId::HyperbolicDisc, MetricId::Spherical) == Approx(lambda).epsilon(1e-12));
    }

    const VerdictReport c = check_spherical_bound(MapExpr::constant(2.0), ProbeGrid{8, 16, 6.0});
    CHECK(c.passed());
    CHECK(c.details.at(1).value == 0.0);
}

TEST_CASE("growth fits on synthetic data") {
    const GrowthFit half = growth_fit(synthetic([](double r) { return std::sqrt(r); }), GrowthModel::PowerLaw);
    CHECK(half.exponent == Approx(0.5).epsilon(1e-12));
    CHECK(half.residual < 1e-12);

    const GrowthFit expo =
        growth_fit(synthetic([](double r) { return 2.0 * kPi * std::exp(r / 2.0); }), GrowthModel::Exponential);
    CHECK(expo.exponent == Approx(0.5).epsilon(1e-12));
    CHECK(expo.constant == Approx(std::log(2.0 * kPi)).epsilon(1e-12));

    gen::Gen g(52);
    for (int k = 0; k < 20; ++k) {
        const double a = g.uniform(-2.0, 3.0), c = g.uniform(0.1, 10.0);
        std::vector<GrowthSample> s;
        for (int i = 1; i <= 8; ++i) s.push_back({0.7 * i, c * std::pow(0.7 * i, a)});
        CHECK(growth_fit(s, GrowthModel::PowerLaw).exponent == Approx(a).epsilon(1e-6));
    }
    CHECK_THROWS_AS(growth_fit(std::vector<GrowthSample>{{1, 1}, {2, 2}, {3, 3}}, GrowthModel::PowerLaw), DomainError);
    CHECK_THROWS_AS(growth_fit(std::vector<GrowthSample>{{1, 1}, {3, 2}, {2, 3}, {4, 4}}, GrowthModel::PowerLaw),
                    DomainError);
}

TEST_CASE("sqrt trends") {
    const std::vector<double> rhos{4.0, 6.0, 8.0, 10.0, 12.0};
    CHECK(check_sqrt_trend("hyp", MapExpr::scale(0.9), kPi, MetricId::HyperbolicDisc, rhos).passed());
    CHECK(check_sqrt_trend("sph", MapExpr::compose(MapExpr::koebe(), MapExpr::scale(0.9)), kPi, MetricId::Spherical,
                           rhos)
              .passed());
    // The identity is an isometry of the disc: L_H = rho grows like rho.
    const VerdictReport id = check_sqrt_trend("id", MapExpr::identity(), 0.0, MetricId::HyperbolicDisc, rhos);
    CHECK(id.status == Status::Fail);
    CHECK(id.worst_ratio > 1.0);
}

TEST_CASE("alpha tail classification") {
    const double alpha = 1.5, delta = 1.0;
    CHECK(classify_area_tail([&](double t) { return std::pow(t, alpha); }, alpha, delta).behaviour ==
          TailBehaviour::Divergent);
    CHECK(classify_area_tail([&](double t) { return std::pow(t, alpha - 2.0); }, alpha, delta).behaviour ==
          TailBehaviour::Convergent);
    CHECK(alpha_growth_check([&](double t) { return std::pow(t, alpha); }, alpha, delta).status ==
          Status::Inapplicable);
    CHECK_THROWS_AS(classify_area_tail([](double) { return 1.0; }, 1.0, 1.0), DomainError);
}

TEST_CASE("alpha growth check on a finite-area map") {
    for (double alpha : {1.5, 3.0}) {
        const VerdictReport r = alpha_growth_check(MapExpr::compose(MapExpr::koebe(), MapExpr::scale(0.9)), alpha, 1.0);
        CHECK(r.passed());
        CHECK(r.worst_ratio < 1.0);
    }
}

TEST_CASE("property: Schwarz-Pick check on random self-maps") {
    gen::Gen g(53);
    for (int k = 0; k < 20; ++k) {
        std::vector<Complex> pts;
        for (int i = 0; i < 10; ++i) pts.push_back(g.in_disc(0.99));
        const std::vector<RadialArc> arcs{RadialArc::disc(g.uniform(0.0, 2.0 * kPi), 6.0)};
        CHECK(schwarz_pick_check(g.disc_self_map(), pts, arcs).passed());
    }
    const std::vector<Complex> out{0.8};
    CHECK_THROWS_AS(schwarz_pick_check(MapExpr::scale(1.5), out, {}), RangeError);
}

TEST_CASE("uniform characteristic length bound") {
    const std::vector<RadialArc> arcs{RadialArc::disc(0.0, 4.0), RadialArc::disc(2.0, 4.0)};
    const ProbeGrid grid{8, 16, 6.0};
    const MapExpr half = MapExpr::constant(0.5);
    const VerdictReport c = check_uniform_char_length_bound(half, half, std::sqrt(0.5), arcs, grid);
    CHECK(c.passed());
    CHECK(c.worst_ratio == 0.0);

    const MapExpr f0 = MapExpr::product(half, MapExpr::blaschke_disc({0.5}));
    CHECK(check_uniform_char_length_bound(f0, half, 0.5, arcs, grid).passed());

    const VerdictReport bad = check_uniform_char_length_bound(half, half, 0.9, arcs, grid);
    CHECK(bad.status == Status::Inapplicable);
    const VerdictReport big = check_uniform_char_length_bound(MapExpr::constant(1.0), half, 0.5, arcs, grid);
    CHECK(big.status == Status::Inapplicable);
}

TEST_CASE("verdict line format and determinism") {
    const auto grid = small_grid();
    const VerdictReport a = check_area_derivative_bound(MapExpr::identity(), AreaBound::HyperbolicToEuclidean, grid);
    const VerdictReport b = check_area_derivative_bound(MapExpr::identity(), AreaBound::HyperbolicToEuclidean, grid);
    CHECK(a.line() == b.line());
    CHECK(a.line().rfind("area-derivative H->E | PASS | 1.0000000000000", 0) == 0);
    VerdictReport empty;
    empty.name = "x";
    CHECK(empty.line() == "x | FAIL | 0 | -");
}

TEST_CASE("annulus scenario") {
    const ScenarioReport s = scenario_annulus(std::exp(1.0), 40.0);
    CHECK(s.verdict.passed());
    CHECK(s.fit.exponent == Approx(1.0).epsilon(0.05));
    for (std::size_t i = 1; i < s.samples.size(); ++i) CHECK(s.samples[i].length >= s.samples[i - 1].length);
    CHECK_THROWS_AS(scenario_annulus(1.0, 10.0), DomainError);
}

TEST_CASE("symmetric Blaschke scenario") {
    const ScenarioReport s = scenario_symmetric_blaschke(40, 20.0);
    CHECK(s.verdict.passed());
    for (std::size_t i = 1; i < s.samples.size(); ++i) CHECK(s.samples[i].length >= s.samples[i - 1].length);
    CHECK_THROWS_AS(scenario_symmetric_blaschke(4, 2.0), DomainError);
    CHECK_THROWS_AS(scenario_symmetric_blaschke(10, 20.0), ResolutionError);
}

TEST_CASE("Blaschke quotient scenario") {
    const QuotientConstruction c = blaschke_quotient(40);
    CHECK(c.length_tail_bound <= 1e-3);
    CHECK(c.factors >= 40);
    const ScenarioReport s = scenario_blaschke_quotient(40);
    CHECK(s.verdict.passed());
    CHECK(s.fit.model == GrowthModel::Exponential);
    CHECK(s.fit.exponent == Approx(0.5).epsilon(0.1));
    for (std::size_t i = 1; i < s.samples.size(); ++i) CHECK(s.samples[i].length >= s.samples[i - 1].length);
}
