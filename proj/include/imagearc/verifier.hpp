#pragma once

#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "imagearc/geodesics.hpp"
#include "imagearc/maps.hpp"
#include "imagearc/quadrature.hpp"

namespace imagearc {

enum class Status { Pass, Fail, Inapplicable };

std::string_view to_string(Status s);

struct DetailRow {
    std::string key;
    double value;
};

/// Complex probe point, scalar parameter, or nothing.
using Witness = std::variant<std::monostate, Complex, double>;

struct VerdictReport {
    std::string name;
    Status status = Status::Fail;
    /// max over the probe set of (left side)/(right side)
    double worst_ratio = 0.0;
    Witness witness;
    std::vector<DetailRow> details;
    std::string note;

    bool passed() const { return status == Status::Pass; }
    /// `name | PASS | worst_ratio | witness`
    std::string line() const;
};

/// Disc probe grid: `radii` hyperbolically equispaced radii on [0, rho_max]
/// times `angles` equispaced angles (the origin appears once).
struct ProbeGrid {
    std::size_t radii = 32;
    std::size_t angles = 64;
    double rho_max = 12.0;

    std::vector<Complex> points() const;
    ProbeGrid refined() const { return {2 * radii, 2 * angles, rho_max}; }
};

/// Tight tolerances for the sharpness checks, whose ratios are asserted to 1e-9.
inline QuadConfig sharp_config() { return {1e-13, 1e-12, 40}; }

enum class AreaBound { HyperbolicToEuclidean, HyperbolicToHyperbolic };

/// 4 pi ||f'(z)||^2 / Area over the grid; passes iff <= 1 + 1e-9.
/// A divergent image area makes the verdict inapplicable.
VerdictReport check_area_derivative_bound(const MapExpr& f, AreaBound kind, std::span<const Complex> grid,
                                          const QuadConfig& q = sharp_config());

/// tanh(delta/2) ||f'(z0)||_{H->E} <= (A_E(f(B_H(z0, delta)))/4 pi)^{1/2}.
VerdictReport check_localized_bound(const MapExpr& f, Complex z0, double delta,
                                    const QuadConfig& q = sharp_config());

/// Empirical constant c* = max ||f'||_{H->S} / A_S(f(D))^{1/2} on the grid and
/// on its refinement. worst_ratio = c*(fine)/c*(coarse); passes iff c* is
/// finite and the ratio is at most 1.05. A_S >= 2 pi is a violated hypothesis.
VerdictReport check_spherical_bound(const MapExpr& f, const ProbeGrid& grid = {},
                                    const QuadConfig& q = QuadConfig::areas());

enum class GrowthModel { PowerLaw, Exponential };

struct GrowthFit {
    std::vector<GrowthSample> samples;
    GrowthModel model = GrowthModel::PowerLaw;
    double exponent = 0.0;  ///< alpha (power law) or beta (exponential)
    double constant = 0.0;  ///< c in log L = alpha log rho + c, or beta rho + c
    double residual = 0.0;  ///< RMS in log space
    /// L(rho)/sqrt(rho) for the o(rho^{1/2}) trend checks.
    std::vector<double> sqrt_tail;
};

/// Least-squares fit in log space; needs >= 4 samples with increasing rho
/// and positive lengths.
GrowthFit growth_fit(std::span<const GrowthSample> samples, GrowthModel model);

/// L_B(rho)/rho^{1/2} along one radial arc is strictly decreasing on `rhos`,
/// and, when `drop` > 0, its last value is below drop * first.
/// worst_ratio is the largest consecutive quotient (or last/(drop first)).
VerdictReport check_sqrt_trend(const std::string& name, const MapExpr& f, double theta, MetricId target,
                               std::span<const double> rhos, double drop = 0.0,
                               const QuadConfig& q = QuadConfig::lengths());

enum class TailBehaviour { Convergent, Divergent, Inconclusive };

std::string_view to_string(TailBehaviour b);

struct TailTest {
    TailBehaviour behaviour = TailBehaviour::Inconclusive;
    std::vector<double> window_starts;  ///< in s = t - delta
    std::vector<double> increments;
};

/// Cauchy test of int^inf (delta/tanh(delta/2)) A(t)/(t - delta)^alpha dt on
/// doubling windows s in [2^k, 2^{k+1}] (s = t - delta) while t <= t_max.
/// Over the last three windows, both increment ratios < 1 means convergent,
/// both >= 1 divergent; anything else (or fewer than 3 windows) is inconclusive.
TailTest classify_area_tail(const std::function<double(double)>& area_at, double alpha, double delta,
                            double t_max = 35.0);

/// Tail test on the map's hyperbolic-to-Euclidean area function A(t); when
/// convergent, L_E(rho)/rho^{alpha/2} must be decreasing on the last three of
/// rho = 4, 6, ..., 16 along 8 radial arcs.
VerdictReport alpha_growth_check(const MapExpr& f, double alpha, double delta,
                                 const QuadConfig& q = QuadConfig::areas());

/// Same verdict logic for a synthetic A(t) (no length check).
VerdictReport alpha_growth_check(const std::function<double(double)>& area_at, double alpha, double delta);

/// ||f'(z)||_{H->H} <= 1 on the points, and L_H(rho) <= rho along the arcs.
VerdictReport schwarz_pick_check(const MapExpr& f, std::span<const Complex> points, std::span<const RadialArc> arcs,
                                 const QuadConfig& q = QuadConfig::lengths());

/// Uniform-characteristic length bound for f = f0/f_inf: after checking delta <= (|f0|^2 +
/// |f_inf|^2)^{1/2} <= 1 on the grid, verifies ||F'||(1-|z|^2) <= 2,
/// ||f'||_{H->S} <= 2/(|f0|^2+|f_inf|^2)^{1/2} <= 2/delta and
/// L_S(rho) <= (2/delta) rho along the arcs at integer rho.
VerdictReport check_uniform_char_length_bound(const MapExpr& f0, const MapExpr& finf, double delta,
                                              std::span<const RadialArc> arcs, const ProbeGrid& grid = {},
                                              const QuadConfig& q = QuadConfig::lengths());

struct ScenarioReport {
    std::vector<GrowthSample> samples;
    GrowthFit fit;
    VerdictReport verdict;
};

/// Universal cover of {1/R < |z| < R}: q(z) = exp(i beta (Log z - i pi/2)),
/// beta = 2 log R / pi, measured along i e^t. 32 samples up to rho_max.
ScenarioReport scenario_annulus(double R, double rho_max, const QuadConfig& q = QuadConfig::lengths());

/// Half-plane Blaschke product with zeros 2^n i, |n| <= N, factors for n < 0
/// negated; L_S along i e^t up to rho_max. Tail bound must stay below 1e-3.
ScenarioReport scenario_symmetric_blaschke(std::size_t N = 40, double rho_max = 20.0,
                                           const QuadConfig& q = QuadConfig::lengths());

/// f = B(z+1)/B(z-1) with zeros i n^2, sampled at rho = log y_n, n = 2..n_max.
ScenarioReport scenario_blaschke_quotient(std::size_t n_max = 40, const QuadConfig& q = QuadConfig::lengths());

/// The truncated quotient used by scenario_blaschke_quotient, with the
/// certified bound on |L_S - L_S(truncated)| along i e^t, t <= log(n_max^2).
struct QuotientConstruction {
    MapExpr f;
    std::size_t factors;
    double length_tail_bound;
};
QuotientConstruction blaschke_quotient(std::size_t n_max);

}  // namespace imagearc
