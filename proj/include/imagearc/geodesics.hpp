#pragma once

#include <limits>
#include <span>
#include <vector>

#include "imagearc/maps.hpp"
#include "imagearc/quadrature.hpp"

namespace imagearc {

/// Unit-speed hyperbolic ray: tanh(t/2) e^{i theta} in the disc, or
/// base_offset + i e^t in the upper half-plane.
struct RadialArc {
    MetricId domain = MetricId::HyperbolicDisc;
    double theta = 0.0;
    Complex base_offset = 0.0;
    double rho_max = 1.0;

    static RadialArc disc(double theta, double rho_max);
    static RadialArc half_plane(Complex base_offset, double rho_max);

    void validate() const;
};

struct GrowthSample {
    double rho;
    double length;
};

inline constexpr double kInfiniteRadius = std::numeric_limits<double>::infinity();

Complex radial_point(const RadialArc& arc, double t);

/// Hyperbolic density of the source at arc parameter t, in closed form.
double radial_density(const RadialArc& arc, double t);

/// Image length of arc[t0, t1] in the target metric.
QuadResult arc_length_between(const MapExpr& f, const RadialArc& arc, double t0, double t1, MetricId target,
                              const QuadConfig& q = QuadConfig::lengths());

/// L_B(rho_max) = integral over [0, rho_max] of ||f'(gamma(t))||_{H->B}.
double arc_length(const MapExpr& f, const RadialArc& arc, MetricId target,
                  const QuadConfig& q = QuadConfig::lengths());

/// L_B at each requested rho (ascending), accumulated panel by panel.
std::vector<GrowthSample> length_profile(const MapExpr& f, const RadialArc& arc, std::span<const double> rhos,
                                         MetricId target, const QuadConfig& q = QuadConfig::lengths());

/// Area of f(B_H(0, rho)) counting multiplicity in the target metric;
/// rho may be kInfiniteRadius. Half-plane maps are pulled back to the disc
/// through the inverse Cayley map.
QuadResult area(const MapExpr& f, double rho, MetricId target, const QuadConfig& q = QuadConfig::areas());

/// pi * sum n |a_n|^2 r^{2n}
double area_from_coefficients(std::span<const Complex> coefficients, double r);

/// Hyperbolic radius of the Euclidean disc of radius r: log((1+r)/(1-r)).
double hyperbolic_radius(double r);

/// Periodic trapezoid rule on [0, 2 pi) with the panel count doubled until
/// two refinements agree to max(abs_tol, rel_tol |I|).
double periodic_trapezoid(const std::function<double(double)>& g, double abs_tol, double rel_tol);

}  // namespace imagearc
