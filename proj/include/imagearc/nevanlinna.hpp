#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "imagearc/geodesics.hpp"
#include "imagearc/maps.hpp"

namespace imagearc {

/// S(r) and T(r) sampled on increasing radii in (0, 1).
struct CharacteristicCurve {
    std::vector<double> radii;
    std::vector<double> S_values;
    std::vector<double> T_values;
};

/// S(r) = A_S(f({|z| < r}))/4pi.
double shimizu_S(const MapExpr& f, double r, const QuadConfig& q = QuadConfig::areas());

/// Ahlfors–Shimizu characteristic T(r) = int_0^r S(t)/t dt, evaluated as the
/// single area integral (1/4pi) int_{|z|<r} |f'|^2 lambda_S(f)^2 log(r/|z|) dA.
double shimizu_T(const MapExpr& f, double r, const QuadConfig& q = QuadConfig::areas());

CharacteristicCurve characteristic_curve(const MapExpr& f, std::span<const double> radii,
                                         const QuadConfig& q = QuadConfig::areas());

/// Zeros, poles and essential singularities on the sphere, with multiplicity.
struct Divisor {
    std::vector<SpherePoint> zeros;
    std::vector<SpherePoint> poles;
    std::vector<SpherePoint> essential;
};

/// Structural divisor of a meromorphic expression. Supports the rational
/// families (power series, Möbius, Koebe, Blaschke products, products and
/// quotients) and compositions whose inner map has computable preimages.
/// Throws UnsupportedError otherwise.
Divisor divisor(const MapExpr& f);

/// Roots of sum c_n z^n (companion matrix, Newton-polished).
std::vector<Complex> polynomial_roots(std::span<const Complex> coefficients);

/// Constructive quotient representation f = f0/f_inf with
/// f0 = 1/2 B0 exp(u0 + i u0~ + i phase), f_inf = 1/2 B_inf exp(u_inf + i u_inf~).
struct Decomposition {
    std::vector<Complex> b0_zeros;    ///< zeros of f in the disc, with multiplicity
    std::vector<Complex> binf_poles;  ///< poles of f in the disc, with multiplicity
    /// Fourier coefficients of the boundary data, index order -M/2 .. M/2-1.
    std::vector<Complex> u0_fourier;
    std::vector<Complex> uinf_fourier;
    std::size_t boundary_samples = 0;
    /// Relative rotation fixing f0/f_inf = f with both conjugates of mean zero.
    double phase = 0.0;

    Complex f0(Complex z) const;
    Complex finf(Complex z) const;
    /// (|f0|^2 + |f_inf|^2)^{1/2}
    double norm(Complex z) const;
    /// Largest fraction of Fourier energy (u0 or u_inf) carried by |n| >= M/4.
    double tail_energy_ratio() const;
};

/// Text manifest: sample count, phase, zeros, poles and both coefficient
/// lists in index order -M/2 .. M/2-1.
std::string to_manifest(const Decomposition& d);

/// Decomposition from M boundary samples (M a power of two >= 256). The map
/// must extend analytically across the unit circle with no zeros or poles
/// within 1e-6 of it. Half-plane maps are pulled back by the inverse Cayley map.
Decomposition fatou_decompose(const MapExpr& f, std::size_t boundary_samples);

/// Starts at 4096 samples and doubles until the Fourier tail of u0 is below
/// 1e-8 of its energy.
Decomposition fatou_decompose_auto(const MapExpr& f);

/// T(1) = N(1; 0) + m(1; 0) with the chordal proximity term evaluated by the
/// M-point trapezoid rule on the circle.
double origin_identity_T(const MapExpr& f, std::size_t boundary_samples);

/// Residuals of the three quotient-representation identities:
/// | |f0|^2 + |f_inf|^2 - 1 | at M fresh boundary points (half-step offset),
/// max relative |f0/f_inf - f| at `interior` seeded random points of |z| < 0.95,
/// and | |f0(0)|^2 + |f_inf(0)|^2 - exp(-2 T(1)) | (NaN when f(0) is 0 or inf).
struct DecompositionResiduals {
    double boundary = 0.0;
    double quotient = 0.0;
    double origin = 0.0;
};
DecompositionResiduals decomposition_residuals(const MapExpr& f, const Decomposition& d, std::size_t interior = 100,
                                               unsigned seed = 20240601u);

/// min over probes of (|f0|^2 + |f_inf|^2)^{1/2}.
double uniform_characteristic_delta(const Decomposition& d, std::span<const Complex> probes);
double uniform_characteristic_delta(const MapExpr& f, std::span<const Complex> probes, std::size_t boundary_samples);
double uniform_characteristic_delta(const MapExpr& f0, const MapExpr& finf, std::span<const Complex> probes);

/// The map pulled back to the disc (inverse Cayley for half-plane maps).
MapExpr on_disc(const MapExpr& f);

}  // namespace imagearc
