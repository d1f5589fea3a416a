#pragma once

#include <functional>
#include <span>

namespace imagearc {

struct QuadConfig {
    double abs_tol = 1e-9;
    double rel_tol = 1e-9;
    int max_depth = 40;

    /// Defaults for arc lengths.
    static QuadConfig lengths() { return {1e-9, 1e-9, 40}; }
    /// Defaults for areas.
    static QuadConfig areas() { return {1e-7, 1e-9, 40}; }

    void validate() const;
};

struct QuadResult {
    double value = 0.0;
    double error_bound = 0.0;
};

/// Integrable endpoint singularities declared by the caller; interior
/// singular points split the interval.
struct Singularities {
    bool at_lower = false;
    bool at_upper = false;
    std::span<const double> interior = {};
};

/// Global adaptive Gauss–Kronrod (7/15) integration of f over [a, b].
/// On success |value - true| <= max(abs_tol, rel_tol |value|) (estimated).
/// Throws PrecisionError with the best estimate when an interval would have
/// to be split beyond max_depth.
QuadResult adaptive_integrate(const std::function<double(double)>& f, double a, double b, const QuadConfig& q,
                              const Singularities& singular = {});

/// One GK15 panel: value and QUADPACK error estimate.
QuadResult gauss_kronrod15(const std::function<double(double)>& f, double a, double b);

}  // namespace imagearc
