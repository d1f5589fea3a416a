#pragma once

// Seeded generators shared by the property tests and the acceptance binary.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "imagearc/errors.hpp"
#include "imagearc/maps.hpp"

namespace gen {

using imagearc::Complex;
using imagearc::MapExpr;

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool coin() { return integer(0, 1) == 1; }

    // Area-uniform in {|z| < r}.
    Complex in_disc(double r = 0.95) {
        return std::polar(r * std::sqrt(uniform(0.0, 1.0)), uniform(0.0, 2.0 * std::numbers::pi));
    }
    Complex in_annulus(double r_lo, double r_hi) {
        return std::polar(uniform(r_lo, r_hi), uniform(0.0, 2.0 * std::numbers::pi));
    }
    Complex complex(double scale = 2.0) { return {uniform(-scale, scale), uniform(-scale, scale)}; }
    Complex upper(double height = 4.0) { return {uniform(-2.0, 2.0), uniform(0.05, height)}; }

    std::vector<Complex> polynomial(int max_degree, double scale = 1.0) {
        std::vector<Complex> c(static_cast<std::size_t>(integer(1, max_degree)) + 1);
        for (Complex& a : c) a = complex(scale);
        if (std::abs(c.back()) < 1e-3) c.back() = 1.0;
        return c;
    }

    std::vector<Complex> disc_points(int lo, int hi, double r_max) {
        std::vector<Complex> out(static_cast<std::size_t>(integer(lo, hi)));
        for (Complex& a : out) a = in_disc(r_max);
        return out;
    }

    // Analytic self-map of the disc.
    MapExpr disc_self_map() {
        switch (integer(0, 4)) {
            case 0: return MapExpr::blaschke_disc(disc_points(1, 5, 0.9));
            case 1: return MapExpr::scale(in_disc(0.99));
            case 2: {
                // Bounded coefficients with sum |a_n| < 1.
                std::vector<Complex> c(static_cast<std::size_t>(integer(2, 7)));
                double total = 0.0;
                for (Complex& a : c) total += std::abs(a = complex(1.0));
                for (Complex& a : c) a *= uniform(0.1, 0.99) / total;
                return MapExpr::power_series(c);
            }
            case 3:
                return MapExpr::compose(MapExpr::blaschke_disc(disc_points(1, 3, 0.8)),
                                        MapExpr::mobius(imagearc::disc_automorphism(in_disc(0.8), 1.0)));
            default:
                return MapExpr::product(MapExpr::scale(in_disc(0.95)), MapExpr::blaschke_disc(disc_points(1, 4, 0.9)));
        }
    }

    // c B(zeros)/B(poles) with at most 4 of each, kept off the circle and the origin.
    MapExpr blaschke_quotient() {
        auto points = [&](int hi) {
            std::vector<Complex> out(static_cast<std::size_t>(integer(0, hi)));
            for (Complex& a : out) a = in_annulus(0.05, 0.85);
            return out;
        };
        const Complex c = std::polar(uniform(0.2, 5.0), uniform(0.0, 2.0 * std::numbers::pi));
        std::vector<Complex> zeros = points(4), poles = points(4);
        if (zeros.empty() && poles.empty()) zeros.push_back(in_annulus(0.05, 0.85));
        return MapExpr::product(MapExpr::constant(c),
                                MapExpr::quotient(MapExpr::blaschke_disc(zeros), MapExpr::blaschke_disc(poles)));
    }

    // Random expression tree over every leaf and combinator, for round trips.
    MapExpr tree(int depth) {
        for (;;) {
            try {
                if (depth <= 0 || integer(0, 2) == 0) return leaf();
                const MapExpr l = tree(depth - 1), r = tree(depth - 1);
                switch (integer(0, 2)) {
                    case 0: return MapExpr::product(l, r);
                    case 1: return MapExpr::quotient(l, r);
                    default: return MapExpr::compose(l, r);
                }
            } catch (const imagearc::CompositionError&) {
                // mismatched tags; draw again
            } catch (const imagearc::ConstructionError&) {
                // degenerate Möbius coefficients
            }
        }
    }

    MapExpr leaf() {
        switch (integer(0, 13)) {
            case 0: return MapExpr::identity();
            case 1: return MapExpr::constant(complex(3.0));
            case 2: return MapExpr::scale(complex(3.0));
            case 3: return MapExpr::shift(complex(3.0));
            case 4: {
                const Complex a = complex(), b = complex(), c = complex();
                return MapExpr::mobius({a, b, c, (1.0 + b * c) / (std::abs(a) > 1e-3 ? a : Complex(1.0))});
            }
            case 5: return MapExpr::koebe();
            case 6: return MapExpr::exp();
            case 7: return MapExpr::log();
            case 8: return MapExpr::power_series(polynomial(5));
            case 9: return MapExpr::blaschke_disc(disc_points(0, 4, 0.9));
            case 10: {
                std::vector<double> heights(static_cast<std::size_t>(integer(1, 5)));
                for (double& y : heights) y = uniform(0.1, 50.0);
                std::vector<int> signs;
                if (coin()) {
                    for (std::size_t k = 0; k < heights.size(); ++k) signs.push_back(coin() ? 1 : -1);
                }
                return MapExpr::blaschke_half_plane(heights, signs);
            }
            case 11: return MapExpr::cayley();
            case 12: return MapExpr::inverse_cayley();
            default: return MapExpr::constant(Complex(integer(-3, 3), 0.0));
        }
    }

private:
    std::mt19937_64 rng_;
};

}  // namespace gen
