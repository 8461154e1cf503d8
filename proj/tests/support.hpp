#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "lemlab/capacity.hpp"
#include "lemlab/polynomial.hpp"
#include "lemlab/region.hpp"

namespace support {

using lemlab::Complex;
inline constexpr double kPi = std::numbers::pi;

inline bool rel_close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)); }

// Small hand-rolled generator for property tests.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    Complex in_disc(double r) { return std::polar(r * std::sqrt(uniform(0, 1)), uniform(0, 2 * kPi)); }
    std::vector<Complex> points(int n, double r) {
        std::vector<Complex> v(static_cast<std::size_t>(n));
        for (auto& z : v) z = in_disc(r);
        return v;
    }
    lemlab::Polynomial monic(int degree, double root_radius) {
        auto r = points(degree, root_radius);
        return lemlab::Polynomial::from_roots(r);
    }
    lemlab::Region region() {
        const Complex c = in_disc(0.5);
        switch (integer(0, 3)) {
            case 0: return lemlab::Region::disc(c, uniform(0.4, 1.2));
            case 1: {
                const double w = uniform(0.5, 1.5), h = uniform(0.5, 1.5);
                return lemlab::Region::rectangle(c - Complex{w, h} / 2.0, w, h);
            }
            case 2: return lemlab::Region::annulus(c, uniform(0.1, 0.4), uniform(0.6, 1.1));
            default: {
                std::vector<Complex> v;
                const int k = integer(5, 8);
                for (int i = 0; i < k; ++i) v.push_back(c + std::polar(uniform(0.5, 1.1), 2 * kPi * (i + uniform(-0.3, 0.3)) / k));
                return lemlab::Region::polygon(v);
            }
        }
    }

private:
    std::mt19937_64 rng_;
};

// Composite Simpson rule on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

// Area of {|z^2 - 1| <= 1}: in polar form r^2 <= 2 cos(2 theta).
inline double bernoulli_area_oracle() {
    return simpson([](double t) { return 0.5 * std::max(0.0, 2.0 * std::cos(2.0 * t)); }, 0.0, 2.0 * kPi);
}

// Area of a region star-shaped about c by angular quadrature of the boundary
// radius, found by bisection on the membership test.
inline double star_area_oracle(const lemlab::Region& K, Complex c, double r_max) {
    auto radius = [&](double t) {
        double lo = 0.0, hi = r_max;
        for (int i = 0; i < 60; ++i) {
            const double mid = 0.5 * (lo + hi);
            (K.contains(c + std::polar(mid, t)) ? lo : hi) = mid;
        }
        return lo;
    };
    return simpson([&](double t) { return 0.5 * radius(t) * radius(t); }, 0.0, 2.0 * kPi, 4000);
}

// cap(Disc(0,R), Disc(a,r)) from the classical ring-modulus formula.
inline double eccentric_ring_capacity(double R, double a, double r) {
    return 1.0 / (2.0 * std::acosh((R * R + r * r - a * a) / (2.0 * R * r)));
}

inline double concentric_ring_capacity(double R, double r) { return 1.0 / (2.0 * std::log(R / r)); }

// Logarithmic capacity of the unit square: Gamma(1/4)^2 / (4 pi^{3/2}).
inline double unit_square_capacity() {
    const double g = std::tgamma(0.25);
    return g * g / (4.0 * std::pow(kPi, 1.5));
}

// Off-center bump on a square grid: max(0, 1 - |z-c|^2/s^2)^2, plus an
// optional second bump.
// One off-center bump on a grid covering [-1,1]^2: a cone max(0, 1 - |z-c|/s) or
// a smooth (1 - |z-c|^2/s^2)^2, radius s in [0.2, 0.5], center anywhere in |c| <= 0.5.
inline lemlab::GridFunction bump_grid(Gen& g, double h) {
    const int n = static_cast<int>(std::lround(2.0 / h));
    auto f = lemlab::GridFunction::zeros(Complex{-1.0, -1.0}, h, n, n);
    const bool cone = g.integer(0, 1) == 0;
    const Complex c = g.in_disc(0.5);
    const double s = g.uniform(0.2, 0.5);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const double d = std::abs(f.cell_center(i, j) - c) / s;
            f.at(i, j) = cone ? std::max(0.0, 1.0 - d) : (d < 1.0 ? (1.0 - d * d) * (1.0 - d * d) : 0.0);
        }
    return f;
}

}  // namespace support
