#pragma once

// Good-point-set initialization: a number-theoretic low-discrepancy lattice
// used in place of uniform random initial populations.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "snakeopt/core.hpp"

namespace snakeopt {

using PointSet = std::vector<Position>;

inline bool is_prime(std::size_t p) {
    if (p < 2) return false;
    for (std::size_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

/// Smallest prime p with (p - 3) / 2 > s.
inline std::size_t smallest_prime(std::size_t s) {
    if (s < 1) throw std::invalid_argument("smallest_prime needs s >= 1");
    // (p - 3) / 2 > s  <=>  p > 2s + 3
    std::size_t p = 2 * s + 4;
    while (!is_prime(p)) ++p;
    return p;
}

/// Generators r_i = 2 cos(2 pi i / p), i = 1..s.
inline std::vector<double> good_point_generators(std::size_t s) {
    const double p = static_cast<double>(smallest_prime(s));
    std::vector<double> r(s);
    for (std::size_t i = 0; i < s; ++i)
        r[i] = 2.0 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i + 1) / p);
    return r;
}

/// Row k (k = 1..n) holds frac(r_i * k) for every dimension i; entries in [0, 1).
inline PointSet good_point_set(std::size_t n, std::size_t s) {
    if (n < 1) throw std::invalid_argument("good_point_set needs n >= 1");
    const auto r = good_point_generators(s);
    PointSet points(n, Position(s));
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < s; ++i) {
            const double v = r[i] * static_cast<double>(k + 1);
            double f = v - std::floor(v);
            if (f >= 1.0) f = 0.0;  // floor rounding on huge v
            points[k][i] = f;
        }
    }
    return points;
}

/// Good points mapped affinely into the box. No randomness involved.
inline Population gps_initialize(const SearchSpace& space, std::size_t n) {
    if (n < 2) throw std::invalid_argument("population size must be >= 2");
    auto points = good_point_set(n, space.dim());
    Population pop;
    pop.members.reserve(n);
    for (auto& p : points) {
        for (std::size_t i = 0; i < p.size(); ++i)
            p[i] = space.lower()[i] + space.width(i) * p[i];
        pop.members.push_back({std::move(p)});
    }
    return pop;
}

/// Squared centered L2 discrepancy (Hickernell) of points in [0,1]^s.
inline double centered_l2_discrepancy(const PointSet& points) {
    if (points.empty()) throw std::invalid_argument("discrepancy of an empty point set");
    const std::size_t n = points.size();
    const std::size_t s = points.front().size();
    const double nd = static_cast<double>(n);

    double term2 = 0.0;
    for (const auto& x : points) {
        double prod = 1.0;
        for (std::size_t j = 0; j < s; ++j) {
            const double a = std::abs(x[j] - 0.5);
            prod *= 1.0 + 0.5 * a - 0.5 * a * a;
        }
        term2 += prod;
    }

    double term3 = 0.0;
    for (const auto& x : points) {
        for (const auto& y : points) {
            double prod = 1.0;
            for (std::size_t j = 0; j < s; ++j) {
                prod *= 1.0 + 0.5 * std::abs(x[j] - 0.5) + 0.5 * std::abs(y[j] - 0.5) -
                        0.5 * std::abs(x[j] - y[j]);
            }
            term3 += prod;
        }
    }

    return std::pow(13.0 / 12.0, static_cast<double>(s)) - 2.0 / nd * term2 + term3 / (nd * nd);
}

}  // namespace snakeopt
