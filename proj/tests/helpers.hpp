#pragma once

#include <functional>
#include <random>

#include "cavmap/curves.hpp"

namespace cavmap::testing {

/// Benchmark cavity map: a1 = 0.5, a0 = -1, a_{-1}..a_{-7} as used by the
/// reference experiments.
inline LaurentMap tableMap() {
    LaurentMap map;
    map.a1 = 0.5;
    map.a0 = -1.0;
    map.negCoeffs = {Complex{0.085, 0.0}, Complex{0.0, -0.06}, Complex{-0.035, 0.0},
                     Complex{0.0, 0.06},  Complex{0.0, 0.0},   Complex{0.0, -0.01},
                     Complex{-0.005, 0.0}};
    return map;
}

/// Random map with sum_m m|a_{-m}| <= 0.5 |a1|, comfortably injective.
inline LaurentMap randomValidMap(std::mt19937_64& gen, int order, bool complexLeading = false) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    LaurentMap map;
    map.a1 = 0.5 + 0.25 * (unif(gen) + 1.0);
    if (complexLeading) map.a1 *= std::polar(1.0, 0.5 * kPi * unif(gen));
    map.a0 = Complex{unif(gen), unif(gen)};
    double budget = 0.5 * std::abs(map.a1);
    map.negCoeffs.resize(static_cast<std::size_t>(order));
    for (int m = 1; m <= order; ++m) {
        const double cap = budget / (order - m + 1) / m;
        const Complex c = cap * Complex{unif(gen), unif(gen)};
        map.negCoeffs[static_cast<std::size_t>(m - 1)] = c;
        budget -= m * std::abs(c);
    }
    return map;
}

/// Fourier coefficient of f on the circle |z| = radius, rescaled so that it
/// approximates the Laurent coefficient of z^k.
inline Complex dftLaurentCoeff(const std::function<Complex(Complex)>& f, int k, double radius,
                               int samples = 4096) {
    Complex acc{0.0, 0.0};
    for (int j = 0; j < samples; ++j) {
        const double t = kTwoPi * j / samples;
        acc += f(radius * std::polar(1.0, t)) * std::polar(1.0, -k * t);
    }
    return acc / static_cast<double>(samples) / std::pow(radius, k);
}

} // namespace cavmap::testing
