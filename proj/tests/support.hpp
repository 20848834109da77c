// Shared helpers for the unit tests: seeded random states and small grids.
#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "dephase/qdmat.hpp"

namespace testing_support {

using dephase::cplx;
using dephase::DensityMatrix2;

inline std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

/// Uniform point in the Bloch ball, as a density matrix.
inline DensityMatrix2 random_state(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double x, y, z;
    do {
        x = u(rng);
        y = u(rng);
        z = u(rng);
    } while (x * x + y * y + z * z > 1.0);
    return DensityMatrix2{0.5 * (1.0 + z), 0.5 * (1.0 - z), cplx(0.5 * x, -0.5 * y)};
}

inline cplx random_gamma(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> r(0.0, 1.0), a(-M_PI, M_PI);
    return std::polar(r(rng), a(rng));
}

/// -sum p ln p, written out directly.
inline double entropy_of(double p, double q) {
    auto h = [](double x) { return x > 0.0 ? -x * std::log(x) : 0.0; };
    return h(p) + h(q);
}

} // namespace testing_support
