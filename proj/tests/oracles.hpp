#pragma once

// Independent brute-force references used by the tests. These deliberately
// avoid the library's algorithms: prefix sums by direct summation, spectra
// by the O(n^2) DFT definition, fits by explicit normal equations.

#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "uwbvital/grid.hpp"

namespace oracles {

// Sum of source[0..x][0..y] by direct double loop.
inline double prefix_sum(const uwbvital::Matrix& m, std::size_t x, std::size_t y) {
    double sum = 0.0;
    for (std::size_t r = 0; r <= x; ++r) {
        for (std::size_t c = 0; c <= y; ++c) sum += m(r, c);
    }
    return sum;
}

// Sum over the inclusive rectangle [r0..r1] x [c0..c1] by direct loop.
inline double rect_sum(const uwbvital::Matrix& m, std::size_t r0, std::size_t r1,
                       std::size_t c0, std::size_t c1) {
    double sum = 0.0;
    for (std::size_t r = r0; r <= r1; ++r) {
        for (std::size_t c = c0; c <= c1; ++c) sum += m(r, c);
    }
    return sum;
}

// Direct DFT of x zero-padded to length n.
inline std::vector<std::complex<double>> dft(const std::vector<double>& x, std::size_t n) {
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t j = 0; j < x.size() && j < n; ++j) {
            const double phase =
                -2.0 * std::numbers::pi * static_cast<double>(k) * static_cast<double>(j) /
                static_cast<double>(n);
            acc += x[j] * std::complex<double>(std::cos(phase), std::sin(phase));
        }
        out[k] = acc;
    }
    return out;
}

// Least-squares fit y ~ a + b*i via explicit normal equations.
struct AffineFit {
    double intercept;
    double slope;
};

inline AffineFit affine_fit(const std::vector<double>& y) {
    const double n = static_cast<double>(y.size());
    double sx = 0.0, sxx = 0.0, sy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double x = static_cast<double>(i);
        sx += x;
        sxx += x * x;
        sy += y[i];
        sxy += x * y[i];
    }
    const double det = n * sxx - sx * sx;
    const double slope = (n * sxy - sx * sy) / det;
    return {(sy - slope * sx) / n, slope};
}

// Centered mean around index j with half-width h (callers keep it in range).
inline double windowed_mean(const std::vector<double>& x, std::size_t j, std::size_t h) {
    double sum = 0.0;
    for (std::size_t k = j - h; k <= j + h; ++k) sum += x[k];
    return sum / static_cast<double>(2 * h + 1);
}

} // namespace oracles
