#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "uwbvital/errors.hpp"
#include "uwbvital/sat.hpp"

using namespace uwbvital;

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint32_t seed,
                     double lo = 0.0, double hi = 1.0) {
    Matrix m(rows, cols);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> val(lo, hi);
    for (double& v : m.values()) v = val(rng);
    return m;
}

} // namespace

TEST_CASE("single-cell matrix") {
    Matrix m(1, 1);
    m(0, 0) = 7.0;
    const SummedAreaTable sat = build_sat(m);
    CHECK(sat.table()(1, 1) == 7.0);
    CHECK(sat.region_sum(0, 0, 0, 0) == 7.0);
}

TEST_CASE("3x3 ones has closed-form prefix sums") {
    const Matrix m(3, 3, 1.0);
    const SummedAreaTable sat = build_sat(m);
    for (std::size_t x = 0; x < 3; ++x) {
        for (std::size_t y = 0; y < 3; ++y) {
            CHECK(sat.table()(x + 1, y + 1) ==
                  static_cast<double>((x + 1) * (y + 1)));
        }
    }
    CHECK(sat.table()(3, 3) == 9.0);
}

TEST_CASE("zero padding row and column") {
    const Matrix m = random_matrix(5, 7, 11);
    const SummedAreaTable sat = build_sat(m);
    for (std::size_t j = 0; j <= 7; ++j) CHECK(sat.table()(0, j) == 0.0);
    for (std::size_t i = 0; i <= 5; ++i) CHECK(sat.table()(i, 0) == 0.0);
}

TEST_CASE("8x8 random matrix matches brute-force prefix sums") {
    const Matrix m = random_matrix(8, 8, 42);
    const SummedAreaTable sat = build_sat(m);
    for (std::size_t x = 0; x < 8; ++x) {
        for (std::size_t y = 0; y < 8; ++y) {
            const double expect = oracles::prefix_sum(m, x, y);
            CHECK(sat.table()(x + 1, y + 1) ==
                  doctest::Approx(expect).epsilon(1e-12));
        }
    }
}

TEST_CASE("full-rectangle sum of 4x4 ones is the cell count") {
    const SummedAreaTable sat = build_sat(Matrix(4, 4, 1.0));
    CHECK(sat.region_sum(0, 3, 0, 3) == 16.0);
}

TEST_CASE("degenerate rectangle returns the source value") {
    const Matrix m = random_matrix(6, 9, 3);
    const SummedAreaTable sat = build_sat(m);
    for (std::size_t r = 0; r < 6; ++r) {
        for (std::size_t c = 0; c < 9; ++c) {
            CHECK(sat.region_sum(r, r, c, c) == doctest::Approx(m(r, c)).epsilon(1e-12));
        }
    }
}

TEST_CASE("200 random rectangles on a 16x16 matrix match the brute-force oracle") {
    const Matrix m = random_matrix(16, 16, 7, -1.0, 1.0);
    const SummedAreaTable sat = build_sat(m);
    std::mt19937 rng(99);
    std::uniform_int_distribution<std::size_t> idx(0, 15);
    for (int k = 0; k < 200; ++k) {
        std::size_t r0 = idx(rng), r1 = idx(rng), c0 = idx(rng), c1 = idx(rng);
        if (r0 > r1) std::swap(r0, r1);
        if (c0 > c1) std::swap(c0, c1);
        const double expect = oracles::rect_sum(m, r0, r1, c0, c1);
        const double got = sat.region_sum(r0, r1, c0, c1);
        CHECK(std::fabs(got - expect) <= 1e-12 * std::max(1.0, std::fabs(expect)));
    }
}

TEST_CASE("integer-valued input is exact") {
    Matrix m(12, 10);
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> val(0, 1000);
    for (double& v : m.values()) v = static_cast<double>(val(rng));
    const SummedAreaTable sat = build_sat(m);
    std::uniform_int_distribution<std::size_t> ri(0, 11), ci(0, 9);
    for (int k = 0; k < 100; ++k) {
        std::size_t r0 = ri(rng), r1 = ri(rng), c0 = ci(rng), c1 = ci(rng);
        if (r0 > r1) std::swap(r0, r1);
        if (c0 > c1) std::swap(c0, c1);
        CHECK(sat.region_sum(r0, r1, c0, c1) == oracles::rect_sum(m, r0, r1, c0, c1));
    }
}

TEST_CASE("additivity over a split rectangle") {
    const Matrix m = random_matrix(20, 20, 13);
    const SummedAreaTable sat = build_sat(m);
    std::mt19937 rng(17);
    std::uniform_int_distribution<std::size_t> idx(0, 19);
    for (int k = 0; k < 100; ++k) {
        std::size_t r0 = idx(rng), r1 = idx(rng), c0 = idx(rng), c1 = idx(rng);
        if (r0 > r1) std::swap(r0, r1);
        if (c0 > c1) std::swap(c0, c1);
        if (c0 == c1) continue;
        std::uniform_int_distribution<std::size_t> split(c0, c1 - 1);
        const std::size_t cm = split(rng);
        const double whole = sat.region_sum(r0, r1, c0, c1);
        const double left = sat.region_sum(r0, r1, c0, cm);
        const double right = sat.region_sum(r0, r1, cm + 1, c1);
        CHECK(std::fabs(whole - (left + right)) <=
              1e-12 * std::max(1.0, std::fabs(whole)));
    }
}

TEST_CASE("monotone along rows and columns for non-negative input") {
    const Matrix m = random_matrix(10, 10, 23);
    const SummedAreaTable sat = build_sat(m);
    for (std::size_t i = 0; i <= 10; ++i) {
        for (std::size_t j = 1; j <= 10; ++j) {
            CHECK(sat.table()(i, j) >= sat.table()(i, j - 1));
            CHECK(sat.table()(j, i) >= sat.table()(j - 1, i));
        }
    }
}

TEST_CASE("construction is deterministic") {
    const Matrix m = random_matrix(15, 31, 77);
    const SummedAreaTable a = build_sat(m);
    const SummedAreaTable b = build_sat(m);
    CHECK(a.table() == b.table());
}

TEST_CASE("error paths") {
    CHECK_THROWS_AS(build_sat(Matrix()), DimensionError);
    CHECK_THROWS_AS(build_sat(Matrix(0, 4)), DimensionError);

    Matrix bad(2, 2, 1.0);
    bad(1, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(build_sat(bad), InputError);
    bad(1, 0) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(build_sat(bad), InputError);

    const SummedAreaTable sat = build_sat(Matrix(4, 5, 1.0));
    CHECK_THROWS_AS(sat.region_sum(2, 1, 0, 0), BoundsError); // inverted rows
    CHECK_THROWS_AS(sat.region_sum(0, 0, 3, 2), BoundsError); // inverted cols
    CHECK_THROWS_AS(sat.region_sum(0, 4, 0, 0), BoundsError); // row out of range
    CHECK_THROWS_AS(sat.region_sum(0, 0, 0, 5), BoundsError); // col out of range
}
