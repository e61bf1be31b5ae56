#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "uwbvital/cfar.hpp"
#include "uwbvital/errors.hpp"

using namespace uwbvital;

namespace {

Matrix exponential_map(std::size_t rows, std::size_t cols, std::uint32_t seed) {
    Matrix m(rows, cols);
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> cell(1.0);
    for (double& v : m.values()) v = cell(rng);
    return m;
}

Matrix integer_map(std::size_t rows, std::size_t cols, std::uint32_t seed) {
    Matrix m(rows, cols);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> cell(0, 500);
    for (double& v : m.values()) v = static_cast<double>(cell(rng));
    return m;
}

bool masks_equal_modulo_ties(const Matrix& map, const DetectionResult& a,
                             const DetectionResult& b) {
    for (std::size_t r = 0; r < map.rows(); ++r) {
        for (std::size_t c = 0; c < map.cols(); ++c) {
            if (a.mask(r, c) == b.mask(r, c)) continue;
            const double cut = map(r, c);
            const double ta = a.threshold_map(r, c);
            const double tb = b.threshold_map(r, c);
            const bool tie = std::fabs(cut - ta) <= 1e-9 * std::max(1.0, ta) ||
                             std::fabs(cut - tb) <= 1e-9 * std::max(1.0, tb);
            if (!tie) return false;
        }
    }
    return true;
}

bool thresholds_close(const DetectionResult& a, const DetectionResult& b, double rel) {
    for (std::size_t i = 0; i < a.threshold_map.size(); ++i) {
        const double x = a.threshold_map.values()[i];
        const double y = b.threshold_map.values()[i];
        if (std::fabs(x - y) > rel * std::max({1e-300, std::fabs(x), std::fabs(y)})) {
            return false;
        }
    }
    return true;
}

} // namespace

TEST_CASE("alpha_factor closed form at n_train = 1") {
    CHECK(alpha_factor(1, 0.5) == 1.0);
}

TEST_CASE("alpha_factor matches the independently evaluated reference") {
    // 24 * (1000^(1/24) - 1) evaluated with 40-digit arithmetic.
    const double reference = 8.0045143719197766;
    CHECK(std::fabs(alpha_factor(24, 1e-3) - reference) <= 1e-12 * reference);
}

TEST_CASE("alpha_factor is strictly decreasing in pfa") {
    CHECK(alpha_factor(24, 1e-2) < alpha_factor(24, 1e-3));
    for (std::size_t n : {1u, 4u, 24u, 544u}) {
        double prev = std::numeric_limits<double>::infinity();
        for (double pfa : {1e-6, 1e-4, 1e-3, 1e-2, 0.1, 0.5, 0.9}) {
            const double a = alpha_factor(n, pfa);
            CHECK(a > 0.0);
            CHECK(a < prev);
            prev = a;
        }
    }
}

TEST_CASE("alpha_factor rejects bad parameters") {
    CHECK_THROWS_AS(alpha_factor(0, 0.5), ParameterError);
    CHECK_THROWS_AS(alpha_factor(10, 0.0), ParameterError);
    CHECK_THROWS_AS(alpha_factor(10, 1.0), ParameterError);
    CHECK_THROWS_AS(alpha_factor(10, -0.1), ParameterError);
}

TEST_CASE("training window for an interior cell") {
    CfarParams params;
    params.guard_radius = 1;
    params.background_radius = 1;
    const TrainingWindow win = training_window(params, 50, 50, 100, 100);
    CHECK(win.outer.area() == 25);
    CHECK(win.guard.area() == 9);
    CHECK(win.n_train == 16);
}

TEST_CASE("training window clamps at the corner") {
    CfarParams params;
    params.guard_radius = 1;
    params.background_radius = 1;
    const TrainingWindow win = training_window(params, 0, 0, 100, 100);
    CHECK(win.outer.area() == 9);  // 3x3
    CHECK(win.guard.area() == 4);  // 2x2
    CHECK(win.n_train == 5);
}

TEST_CASE("training window matches the closed-form interior count") {
    CfarParams params;
    params.guard_radius = 4;
    params.background_radius = 8;
    const TrainingWindow win = training_window(params, 100, 100, 1024, 600);
    CHECK(win.n_train == 544);
    CHECK(win.n_train == params.interior_train_count());
}

TEST_CASE("training window errors") {
    CfarParams params;
    params.guard_radius = 4;
    params.background_radius = 8;
    CHECK_THROWS_AS(training_window(params, 10, 0, 8, 8), BoundsError);
    // 5x5 map fits inside the 9x9 guard window: no training cells anywhere.
    CHECK_THROWS_AS(training_window(params, 2, 2, 5, 5), ConfigurationError);
}

TEST_CASE("all-zero map yields zero thresholds and no detections") {
    const Matrix zeros(32, 32, 0.0);
    const CfarParams params;
    for (auto backend : {cfar2d_naive, cfar2d_integral}) {
        const DetectionResult result = backend(zeros, params, 1);
        CHECK(result.detections.empty());
        for (double t : result.threshold_map.values()) CHECK(t == 0.0);
        for (auto m : result.mask.values()) CHECK(m == 0);
    }
}

TEST_CASE("constant map never fires while alpha exceeds one") {
    CfarParams params;
    params.guard_radius = 1;
    params.background_radius = 2;
    params.pfa = 1e-3;

    // alpha > 1 must hold for every clamped training count on this map.
    std::set<std::size_t> counts;
    for (std::size_t r = 0; r < 32; ++r) {
        for (std::size_t c = 0; c < 32; ++c) {
            counts.insert(training_window(params, r, c, 32, 32).n_train);
        }
    }
    for (std::size_t n : counts) CHECK(alpha_factor(n, params.pfa) > 1.0);

    const Matrix constant(32, 32, 3.25);
    CHECK(cfar2d_naive(constant, params).detections.empty());
    CHECK(cfar2d_integral(constant, params).detections.empty());
}

TEST_CASE("cell exactly at threshold resolves to absent") {
    // n_train = 1 and pfa = 0.5 give alpha = 1, so a flat pair of cells
    // puts the CUT exactly on its threshold.
    Matrix m(1, 2, 5.0);
    CfarParams params;
    params.guard_radius = 0;
    params.background_radius = 1;
    params.pfa = 0.5;
    const DetectionResult result = cfar2d_naive(m, params);
    CHECK(result.threshold_map(0, 0) == 5.0);
    CHECK(result.detections.empty());
}

TEST_CASE("empirical false-alarm rate matches the design pfa on exponential noise") {
    CfarParams params;
    params.guard_radius = 2;
    params.background_radius = 4;
    params.pfa = 0.01;

    std::size_t cells = 0;
    std::size_t alarms = 0;
    for (std::uint32_t trial = 0; trial < 100; ++trial) {
        const Matrix map = exponential_map(64, 64, 1000 + trial);
        alarms += cfar2d_naive(map, params).detections.size();
        cells += map.size();
    }
    const double rate = static_cast<double>(alarms) / static_cast<double>(cells);
    CHECK(rate > 0.007);
    CHECK(rate < 0.013);
}

TEST_CASE("integer maps give bit-identical masks across backends on the parameter grid") {
    for (const auto& [g, b] : {std::pair{4, 8}, {4, 12}, {8, 8}, {8, 12}}) {
        CfarParams params;
        params.guard_radius = g;
        params.background_radius = b;
        const Matrix map = integer_map(48, 48, static_cast<std::uint32_t>(g * 100 + b));
        const DetectionResult naive = cfar2d_naive(map, params);
        const DetectionResult integral = cfar2d_integral(map, params);
        CHECK(naive.mask == integral.mask);
        CHECK(naive.threshold_map == integral.threshold_map); // exact: integer sums
        CHECK(naive.detections.size() == integral.detections.size());
    }
}

TEST_CASE("backend equivalence on random float maps and parameters") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> size(8, 128);
    std::uniform_int_distribution<int> guard(0, 3);
    std::uniform_int_distribution<int> background(1, 4);
    std::uniform_real_distribution<double> log_pfa(-4.0, -1.0);
    for (int k = 0; k < 40; ++k) {
        CfarParams params;
        params.guard_radius = guard(rng);
        params.background_radius = background(rng);
        params.pfa = std::pow(10.0, log_pfa(rng));
        const std::size_t rows = size(rng);
        const std::size_t cols = size(rng);
        const Matrix map =
            exponential_map(rows, cols, static_cast<std::uint32_t>(5000 + k));
        const DetectionResult naive = cfar2d_naive(map, params);
        const DetectionResult integral = cfar2d_integral(map, params);
        CHECK(masks_equal_modulo_ties(map, naive, integral));
        CHECK(thresholds_close(naive, integral, 1e-9));
    }
}

TEST_CASE("raising pfa never removes a detection") {
    const Matrix map = exponential_map(48, 48, 321);
    CfarParams lo, hi;
    lo.guard_radius = hi.guard_radius = 2;
    lo.background_radius = hi.background_radius = 4;
    lo.pfa = 1e-3;
    hi.pfa = 1e-2;
    const DetectionResult strict = cfar2d_integral(map, lo);
    const DetectionResult loose = cfar2d_integral(map, hi);
    for (std::size_t i = 0; i < map.size(); ++i) {
        if (strict.mask.values()[i]) CHECK(loose.mask.values()[i]);
    }
    CHECK(loose.detections.size() >= strict.detections.size());
}

TEST_CASE("scaling the map scales thresholds and keeps the mask") {
    const Matrix map = exponential_map(40, 40, 654);
    CfarParams params;
    params.guard_radius = 1;
    params.background_radius = 3;

    SUBCASE("power-of-two scale is exact") {
        for (double k : {4.0, 0.25}) {
            Matrix scaled = map;
            for (double& v : scaled.values()) v *= k;
            for (auto backend : {cfar2d_naive, cfar2d_integral}) {
                const DetectionResult base = backend(map, params, 1);
                const DetectionResult big = backend(scaled, params, 1);
                CHECK(base.mask == big.mask);
                for (std::size_t i = 0; i < map.size(); ++i) {
                    CHECK(big.threshold_map.values()[i] ==
                          base.threshold_map.values()[i] * k);
                }
            }
        }
    }

    SUBCASE("general scale holds within rounding") {
        const double k = 3.7;
        Matrix scaled = map;
        for (double& v : scaled.values()) v *= k;
        const DetectionResult base = cfar2d_integral(map, params);
        const DetectionResult big = cfar2d_integral(scaled, params);
        CHECK(base.mask == big.mask);
        for (std::size_t i = 0; i < map.size(); ++i) {
            const double expect = base.threshold_map.values()[i] * k;
            CHECK(big.threshold_map.values()[i] ==
                  doctest::Approx(expect).epsilon(1e-12));
        }
    }
}

TEST_CASE("detection list is exactly the true mask cells, sorted by value") {
    const Matrix map = exponential_map(32, 32, 888);
    CfarParams params;
    params.guard_radius = 1;
    params.background_radius = 2;
    params.pfa = 0.05;
    const DetectionResult result = cfar2d_integral(map, params);

    std::size_t mask_count = 0;
    for (auto m : result.mask.values()) mask_count += m;
    REQUIRE(result.detections.size() == mask_count);
    REQUIRE(mask_count > 0); // pfa 0.05 on 1024 cells makes this overwhelmingly likely

    for (std::size_t i = 0; i < result.detections.size(); ++i) {
        const Detection& d = result.detections[i];
        CHECK(result.mask(d.row, d.col) == 1);
        CHECK(d.value == map(d.row, d.col));
        CHECK(d.threshold == result.threshold_map(d.row, d.col));
        CHECK(d.value > d.threshold);
        if (i > 0) CHECK(result.detections[i - 1].value >= d.value);
    }
    // mask true <=> strictly above threshold
    for (std::size_t r = 0; r < map.rows(); ++r) {
        for (std::size_t c = 0; c < map.cols(); ++c) {
            CHECK((map(r, c) > result.threshold_map(r, c)) ==
                  (result.mask(r, c) == 1));
        }
    }
}

TEST_CASE("multi-threaded runs are bit-identical to sequential") {
    const Matrix map = exponential_map(60, 45, 4242);
    CfarParams params;
    params.guard_radius = 2;
    params.background_radius = 3;
    for (auto backend : {cfar2d_naive, cfar2d_integral}) {
        const DetectionResult seq = backend(map, params, 1);
        const DetectionResult par = backend(map, params, 4);
        CHECK(seq.mask == par.mask);
        CHECK(seq.threshold_map == par.threshold_map);
        CHECK(seq.detections == par.detections);
    }
}

TEST_CASE("cfar input validation") {
    CfarParams params;
    Matrix negative(16, 16, 1.0);
    negative(3, 4) = -0.5;
    CHECK_THROWS_AS(cfar2d_naive(negative, params), InputError);

    Matrix nan_map(20, 20, 1.0);
    nan_map(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(cfar2d_integral(nan_map, params), InputError);

    // guard window swallows the whole map in both dimensions
    params.guard_radius = 4;
    CHECK_THROWS_AS(cfar2d_naive(Matrix(8, 8, 1.0), params), ConfigurationError);
    CHECK_THROWS_AS(cfar2d_integral(Matrix(8, 8, 1.0), params), ConfigurationError);
    // but a map that is long in one dimension keeps training cells
    CHECK_NOTHROW(cfar2d_naive(Matrix(8, 64, 1.0), params));

    params.guard_radius = -1;
    CHECK_THROWS_AS(cfar2d_naive(Matrix(16, 16, 1.0), params), ParameterError);
    params.guard_radius = 1;
    params.background_radius = 0;
    CHECK_THROWS_AS(cfar2d_naive(Matrix(16, 16, 1.0), params), ParameterError);
    params.background_radius = 2;
    params.pfa = 1.5;
    CHECK_THROWS_AS(cfar2d_naive(Matrix(16, 16, 1.0), params), ParameterError);
}
