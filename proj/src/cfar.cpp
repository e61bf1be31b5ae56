#include "uwbvital/cfar.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>
#include <tuple>

#include "uwbvital/errors.hpp"
#include "uwbvital/sat.hpp"

namespace uwbvital {

void CfarParams::validate() const {
    if (guard_radius < 0) {
        throw ParameterError("CfarParams: guard_radius must be >= 0, got " +
                             std::to_string(guard_radius));
    }
    if (background_radius < 1) {
        throw ParameterError("CfarParams: background_radius must be >= 1, got " +
                             std::to_string(background_radius));
    }
    if (!(pfa > 0.0) || !(pfa < 1.0)) {
        throw ParameterError("CfarParams: pfa must lie in (0,1), got " + std::to_string(pfa));
    }
}

std::size_t CfarParams::interior_train_count() const {
    const std::size_t outer = 2 * static_cast<std::size_t>(guard_radius + background_radius) + 1;
    const std::size_t guard = 2 * static_cast<std::size_t>(guard_radius) + 1;
    return outer * outer - guard * guard;
}

double alpha_factor(std::size_t n_train, double pfa) {
    if (n_train == 0) {
        throw ParameterError("alpha_factor: n_train must be >= 1");
    }
    if (!(pfa > 0.0) || !(pfa < 1.0)) {
        throw ParameterError("alpha_factor: pfa must lie in (0,1), got " + std::to_string(pfa));
    }
    const double n = static_cast<double>(n_train);
    return n * (std::pow(pfa, -1.0 / n) - 1.0);
}

namespace {

std::size_t clamp_low(std::size_t center, int radius) {
    const long long lo = static_cast<long long>(center) - radius;
    return lo < 0 ? 0 : static_cast<std::size_t>(lo);
}

std::size_t clamp_high(std::size_t center, int radius, std::size_t dim) {
    const std::size_t hi = center + static_cast<std::size_t>(radius);
    return hi >= dim ? dim - 1 : hi;
}

CellRect clamped_square(std::size_t row, std::size_t col, int radius, std::size_t rows,
                        std::size_t cols) {
    return {clamp_low(row, radius), clamp_high(row, radius, rows), clamp_low(col, radius),
            clamp_high(col, radius, cols)};
}

// Memoized alpha per distinct clamped training count. Interior cells share
// one count, so this avoids a transcendental evaluation per cell.
class AlphaTable {
public:
    AlphaTable(std::size_t max_n_train, double pfa)
        : pfa_(pfa), values_(max_n_train + 1, -1.0) {}

    double operator()(std::size_t n_train) {
        double& slot = values_[n_train];
        if (slot < 0.0) slot = alpha_factor(n_train, pfa_);
        return slot;
    }

private:
    double pfa_;
    std::vector<double> values_;
};

void validate_power_map(const Matrix& map) {
    if (map.rows() == 0 || map.cols() == 0) {
        throw DimensionError("cfar2d: power map must be at least 1x1");
    }
    for (std::size_t r = 0; r < map.rows(); ++r) {
        const double* row = map.row(r);
        for (std::size_t c = 0; c < map.cols(); ++c) {
            if (!std::isfinite(row[c]) || row[c] < 0.0) {
                throw InputError("cfar2d: cell (" + std::to_string(r) + ", " +
                                 std::to_string(c) + ") is not a finite non-negative power");
            }
        }
    }
}

// A cell has an empty training ring exactly when its clamped guard square
// equals its clamped outer square in both dimensions; such a cell exists
// iff the map fits inside the guard window in both dimensions.
void require_nondegenerate(const CfarParams& params, std::size_t rows, std::size_t cols) {
    const std::size_t guard_span = 2 * static_cast<std::size_t>(params.guard_radius) + 1;
    if (rows <= guard_span && cols <= guard_span) {
        throw ConfigurationError(
            "cfar2d: " + std::to_string(rows) + "x" + std::to_string(cols) +
            " map fits inside the " + std::to_string(guard_span) + "x" +
            std::to_string(guard_span) + " guard window; no training cells remain");
    }
}

template <typename TrainingSum>
void cfar_rows(const Matrix& map, const CfarParams& params, std::size_t row_begin,
               std::size_t row_end, AlphaTable& alpha, TrainingSum&& training_sum,
               Mask& mask, Matrix& thresholds) {
    const std::size_t rows = map.rows();
    const std::size_t cols = map.cols();
    for (std::size_t r = row_begin; r < row_end; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const CellRect outer =
                clamped_square(r, c, params.guard_radius + params.background_radius, rows, cols);
            const CellRect guard = clamped_square(r, c, params.guard_radius, rows, cols);
            const std::size_t n_train = outer.area() - guard.area();
            const double sum = training_sum(outer, guard);
            const double mean = sum / static_cast<double>(n_train);
            const double threshold = alpha(n_train) * mean;
            thresholds(r, c) = threshold;
            mask(r, c) = map(r, c) > threshold ? 1 : 0; // ties resolve to H0
        }
    }
}

template <typename MakeTrainingSum>
DetectionResult run_cfar(const Matrix& map, const CfarParams& params, unsigned threads,
                         MakeTrainingSum&& make_training_sum) {
    params.validate();
    validate_power_map(map);
    require_nondegenerate(params, map.rows(), map.cols());

    DetectionResult result;
    result.mask = Mask(map.rows(), map.cols(), 0);
    result.threshold_map = Matrix(map.rows(), map.cols(), 0.0);

    const std::size_t rows = map.rows();
    if (threads <= 1 || rows < 2 * threads) {
        AlphaTable alpha(params.interior_train_count(), params.pfa);
        auto training_sum = make_training_sum();
        cfar_rows(map, params, 0, rows, alpha, training_sum, result.mask, result.threshold_map);
    } else {
        const std::size_t workers = std::min<std::size_t>(threads, rows);
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = rows * w / workers;
            const std::size_t end = rows * (w + 1) / workers;
            pool.emplace_back([&, begin, end] {
                AlphaTable alpha(params.interior_train_count(), params.pfa);
                auto training_sum = make_training_sum();
                cfar_rows(map, params, begin, end, alpha, training_sum, result.mask,
                          result.threshold_map);
            });
        }
        for (auto& t : pool) t.join();
    }

    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < map.cols(); ++c) {
            if (result.mask(r, c)) {
                result.detections.push_back({r, c, map(r, c), result.threshold_map(r, c)});
            }
        }
    }
    std::sort(result.detections.begin(), result.detections.end(),
              [](const Detection& a, const Detection& b) {
                  return std::tie(b.value, a.row, a.col) < std::tie(a.value, b.row, b.col);
              });
    return result;
}

} // namespace

TrainingWindow training_window(const CfarParams& params, std::size_t row, std::size_t col,
                               std::size_t rows, std::size_t cols) {
    params.validate();
    if (row >= rows || col >= cols) {
        throw BoundsError("training_window: cell (" + std::to_string(row) + ", " +
                          std::to_string(col) + ") outside " + std::to_string(rows) + "x" +
                          std::to_string(cols) + " map");
    }
    TrainingWindow win;
    win.outer =
        clamped_square(row, col, params.guard_radius + params.background_radius, rows, cols);
    win.guard = clamped_square(row, col, params.guard_radius, rows, cols);
    win.n_train = win.outer.area() - win.guard.area();
    if (win.n_train == 0) {
        throw ConfigurationError("training_window: " + std::to_string(rows) + "x" +
                                 std::to_string(cols) + " map leaves no training cells at (" +
                                 std::to_string(row) + ", " + std::to_string(col) + ")");
    }
    return win;
}

DetectionResult cfar2d_naive(const Matrix& power_map, const CfarParams& params,
                             unsigned threads) {
    return run_cfar(power_map, params, threads, [&] {
        return [&power_map](const CellRect& outer, const CellRect& guard) {
            double sum = 0.0;
            for (std::size_t r = outer.r0; r <= outer.r1; ++r) {
                const double* row = power_map.row(r);
                const bool guard_row = r >= guard.r0 && r <= guard.r1;
                for (std::size_t c = outer.c0; c <= outer.c1; ++c) {
                    if (guard_row && c >= guard.c0 && c <= guard.c1) continue;
                    sum += row[c];
                }
            }
            return sum;
        };
    });
}

DetectionResult cfar2d_integral(const Matrix& power_map, const CfarParams& params,
                                unsigned threads) {
    const SummedAreaTable sat = build_sat(power_map);
    return run_cfar(power_map, params, threads, [&] {
        return [&sat](const CellRect& outer, const CellRect& guard) {
            return sat.region_sum_unchecked(outer.r0, outer.r1, outer.c0, outer.c1) -
                   sat.region_sum_unchecked(guard.r0, guard.r1, guard.c0, guard.c1);
        };
    });
}

} // namespace uwbvital
