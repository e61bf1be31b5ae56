#pragma once

#include <cstddef>
#include <vector>

#include "uwbvital/grid.hpp"

namespace uwbvital {

// How cells whose training window would fall off the map are handled.
// Clamp shrinks the window to the map and recomputes the per-cell training
// count (and with it the scaling factor), keeping the false-alarm design
// point at every cell including borders.
enum class BorderPolicy { Clamp };

// Cells exactly at the threshold are declared absent (H0).
enum class TiePolicy { TieIsAbsent };

struct CfarParams {
    int guard_radius = 4;      // g, cells per side around the CUT
    int background_radius = 8; // b, training ring thickness per side
    double pfa = 1e-3;
    BorderPolicy border_policy = BorderPolicy::Clamp;
    TiePolicy tie_policy = TiePolicy::TieIsAbsent;

    // Throws ParameterError unless g >= 0, b >= 1 and 0 < pfa < 1.
    void validate() const;

    // Training-cell count for a fully interior cell:
    // (2(g+b)+1)^2 - (2g+1)^2.
    std::size_t interior_train_count() const;
};

// Inclusive cell rectangle.
struct CellRect {
    std::size_t r0, r1, c0, c1;
    std::size_t area() const { return (r1 - r0 + 1) * (c1 - c0 + 1); }
};

struct TrainingWindow {
    CellRect outer; // (2(g+b)+1)-square clamped to the map
    CellRect guard; // (2g+1)-square clamped to the map; contains the CUT
    std::size_t n_train = 0;
};

// CA-CFAR threshold scaling: alpha = n (pfa^(-1/n) - 1). Strictly positive
// and strictly decreasing in pfa. Throws ParameterError on n_train = 0 or
// pfa outside (0,1).
double alpha_factor(std::size_t n_train, double pfa);

// Clamped training window for one cell of an MxN map. Throws
// ConfigurationError when clamping leaves no training cells (map smaller
// than the guard window in both dimensions).
TrainingWindow training_window(const CfarParams& params, std::size_t row, std::size_t col,
                               std::size_t rows, std::size_t cols);

struct Detection {
    std::size_t row = 0;
    std::size_t col = 0;
    double value = 0.0;
    double threshold = 0.0;

    friend bool operator==(const Detection&, const Detection&) = default;
};

struct DetectionResult {
    Mask mask;            // 1 exactly where value > threshold
    Matrix threshold_map; // per-cell T = alpha * training mean
    // True cells of the mask, sorted by descending value, ties broken by
    // ascending (row, col).
    std::vector<Detection> detections;
};

// Reference backend: per-cell training mean by explicit loops over the
// window ring. `threads` > 1 splits rows across workers; the output is
// bit-identical to the sequential run.
DetectionResult cfar2d_naive(const Matrix& power_map, const CfarParams& params,
                             unsigned threads = 1);

// Integral-image backend: one summed-area table, then each training sum is
// region_sum(outer) - region_sum(guard). Masks match the naive backend
// except at cells within 1e-9 relative of their threshold.
DetectionResult cfar2d_integral(const Matrix& power_map, const CfarParams& params,
                                unsigned threads = 1);

} // namespace uwbvital
