#pragma once

#include <cstddef>

#include "uwbvital/grid.hpp"

namespace uwbvital {

// Summed-area table (integral image) over an M x N matrix.
//
// The stored table is (M+1) x (N+1) with row 0 and column 0 identically
// zero, so a rectangle query needs no border branches: the padded entry
// (x+1, y+1) holds the sum of all source cells in [0..x] x [0..y].
// Accumulation is double precision. Immutable after construction and safe
// to share read-only across threads.
class SummedAreaTable {
public:
    // rows/cols of the source matrix, not of the padded table.
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    // Sum of source cells over the inclusive rectangle [r0..r1] x [c0..c1].
    // Exactly four table reads. Throws BoundsError on inverted or
    // out-of-range rectangles.
    double region_sum(std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) const;

    // Unchecked variant for hot loops; preconditions as region_sum.
    double region_sum_unchecked(std::size_t r0, std::size_t r1, std::size_t c0,
                                std::size_t c1) const {
        const std::size_t w = cols_ + 1;
        const double* t = table_.values().data();
        return t[r0 * w + c0] + t[(r1 + 1) * w + (c1 + 1)] -
               (t[r0 * w + (c1 + 1)] + t[(r1 + 1) * w + c0]);
    }

    const Matrix& table() const { return table_; }

    friend SummedAreaTable build_sat(const Matrix& source);

private:
    SummedAreaTable() = default;

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    Matrix table_; // (rows_+1) x (cols_+1), zero padded
};

// Builds the table via the prefix-sum recurrence
//   s(x,y) = i(x,y) + s(x-1,y) + s(x,y-1) - s(x-1,y-1)
// with out-of-range terms zero. Throws DimensionError on an empty matrix
// and InputError on non-finite entries.
SummedAreaTable build_sat(const Matrix& source);

inline double region_sum(const SummedAreaTable& sat, std::size_t r0, std::size_t r1,
                         std::size_t c0, std::size_t c1) {
    return sat.region_sum(r0, r1, c0, c1);
}

} // namespace uwbvital
