#include "uwbvital/sat.hpp"

#include <cmath>
#include <string>

#include "uwbvital/errors.hpp"

namespace uwbvital {

SummedAreaTable build_sat(const Matrix& source) {
    const std::size_t m = source.rows();
    const std::size_t n = source.cols();
    if (m == 0 || n == 0) {
        throw DimensionError("build_sat: source matrix must be at least 1x1, got " +
                             std::to_string(m) + "x" + std::to_string(n));
    }

    SummedAreaTable sat;
    sat.rows_ = m;
    sat.cols_ = n;
    sat.table_ = Matrix(m + 1, n + 1, 0.0);

    for (std::size_t r = 0; r < m; ++r) {
        const double* src = source.row(r);
        const double* above = sat.table_.row(r);
        double* out = sat.table_.row(r + 1);
        for (std::size_t c = 0; c < n; ++c) {
            const double v = src[c];
            if (!std::isfinite(v)) {
                throw InputError("build_sat: non-finite entry at (" + std::to_string(r) +
                                 ", " + std::to_string(c) + ")");
            }
            out[c + 1] = v + above[c + 1] + out[c] - above[c];
        }
    }
    return sat;
}

double SummedAreaTable::region_sum(std::size_t r0, std::size_t r1, std::size_t c0,
                                   std::size_t c1) const {
    if (r0 > r1 || c0 > c1 || r1 >= rows_ || c1 >= cols_) {
        throw BoundsError("region_sum: invalid rectangle [" + std::to_string(r0) + ".." +
                          std::to_string(r1) + "] x [" + std::to_string(c0) + ".." +
                          std::to_string(c1) + "] on " + std::to_string(rows_) + "x" +
                          std::to_string(cols_) + " table");
    }
    return region_sum_unchecked(r0, r1, c0, c1);
}

} // namespace uwbvital
