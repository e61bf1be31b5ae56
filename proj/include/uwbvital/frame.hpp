#pragma once

#include "uwbvital/grid.hpp"

namespace uwbvital {

// Raw radar observation: rows are fast-time samples (range), columns are
// slow-time traces. fast_rate is the within-trace sampling rate in Hz and
// prf the trace repetition rate in Hz.
struct RadarFrame {
    Matrix data;
    double fast_rate = 39e9;
    double prf = 68.6;

    std::size_t samples() const { return data.rows(); }
    std::size_t traces() const { return data.cols(); }

    // Throws DimensionError / ParameterError / InputError per invariant:
    // at least 2x2, positive rates, finite entries.
    void validate() const;
};

} // namespace uwbvital
