#pragma once

#include <cstddef>
#include <vector>

#include "uwbvital/cfar.hpp"
#include "uwbvital/frame.hpp"
#include "uwbvital/grid.hpp"

namespace uwbvital {

enum class CfarBackend { Naive, IntegralImage };

// Two readings of the slow-time "mean filter" step: a centered moving
// average (default), or per-range-bin mean subtraction for static clutter.
enum class MeanFilterMode { Smoothing, SubtractMean };

struct PipelineConfig {
    std::size_t mean_filter_window = 5; // odd
    std::size_t fft_length = 0;         // 0 = next power of two >= trace count
    double band_low_hz = 0.3;
    double band_high_hz = 0.8;
    CfarParams cfar;
    CfarBackend backend = CfarBackend::IntegralImage;
    double normalization_epsilon = 1e-12;
    MeanFilterMode mean_filter_mode = MeanFilterMode::Smoothing;

    std::size_t effective_fft_length(std::size_t n_traces) const;
    void validate() const;
};

// Power of each range bin's slow-time spectrum over a set of frequency
// bins. freq_axis is ascending bin-center frequencies in Hz; range_axis is
// the two-way range of each row in meters.
struct RangeFrequencyMap {
    Matrix power; // rows = range bins, cols = frequency bins
    std::vector<double> freq_axis;
    std::vector<double> range_axis;
};

// Per-trace (column) mean removal along fast time.
RadarFrame remove_dc(const RadarFrame& frame);

// Per-trace least-squares affine fit subtraction along fast time.
RadarFrame detrend_linear(const RadarFrame& frame);

// Centered moving average along slow time, per range bin. At the edges the
// window shrinks symmetrically to the available samples; window 1 is the
// identity. Throws ParameterError for an even or out-of-range window.
RadarFrame mean_filter_slow(const RadarFrame& frame, std::size_t window);

// Alternative clutter reading: subtract each range bin's slow-time mean.
RadarFrame subtract_slow_time_mean(const RadarFrame& frame);

// Per range bin, divide by max(|row|_inf, epsilon).
RadarFrame normalize_slow(const RadarFrame& frame, double epsilon);

// Per range bin: zero-pad the slow-time signal to fft_length, FFT, and keep
// the squared magnitude of the non-negative-frequency half (DC included).
// Frequency axis is k * prf / fft_length. Throws ParameterError when
// fft_length < trace count.
RangeFrequencyMap slow_time_spectrum(const RadarFrame& frame, std::size_t fft_length);

// Keeps exactly the bins whose center frequency lies in [low, high]
// inclusive. Throws ConfigurationError (reporting the bin resolution) when
// no bin falls inside the band.
RangeFrequencyMap band_select(const RangeFrequencyMap& map, double band_low_hz,
                              double band_high_hz);

struct DetectOutput {
    RangeFrequencyMap band_map;
    DetectionResult detections;
};

// Full chain: remove_dc -> detrend_linear -> mean filter -> normalize ->
// slow_time_spectrum -> band_select -> CFAR with the configured backend.
// Pure and deterministic; stage errors are rethrown with the stage name
// attached.
DetectOutput detect(const RadarFrame& frame, const PipelineConfig& config,
                    unsigned threads = 1);

} // namespace uwbvital
