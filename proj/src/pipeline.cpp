#include "uwbvital/pipeline.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <cstring>
#include <string>
#include <utility>

#include "uwbvital/errors.hpp"

namespace uwbvital {

namespace {

constexpr double kSpeedOfLight = 299792458.0;

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

} // namespace

void RadarFrame::validate() const {
    if (data.rows() < 2 || data.cols() < 2) {
        throw DimensionError("RadarFrame: need at least 2x2 samples, got " +
                             std::to_string(data.rows()) + "x" + std::to_string(data.cols()));
    }
    if (!(fast_rate > 0.0) || !(prf > 0.0)) {
        throw ParameterError("RadarFrame: fast_rate and prf must be positive");
    }
    if (!all_finite(data)) {
        throw InputError("RadarFrame: non-finite sample");
    }
}

std::size_t PipelineConfig::effective_fft_length(std::size_t n_traces) const {
    return fft_length == 0 ? next_pow2(n_traces) : fft_length;
}

void PipelineConfig::validate() const {
    if (mean_filter_window == 0 || mean_filter_window % 2 == 0) {
        throw ParameterError("PipelineConfig: mean_filter_window must be odd and positive, got " +
                             std::to_string(mean_filter_window));
    }
    if (!(band_low_hz > 0.0) || !(band_low_hz < band_high_hz)) {
        throw ParameterError("PipelineConfig: need 0 < band_low_hz < band_high_hz");
    }
    if (!(normalization_epsilon > 0.0)) {
        throw ParameterError("PipelineConfig: normalization_epsilon must be positive");
    }
    cfar.validate();
}

RadarFrame remove_dc(const RadarFrame& frame) {
    RadarFrame out = frame;
    const std::size_t m = frame.samples();
    const std::size_t n = frame.traces();
    for (std::size_t c = 0; c < n; ++c) {
        double sum = 0.0;
        for (std::size_t r = 0; r < m; ++r) sum += frame.data(r, c);
        const double mean = sum / static_cast<double>(m);
        for (std::size_t r = 0; r < m; ++r) out.data(r, c) = frame.data(r, c) - mean;
    }
    return out;
}

RadarFrame detrend_linear(const RadarFrame& frame) {
    RadarFrame out = frame;
    const std::size_t m = frame.samples();
    const std::size_t n = frame.traces();

    // Normal equations for x[r] = a + b*r; the index moments are shared by
    // every column.
    const double dm = static_cast<double>(m);
    const double sum_r = dm * (dm - 1.0) / 2.0;
    const double sum_rr = (dm - 1.0) * dm * (2.0 * dm - 1.0) / 6.0;
    const double det = dm * sum_rr - sum_r * sum_r;

    for (std::size_t c = 0; c < n; ++c) {
        double sum_x = 0.0;
        double sum_rx = 0.0;
        for (std::size_t r = 0; r < m; ++r) {
            const double v = frame.data(r, c);
            sum_x += v;
            sum_rx += static_cast<double>(r) * v;
        }
        const double slope = (dm * sum_rx - sum_r * sum_x) / det;
        const double intercept = (sum_x - slope * sum_r) / dm;
        for (std::size_t r = 0; r < m; ++r) {
            out.data(r, c) = frame.data(r, c) - (intercept + slope * static_cast<double>(r));
        }
    }
    return out;
}

RadarFrame mean_filter_slow(const RadarFrame& frame, std::size_t window) {
    const std::size_t n = frame.traces();
    if (window == 0 || window % 2 == 0 || window > n) {
        throw ParameterError("mean_filter_slow: window must be odd and in [1, " +
                             std::to_string(n) + "], got " + std::to_string(window));
    }
    if (window == 1) return frame;

    RadarFrame out = frame;
    const std::size_t half = window / 2;
    const std::size_t m = frame.samples();
    for (std::size_t r = 0; r < m; ++r) {
        const double* in = frame.data.row(r);
        double* dst = out.data.row(r);
        for (std::size_t c = 0; c < n; ++c) {
            const std::size_t h = std::min({half, c, n - 1 - c});
            double sum = 0.0;
            for (std::size_t k = c - h; k <= c + h; ++k) sum += in[k];
            dst[c] = sum / static_cast<double>(2 * h + 1);
        }
    }
    return out;
}

RadarFrame subtract_slow_time_mean(const RadarFrame& frame) {
    RadarFrame out = frame;
    const std::size_t m = frame.samples();
    const std::size_t n = frame.traces();
    for (std::size_t r = 0; r < m; ++r) {
        const double* in = frame.data.row(r);
        double* dst = out.data.row(r);
        double sum = 0.0;
        for (std::size_t c = 0; c < n; ++c) sum += in[c];
        const double mean = sum / static_cast<double>(n);
        for (std::size_t c = 0; c < n; ++c) dst[c] = in[c] - mean;
    }
    return out;
}

RadarFrame normalize_slow(const RadarFrame& frame, double epsilon) {
    if (!(epsilon > 0.0)) {
        throw ParameterError("normalize_slow: epsilon must be positive");
    }
    RadarFrame out = frame;
    const std::size_t m = frame.samples();
    const std::size_t n = frame.traces();
    for (std::size_t r = 0; r < m; ++r) {
        const double* in = frame.data.row(r);
        double peak = 0.0;
        for (std::size_t c = 0; c < n; ++c) peak = std::max(peak, std::fabs(in[c]));
        const double scale = std::max(peak, epsilon);
        double* dst = out.data.row(r);
        for (std::size_t c = 0; c < n; ++c) dst[c] = in[c] / scale;
    }
    return out;
}

RangeFrequencyMap slow_time_spectrum(const RadarFrame& frame, std::size_t fft_length) {
    const std::size_t n = frame.traces();
    if (fft_length < n) {
        throw ParameterError("slow_time_spectrum: fft_length " + std::to_string(fft_length) +
                             " < trace count " + std::to_string(n));
    }
    const std::size_t m = frame.samples();
    const std::size_t bins = fft_length / 2 + 1;

    RangeFrequencyMap map;
    map.power = Matrix(m, bins, 0.0);
    map.freq_axis.resize(bins);
    for (std::size_t k = 0; k < bins; ++k) {
        map.freq_axis[k] = static_cast<double>(k) * frame.prf / static_cast<double>(fft_length);
    }
    map.range_axis.resize(m);
    for (std::size_t r = 0; r < m; ++r) {
        map.range_axis[r] = static_cast<double>(r) * kSpeedOfLight / (2.0 * frame.fast_rate);
    }

    std::vector<double> in(fft_length, 0.0);
    std::vector<std::complex<double>> out(bins);
    fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(fft_length), in.data(),
                                          reinterpret_cast<fftw_complex*>(out.data()),
                                          FFTW_ESTIMATE);
    for (std::size_t r = 0; r < m; ++r) {
        std::memcpy(in.data(), frame.data.row(r), n * sizeof(double));
        fftw_execute(plan);
        double* dst = map.power.row(r);
        for (std::size_t k = 0; k < bins; ++k) dst[k] = std::norm(out[k]);
    }
    fftw_destroy_plan(plan);
    return map;
}

RangeFrequencyMap band_select(const RangeFrequencyMap& map, double band_low_hz,
                              double band_high_hz) {
    const std::size_t bins = map.freq_axis.size();
    std::size_t first = bins;
    std::size_t last = 0;
    for (std::size_t k = 0; k < bins; ++k) {
        const double f = map.freq_axis[k];
        if (f >= band_low_hz && f <= band_high_hz) {
            if (first == bins) first = k;
            last = k;
        }
    }
    if (first == bins) {
        const double resolution =
            bins > 1 ? map.freq_axis[1] - map.freq_axis[0] : map.freq_axis[0];
        throw ConfigurationError("band_select: no FFT bin falls in [" +
                                 std::to_string(band_low_hz) + ", " +
                                 std::to_string(band_high_hz) + "] Hz at bin resolution " +
                                 std::to_string(resolution) + " Hz");
    }

    RangeFrequencyMap out;
    const std::size_t kept = last - first + 1;
    out.power = Matrix(map.power.rows(), kept, 0.0);
    for (std::size_t r = 0; r < map.power.rows(); ++r) {
        std::memcpy(out.power.row(r), map.power.row(r) + first, kept * sizeof(double));
    }
    out.freq_axis.assign(map.freq_axis.begin() + static_cast<std::ptrdiff_t>(first),
                         map.freq_axis.begin() + static_cast<std::ptrdiff_t>(last + 1));
    out.range_axis = map.range_axis;
    return out;
}

namespace {

template <typename F>
auto run_stage(const char* stage, F&& f) {
    try {
        return f();
    } catch (const ParameterError& e) {
        throw ParameterError(std::string(stage) + ": " + e.what());
    } catch (const ConfigurationError& e) {
        throw ConfigurationError(std::string(stage) + ": " + e.what());
    } catch (const InputError& e) {
        throw InputError(std::string(stage) + ": " + e.what());
    } catch (const DimensionError& e) {
        throw DimensionError(std::string(stage) + ": " + e.what());
    } catch (const BoundsError& e) {
        throw BoundsError(std::string(stage) + ": " + e.what());
    }
}

} // namespace

DetectOutput detect(const RadarFrame& frame, const PipelineConfig& config, unsigned threads) {
    frame.validate();
    config.validate();
    if (!(config.band_high_hz < frame.prf / 2.0)) {
        throw ParameterError("detect: band_high_hz must be below prf/2 = " +
                             std::to_string(frame.prf / 2.0) + " Hz");
    }

    RadarFrame stage = run_stage("remove_dc", [&] { return remove_dc(frame); });
    stage = run_stage("detrend_linear", [&] { return detrend_linear(stage); });
    stage = run_stage("mean_filter_slow", [&] {
        return config.mean_filter_mode == MeanFilterMode::Smoothing
                   ? mean_filter_slow(stage, config.mean_filter_window)
                   : subtract_slow_time_mean(stage);
    });
    stage = run_stage("normalize_slow",
                      [&] { return normalize_slow(stage, config.normalization_epsilon); });
    RangeFrequencyMap full = run_stage("slow_time_spectrum", [&] {
        return slow_time_spectrum(stage, config.effective_fft_length(frame.traces()));
    });
    DetectOutput out;
    out.band_map = run_stage(
        "band_select", [&] { return band_select(full, config.band_low_hz, config.band_high_hz); });
    out.detections = run_stage("cfar2d", [&] {
        return config.backend == CfarBackend::Naive
                   ? cfar2d_naive(out.band_map.power, config.cfar, threads)
                   : cfar2d_integral(out.band_map.power, config.cfar, threads);
    });
    return out;
}

} // namespace uwbvital
