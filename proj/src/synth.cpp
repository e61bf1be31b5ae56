#include "uwbvital/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "uwbvital/errors.hpp"

namespace uwbvital {

namespace {

constexpr double kSpeedOfLight = 299792458.0;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// -10 dB edges of the unit Gaussian-derivative spectrum, as multiples of
// the spectral peak frequency: the roots of u exp((1-u^2)/2) = 10^(-1/2)
// either side of u = 1. Solved once by bisection.
struct EdgeRatios {
    double lo, hi;
};

EdgeRatios minus10db_edges() {
    const double level = std::pow(10.0, -0.5);
    auto rel = [](double u) { return u * std::exp(0.5 * (1.0 - u * u)); };
    auto bisect = [&](double a, double b, bool rising) {
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (a + b);
            const bool below = rel(mid) < level;
            if (below == rising) {
                a = mid;
            } else {
                b = mid;
            }
        }
        return 0.5 * (a + b);
    };
    static const EdgeRatios edges = {bisect(1e-6, 1.0, true), bisect(1.0, 10.0, false)};
    return edges;
}

} // namespace

double pulse_sigma(double center_hz, double bandwidth_hz) {
    if (!(bandwidth_hz > 0.0)) {
        throw ParameterError("pulse_sigma: bandwidth must be positive, got " +
                             std::to_string(bandwidth_hz));
    }
    const double f_low = center_hz - bandwidth_hz / 2.0;
    const double f_high = center_hz + bandwidth_hz / 2.0;
    if (!(f_low > 0.0)) {
        throw ParameterError("pulse_sigma: band extends to non-positive frequencies");
    }
    const EdgeRatios edges = minus10db_edges();
    // Match the geometric mean of the -10 dB extent to that of the band;
    // the spectral peak of the derivative pulse sits at 1/(2 pi sigma).
    const double peak_hz = std::sqrt(f_low * f_high / (edges.lo * edges.hi));
    return 1.0 / (2.0 * std::numbers::pi * peak_hz);
}

double monocycle_pulse(double t_seconds, double center_hz, double bandwidth_hz) {
    const double sigma = pulse_sigma(center_hz, bandwidth_hz);
    const double u = t_seconds / sigma;
    return -u * std::exp(0.5 - 0.5 * u * u);
}

double nominal_target_delay(const SceneConfig& config) {
    return 2.0 * config.target_range_m / kSpeedOfLight;
}

double target_delay_swing(const SceneConfig& config) {
    return 2.0 * config.resp_displacement_m / kSpeedOfLight;
}

void SceneConfig::validate() const {
    if (m_samples < 2 || n_traces < 2) {
        throw DimensionError("SceneConfig: need at least 2 samples and 2 traces");
    }
    if (!(fast_rate > 0.0) || !(prf > 0.0)) {
        throw ParameterError("SceneConfig: rates must be positive");
    }
    if (!(target_range_m > 0.0) || !(wall_range_m > 0.0)) {
        throw ParameterError("SceneConfig: ranges must be positive");
    }
    if (!(resp_freq_hz > 0.0) || !(resp_freq_hz < prf / 2.0)) {
        throw ParameterError("SceneConfig: resp_freq_hz must lie in (0, prf/2)");
    }
    if (resp_displacement_m < 0.0 || noise_sigma < 0.0) {
        throw ParameterError("SceneConfig: displacement and noise must be non-negative");
    }
    if (!(target_attenuation > 0.0) || wall_amplitude < 0.0) {
        throw ParameterError("SceneConfig: invalid amplitude model");
    }
    const double window = static_cast<double>(m_samples - 1) / fast_rate;
    const double wall_delay = 2.0 * wall_range_m / kSpeedOfLight;
    const double target_min = nominal_target_delay(*this) - target_delay_swing(*this);
    const double target_max = nominal_target_delay(*this) + target_delay_swing(*this);
    if (wall_delay > window || target_min < 0.0 || target_max > window) {
        throw ConfigurationError("SceneConfig: echo delay outside the " +
                                 std::to_string(window * 1e9) + " ns fast-time window");
    }
}

Scene generate_scene(const SceneConfig& config) {
    config.validate();
    const double sigma = pulse_sigma(config.pulse_center_hz, config.pulse_bandwidth_hz);
    const double target_amp = config.target_attenuation;
    const double wall_amp = config.wall_amplitude * target_amp;
    const double wall_delay = 2.0 * config.wall_range_m / kSpeedOfLight;
    const double target_delay = nominal_target_delay(config);
    const double swing = target_delay_swing(config);
    const double omega = 2.0 * std::numbers::pi * config.resp_freq_hz;

    auto pulse = [sigma](double t) {
        const double u = t / sigma;
        return -u * std::exp(0.5 - 0.5 * u * u);
    };

    Scene scene;
    scene.frame.data = Matrix(config.m_samples, config.n_traces, 0.0);
    scene.frame.fast_rate = config.fast_rate;
    scene.frame.prf = config.prf;
    scene.truth.target_range_bin =
        static_cast<std::size_t>(std::llround(target_delay * config.fast_rate));
    scene.truth.resp_freq_hz = config.resp_freq_hz;

    for (std::size_t n = 0; n < config.n_traces; ++n) {
        const double t_slow = static_cast<double>(n) / config.prf;
        const double delay = target_delay + swing * std::sin(omega * t_slow);
        std::mt19937_64 rng(splitmix64(splitmix64(config.seed) + n));
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (std::size_t i = 0; i < config.m_samples; ++i) {
            const double tau = static_cast<double>(i) / config.fast_rate;
            double v = wall_amp * pulse(tau - wall_delay) + target_amp * pulse(tau - delay);
            if (config.noise_sigma > 0.0) v += config.noise_sigma * gauss(rng);
            // float32 quantization keeps frames bit-exact through frame files
            scene.frame.data(i, n) = static_cast<double>(static_cast<float>(v));
        }
    }
    return scene;
}

} // namespace uwbvital
