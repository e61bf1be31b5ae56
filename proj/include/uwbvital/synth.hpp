#pragma once

#include <cstdint>

#include "uwbvital/frame.hpp"

namespace uwbvital {

// Synthetic through-wall scene: one static wall echo, one respiration
// target whose echo delay is sinusoidally modulated, and seeded white
// Gaussian noise. Amplitudes are relative to a unit-amplitude free-space
// echo; the wall attenuates the target by target_attenuation and reflects
// with wall_amplitude times the attenuated target's strength.
struct SceneConfig {
    std::size_t m_samples = 1024;
    std::size_t n_traces = 600;
    double fast_rate = 39e9; // Hz
    double prf = 68.6;       // Hz
    double target_range_m = 1.5;
    double resp_freq_hz = 0.3;
    double resp_displacement_m = 0.01; // peak displacement
    double wall_range_m = 0.8;
    double wall_amplitude = 10.0;    // x target echo amplitude
    double noise_sigma = 0.1;        // std relative to a unit echo
    double pulse_center_hz = 3.75e9;
    double pulse_bandwidth_hz = 4.5e9;
    double target_attenuation = 0.3; // wall transmission loss on the target echo
    std::uint64_t seed = 1;

    void validate() const;
};

struct GroundTruth {
    std::size_t target_range_bin = 0;
    double resp_freq_hz = 0.0;
};

struct Scene {
    RadarFrame frame;
    GroundTruth truth;
};

// Pulse width parameter of the Gaussian first-derivative monocycle, chosen
// so the -10 dB spectral extent is centered (geometrically) on the band
// [center - bw/2, center + bw/2]. Throws ParameterError when the band is
// not positive.
double pulse_sigma(double center_hz, double bandwidth_hz);

// Unit-peak Gaussian first-derivative monocycle
//   p(t) = -(t/sigma) * exp(1/2 - t^2 / (2 sigma^2)),
// odd in t with |p(+-sigma)| = 1 and p(0) = 0.
double monocycle_pulse(double t_seconds, double center_hz, double bandwidth_hz);

// Two-way delay of the target at rest: 2 * range / c.
double nominal_target_delay(const SceneConfig& config);

// Peak delay modulation: 2 * resp_displacement / c.
double target_delay_swing(const SceneConfig& config);

// Deterministic for a given config (including seed). Sample values are
// quantized to 32-bit float at generation so frames round-trip bit-exactly
// through the frame file format. Throws ConfigurationError when an echo
// delay falls outside the fast-time window.
Scene generate_scene(const SceneConfig& config);

} // namespace uwbvital
