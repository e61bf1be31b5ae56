#include "uwbvital/run_config.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "uwbvital/errors.hpp"

namespace uwbvital {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

double parse_real(const std::string& text) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParameterError("expected a number, got '" + text + "'");
    }
    return v;
}

std::uint64_t parse_count(const std::string& text) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParameterError("expected a non-negative integer, got '" + text + "'");
    }
    return v;
}

double positive_real(const std::string& text) {
    const double v = parse_real(text);
    if (!(v > 0.0)) throw ParameterError("value must be positive, got '" + text + "'");
    return v;
}

double nonnegative_real(const std::string& text) {
    const double v = parse_real(text);
    if (v < 0.0) throw ParameterError("value must be non-negative, got '" + text + "'");
    return v;
}

double probability(const std::string& text) {
    const double v = parse_real(text);
    if (!(v > 0.0) || !(v < 1.0)) {
        throw ParameterError("value must lie in (0,1), got '" + text + "'");
    }
    return v;
}

std::vector<std::pair<int, int>> parse_param_grid(const std::string& text) {
    std::vector<std::pair<int, int>> grid;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const std::string pair = trim(item);
        const auto slash = pair.find('/');
        if (slash == std::string::npos) {
            throw ParameterError("expected guard/background pairs like '4/8, 4/12', got '" +
                                 pair + "'");
        }
        const auto g = parse_count(trim(pair.substr(0, slash)));
        const auto b = parse_count(trim(pair.substr(slash + 1)));
        if (b == 0) throw ParameterError("background radius must be >= 1 in '" + pair + "'");
        grid.emplace_back(static_cast<int>(g), static_cast<int>(b));
    }
    if (grid.empty()) throw ParameterError("param_grid must not be empty");
    return grid;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& schema() {
    static const std::map<std::string, Setter> keys = {
        // scene
        {"m_samples",
         [](RunConfig& c, const std::string& v) {
             c.scene.m_samples = parse_count(v);
             if (c.scene.m_samples < 2) throw ParameterError("m_samples must be >= 2");
         }},
        {"n_traces",
         [](RunConfig& c, const std::string& v) {
             c.scene.n_traces = parse_count(v);
             if (c.scene.n_traces < 2) throw ParameterError("n_traces must be >= 2");
         }},
        {"fast_rate", [](RunConfig& c, const std::string& v) { c.scene.fast_rate = positive_real(v); }},
        {"prf", [](RunConfig& c, const std::string& v) { c.scene.prf = positive_real(v); }},
        {"target_range_m",
         [](RunConfig& c, const std::string& v) { c.scene.target_range_m = positive_real(v); }},
        {"resp_freq_hz",
         [](RunConfig& c, const std::string& v) { c.scene.resp_freq_hz = positive_real(v); }},
        {"resp_displacement_m",
         [](RunConfig& c, const std::string& v) {
             c.scene.resp_displacement_m = nonnegative_real(v);
         }},
        {"wall_range_m",
         [](RunConfig& c, const std::string& v) { c.scene.wall_range_m = positive_real(v); }},
        {"wall_amplitude",
         [](RunConfig& c, const std::string& v) { c.scene.wall_amplitude = nonnegative_real(v); }},
        {"noise_sigma",
         [](RunConfig& c, const std::string& v) { c.scene.noise_sigma = nonnegative_real(v); }},
        {"pulse_center_hz",
         [](RunConfig& c, const std::string& v) { c.scene.pulse_center_hz = positive_real(v); }},
        {"pulse_bandwidth_hz",
         [](RunConfig& c, const std::string& v) {
             c.scene.pulse_bandwidth_hz = positive_real(v);
         }},
        {"target_attenuation",
         [](RunConfig& c, const std::string& v) {
             c.scene.target_attenuation = positive_real(v);
         }},
        {"seed", [](RunConfig& c, const std::string& v) { c.scene.seed = parse_count(v); }},
        // pipeline
        {"mean_filter_window",
         [](RunConfig& c, const std::string& v) {
             c.pipeline.mean_filter_window = parse_count(v);
             if (c.pipeline.mean_filter_window == 0 || c.pipeline.mean_filter_window % 2 == 0) {
                 throw ParameterError("mean_filter_window must be odd and positive");
             }
         }},
        {"fft_length",
         [](RunConfig& c, const std::string& v) { c.pipeline.fft_length = parse_count(v); }},
        {"band_low_hz",
         [](RunConfig& c, const std::string& v) { c.pipeline.band_low_hz = positive_real(v); }},
        {"band_high_hz",
         [](RunConfig& c, const std::string& v) { c.pipeline.band_high_hz = positive_real(v); }},
        {"normalization_epsilon",
         [](RunConfig& c, const std::string& v) {
             c.pipeline.normalization_epsilon = positive_real(v);
         }},
        {"backend",
         [](RunConfig& c, const std::string& v) {
             if (v == "naive") {
                 c.pipeline.backend = CfarBackend::Naive;
             } else if (v == "ii") {
                 c.pipeline.backend = CfarBackend::IntegralImage;
             } else {
                 throw ParameterError("backend must be 'naive' or 'ii', got '" + v + "'");
             }
         }},
        {"mean_filter_mode",
         [](RunConfig& c, const std::string& v) {
             if (v == "smooth") {
                 c.pipeline.mean_filter_mode = MeanFilterMode::Smoothing;
             } else if (v == "subtract") {
                 c.pipeline.mean_filter_mode = MeanFilterMode::SubtractMean;
             } else {
                 throw ParameterError("mean_filter_mode must be 'smooth' or 'subtract', got '" +
                                      v + "'");
             }
         }},
        {"guard_radius",
         [](RunConfig& c, const std::string& v) {
             c.pipeline.cfar.guard_radius = static_cast<int>(parse_count(v));
         }},
        {"background_radius",
         [](RunConfig& c, const std::string& v) {
             const auto b = parse_count(v);
             if (b == 0) throw ParameterError("background_radius must be >= 1");
             c.pipeline.cfar.background_radius = static_cast<int>(b);
         }},
        {"pfa",
         [](RunConfig& c, const std::string& v) {
             const double p = probability(v);
             c.pipeline.cfar.pfa = p;
             c.bench.pfa = p;
         }},
        // bench
        {"map_rows",
         [](RunConfig& c, const std::string& v) {
             c.bench.map_rows = parse_count(v);
             if (c.bench.map_rows < 2) throw ParameterError("map_rows must be >= 2");
         }},
        {"map_cols",
         [](RunConfig& c, const std::string& v) {
             c.bench.map_cols = parse_count(v);
             if (c.bench.map_cols < 2) throw ParameterError("map_cols must be >= 2");
         }},
        {"param_grid",
         [](RunConfig& c, const std::string& v) { c.bench.param_grid = parse_param_grid(v); }},
        {"repetitions",
         [](RunConfig& c, const std::string& v) {
             c.bench.repetitions = parse_count(v);
             if (c.bench.repetitions < 3) throw ParameterError("repetitions must be >= 3");
         }},
        {"warmup",
         [](RunConfig& c, const std::string& v) { c.bench.warmup = parse_count(v); }},
    };
    return keys;
}

} // namespace

RunConfig parse_run_config(std::istream& in, const std::string& source_name) {
    RunConfig config;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line.erase(comment);
        const std::string content = trim(line);
        if (content.empty()) continue;

        const auto where = source_name + ":" + std::to_string(line_no) + ": ";
        const auto eq = content.find('=');
        if (eq == std::string::npos) {
            throw ConfigurationError(where + "expected 'key = value', got '" + content + "'");
        }
        const std::string key = trim(content.substr(0, eq));
        const std::string value = trim(content.substr(eq + 1));
        if (key.empty()) throw ConfigurationError(where + "empty key");
        if (value.empty()) throw ConfigurationError(where + "empty value for key '" + key + "'");

        const auto& keys = schema();
        const auto it = keys.find(key);
        if (it == keys.end()) {
            throw ConfigurationError(where + "unknown key '" + key + "'");
        }
        try {
            it->second(config, value);
        } catch (const Error& e) {
            throw ConfigurationError(where + "key '" + key + "': " + e.what());
        }
    }
    return config;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigurationError("cannot open config file '" + path + "'");
    return parse_run_config(in, path);
}

std::string run_config_template() {
    return "# Scene generation\n"
           "m_samples = 1024\n"
           "n_traces = 600\n"
           "fast_rate = 39e9\n"
           "prf = 68.6\n"
           "target_range_m = 1.5\n"
           "resp_freq_hz = 0.3\n"
           "resp_displacement_m = 0.01\n"
           "wall_range_m = 0.8\n"
           "wall_amplitude = 10\n"
           "noise_sigma = 0.1\n"
           "pulse_center_hz = 3.75e9\n"
           "pulse_bandwidth_hz = 4.5e9\n"
           "target_attenuation = 0.3\n"
           "seed = 1\n"
           "# Detection pipeline\n"
           "mean_filter_window = 5\n"
           "fft_length = 0\n"
           "band_low_hz = 0.3\n"
           "band_high_hz = 0.8\n"
           "normalization_epsilon = 1e-12\n"
           "backend = ii\n"
           "mean_filter_mode = smooth\n"
           "guard_radius = 4\n"
           "background_radius = 8\n"
           "pfa = 1e-3\n"
           "# Benchmarks\n"
           "map_rows = 1024\n"
           "map_cols = 600\n"
           "param_grid = 4/8, 4/12, 8/8, 8/12\n"
           "repetitions = 10\n"
           "warmup = 2\n";
}

} // namespace uwbvital
