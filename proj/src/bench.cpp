#include "uwbvital/bench.hpp"

#include <sys/utsname.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "uwbvital/errors.hpp"

namespace uwbvital {

namespace {

constexpr const char* kStepFastTime = "Signal Processing I, Fast Time";
constexpr const char* kStepSlowTime = "Signal Processing II, Slow Time";
constexpr const char* kStepThresholdNaive = "Signal Threshold (CA-CFAR)";
constexpr const char* kStepThresholdIntegral = "Signal Threshold (II CA-CFAR)";
constexpr const char* kStepTotal = "Total";
constexpr const char* kTimingNote =
    "integral-image timings include summed-area-table construction";

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

template <typename F>
double time_seconds(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

bool is_noisy(const Stat& s) { return s.mean_s > 0.0 && s.std_s / s.mean_s > 0.25; }

// Shortest representation that parses back to the same double.
std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, end);
}

double parse_double(std::string_view text) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw FormatError("benchmark report: bad number '" + std::string(text) + "'");
    }
    return v;
}

// Minimal CSV splitting; only the first field of pipeline rows is quoted
// (step names contain commas) and our quoted values never embed quotes.
std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t i = 0;
    while (i <= line.size()) {
        std::string field;
        if (i < line.size() && line[i] == '"') {
            const std::size_t close = line.find('"', i + 1);
            if (close == std::string::npos) throw FormatError("benchmark CSV: unclosed quote");
            field = line.substr(i + 1, close - i - 1);
            i = close + 1;
        } else {
            std::size_t comma = line.find(',', i);
            if (comma == std::string::npos) comma = line.size();
            field = line.substr(i, comma - i);
            i = comma;
        }
        fields.push_back(std::move(field));
        if (i == line.size()) break;
        ++i; // skip comma
    }
    return fields;
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out += '\\';
            out += c;
        } else {
            out += c;
        }
    }
    return out;
}

} // namespace

void BenchSpec::validate() const {
    if (repetitions < 3) {
        throw ParameterError("BenchSpec: repetitions must be >= 3, got " +
                             std::to_string(repetitions));
    }
    if (param_grid.empty()) {
        throw ParameterError("BenchSpec: param_grid must not be empty");
    }
    if (map_rows < 2 || map_cols < 2) {
        throw ParameterError("BenchSpec: map must be at least 2x2");
    }
    if (!(pfa > 0.0) || !(pfa < 1.0)) {
        throw ParameterError("BenchSpec: pfa must lie in (0,1)");
    }
}

Stat summarize(std::vector<double> seconds) {
    Stat s;
    const std::size_t n = seconds.size();
    if (n == 0) return s;
    double sum = 0.0;
    for (double v : seconds) sum += v;
    s.mean_s = sum / static_cast<double>(n);
    if (n > 1) {
        double ss = 0.0;
        for (double v : seconds) ss += (v - s.mean_s) * (v - s.mean_s);
        s.std_s = std::sqrt(ss / static_cast<double>(n - 1));
    }
    std::sort(seconds.begin(), seconds.end());
    s.median_s = n % 2 == 1 ? seconds[n / 2] : 0.5 * (seconds[n / 2 - 1] + seconds[n / 2]);
    return s;
}

void verify_backend_masks(const DetectionResult& naive, const DetectionResult& integral,
                          const Matrix& power_map) {
    const std::size_t rows = power_map.rows();
    const std::size_t cols = power_map.cols();
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            if (naive.mask(r, c) == integral.mask(r, c)) continue;
            // Disagreement is tolerable only for cells sitting on the
            // threshold within 1e-9 relative.
            const double cut = power_map(r, c);
            const double tn = naive.threshold_map(r, c);
            const double ti = integral.threshold_map(r, c);
            const bool tie = std::fabs(cut - tn) <= 1e-9 * std::max(1.0, tn) ||
                             std::fabs(cut - ti) <= 1e-9 * std::max(1.0, ti);
            if (!tie) {
                throw GateError("backend mismatch at cell (" + std::to_string(r) + ", " +
                                std::to_string(c) + "): value " + format_double(cut) +
                                ", naive threshold " + format_double(tn) +
                                ", integral threshold " + format_double(ti));
            }
        }
    }
}

std::string environment_note() {
    std::string cpu = "unknown cpu";
    std::ifstream info("/proc/cpuinfo");
    std::string line;
    while (std::getline(info, line)) {
        if (line.rfind("model name", 0) == 0) {
            const std::size_t colon = line.find(':');
            if (colon != std::string::npos) {
                cpu = line.substr(colon + 1);
                const std::size_t start = cpu.find_first_not_of(' ');
                if (start != std::string::npos) cpu = cpu.substr(start);
            }
            break;
        }
    }
    utsname uts{};
    std::string os = "unknown os";
    if (uname(&uts) == 0) {
        os = std::string(uts.sysname) + " " + uts.release + " " + uts.machine;
    }
    return os + ", " + cpu + ", " + std::to_string(std::thread::hardware_concurrency()) +
           " hardware threads";
}

CfarBenchReport bench_cfar(const BenchSpec& spec, std::uint64_t seed, unsigned threads) {
    spec.validate();

    Matrix map(spec.map_rows, spec.map_cols, 0.0);
    std::mt19937_64 rng(mix64(seed));
    std::exponential_distribution<double> cell(1.0);
    for (double& v : map.values()) v = cell(rng);

    CfarBenchReport report;
    report.environment = environment_note();
    report.note = kTimingNote;
    report.threads = threads;

    std::size_t sink = 0;
    for (const auto& [guard, background] : spec.param_grid) {
        CfarParams params;
        params.guard_radius = guard;
        params.background_radius = background;
        params.pfa = spec.pfa;

        // Equality is a correctness gate: no timing row without it.
        const DetectionResult ref_naive = cfar2d_naive(map, params, threads);
        const DetectionResult ref_integral = cfar2d_integral(map, params, threads);
        verify_backend_masks(ref_naive, ref_integral, map);

        for (std::size_t w = 0; w < spec.warmup; ++w) {
            sink += cfar2d_naive(map, params, threads).detections.size();
            sink += cfar2d_integral(map, params, threads).detections.size();
        }

        std::vector<double> naive_times;
        std::vector<double> integral_times;
        naive_times.reserve(spec.repetitions);
        integral_times.reserve(spec.repetitions);
        for (std::size_t rep = 0; rep < spec.repetitions; ++rep) {
            naive_times.push_back(
                time_seconds([&] { sink += cfar2d_naive(map, params, threads).mask(0, 0); }));
            integral_times.push_back(
                time_seconds([&] { sink += cfar2d_integral(map, params, threads).mask(0, 0); }));
        }

        CfarBenchRow row;
        row.guard = guard;
        row.background = background;
        row.naive = summarize(std::move(naive_times));
        row.integral = summarize(std::move(integral_times));
        row.ratio = row.naive.mean_s / row.integral.mean_s;
        row.noisy = is_noisy(row.naive) || is_noisy(row.integral);
        report.rows.push_back(row);
    }
    if (sink == static_cast<std::size_t>(-1)) report.note += " ";
    return report;
}

PipelineBenchReport bench_pipeline(const RadarFrame& frame, const PipelineConfig& config,
                                   std::size_t repetitions, std::size_t warmup,
                                   unsigned threads) {
    if (repetitions < 3) {
        throw ParameterError("bench_pipeline: repetitions must be >= 3");
    }
    frame.validate();
    config.validate();

    PipelineConfig cfg_naive = config;
    cfg_naive.backend = CfarBackend::Naive;
    PipelineConfig cfg_integral = config;
    cfg_integral.backend = CfarBackend::IntegralImage;

    // Correctness gate before any timing.
    const DetectOutput out_naive = detect(frame, cfg_naive, threads);
    const DetectOutput out_integral = detect(frame, cfg_integral, threads);
    verify_backend_masks(out_naive.detections, out_integral.detections,
                         out_naive.band_map.power);

    const std::size_t fft_length = config.effective_fft_length(frame.traces());
    std::vector<double> sp1, sp2, thr_naive, thr_integral, total_naive, total_integral;

    std::size_t sink = 0;
    for (std::size_t rep = 0; rep < warmup + repetitions; ++rep) {
        RadarFrame a, b, c, d;
        RangeFrequencyMap full, band;
        const double t_sp1 = time_seconds([&] {
            a = remove_dc(frame);
            b = detrend_linear(a);
        });
        const double t_sp2 = time_seconds([&] {
            c = config.mean_filter_mode == MeanFilterMode::Smoothing
                    ? mean_filter_slow(b, config.mean_filter_window)
                    : subtract_slow_time_mean(b);
            d = normalize_slow(c, config.normalization_epsilon);
            full = slow_time_spectrum(d, fft_length);
            band = band_select(full, config.band_low_hz, config.band_high_hz);
        });
        const double t_thr_naive = time_seconds(
            [&] { sink += cfar2d_naive(band.power, config.cfar, threads).detections.size(); });
        const double t_thr_integral = time_seconds(
            [&] { sink += cfar2d_integral(band.power, config.cfar, threads).detections.size(); });
        const double t_total_naive =
            time_seconds([&] { sink += detect(frame, cfg_naive, threads).detections.detections.size(); });
        const double t_total_integral = time_seconds(
            [&] { sink += detect(frame, cfg_integral, threads).detections.detections.size(); });
        if (rep < warmup) continue;
        sp1.push_back(t_sp1);
        sp2.push_back(t_sp2);
        thr_naive.push_back(t_thr_naive);
        thr_integral.push_back(t_thr_integral);
        total_naive.push_back(t_total_naive);
        total_integral.push_back(t_total_integral);
    }

    PipelineBenchReport report;
    report.environment = environment_note();
    report.threads = threads;

    const Stat s_sp1 = summarize(std::move(sp1));
    const Stat s_sp2 = summarize(std::move(sp2));
    const Stat s_thr_naive = summarize(std::move(thr_naive));
    const Stat s_thr_integral = summarize(std::move(thr_integral));
    const Stat s_total_naive = summarize(std::move(total_naive));
    const Stat s_total_integral = summarize(std::move(total_integral));

    report.rows.push_back({kStepFastTime, s_sp1, s_sp1, is_noisy(s_sp1)});
    report.rows.push_back({kStepSlowTime, s_sp2, s_sp2, is_noisy(s_sp2)});
    report.rows.push_back({kStepThresholdNaive, s_thr_naive, std::nullopt, is_noisy(s_thr_naive)});
    report.rows.push_back(
        {kStepThresholdIntegral, std::nullopt, s_thr_integral, is_noisy(s_thr_integral)});
    report.rows.push_back({kStepTotal, s_total_naive, s_total_integral,
                           is_noisy(s_total_naive) || is_noisy(s_total_integral)});
    if (sink == static_cast<std::size_t>(-1)) report.environment += " ";
    return report;
}

std::string render_text(const CfarBenchReport& report) {
    std::ostringstream out;
    out << "CFAR thresholding time, naive vs integral image\n";
    out << "guard  bkgnd  naive mean+-std (median) s      ii mean+-std (median) s        ratio\n";
    for (const auto& row : report.rows) {
        char line[200];
        std::snprintf(line, sizeof(line),
                      "%-6d %-6d %9.6f +- %8.6f (%9.6f)  %9.6f +- %8.6f (%9.6f)  %6.2f:1%s\n",
                      row.guard, row.background, row.naive.mean_s, row.naive.std_s,
                      row.naive.median_s, row.integral.mean_s, row.integral.std_s,
                      row.integral.median_s, row.ratio, row.noisy ? "  [noisy]" : "");
        out << line;
    }
    out << "threads: " << report.threads << "\n";
    out << "environment: " << report.environment << "\n";
    out << "note: " << report.note << "\n";
    return out.str();
}

std::string render_text(const PipelineBenchReport& report) {
    std::ostringstream out;
    out << "Pipeline step timings\n";
    char header[200];
    std::snprintf(header, sizeof(header), "%-34s %-26s %-26s\n", "step", "CA-CFAR (s)",
                  "II CA-CFAR (s)");
    out << header;
    for (const auto& row : report.rows) {
        auto cell = [](const std::optional<Stat>& s) {
            if (!s) return std::string("-");
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.6f +- %.6f", s->mean_s, s->std_s);
            return std::string(buf);
        };
        char line[256];
        std::snprintf(line, sizeof(line), "%-34s %-26s %-26s%s\n", row.name.c_str(),
                      cell(row.naive).c_str(), cell(row.integral).c_str(),
                      row.noisy ? " [noisy]" : "");
        out << line;
    }
    out << "threads: " << report.threads << "\n";
    out << "environment: " << report.environment << "\n";
    return out.str();
}

std::string to_csv(const CfarBenchReport& report) {
    std::string out = "guard,background,naive_mean_s,naive_std_s,ii_mean_s,ii_std_s,ratio\n";
    for (const auto& row : report.rows) {
        out += std::to_string(row.guard) + "," + std::to_string(row.background) + "," +
               format_double(row.naive.mean_s) + "," + format_double(row.naive.std_s) + "," +
               format_double(row.integral.mean_s) + "," + format_double(row.integral.std_s) +
               "," + format_double(row.ratio) + "\n";
    }
    return out;
}

std::string to_csv(const PipelineBenchReport& report) {
    std::string out = "step,ca_mean_s,ca_std_s,ii_mean_s,ii_std_s\n";
    for (const auto& row : report.rows) {
        out += "\"" + row.name + "\"";
        auto cols = [&](const std::optional<Stat>& s) {
            if (s) {
                out += "," + format_double(s->mean_s) + "," + format_double(s->std_s);
            } else {
                out += ",,";
            }
        };
        cols(row.naive);
        cols(row.integral);
        out += "\n";
    }
    return out;
}

std::string to_json(const CfarBenchReport& report) {
    std::string out = "{\n  \"mode\": \"cfar\",\n  \"threads\": " +
                      std::to_string(report.threads) + ",\n  \"environment\": \"" +
                      json_escape(report.environment) + "\",\n  \"note\": \"" +
                      json_escape(report.note) + "\",\n  \"rows\": [\n";
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const auto& row = report.rows[i];
        out += "    {\"guard\": " + std::to_string(row.guard) +
               ", \"background\": " + std::to_string(row.background) +
               ", \"naive_mean_s\": " + format_double(row.naive.mean_s) +
               ", \"naive_std_s\": " + format_double(row.naive.std_s) +
               ", \"ii_mean_s\": " + format_double(row.integral.mean_s) +
               ", \"ii_std_s\": " + format_double(row.integral.std_s) +
               ", \"ratio\": " + format_double(row.ratio) + "}";
        out += i + 1 < report.rows.size() ? ",\n" : "\n";
    }
    out += "  ]\n}\n";
    return out;
}

std::string to_json(const PipelineBenchReport& report) {
    std::string out = "{\n  \"mode\": \"pipeline\",\n  \"threads\": " +
                      std::to_string(report.threads) + ",\n  \"environment\": \"" +
                      json_escape(report.environment) + "\",\n  \"rows\": [\n";
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const auto& row = report.rows[i];
        auto field = [&](const char* name, const std::optional<Stat>& s, bool mean) {
            if (!s) return std::string("\"") + name + "\": null";
            return std::string("\"") + name +
                   "\": " + format_double(mean ? s->mean_s : s->std_s);
        };
        out += "    {\"step\": \"" + json_escape(row.name) + "\", " +
               field("ca_mean_s", row.naive, true) + ", " + field("ca_std_s", row.naive, false) +
               ", " + field("ii_mean_s", row.integral, true) + ", " +
               field("ii_std_s", row.integral, false) + "}";
        out += i + 1 < report.rows.size() ? ",\n" : "\n";
    }
    out += "  ]\n}\n";
    return out;
}

namespace {

std::vector<std::string> non_empty_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

} // namespace

CfarBenchReport cfar_report_from_csv(const std::string& csv) {
    const auto lines = non_empty_lines(csv);
    if (lines.empty() ||
        lines[0] != "guard,background,naive_mean_s,naive_std_s,ii_mean_s,ii_std_s,ratio") {
        throw FormatError("cfar benchmark CSV: bad header");
    }
    CfarBenchReport report;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = split_csv_line(lines[i]);
        if (f.size() != 7) throw FormatError("cfar benchmark CSV: bad row '" + lines[i] + "'");
        CfarBenchRow row;
        row.guard = static_cast<int>(parse_double(f[0]));
        row.background = static_cast<int>(parse_double(f[1]));
        row.naive.mean_s = parse_double(f[2]);
        row.naive.std_s = parse_double(f[3]);
        row.integral.mean_s = parse_double(f[4]);
        row.integral.std_s = parse_double(f[5]);
        row.ratio = parse_double(f[6]);
        report.rows.push_back(row);
    }
    return report;
}

PipelineBenchReport pipeline_report_from_csv(const std::string& csv) {
    const auto lines = non_empty_lines(csv);
    if (lines.empty() || lines[0] != "step,ca_mean_s,ca_std_s,ii_mean_s,ii_std_s") {
        throw FormatError("pipeline benchmark CSV: bad header");
    }
    PipelineBenchReport report;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = split_csv_line(lines[i]);
        if (f.size() != 5) {
            throw FormatError("pipeline benchmark CSV: bad row '" + lines[i] + "'");
        }
        PipelineStepRow row;
        row.name = f[0];
        if (!f[1].empty()) row.naive = Stat{parse_double(f[1]), parse_double(f[2]), 0.0};
        if (!f[3].empty()) row.integral = Stat{parse_double(f[3]), parse_double(f[4]), 0.0};
        report.rows.push_back(row);
    }
    return report;
}

CfarBenchReport cfar_report_from_json(const std::string& json) {
    const auto j = nlohmann::json::parse(json);
    CfarBenchReport report;
    report.threads = j.value("threads", 1u);
    report.environment = j.value("environment", "");
    report.note = j.value("note", "");
    for (const auto& item : j.at("rows")) {
        CfarBenchRow row;
        row.guard = item.at("guard").get<int>();
        row.background = item.at("background").get<int>();
        row.naive.mean_s = item.at("naive_mean_s").get<double>();
        row.naive.std_s = item.at("naive_std_s").get<double>();
        row.integral.mean_s = item.at("ii_mean_s").get<double>();
        row.integral.std_s = item.at("ii_std_s").get<double>();
        row.ratio = item.at("ratio").get<double>();
        report.rows.push_back(row);
    }
    return report;
}

PipelineBenchReport pipeline_report_from_json(const std::string& json) {
    const auto j = nlohmann::json::parse(json);
    PipelineBenchReport report;
    report.threads = j.value("threads", 1u);
    report.environment = j.value("environment", "");
    for (const auto& item : j.at("rows")) {
        PipelineStepRow row;
        row.name = item.at("step").get<std::string>();
        if (!item.at("ca_mean_s").is_null()) {
            row.naive = Stat{item.at("ca_mean_s").get<double>(),
                             item.at("ca_std_s").get<double>(), 0.0};
        }
        if (!item.at("ii_mean_s").is_null()) {
            row.integral = Stat{item.at("ii_mean_s").get<double>(),
                                item.at("ii_std_s").get<double>(), 0.0};
        }
        report.rows.push_back(row);
    }
    return report;
}

} // namespace uwbvital
