#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "uwbvital/frame.hpp"
#include "uwbvital/pipeline.hpp"

namespace uwbvital {

struct BenchSpec {
    std::size_t map_rows = 1024;
    std::size_t map_cols = 600;
    // (guard_radius, background_radius) pairs, one timing row each.
    std::vector<std::pair<int, int>> param_grid = {{4, 8}, {4, 12}, {8, 8}, {8, 12}};
    double pfa = 1e-3;
    std::size_t repetitions = 10;
    std::size_t warmup = 2;

    void validate() const; // repetitions >= 3, non-empty grid
};

struct Stat {
    double mean_s = 0.0;
    double std_s = 0.0;
    double median_s = 0.0;
};

// Sample statistics (std with n-1 denominator) of a timing series.
Stat summarize(std::vector<double> seconds);

struct CfarBenchRow {
    int guard = 0;
    int background = 0;
    Stat naive;
    Stat integral;
    double ratio = 0.0; // naive mean / integral-image mean
    bool noisy = false; // std/mean > 0.25 on either backend
};

struct CfarBenchReport {
    std::vector<CfarBenchRow> rows;
    std::string environment;
    std::string note; // timing scope footer
    unsigned threads = 1;
};

struct PipelineStepRow {
    std::string name;
    std::optional<Stat> naive;    // CA-CFAR column
    std::optional<Stat> integral; // II CA-CFAR column
    bool noisy = false;
};

struct PipelineBenchReport {
    std::vector<PipelineStepRow> rows;
    std::string environment;
    unsigned threads = 1;
};

// Raises GateError (with diagnostic cell coordinates) when the two CFAR
// backends disagree on a mask beyond threshold ties; benchmarks call this
// before emitting any timing row.
void verify_backend_masks(const DetectionResult& naive, const DetectionResult& integral,
                          const Matrix& power_map);

// Times both CFAR backends per grid entry on one seeded exponential power
// map. Integral-image timings include SAT construction; map generation and
// result assembly outside the backend calls are excluded.
CfarBenchReport bench_cfar(const BenchSpec& spec, std::uint64_t seed, unsigned threads = 1);

// Times the detection chain per stage: fast-time preprocessing, slow-time
// processing, thresholding per backend, and the full run per backend.
PipelineBenchReport bench_pipeline(const RadarFrame& frame, const PipelineConfig& config,
                                   std::size_t repetitions, std::size_t warmup = 2,
                                   unsigned threads = 1);

// Report rendering. CSV and JSON serialize doubles with shortest
// round-trip formatting so emitted values parse back bit-exactly.
std::string render_text(const CfarBenchReport& report);
std::string render_text(const PipelineBenchReport& report);
std::string to_csv(const CfarBenchReport& report);
std::string to_csv(const PipelineBenchReport& report);
std::string to_json(const CfarBenchReport& report);
std::string to_json(const PipelineBenchReport& report);

CfarBenchReport cfar_report_from_csv(const std::string& csv);
PipelineBenchReport pipeline_report_from_csv(const std::string& csv);
CfarBenchReport cfar_report_from_json(const std::string& json);
PipelineBenchReport pipeline_report_from_json(const std::string& json);

// Free-text descriptor of the host used in report footers.
std::string environment_note();

} // namespace uwbvital
