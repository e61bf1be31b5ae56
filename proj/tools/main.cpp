#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "uwbvital/bench.hpp"
#include "uwbvital/errors.hpp"
#include "uwbvital/frame_io.hpp"
#include "uwbvital/heatmap.hpp"
#include "uwbvital/pipeline.hpp"
#include "uwbvital/run_config.hpp"
#include "uwbvital/synth.hpp"

namespace {

using namespace uwbvital;

std::string fmt9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string detections_csv(const DetectOutput& out) {
    std::string csv = "row,col,range_m,freq_hz,power,threshold\n";
    for (const Detection& d : out.detections.detections) {
        csv += std::to_string(d.row) + "," + std::to_string(d.col) + "," +
               fmt9(out.band_map.range_axis[d.row]) + "," + fmt9(out.band_map.freq_axis[d.col]) +
               "," + fmt9(d.value) + "," + fmt9(d.threshold) + "\n";
    }
    return csv;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigurationError("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw ConfigurationError("write failed for '" + path + "'");
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        write_text_file(out_path, text);
    }
}

RunConfig load_config_or_defaults(const std::string& path) {
    return path.empty() ? RunConfig{} : load_run_config(path);
}

int run(int argc, char** argv) {
    CLI::App app{"UWB radar respiration detection toolkit"};
    app.require_subcommand(1);

    unsigned threads = 1;
    app.add_option("--threads", threads, "worker threads for CFAR stages (default 1)")
        ->check(CLI::Range(1u, 256u));

    std::string config_path;
    app.add_option("--config", config_path, "run configuration file (key = value lines)");

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic frame file");
    std::string synth_out;
    synth_cmd->add_option("--out", synth_out, "output frame file")->required();
    std::optional<std::uint64_t> seed_flag;
    synth_cmd->add_option("--seed", seed_flag, "override the scene seed");

    // detect
    auto* detect_cmd = app.add_subcommand("detect", "run the detection chain on a frame file");
    std::string frame_path, backend_flag, det_out, heatmap_out, mean_filter_flag;
    detect_cmd->add_option("--frame", frame_path, "input frame file")->required();
    detect_cmd->add_option("--backend", backend_flag, "CFAR backend: naive or ii")
        ->check(CLI::IsMember({"naive", "ii"}));
    detect_cmd->add_option("--out-detections", det_out, "detections CSV path (default stdout)");
    detect_cmd->add_option("--out-heatmap", heatmap_out,
                           "band power heatmap (P5 graymap) with a detections sidecar CSV");
    detect_cmd
        ->add_option("--mean-filter", mean_filter_flag,
                     "slow-time mean filter reading: smooth or subtract")
        ->check(CLI::IsMember({"smooth", "subtract"}));

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "time the CFAR backends or pipeline steps");
    std::string mode, bench_out, format = "text";
    bench_cmd->add_option("--mode", mode, "cfar or pipeline")
        ->required()
        ->check(CLI::IsMember({"cfar", "pipeline"}));
    bench_cmd->add_option("--out", bench_out, "report path (default stdout)");
    bench_cmd->add_option("--format", format, "text, csv or json")
        ->check(CLI::IsMember({"text", "csv", "json"}));
    std::optional<std::uint64_t> bench_seed;
    bench_cmd->add_option("--seed", bench_seed, "seed for the benchmark input map / frame");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1; // usage errors map to exit 1
    }

    RunConfig config = load_config_or_defaults(config_path);

    if (synth_cmd->parsed()) {
        if (seed_flag) config.scene.seed = *seed_flag;
        const Scene scene = generate_scene(config.scene);
        write_frame_file(synth_out, scene.frame);
        std::cout << "target_bin=" << scene.truth.target_range_bin
                  << " resp_freq_hz=" << fmt9(scene.truth.resp_freq_hz) << "\n";
        return 0;
    }

    if (detect_cmd->parsed()) {
        if (backend_flag == "naive") config.pipeline.backend = CfarBackend::Naive;
        if (backend_flag == "ii") config.pipeline.backend = CfarBackend::IntegralImage;
        if (mean_filter_flag == "smooth") {
            config.pipeline.mean_filter_mode = MeanFilterMode::Smoothing;
        } else if (mean_filter_flag == "subtract") {
            config.pipeline.mean_filter_mode = MeanFilterMode::SubtractMean;
        }
        const RadarFrame frame = read_frame_file(frame_path);
        const DetectOutput out = detect(frame, config.pipeline, threads);
        emit(det_out, detections_csv(out));
        if (!heatmap_out.empty()) {
            write_pgm_file(heatmap_out, out.band_map.power);
            std::string marks = "row,col\n";
            for (const Detection& d : out.detections.detections) {
                marks += std::to_string(d.row) + "," + std::to_string(d.col) + "\n";
            }
            write_text_file(heatmap_out + ".csv", marks);
        }
        return 0;
    }

    if (bench_cmd->parsed()) {
        std::string report;
        if (mode == "cfar") {
            const std::uint64_t seed = bench_seed ? *bench_seed : config.scene.seed;
            const CfarBenchReport r = bench_cfar(config.bench, seed, threads);
            report = format == "csv" ? to_csv(r) : format == "json" ? to_json(r) : render_text(r);
        } else {
            if (bench_seed) config.scene.seed = *bench_seed;
            const Scene scene = generate_scene(config.scene);
            const PipelineBenchReport r =
                bench_pipeline(scene.frame, config.pipeline, config.bench.repetitions,
                               config.bench.warmup, threads);
            report = format == "csv" ? to_csv(r) : format == "json" ? to_json(r) : render_text(r);
        }
        emit(bench_out, report);
        return 0;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const GateError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DimensionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
