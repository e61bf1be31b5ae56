#pragma once

#include <iosfwd>
#include <string>

#include "uwbvital/bench.hpp"
#include "uwbvital/pipeline.hpp"
#include "uwbvital/synth.hpp"

namespace uwbvital {

// Plain-text run configuration: one `key = value` per line, '#' comments,
// blank lines ignored. The key set is the union of the scene, pipeline and
// benchmark fields; unknown keys and out-of-domain values fail with the
// offending line number. Each command consumes the section it needs.
struct RunConfig {
    SceneConfig scene;
    PipelineConfig pipeline;
    BenchSpec bench;
};

RunConfig parse_run_config(std::istream& in, const std::string& source_name);
RunConfig load_run_config(const std::string& path);

// All recognized keys, one per line with the default value, as a template.
std::string run_config_template();

} // namespace uwbvital
