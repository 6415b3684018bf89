#pragma once

#include <map>
#include <string>

#include "vfi/pipeline.hpp"

namespace vfi {

// INI-style settings: [section] headers, key = value lines, # comments.
// Keys are stored as "section.key". Unknown keys are rejected when building
// a pipeline config so typos fail loudly.
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config_file(const std::string& path);

// Builds a pipeline config from parsed settings. Relative weight paths
// resolve against base_dir (the config file's directory); flow file patterns
// and analytic manifests resolve against input_dir.
PipelineConfig build_pipeline_config(const ConfigMap& settings,
                                     const std::string& base_dir,
                                     const std::string& input_dir);

}  // namespace vfi
