#pragma once

#include <string>

#include "latwalk/config.hpp"

namespace latwalk {

/// Executes every (experiment, level) pair of a validated config, writing
/// report files plus a manifest.json listing each output with a content
/// hash. Identical configs produce byte-identical manifests. An empty grid
/// at some level is recorded in the manifest and the run continues.
/// Returns 0 on success, 1 on a runtime failure.
int runExperiment(const ExperimentConfig& cfg);

/// Catalog of built-in domains and test functions; human-readable text or
/// a machine-readable JSON document.
std::string listBuiltins(bool jsonMode = false);

} // namespace latwalk
