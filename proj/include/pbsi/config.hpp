#pragma once

#include <string>

#include "pbsi/experiment.hpp"

namespace pbsi {

// Parses the `key = value` experiment format (sections [sensor], [system],
// [sweep]; `#` comments). Errors are reported as "<label>:<line>: message".
ExperimentSpec parse_experiment_spec(const std::string& text,
                                     const std::string& label);

ExperimentSpec load_experiment_spec(const std::string& path);

}  // namespace pbsi
