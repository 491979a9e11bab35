#pragma once

#include <string>
#include <vector>

#include "fockbarrier/config.hpp"

namespace fockbarrier {

struct PresetInfo {
  std::string name;
  std::string summary;
};

std::vector<PresetInfo> list_presets();

/// Throws ConfigError("preset", ...) for unknown names. The output
/// directory defaults to the preset name.
ExperimentConfig preset(const std::string& name);

}  // namespace fockbarrier
