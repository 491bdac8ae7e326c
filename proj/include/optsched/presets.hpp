#pragma once

#include <string>
#include <vector>

namespace optsched {

struct PresetInfo {
    std::string name;
    std::string path;
    std::string description;
};

/// Resolution order: explicit override, OPTSCHED_PRESETS_DIR, ./presets,
/// then the source-tree presets directory baked in at build time.
std::string presets_directory(const std::string& override_dir = {});

std::vector<PresetInfo> list_presets(const std::string& dir);

/// Path of the named preset config, or throws ConfigError.
std::string find_preset(const std::string& name, const std::string& dir);

}  // namespace optsched
