#include "optsched/presets.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>

#include "optsched/config.hpp"

#ifndef OPTSCHED_SOURCE_PRESETS_DIR
#define OPTSCHED_SOURCE_PRESETS_DIR ""
#endif

namespace optsched {

namespace fs = std::filesystem;

std::string presets_directory(const std::string& override_dir) {
    if (!override_dir.empty()) return override_dir;
    if (const char* env = std::getenv("OPTSCHED_PRESETS_DIR"); env && *env) return env;
    if (fs::is_directory("presets")) return "presets";
    return OPTSCHED_SOURCE_PRESETS_DIR;
}

std::vector<PresetInfo> list_presets(const std::string& dir) {
    std::vector<PresetInfo> presets;
    if (dir.empty() || !fs::is_directory(dir)) return presets;
    for (const fs::directory_entry& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
        PresetInfo info;
        info.name = entry.path().stem().string();
        info.path = entry.path().string();
        try {
            info.description = load_config(info.path).description;
        } catch (const std::exception&) {
            info.description = "(unreadable config)";
        }
        presets.push_back(std::move(info));
    }
    std::sort(presets.begin(), presets.end(),
              [](const PresetInfo& a, const PresetInfo& b) { return a.name < b.name; });
    return presets;
}

std::string find_preset(const std::string& name, const std::string& dir) {
    for (const PresetInfo& info : list_presets(dir))
        if (info.name == name) return info.path;
    throw ConfigError("unknown preset '" + name + "' (searched " +
                      (dir.empty() ? std::string("<no presets directory>") : dir) + ")");
}

}  // namespace optsched
