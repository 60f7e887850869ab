#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "frida/fl/config.h"

namespace frida::report {

// Raw `key = value` entries in file order-independent form.
using ConfigEntries = std::map<std::string, std::string>;

// Parses the flat config text: one `key = value` per line, `#` starts a
// comment, blank lines ignored. Throws ConfigError on syntax errors and
// duplicate keys.
ConfigEntries parse_entries(const std::string& text);
ConfigEntries read_entries(const std::filesystem::path& path);

// Builds and validates a config. Unknown keys, malformed values and missing
// required keys (clients.count, run.rounds) throw ConfigError.
fl::ExperimentConfig config_from_entries(const ConfigEntries& entries);
fl::ExperimentConfig load_config(const std::filesystem::path& path);

// Resolves a sweep key: a full dotted key, or a shorthand such as
// `canary_epochs` (dots replaced by underscores) or a unique last component.
std::string resolve_key(const std::string& key);

// Normalized echo listing every setting, one per line in a fixed order.
// Parsing the result yields an equivalent config.
std::string format_config(const fl::ExperimentConfig& cfg);

// printf("%.17g") rendering shared by every output file.
std::string format_double(double v);

}  // namespace frida::report
