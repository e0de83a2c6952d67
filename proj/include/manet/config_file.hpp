#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "manet/scenario.hpp"

namespace manet {

/// Parse or build error in a key-value configuration file.
class ConfigError : public std::runtime_error
{
  public:
    explicit ConfigError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const { return problems_; }

  private:
    std::vector<std::string> problems_;
};

/// Ordered `key = value` entries; later duplicates are an error.
using KeyValues = std::map<std::string, std::string>;

/// Reads `key = value` lines; `#` starts a comment; blank lines are ignored.
KeyValues parse_key_values(std::istream& in);

/// Builds a ScenarioConfig from key-value entries. Unknown keys, keys that
/// do not apply to the chosen variants, and malformed numbers are errors.
/// Keys with the prefixes in `ignored_prefixes` are skipped.
ScenarioConfig build_config(const KeyValues& kv, const std::vector<std::string>& ignored_prefixes = {});

ScenarioConfig load_config(const std::filesystem::path& path);

/// Canonical key-value form of a configuration (used for run records).
/// Custom noise cannot be serialised and yields `noise.variant = custom`.
KeyValues to_key_values(const ScenarioConfig& cfg);

/// Names of numeric keys that may be swept.
bool is_numeric_key(const std::string& key);

/// Formats a double the way configuration echoes and CSV cells do.
std::string format_number(double v);

} // namespace manet
