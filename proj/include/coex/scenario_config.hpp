#pragma once

#include "coex/coexistence_sim.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace coex::cli {

/// Invalid scenario text. line() is 1-based, 0 when not tied to a line.
class ConfigError : public std::runtime_error
{
public:
  ConfigError(int line, const std::string& message);
  int line() const { return m_line; }

private:
  int m_line;
};

/// Parsed scenario file with presets expanded.
///
/// Format: flat "key = value" lines, optional [wlan] / [zigbee] / [path] /
/// [scenario] section headers, '#' comments. Keys before any header belong to
/// [scenario]. Units are part of the key name (..._dbm, ..._mhz, ..._us,
/// ..._m). wlan_preset and zigbee_preset are required; every other key
/// overrides the preset value.
struct ScenarioConfig
{
  std::string wlan_preset = "wlan11b-default";
  std::string zigbee_preset = "zigbee154-default";
  sim::Scenario scenario;

  /// FNV-1a hash of canonical_text(scenario).
  std::uint64_t hash() const;
};

ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::string& path);

/// Both default presets, nothing overridden.
ScenarioConfig default_config();

/// Stable key = value rendering of every scenario field.
std::string canonical_text(const sim::Scenario& scenario);

} // namespace coex::cli
