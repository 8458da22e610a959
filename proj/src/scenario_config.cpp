#include "coex/scenario_config.hpp"

#include "coex/result_table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

namespace coex::cli {

namespace {


struct Entry
{
  std::string section;
  std::string key;
  std::string value;
  int line;
};

/// Shape settings are collected separately and applied once the WLAN
/// bandwidth is known.
struct ShapeSettings
{
  rf::PsdKind kind = rf::PsdKind::Uniform;
  double chip_rate_hz = 11.0e6;
};

struct Target
{
  sim::Scenario& scenario;
  ShapeSettings& shape;
};

enum class Kind { Number, Integer, Boolean, Text };

struct Bounds
{
  double lo;
  double hi;
  bool lo_open;
};

struct KeyDef
{
  std::string_view section;
  std::string_view key;
  Kind kind;
  Bounds bounds;
  std::function<void(Target&, double, const std::string&)> apply;
};

std::string trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string bounds_text(const Bounds& b)
{
  return std::string(b.lo_open ? "(" : "[") + format_number(b.lo) + ", " + format_number(b.hi) + "]";
}

rf::RadioProfile& profile(Target& t, std::string_view section)
{
  return section == "wlan" ? t.scenario.wlan : t.scenario.zigbee;
}

std::vector<KeyDef> profile_keys(std::string_view section)
{
  auto p = [section](Target& t) -> rf::RadioProfile& { return profile(t, section); };
  std::vector<KeyDef> keys = {
      {section, "tx_power_dbm", Kind::Number, {-50, 40, false}, [p](Target& t, double v, auto&) { p(t).tx_power_dbm = v; }},
      {section, "rx_sensitivity_dbm", Kind::Number, {-130, 0, false},
       [p](Target& t, double v, auto&) { p(t).rx_sensitivity_dbm = v; }},
      {section, "bit_rate_kbps", Kind::Number, {0, 1e6, true}, [p](Target& t, double v, auto&) { p(t).bit_rate_bps = v * 1e3; }},
      {section, "bandwidth_mhz", Kind::Number, {0, 200, true}, [p](Target& t, double v, auto&) { p(t).bandwidth_hz = v * 1e6; }},
      {section, "center_freq_mhz", Kind::Number, {0, 1e5, true},
       [p](Target& t, double v, auto&) { p(t).center_freq_hz = v * 1e6; }},
      {section, "backoff_slot_us", Kind::Number, {0, 1e6, false},
       [p](Target& t, double v, auto&) { p(t).backoff_slot_s = v * 1e-6; }},
      {section, "sifs_us", Kind::Number, {0, 1e6, false}, [p](Target& t, double v, auto&) { p(t).sifs_s = v * 1e-6; }},
      {section, "cw_min", Kind::Integer, {1, 65535, false}, [p](Target& t, double v, auto&) { p(t).cw_min = static_cast<int>(v); }},
      {section, "payload_bytes", Kind::Integer, {1, 2346, false},
       [p](Target& t, double v, auto&) { p(t).payload_bytes = static_cast<int>(v); }},
      {section, "ack_duration_us", Kind::Number, {0, 1e6, false},
       [p](Target& t, double v, auto&) { p(t).ack_duration_s = v * 1e-6; }},
  };
  if (section == "wlan") {
    keys.push_back({section, "difs_us", Kind::Number, {0, 1e6, false},
                    [p](Target& t, double v, auto&) { p(t).difs_s = v * 1e-6; }});
  } else {
    keys.push_back({section, "cca_us", Kind::Number, {0, 1e6, false},
                    [p](Target& t, double v, auto&) { p(t).cca_s = v * 1e-6; }});
  }
  return keys;
}

const std::vector<KeyDef>& key_table()
{
  static const std::vector<KeyDef> table = [] {
    std::vector<KeyDef> keys;
    for (auto section : {std::string_view("wlan"), std::string_view("zigbee")}) {
      auto more = profile_keys(section);
      keys.insert(keys.end(), more.begin(), more.end());
    }
    const std::vector<KeyDef> rest = {
        {"path", "wavelength_m", Kind::Number, {0, 10, true}, [](Target& t, double v, auto&) { t.scenario.path.wavelength_m = v; }},
        {"path", "carrier_mhz", Kind::Number, {0, 1e5, true},
         [](Target& t, double v, auto&) { t.scenario.path.wavelength_m = rf::PathLossModel::from_carrier_hz(v * 1e6).wavelength_m; }},
        {"path", "breakpoint_m", Kind::Number, {0, 1e4, true}, [](Target& t, double v, auto&) { t.scenario.path.breakpoint_m = v; }},
        {"path", "far_exponent", Kind::Number, {2, 10, false}, [](Target& t, double v, auto&) { t.scenario.path.far_exponent = v; }},

        {"scenario", "d_interferer_m", Kind::Number, {0, 1e5, true},
         [](Target& t, double v, auto&) { t.scenario.d_interferer_m = v; }},
        {"scenario", "d_link_m", Kind::Number, {0, 1e5, true}, [](Target& t, double v, auto&) { t.scenario.d_link_m = v; }},
        {"scenario", "sir_threshold_db", Kind::Number, {0, 20, false},
         [](Target& t, double v, auto&) { t.scenario.sir_threshold_db = v; }},
        {"scenario", "psd", Kind::Text, {}, [](Target& t, double, const std::string& s) {
           if (s == "uniform") {
             t.shape.kind = rf::PsdKind::Uniform;
           } else if (s == "sinc2") {
             t.shape.kind = rf::PsdKind::SincSquared;
           } else {
             throw std::invalid_argument("psd must be 'uniform' or 'sinc2'");
           }
         }},
        {"scenario", "chip_rate_mhz", Kind::Number, {0, 1000, true}, [](Target& t, double v, auto&) { t.shape.chip_rate_hz = v * 1e6; }},
        {"scenario", "offered_load_pps", Kind::Text, {}, [](Target& t, double, const std::string& s) {
           if (s == "saturated") {
             t.scenario.zigbee_offered_load_pps.reset();
             return;
           }
           double v = 0.0;
           const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
           if (ec != std::errc{} || ptr != s.data() + s.size() || !(v > 0.0 && v <= 1e5)) {
             throw std::invalid_argument("offered_load_pps must be 'saturated' or a number in (0, 100000]");
           }
           t.scenario.zigbee_offered_load_pps = v;
         }},
        {"scenario", "ack_enabled", Kind::Boolean, {}, [](Target& t, double v, auto&) { t.scenario.ack_enabled = v != 0.0; }},
        {"scenario", "duration_s", Kind::Number, {0, 1e7, true}, [](Target& t, double v, auto&) { t.scenario.duration_s = v; }},
        {"scenario", "seed", Kind::Text, {}, [](Target& t, double, const std::string& s) {
           std::uint64_t v = 0;
           const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
           if (ec != std::errc{} || ptr != s.data() + s.size()) {
             throw std::invalid_argument("seed must be an unsigned 64-bit integer");
           }
           t.scenario.seed = v;
         }},
        {"scenario", "sir_soft_success", Kind::Number, {0, 1, true},
         [](Target& t, double v, auto&) { t.scenario.sir_soft_success = v; }},
        {"scenario", "noise_floor_dbm", Kind::Number, {-200, 0, false},
         [](Target& t, double v, auto&) { t.scenario.noise_floor_dbm = v; }},
        {"scenario", "wlan_cw_doubling", Kind::Boolean, {}, [](Target& t, double v, auto&) { t.scenario.wlan_cw_doubling = v != 0.0; }},
        {"scenario", "wlan_cw_max", Kind::Integer, {1, 65535, false},
         [](Target& t, double v, auto&) { t.scenario.wlan_cw_max = static_cast<int>(v); }},
        {"scenario", "zigbee_phy_header_bytes", Kind::Integer, {0, 64, false},
         [](Target& t, double v, auto&) { t.scenario.zigbee_phy_header_bytes = static_cast<int>(v); }},
        {"scenario", "zigbee_mac_overhead_bytes", Kind::Integer, {0, 127, false},
         [](Target& t, double v, auto&) { t.scenario.zigbee_mac_overhead_bytes = static_cast<int>(v); }},
        {"scenario", "min_be", Kind::Integer, {0, 20, false}, [](Target& t, double v, auto&) { t.scenario.zigbee_csma.min_be = static_cast<int>(v); }},
        {"scenario", "max_be", Kind::Integer, {0, 20, false}, [](Target& t, double v, auto&) { t.scenario.zigbee_csma.max_be = static_cast<int>(v); }},
        {"scenario", "max_csma_backoffs", Kind::Integer, {0, 20, false},
         [](Target& t, double v, auto&) { t.scenario.zigbee_csma.max_backoffs = static_cast<int>(v); }},
        {"scenario", "ber_phy", Kind::Text, {}, [](Target& t, double, const std::string& s) {
           if (s == "915") {
             t.scenario.ber_model = phy::BerModel::oqpsk_915();
           } else if (s == "2450") {
             t.scenario.ber_model = phy::BerModel::oqpsk_2450();
           } else {
             throw std::invalid_argument("ber_phy must be '915' or '2450'");
           }
         }},
    };
    keys.insert(keys.end(), rest.begin(), rest.end());
    return keys;
  }();
  return table;
}

std::optional<rf::RadioProfile> wlan_preset(const std::string& name)
{
  if (name == "wlan11b-default") {
    return rf::RadioProfile::wlan11b_default();
  }
  if (name == "wlan11g-reference") {
    return rf::RadioProfile::wlan11g_reference();
  }
  return std::nullopt;
}

std::optional<rf::RadioProfile> zigbee_preset(const std::string& name)
{
  if (name == "zigbee154-default") {
    return rf::RadioProfile::zigbee154_default();
  }
  return std::nullopt;
}

double parse_value(const Entry& e, const KeyDef& def)
{
  if (def.kind == Kind::Text) {
    return 0.0;
  }
  if (def.kind == Kind::Boolean) {
    if (e.value == "true" || e.value == "yes" || e.value == "1") {
      return 1.0;
    }
    if (e.value == "false" || e.value == "no" || e.value == "0") {
      return 0.0;
    }
    throw ConfigError(e.line, e.key + " must be true or false, got '" + e.value + "'");
  }
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
  if (ec != std::errc{} || ptr != e.value.data() + e.value.size() || !std::isfinite(v)) {
    throw ConfigError(e.line, e.key + " expects a number, got '" + e.value + "'");
  }
  if (def.kind == Kind::Integer && v != std::floor(v)) {
    throw ConfigError(e.line, e.key + " expects an integer, got '" + e.value + "'");
  }
  const Bounds& b = def.bounds;
  const bool low_ok = b.lo_open ? v > b.lo : v >= b.lo;
  if (!low_ok || v > b.hi) {
    throw ConfigError(e.line, e.key + " = " + e.value + " is out of range " + bounds_text(b));
  }
  return v;
}

std::vector<Entry> tokenize(std::string_view text)
{
  std::vector<Entry> entries;
  std::set<std::string> seen;
  std::string section = "scenario";
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) {
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError(line_no, "syntax error: unterminated section header");
      }
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (section != "scenario" && section != "wlan" && section != "zigbee" && section != "path") {
        throw ConfigError(line_no, "unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(line_no, "syntax error: expected 'key = value'");
    }
    Entry e{section, trim(std::string_view(line).substr(0, eq)), trim(std::string_view(line).substr(eq + 1)), line_no};
    if (e.key.empty() || e.value.empty()) {
      throw ConfigError(line_no, "syntax error: empty key or value");
    }
    if (!seen.insert(e.section + "." + e.key).second) {
      throw ConfigError(line_no, "duplicate key '" + e.key + "' in [" + e.section + "]");
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

} // namespace

ConfigError::ConfigError(int line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), m_line(line)
{
}

std::uint64_t ScenarioConfig::hash() const
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : canonical_text(scenario)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ScenarioConfig default_config()
{
  return ScenarioConfig{};
}

ScenarioConfig parse_config(std::string_view text)
{
  const auto entries = tokenize(text);

  ScenarioConfig config;
  const Entry* wlan_entry = nullptr;
  const Entry* zigbee_entry = nullptr;
  for (const auto& e : entries) {
    if (e.section == "scenario" && e.key == "wlan_preset") {
      wlan_entry = &e;
    } else if (e.section == "scenario" && e.key == "zigbee_preset") {
      zigbee_entry = &e;
    }
  }
  if (!wlan_entry || !zigbee_entry) {
    throw ConfigError(0, "missing required keys: wlan_preset (wlan11b-default | wlan11g-reference), "
                         "zigbee_preset (zigbee154-default)");
  }
  const auto wlan = wlan_preset(wlan_entry->value);
  if (!wlan) {
    throw ConfigError(wlan_entry->line, "unknown wlan_preset '" + wlan_entry->value +
                                            "' (known: wlan11b-default, wlan11g-reference)");
  }
  const auto zigbee = zigbee_preset(zigbee_entry->value);
  if (!zigbee) {
    throw ConfigError(zigbee_entry->line,
                      "unknown zigbee_preset '" + zigbee_entry->value + "' (known: zigbee154-default)");
  }
  config.wlan_preset = wlan_entry->value;
  config.zigbee_preset = zigbee_entry->value;
  config.scenario.wlan = *wlan;
  config.scenario.zigbee = *zigbee;

  ShapeSettings shape;
  Target target{config.scenario, shape};
  const auto& table = key_table();
  for (const auto& e : entries) {
    if (e.section == "scenario" && (e.key == "wlan_preset" || e.key == "zigbee_preset")) {
      continue;
    }
    const auto def = std::find_if(table.begin(), table.end(),
                                  [&e](const KeyDef& d) { return d.section == e.section && d.key == e.key; });
    if (def == table.end()) {
      throw ConfigError(e.line, "unknown key '" + e.key + "' in [" + e.section + "]");
    }
    const double v = parse_value(e, *def);
    try {
      def->apply(target, v, e.value);
    } catch (const std::invalid_argument& ex) {
      throw ConfigError(e.line, ex.what());
    }
  }

  config.scenario.interferer_shape =
      shape.kind == rf::PsdKind::Uniform
          ? rf::SpectralShape::uniform(config.scenario.wlan.bandwidth_hz)
          : rf::SpectralShape::sinc_squared(config.scenario.wlan.bandwidth_hz, shape.chip_rate_hz);

  try {
    config.scenario.validate();
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(0, std::string("invalid scenario: ") + ex.what());
  }
  return config;
}

ScenarioConfig load_config(const std::string& path)
{
  std::ifstream in(path);
  if (!in) {
    throw ConfigError(0, "cannot read config file '" + path + "'");
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string canonical_text(const sim::Scenario& s)
{
  std::ostringstream out;
  auto num = [&out](std::string_view key, double v) { out << key << " = " << format_number(v) << '\n'; };
  auto opt = [&out](std::string_view key, const std::optional<double>& v) {
    out << key << " = " << (v ? format_number(*v) : std::string("none")) << '\n';
  };
  auto radio = [&](std::string_view prefix, const rf::RadioProfile& p) {
    out << prefix << ".standard = " << rf::to_string(p.standard) << '\n';
    num(std::string(prefix) + ".tx_power_dbm", p.tx_power_dbm);
    num(std::string(prefix) + ".rx_sensitivity_dbm", p.rx_sensitivity_dbm);
    num(std::string(prefix) + ".bit_rate_bps", p.bit_rate_bps);
    num(std::string(prefix) + ".bandwidth_hz", p.bandwidth_hz);
    num(std::string(prefix) + ".center_freq_hz", p.center_freq_hz);
    num(std::string(prefix) + ".backoff_slot_s", p.backoff_slot_s);
    num(std::string(prefix) + ".sifs_s", p.sifs_s);
    opt(std::string(prefix) + ".difs_s", p.difs_s);
    opt(std::string(prefix) + ".cca_s", p.cca_s);
    num(std::string(prefix) + ".cw_min", p.cw_min);
    num(std::string(prefix) + ".payload_bytes", p.payload_bytes);
    num(std::string(prefix) + ".ack_duration_s", p.ack_duration_s);
  };
  radio("wlan", s.wlan);
  radio("zigbee", s.zigbee);
  num("path.wavelength_m", s.path.wavelength_m);
  num("path.breakpoint_m", s.path.breakpoint_m);
  num("path.far_exponent", s.path.far_exponent);
  out << "psd = " << (s.interferer_shape.kind == rf::PsdKind::Uniform ? "uniform" : "sinc2") << '\n';
  num("psd.occupied_bandwidth_hz", s.interferer_shape.occupied_bandwidth_hz);
  num("psd.chip_rate_hz", s.interferer_shape.chip_rate_hz);
  num("d_interferer_m", s.d_interferer_m);
  num("d_link_m", s.d_link_m);
  num("sir_threshold_db", s.sir_threshold_db);
  opt("offered_load_pps", s.zigbee_offered_load_pps);
  out << "ack_enabled = " << (s.ack_enabled ? "true" : "false") << '\n';
  num("duration_s", s.duration_s);
  out << "seed = " << s.seed << '\n';
  opt("sir_soft_success", s.sir_soft_success);
  num("zigbee_phy_header_bytes", s.zigbee_phy_header_bytes);
  num("zigbee_mac_overhead_bytes", s.zigbee_mac_overhead_bytes);
  num("min_be", s.zigbee_csma.min_be);
  num("max_be", s.zigbee_csma.max_be);
  num("max_csma_backoffs", s.zigbee_csma.max_backoffs);
  out << "wlan_cw_doubling = " << (s.wlan_cw_doubling ? "true" : "false") << '\n';
  num("wlan_cw_max", s.wlan_cw_max);
  opt("noise_floor_dbm", s.noise_floor_dbm);
  num("ber.chip_rate_cps", s.ber_model.chip_rate_cps);
  num("ber.bit_rate_bps", s.ber_model.bit_rate_bps);
  num("ber.code_block_m", s.ber_model.code_block_m);
  num("ber.matched_filter_gain", s.ber_model.matched_filter_gain);
  return out.str();
}

} // namespace coex::cli
