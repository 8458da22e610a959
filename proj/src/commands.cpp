#include "coex/commands.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

namespace coex::cli {

namespace {

std::string hex64(std::uint64_t v)
{
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void add_metadata(ResultTable& table, const ScenarioConfig& config, std::string_view command)
{
  table.metadata = {
      {"command", std::string(command)},
      {"tool_version", std::string(kToolVersion)},
      {"seed", std::to_string(config.scenario.seed)},
      {"scenario_hash", hex64(config.hash())},
      {"wlan_preset", config.wlan_preset},
      {"zigbee_preset", config.zigbee_preset},
  };
}

const std::vector<std::string> kRunColumns = {"per",        "stderr",       "rssi_dbm",        "range_class",
                                              "packets_sent", "packets_lost", "access_failures", "analytic_per", "sir_db"};

std::vector<Cell> run_cells(double value, const sim::Scenario& s, const sim::PerResult& r)
{
  return {value,
          r.per,
          r.std_error,
          r.rssi_dbm,
          std::string(rf::to_string(r.range_class)),
          static_cast<std::int64_t>(r.packets_sent),
          static_cast<std::int64_t>(r.packets_lost),
          static_cast<std::int64_t>(r.access_failures),
          1.0 - sim::analytic_success(s),
          s.sir_db()};
}

} // namespace

ResultTable cmd_ranges(const ScenarioConfig& config)
{
  const auto& s = config.scenario;
  const auto ranges = rf::coexistence_ranges(s.wlan, s.zigbee, s.path, s.sir_threshold_db, s.interferer_shape);
  ResultTable table;
  add_metadata(table, config, "ranges");
  table.columns = {"range_name", "meters"};
  table.add_row({std::string("r1"), ranges.r1_m});
  table.add_row({std::string("r2"), ranges.r2_m});
  table.add_row({std::string("r3"), ranges.r3_m});
  return table;
}

ResultTable cmd_ber(const ScenarioConfig& config, const BerOptions& options)
{
  if (options.snr_linear.empty()) {
    throw std::invalid_argument("BER grid is empty");
  }
  options.model.validate();
  ResultTable table;
  add_metadata(table, config, "ber");
  table.metadata.emplace_back("packet_bits", std::to_string(options.packet_bits));
  table.metadata.emplace_back("chip_rate_cps", format_number(options.model.chip_rate_cps));
  table.columns = {"snr_db", "snr_linear", "ber", "per"};
  for (const double snr : options.snr_linear) {
    const double ber = phy::ber_from_snr(snr, options.model);
    table.add_row({phy::linear_to_db(snr), snr, ber, phy::per_from_ber(ber, options.packet_bits)});
  }
  return table;
}

ResultTable cmd_sim(const ScenarioConfig& config)
{
  const auto& s = config.scenario;
  const auto result = sim::run_simulation(s);
  ResultTable table;
  add_metadata(table, config, "sim");
  table.columns = {"distance_m"};
  table.columns.insert(table.columns.end(), kRunColumns.begin(), kRunColumns.end());
  table.add_row(run_cells(s.d_interferer_m, s, result));
  return table;
}

ResultTable cmd_sweep(const ScenarioConfig& config, const SweepOptions& options)
{
  if (options.values.empty()) {
    throw std::invalid_argument("sweep list is empty");
  }
  const auto& base = config.scenario;
  ResultTable table;
  add_metadata(table, config, "sweep");

  if (options.kind == SweepKind::Distance) {
    table.columns = {"distance_m"};
    table.columns.insert(table.columns.end(), kRunColumns.begin(), kRunColumns.end());
    const auto rows = sim::sweep_distance(base, options.values);
    for (const auto& row : rows) {
      sim::Scenario s = base;
      s.d_interferer_m = row.value;
      table.add_row(run_cells(row.value, s, row.result));
    }
    return table;
  }

  table.columns = {"offset_mhz"};
  table.columns.insert(table.columns.end(), kRunColumns.begin(), kRunColumns.end());
  table.columns.push_back("inband_dbm");
  std::vector<double> offsets_hz;
  for (const double mhz : options.values) {
    offsets_hz.push_back(mhz * 1e6);
  }
  const auto rows = sim::sweep_offset(base, offsets_hz);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    sim::Scenario s = base;
    s.zigbee.center_freq_hz = s.wlan.center_freq_hz - offsets_hz[i];
    auto cells = run_cells(options.values[i], s, rows[i].result);
    const auto inband = s.wlan_inband_dbm();
    cells.emplace_back(inband ? *inband : -std::numeric_limits<double>::infinity());
    table.add_row(std::move(cells));
  }
  return table;
}

} // namespace coex::cli
