#pragma once

#include "coex/result_table.hpp"
#include "coex/scenario_config.hpp"

#include <string_view>
#include <vector>

namespace coex::cli {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// r1/r2/r3 rows: range_name, meters.
ResultTable cmd_ranges(const ScenarioConfig& config);

struct BerOptions
{
  /// SNR points as linear ratios, emitted in this order.
  std::vector<double> snr_linear;
  long packet_bits = 256;
  phy::BerModel model = phy::BerModel::oqpsk_915();
};

/// snr_db, snr_linear, ber, per rows.
ResultTable cmd_ber(const ScenarioConfig& config, const BerOptions& options);

/// One run_simulation row keyed by distance_m.
ResultTable cmd_sim(const ScenarioConfig& config);

enum class SweepKind { Distance, Offset };

struct SweepOptions
{
  SweepKind kind = SweepKind::Distance;
  /// Metres for Distance, MHz for Offset.
  std::vector<double> values;
};

ResultTable cmd_sweep(const ScenarioConfig& config, const SweepOptions& options);

} // namespace coex::cli
