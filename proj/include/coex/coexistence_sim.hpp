#pragma once

#include "coex/mac_timing.hpp"
#include "coex/phy_ber.hpp"
#include "coex/rf_propagation.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace coex::sim {

/// Unslotted 802.15.4 CSMA-CA constants.
struct CsmaParams
{
  int min_be = 3;
  int max_be = 5;
  int max_backoffs = 4;
};

/// One coexistence experiment: a Zigbee link next to a saturated 802.11b link.
struct Scenario
{
  rf::RadioProfile wlan = rf::RadioProfile::wlan11b_default();
  rf::RadioProfile zigbee = rf::RadioProfile::zigbee154_default();
  rf::PathLossModel path{};
  rf::SpectralShape interferer_shape = rf::SpectralShape::uniform(22.0e6);

  /// WLAN transmitter to Zigbee receiver.
  double d_interferer_m = 3.0;
  /// Zigbee transmitter to Zigbee receiver.
  double d_link_m = 1.0;
  double sir_threshold_db = 6.0;
  /// Periodic Zigbee packets per second; std::nullopt means saturated.
  std::optional<double> zigbee_offered_load_pps = 50.0;
  bool ack_enabled = true;
  double duration_s = 10.0;
  std::uint64_t seed = 1;
  /// Success probability of an overlapped exchange that passes the SIR test;
  /// drawn once per data/ACK exchange.
  std::optional<double> sir_soft_success;

  int zigbee_phy_header_bytes = 6;
  int zigbee_mac_overhead_bytes = 11;
  CsmaParams zigbee_csma{};

  /// Double the WLAN contention window when a Zigbee frame hits WLAN data.
  bool wlan_cw_doubling = false;
  int wlan_cw_max = 1023;

  /// Thermal noise floor for a residual bit-error floor; off when unset.
  std::optional<double> noise_floor_dbm;
  phy::BerModel ber_model = phy::BerModel::oqpsk_2450();

  mac::FrameTiming zigbee_frame() const;
  mac::IdleGapModel wlan_gaps() const;

  /// WLAN power (all of it, not only in-band) at the Zigbee receiver.
  double wlan_rssi_dbm() const;
  /// WLAN in-band interference at the Zigbee receiver; nullopt if disjoint.
  std::optional<double> wlan_inband_dbm() const;
  double zigbee_signal_dbm() const;
  /// +inf when the WLAN spectrum misses the Zigbee channel.
  double sir_db() const;
  bool power_pass() const { return sir_db() > sir_threshold_db; }

  void validate() const;
};

struct PerResult
{
  std::int64_t packets_sent = 0;
  std::int64_t packets_lost = 0;
  /// Packets dropped by CSMA-CA before reaching the air; not in packets_sent.
  std::int64_t access_failures = 0;
  /// lost / sent; NaN when nothing was sent.
  double per = 0.0;
  double std_error = 0.0;
  double rssi_dbm = 0.0;
  rf::RangeClass range_class = rf::RangeClass::Beyond;
};

struct SweepRow
{
  double value;
  PerResult result;
};

rf::RangeClass classify_range(const Scenario& scenario);

/// Analytic success probability of a transmitted Zigbee packet.
double analytic_success(const Scenario& scenario);

PerResult run_simulation(const Scenario& scenario);

/// Row i runs with seed derive_seed(base.seed, i). Rows may execute on
/// several threads; output order follows the input list.
std::vector<SweepRow> sweep_distance(const Scenario& base, std::span<const double> distances_m);

/// Moves the Zigbee channel to wlan centre - offset for each offset.
std::vector<SweepRow> sweep_offset(const Scenario& base, std::span<const double> offsets_hz);

} // namespace coex::sim
