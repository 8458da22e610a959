#include "coex/mac_timing.hpp"

#include <cmath>
#include <stdexcept>

namespace coex::mac {

IdleGapModel IdleGapModel::from_profile(const rf::RadioProfile& wlan)
{
  if (!wlan.difs_s) {
    throw std::invalid_argument("idle gap model needs a WLAN profile with DIFS");
  }
  return IdleGapModel{*wlan.difs_s, wlan.backoff_slot_s, wlan.cw_min};
}

void IdleGapModel::validate() const
{
  if (difs_s < 0.0 || backoff_slot_s < 0.0) {
    throw std::invalid_argument("idle gap durations must be >= 0");
  }
  if (cw_min < 1) {
    throw std::invalid_argument("cw_min must be >= 1");
  }
}

double IdleGapModel::mean_excess(double threshold_s) const
{
  double sum = 0.0;
  for (int m = 0; m <= cw_min; ++m) {
    const double excess = gap_for(m) - threshold_s;
    if (excess > 0.0) {
      sum += excess;
    }
  }
  return sum / (cw_min + 1);
}

FrameTiming FrameTiming::from_profile(const rf::RadioProfile& zigbee,
                                      int phy_header_bytes,
                                      int mac_overhead_bytes)
{
  if (!zigbee.cca_s) {
    throw std::invalid_argument("frame timing needs an 802.15.4 profile with CCA");
  }
  FrameTiming t;
  t.phy_header_bytes = phy_header_bytes;
  t.mac_overhead_bytes = mac_overhead_bytes;
  t.payload_bytes = zigbee.payload_bytes;
  t.bit_rate_bps = zigbee.bit_rate_bps;
  t.ack_duration_s = zigbee.ack_duration_s;
  t.sifs_s = zigbee.sifs_s;
  t.cca_s = *zigbee.cca_s;
  return t;
}

void FrameTiming::validate() const
{
  if (phy_header_bytes < 0 || mac_overhead_bytes < 0 || payload_bytes < 0 || frame_bytes() < 1) {
    throw std::invalid_argument("frame must be at least one byte with no negative parts");
  }
  if (!(bit_rate_bps > 0.0)) {
    throw std::invalid_argument("bit rate must be positive");
  }
  if (ack_duration_s < 0.0 || sifs_s < 0.0 || cca_s < 0.0) {
    throw std::invalid_argument("durations must be >= 0");
  }
}

double wlan_exchange_duration(const rf::RadioProfile& wlan)
{
  return wlan.payload_bytes * 8.0 / wlan.bit_rate_bps + wlan.sifs_s + wlan.ack_duration_s;
}

double sample_idle_gap(const IdleGapModel& model, RandomStream& rng)
{
  return model.gap_for(rng.uniform_int(0, model.cw_min));
}

double cca_fit_probability(const IdleGapModel& model, double cca_s)
{
  model.validate();
  int fits = 0;
  for (int m = 0; m <= model.cw_min; ++m) {
    if (model.gap_for(m) >= cca_s) {
      ++fits;
    }
  }
  return static_cast<double>(fits) / (model.cw_min + 1);
}

double zigbee_frame_airtime(const FrameTiming& timing)
{
  if (!(timing.bit_rate_bps > 0.0)) {
    throw std::invalid_argument("bit rate must be positive");
  }
  return timing.frame_bytes() * 8.0 / timing.bit_rate_bps;
}

double zigbee_exchange_window(const FrameTiming& timing, bool ack_enabled)
{
  const double data = zigbee_frame_airtime(timing);
  return ack_enabled ? data + timing.sifs_s + timing.ack_duration_s : data;
}

bool r2_clear_condition(double t_idle_s, const FrameTiming& timing)
{
  return t_idle_s >= timing.cca_s + zigbee_frame_airtime(timing) + timing.sifs_s + timing.ack_duration_s;
}

double analytic_success_probability(rf::RangeClass range_class,
                                    double wlan_busy_s,
                                    const IdleGapModel& gaps,
                                    const FrameTiming& zigbee,
                                    bool power_pass,
                                    bool ack_enabled)
{
  gaps.validate();
  zigbee.validate();
  if (wlan_busy_s < 0.0) {
    throw std::invalid_argument("WLAN busy time must be >= 0");
  }
  if (power_pass) {
    return 1.0;
  }
  const double window = zigbee_exchange_window(zigbee, ack_enabled);

  switch (range_class) {
  case rf::RangeClass::Beyond:
    return 1.0;

  case rf::RangeClass::R3:
    return gaps.mean_excess(window) / (wlan_busy_s + gaps.mean_s());

  case rf::RangeClass::R2: {
    const double accessible = gaps.mean_excess(zigbee.cca_s);
    if (accessible <= 0.0) {
      return 0.0;
    }
    return gaps.mean_excess(zigbee.cca_s + window) / accessible;
  }

  case rf::RangeClass::R1: {
    if (!ack_enabled) {
      return 1.0;
    }
    const double accessible = gaps.mean_excess(zigbee.cca_s);
    if (accessible <= 0.0) {
      return 0.0;
    }
    if (gaps.difs_s >= zigbee.sifs_s || gaps.backoff_slot_s <= 0.0) {
      return gaps.difs_s >= zigbee.sifs_s ? 1.0 : 0.0;
    }
    // Largest residual slot count r with DIFS + r * slot < SIFS.
    const double r_max = std::ceil((zigbee.sifs_s - gaps.difs_s) / gaps.backoff_slot_s) - 1.0;
    return gaps.mean_excess(zigbee.cca_s + r_max * gaps.backoff_slot_s) / accessible;
  }
  }
  throw std::invalid_argument("unknown range class");
}

} // namespace coex::mac
