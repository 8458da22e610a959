#pragma once

#include "coex/random.hpp"
#include "coex/rf_propagation.hpp"

namespace coex::mac {

/// WLAN idle gap between two exchanges: DIFS + m * slot, m uniform on the
/// integers {0, ..., cw_min}.
struct IdleGapModel
{
  double difs_s = 50.0e-6;
  double backoff_slot_s = 20.0e-6;
  int cw_min = 31;

  static IdleGapModel from_profile(const rf::RadioProfile& wlan);
  void validate() const;

  double gap_for(int m) const { return difs_s + m * backoff_slot_s; }
  double min_s() const { return difs_s; }
  double max_s() const { return gap_for(cw_min); }
  double mean_s() const { return difs_s + 0.5 * cw_min * backoff_slot_s; }

  /// E[(gap - threshold)^+], exact over the discrete support.
  double mean_excess(double threshold_s) const;
};

/// Air-time ingredients of one Zigbee data/ACK exchange.
struct FrameTiming
{
  int phy_header_bytes = 6;
  /// MAC header (9 B) plus FCS (2 B).
  int mac_overhead_bytes = 11;
  int payload_bytes = 1;
  double bit_rate_bps = 250.0e3;
  double ack_duration_s = 352.0e-6;
  double sifs_s = 192.0e-6;
  double cca_s = 128.0e-6;

  static FrameTiming from_profile(const rf::RadioProfile& zigbee,
                                  int phy_header_bytes = 6,
                                  int mac_overhead_bytes = 11);
  int frame_bytes() const { return phy_header_bytes + mac_overhead_bytes + payload_bytes; }
  void validate() const;
};

/// Air time of one WLAN data + SIFS + ACK exchange.
double wlan_exchange_duration(const rf::RadioProfile& wlan);

double sample_idle_gap(const IdleGapModel& model, RandomStream& rng);

/// Share of backoff draws m whose idle gap is long enough to hold a CCA.
double cca_fit_probability(const IdleGapModel& model, double cca_s);

double zigbee_frame_airtime(const FrameTiming& timing);

/// Time a Zigbee exchange keeps the channel: data, plus SIFS and ACK when
/// acknowledgements are on.
double zigbee_exchange_window(const FrameTiming& timing, bool ack_enabled);

/// Non-overlap condition in range R2: t_idle >= CCA + t_p + SIFS + ACK.
bool r2_clear_condition(double t_idle_s, const FrameTiming& timing);

/// Probability that a Zigbee packet put on the air is received.
///
/// The WLAN channel is an alternating renewal process of fixed busy periods
/// (data + SIFS + ACK) and idle gaps drawn from `gaps`. A packet succeeds when
/// power_pass holds (SIR above threshold) or its exchange does not overlap a
/// WLAN frame.
///
///   R3     blind transmission: P = E[(I - w)^+] / (busy + E[I])
///   R2     CCA must fit first; P = E[(I - cca - w)^+] / E[(I - cca)^+]
///   R1     WLAN defers to Zigbee, so only the ACK can be hit: the frozen WLAN
///          resumes with DIFS + r slots and collides if that is shorter than
///          the Zigbee SIFS. Approximated with the residual gap after CCA.
///   Beyond 1
///
/// R1 and R2 are conditioned on a clear CCA (channel access failures are
/// counted separately by the simulator).
double analytic_success_probability(rf::RangeClass range_class,
                                    double wlan_busy_s,
                                    const IdleGapModel& gaps,
                                    const FrameTiming& zigbee,
                                    bool power_pass,
                                    bool ack_enabled);

} // namespace coex::mac
