#pragma once

#include <optional>
#include <string_view>

namespace coex::rf {

enum class Standard { Wlan11b, Wlan11g, Zigbee154 };

/// Coexistence range class of a WLAN interferer relative to a Zigbee receiver.
///   R1     both networks sense each other
///   R2     Zigbee senses WLAN, WLAN does not sense Zigbee
///   R3     neither senses the other, WLAN still harms Zigbee reception
///   Beyond WLAN interference is below the harm level
enum class RangeClass { R1, R2, R3, Beyond };

std::string_view to_string(RangeClass c);
std::string_view to_string(Standard s);

/// Two-slope path loss: free space up to the breakpoint, then
/// 10 * far_exponent dB per decade.
struct PathLossModel
{
  double wavelength_m = 0.125;
  double breakpoint_m = 8.0;
  double far_exponent = 4.0;

  static PathLossModel from_carrier_hz(double carrier_hz);
  void validate() const;
};

/// PHY/MAC parameter set of one radio. Durations in seconds.
struct RadioProfile
{
  Standard standard = Standard::Zigbee154;
  double tx_power_dbm = 0.0;
  double rx_sensitivity_dbm = -85.0;
  double bit_rate_bps = 250.0e3;
  double bandwidth_hz = 2.0e6;
  double center_freq_hz = 2410.0e6;
  double backoff_slot_s = 320.0e-6;
  double sifs_s = 192.0e-6;
  std::optional<double> difs_s;
  std::optional<double> cca_s = 128.0e-6;
  int cw_min = 7;
  int payload_bytes = 1;
  double ack_duration_s = 352.0e-6;

  /// 802.11b at 11 Mb/s on channel 1: 20 dBm, -76 dBm, 1024-byte frames.
  static RadioProfile wlan11b_default();
  /// IEEE 802.11g reference radio. Only its range figures are meaningful.
  static RadioProfile wlan11g_reference();
  /// 2.4 GHz 802.15.4 on channel 12: 0 dBm, -85 dBm, 1-byte payload.
  static RadioProfile zigbee154_default();

  bool is_wlan() const { return standard != Standard::Zigbee154; }
  void validate() const;
};

enum class PsdKind { Uniform, SincSquared };

/// Power spectral density of a transmitter around its centre frequency.
///
/// SincSquared is sinc^2((f - fc) / chip_rate) truncated to
/// +/- occupied_bandwidth / 2. For 802.11b (11 Mchip/s, 22 MHz) that is the
/// main lobe, which holds about 90.3 % of the untruncated power.
struct SpectralShape
{
  PsdKind kind = PsdKind::Uniform;
  double occupied_bandwidth_hz = 22.0e6;
  double chip_rate_hz = 11.0e6;

  static SpectralShape uniform(double occupied_bandwidth_hz);
  static SpectralShape sinc_squared(double occupied_bandwidth_hz, double chip_rate_hz);
  void validate() const;
};

struct CoexistenceRanges
{
  double r1_m;
  double r2_m;
  double r3_m;
};

double path_loss_db(double d_m, const PathLossModel& model);

/// Inverse of path_loss_db: the distance at which the loss equals loss_db.
double distance_for_path_loss(double loss_db, const PathLossModel& model);

double received_power_dbm(double tx_dbm, double d_m, const PathLossModel& model);

/// Fraction (dB, <= 0) of the interferer's power that lands in the victim's
/// band. std::nullopt means the bands are disjoint: no in-band interference.
std::optional<double> inband_fraction_db(double interferer_center_hz,
                                         const SpectralShape& interferer_shape,
                                         double victim_center_hz,
                                         double victim_bandwidth_hz);

/// Relative PSD value (peak = 1) at a frequency offset from the centre.
double psd_relative(const SpectralShape& shape, double offset_hz);

double sir_db(double signal_dbm, double inband_interference_dbm);

/// Spectrum a profile radiates with when no explicit shape is configured.
SpectralShape default_shape(const RadioProfile& profile);

/// Largest distance at which tx's in-band power at rx reaches rx's
/// sensitivity. Returns 0 when the bands are disjoint (the budget never
/// closes).
double sensing_range_m(const RadioProfile& tx,
                       const RadioProfile& rx,
                       const PathLossModel& path,
                       const SpectralShape& tx_shape);

/// Ranges R1/R2/R3 for a WLAN interferer and a Zigbee victim.
///
///   r1: min of the two mutual sensing ranges
///   r2: range at which Zigbee senses WLAN
///   r3: range at which WLAN in-band power drops to
///       zigbee sensitivity - sir_threshold_db (sensitivity as signal proxy)
///
/// Throws std::domain_error if the WLAN spectrum does not reach the Zigbee
/// channel (every range would be zero).
CoexistenceRanges coexistence_ranges(const RadioProfile& wlan,
                                     const RadioProfile& zigbee,
                                     const PathLossModel& path,
                                     double sir_threshold_db,
                                     const SpectralShape& wlan_shape);

CoexistenceRanges coexistence_ranges(const RadioProfile& wlan,
                                     const RadioProfile& zigbee,
                                     const PathLossModel& path,
                                     double sir_threshold_db = 6.0);

} // namespace coex::rf
