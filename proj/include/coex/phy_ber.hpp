#pragma once

// Closed-form error model of the IEEE 802.15.4 O-QPSK PHY, analysed as
// non-coherent 16-ary orthogonal signalling, plus the duty-cycle channel
// occupancy model used for temporal traffic descriptions.

namespace coex::phy {

/// Modulation/coding constants of the SNR -> BER chain.
struct BerModel
{
  double chip_rate_cps = 1.0e6;
  double bit_rate_bps = 250.0e3;
  int code_block_m = 16;
  /// Matched filtering with half-sine pulse shaping.
  double matched_filter_gain = 0.625;

  /// 915 MHz O-QPSK PHY: 1000 kchip/s, 250 kb/s, Eb/N0 = 2.5 SNR.
  static BerModel oqpsk_915();
  /// 2.4 GHz O-QPSK PHY: 2000 kchip/s, 250 kb/s, Eb/N0 = 5 SNR.
  static BerModel oqpsk_2450();

  /// Throws std::invalid_argument if any invariant is broken.
  void validate() const;
};

struct DutyCycleModel
{
  int packet_bytes = 32;
  double bit_rate_bps = 250.0e3;
  double duty_cycle = 0.1;

  void validate() const;
};

struct ChannelOccupancy
{
  double busy_s;
  double idle_s;
};

double db_to_linear(double db);
double linear_to_db(double linear);

double snr_to_ebn0(double snr_linear, const BerModel& model);
double ebn0_to_esn0(double ebn0, const BerModel& model);

/// Symbol error probability of non-coherent orthogonal M-FSK:
///   (1/M) sum_{j=2..M} (-1)^j C(M,j) exp(esn0 (1/j - 1)).
///
/// The alternating sum cancels heavily (terms of order C(16,8) = 12870 for a
/// result that may be below 1e-9), so it is accumulated with exact binomials
/// and Neumaier-compensated summation: long double up to M = 16, 50-digit
/// floats above. Absolute error is below 1e-12 for esn0 in [0, 50].
/// Supported M: powers of two in [2, 64].
double ser_noncoherent_mfsk(double esn0, int m);

double ser_to_ber(double ps, int m);

/// Full chain SNR -> Eb/N0 -> Es/N0 -> SER -> BER.
double ber_from_snr(double snr_linear, const BerModel& model);

/// 1 - (1 - ber)^packet_bits under independent bit errors.
double per_from_ber(double ber, long packet_bits);

ChannelOccupancy channel_occupancy(const DutyCycleModel& model);

} // namespace coex::phy
