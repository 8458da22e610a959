#include "coex/phy_ber.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

namespace coex::phy {

namespace {

bool is_power_of_two(int m)
{
  return m >= 2 && (m & (m - 1)) == 0;
}

void check_m(int m)
{
  if (m < 2 || m > 64 || !is_power_of_two(m)) {
    throw std::invalid_argument("code block size M must be a power of two in [2, 64], got " +
                                std::to_string(m));
  }
}

void check_non_negative(double value, const char* what)
{
  if (!(value >= 0.0)) {
    throw std::invalid_argument(std::string(what) + " must be >= 0");
  }
}

} // namespace

BerModel BerModel::oqpsk_915()
{
  return BerModel{1.0e6, 250.0e3, 16, 0.625};
}

BerModel BerModel::oqpsk_2450()
{
  return BerModel{2.0e6, 250.0e3, 16, 0.625};
}

void BerModel::validate() const
{
  if (!(chip_rate_cps > 0.0) || !(bit_rate_bps > 0.0)) {
    throw std::invalid_argument("chip and bit rates must be positive");
  }
  if (chip_rate_cps < bit_rate_bps) {
    throw std::invalid_argument("chip rate must be >= bit rate");
  }
  check_m(code_block_m);
  if (!(matched_filter_gain > 0.0 && matched_filter_gain <= 1.0)) {
    throw std::invalid_argument("matched filter gain must be in (0, 1]");
  }
}

void DutyCycleModel::validate() const
{
  if (packet_bytes < 1) {
    throw std::invalid_argument("packet_bytes must be >= 1");
  }
  if (!(bit_rate_bps > 0.0)) {
    throw std::invalid_argument("bit rate must be positive");
  }
  if (!(duty_cycle > 0.0 && duty_cycle <= 1.0)) {
    throw std::invalid_argument("duty cycle must be in (0, 1]");
  }
}

double db_to_linear(double db)
{
  return std::pow(10.0, db / 10.0);
}

double linear_to_db(double linear)
{
  return 10.0 * std::log10(linear);
}

double snr_to_ebn0(double snr_linear, const BerModel& model)
{
  check_non_negative(snr_linear, "SNR");
  return model.matched_filter_gain * (model.chip_rate_cps / model.bit_rate_bps) * snr_linear;
}

double ebn0_to_esn0(double ebn0, const BerModel& model)
{
  check_non_negative(ebn0, "Eb/N0");
  check_m(model.code_block_m);
  return std::log2(static_cast<double>(model.code_block_m)) * ebn0;
}

namespace {

// Neumaier-compensated alternating binomial sum, sum_{j=2..m} (-1)^j C(m,j) e^{x(1/j-1)} / m.
template <typename Real>
Real alternating_ser(Real x, int m)
{
  using std::exp;
  using std::fabs;
  Real sum = 0;
  Real comp = 0;
  Real binom = m; // C(m, 1)
  for (int j = 2; j <= m; ++j) {
    binom = binom * (m - j + 1) / j;
    const Real mag = binom * exp(x * (Real(1) / j - 1));
    const Real term = (j % 2 == 0) ? mag : Real(-mag);
    const Real t = sum + term;
    if (fabs(sum) >= fabs(term)) {
      comp += (sum - t) + term;
    } else {
      comp += (term - t) + sum;
    }
    sum = t;
  }
  return (sum + comp) / m;
}

} // namespace

double ser_noncoherent_mfsk(double esn0, int m)
{
  check_m(m);
  check_non_negative(esn0, "Es/N0");

  // C(m, m/2) sets the cancellation depth: long double is enough up to
  // m = 16, wider alphabets go through 50-digit arithmetic.
  long double ps = 0.0L;
  if (m <= 16) {
    ps = alternating_ser<long double>(esn0, m);
  } else {
    using big = boost::multiprecision::cpp_bin_float_50;
    ps = static_cast<long double>(alternating_ser<big>(big(esn0), m));
  }

  // Clamp rounding residue into the valid range [0, (M-1)/M].
  const long double upper = static_cast<long double>(m - 1) / m;
  if (ps < 0.0L) {
    ps = 0.0L;
  } else if (ps > upper) {
    ps = upper;
  }
  return static_cast<double>(ps);
}

double ser_to_ber(double ps, int m)
{
  check_m(m);
  if (!(ps >= 0.0 && ps <= 1.0)) {
    throw std::invalid_argument("symbol error probability must be in [0, 1]");
  }
  return ps * (static_cast<double>(m) / 2.0) / static_cast<double>(m - 1);
}

double ber_from_snr(double snr_linear, const BerModel& model)
{
  const double ebn0 = snr_to_ebn0(snr_linear, model);
  const double esn0 = ebn0_to_esn0(ebn0, model);
  return ser_to_ber(ser_noncoherent_mfsk(esn0, model.code_block_m), model.code_block_m);
}

double per_from_ber(double ber, long packet_bits)
{
  if (!(ber >= 0.0 && ber <= 1.0)) {
    throw std::invalid_argument("BER must be in [0, 1]");
  }
  if (packet_bits < 1) {
    throw std::invalid_argument("packet_bits must be >= 1");
  }
  if (ber == 1.0) {
    return 1.0;
  }
  return -std::expm1(static_cast<double>(packet_bits) * std::log1p(-ber));
}

ChannelOccupancy channel_occupancy(const DutyCycleModel& model)
{
  model.validate();
  const double busy = model.packet_bytes * 8.0 / model.bit_rate_bps;
  const double idle = busy * (1.0 - model.duty_cycle) / model.duty_cycle;
  return {busy, idle};
}

} // namespace coex::phy
