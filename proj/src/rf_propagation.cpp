#include "coex/rf_propagation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace coex::rf {

namespace {

constexpr double kSpeedOfLight = 299792458.0;

double sinc_squared(double x)
{
  if (x == 0.0) {
    return 1.0;
  }
  const double px = std::numbers::pi * x;
  const double s = std::sin(px) / px;
  return s * s;
}

double simpson(double a, double fa, double b, double fb, double fm)
{
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double adaptive_simpson(F& f, double a, double fa, double b, double fb, double m, double fm,
                        double whole, double tol, int depth)
{
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(a, fa, m, fm, flm);
  const double right = simpson(m, fm, b, fb, frm);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

/// Integral of f over [a, b] to absolute tolerance tol.
template <typename F>
double integrate(F f, double a, double b, double tol)
{
  if (b <= a) {
    return 0.0;
  }
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(m);
  const double whole = simpson(a, fa, b, fb, fm);
  return adaptive_simpson(f, a, fa, b, fb, m, fm, whole, tol, 50);
}

} // namespace

std::string_view to_string(RangeClass c)
{
  switch (c) {
  case RangeClass::R1:
    return "R1";
  case RangeClass::R2:
    return "R2";
  case RangeClass::R3:
    return "R3";
  case RangeClass::Beyond:
    return "Beyond";
  }
  return "?";
}

std::string_view to_string(Standard s)
{
  switch (s) {
  case Standard::Wlan11b:
    return "wlan11b";
  case Standard::Wlan11g:
    return "wlan11g";
  case Standard::Zigbee154:
    return "zigbee154";
  }
  return "?";
}

PathLossModel PathLossModel::from_carrier_hz(double carrier_hz)
{
  if (!(carrier_hz > 0.0)) {
    throw std::invalid_argument("carrier frequency must be positive");
  }
  return PathLossModel{kSpeedOfLight / carrier_hz, 8.0, 4.0};
}

void PathLossModel::validate() const
{
  if (!(wavelength_m > 0.0)) {
    throw std::invalid_argument("wavelength must be positive");
  }
  if (!(breakpoint_m > 0.0)) {
    throw std::invalid_argument("breakpoint distance must be positive");
  }
  if (!(far_exponent >= 2.0)) {
    throw std::invalid_argument("far-field path loss exponent must be >= 2");
  }
}

RadioProfile RadioProfile::wlan11b_default()
{
  RadioProfile p;
  p.standard = Standard::Wlan11b;
  p.tx_power_dbm = 20.0;
  p.rx_sensitivity_dbm = -76.0;
  p.bit_rate_bps = 11.0e6;
  p.bandwidth_hz = 22.0e6;
  p.center_freq_hz = 2412.0e6;
  p.backoff_slot_s = 20.0e-6;
  p.sifs_s = 10.0e-6;
  p.difs_s = 50.0e-6;
  p.cca_s.reset();
  p.cw_min = 31;
  p.payload_bytes = 1024;
  // 14-byte ACK at 1 Mb/s behind a 192 us long PLCP preamble.
  p.ack_duration_s = 304.0e-6;
  return p;
}

RadioProfile RadioProfile::wlan11g_reference()
{
  RadioProfile p;
  p.standard = Standard::Wlan11g;
  p.tx_power_dbm = 20.0;
  // 6 Mb/s OFDM minimum sensitivity.
  p.rx_sensitivity_dbm = -82.0;
  p.bit_rate_bps = 54.0e6;
  p.bandwidth_hz = 20.0e6;
  p.center_freq_hz = 2412.0e6;
  p.backoff_slot_s = 9.0e-6;
  p.sifs_s = 10.0e-6;
  p.difs_s = 28.0e-6;
  p.cca_s.reset();
  p.cw_min = 15;
  p.payload_bytes = 1024;
  p.ack_duration_s = 44.0e-6;
  return p;
}

RadioProfile RadioProfile::zigbee154_default()
{
  RadioProfile p;
  p.standard = Standard::Zigbee154;
  p.tx_power_dbm = 0.0;
  p.rx_sensitivity_dbm = -85.0;
  p.bit_rate_bps = 250.0e3;
  p.bandwidth_hz = 2.0e6;
  // Not an 802.15.4 channel centre (2405 + 5k MHz); kept as tabulated.
  p.center_freq_hz = 2410.0e6;
  p.backoff_slot_s = 320.0e-6;
  p.sifs_s = 192.0e-6;
  p.difs_s.reset();
  p.cca_s = 128.0e-6;
  p.cw_min = 7;
  p.payload_bytes = 1;
  // 11-byte ACK frame (6 B PHY + 5 B MAC) at 250 kb/s.
  p.ack_duration_s = 352.0e-6;
  return p;
}

void RadioProfile::validate() const
{
  const std::string name(to_string(standard));
  if (!(tx_power_dbm > rx_sensitivity_dbm)) {
    throw std::invalid_argument(name + ": tx power must exceed rx sensitivity");
  }
  if (!(bandwidth_hz > 0.0) || !(bit_rate_bps > 0.0) || !(center_freq_hz > 0.0)) {
    throw std::invalid_argument(name + ": bandwidth, bit rate and centre frequency must be positive");
  }
  if (cw_min < 1) {
    throw std::invalid_argument(name + ": cw_min must be >= 1");
  }
  if (backoff_slot_s < 0.0 || sifs_s < 0.0 || ack_duration_s < 0.0) {
    throw std::invalid_argument(name + ": durations must be >= 0");
  }
  if (payload_bytes < 1) {
    throw std::invalid_argument(name + ": payload must be >= 1 byte");
  }
  if (is_wlan()) {
    if (!difs_s || cca_s) {
      throw std::invalid_argument(name + ": WLAN profiles define DIFS and no CCA");
    }
    if (*difs_s < 0.0) {
      throw std::invalid_argument(name + ": DIFS must be >= 0");
    }
  } else {
    if (difs_s || !cca_s) {
      throw std::invalid_argument(name + ": 802.15.4 profiles define CCA and no DIFS");
    }
    if (*cca_s < 0.0) {
      throw std::invalid_argument(name + ": CCA must be >= 0");
    }
    // 9-byte MAC header plus 2-byte FCS share the 128-byte PSDU
    if (payload_bytes + 11 > 128) {
      throw std::invalid_argument(name + ": payload plus 11 bytes of MAC framing exceeds the 128-byte PSDU");
    }
  }
}

SpectralShape SpectralShape::uniform(double occupied_bandwidth_hz)
{
  return SpectralShape{PsdKind::Uniform, occupied_bandwidth_hz, 0.0};
}

SpectralShape SpectralShape::sinc_squared(double occupied_bandwidth_hz, double chip_rate_hz)
{
  return SpectralShape{PsdKind::SincSquared, occupied_bandwidth_hz, chip_rate_hz};
}

void SpectralShape::validate() const
{
  if (!(occupied_bandwidth_hz > 0.0)) {
    throw std::invalid_argument("occupied bandwidth must be positive");
  }
  if (kind == PsdKind::SincSquared && !(chip_rate_hz > 0.0)) {
    throw std::invalid_argument("sinc^2 PSD needs a positive chip rate");
  }
}

double path_loss_db(double d_m, const PathLossModel& model)
{
  if (!(d_m > 0.0)) {
    throw std::invalid_argument("distance must be positive");
  }
  model.validate();
  const double four_pi_over_lambda = 4.0 * std::numbers::pi / model.wavelength_m;
  if (d_m <= model.breakpoint_m) {
    return 20.0 * std::log10(four_pi_over_lambda * d_m);
  }
  return 20.0 * std::log10(four_pi_over_lambda * model.breakpoint_m) +
         10.0 * model.far_exponent * std::log10(d_m / model.breakpoint_m);
}

double distance_for_path_loss(double loss_db, const PathLossModel& model)
{
  model.validate();
  const double at_breakpoint = path_loss_db(model.breakpoint_m, model);
  if (loss_db <= at_breakpoint) {
    return model.wavelength_m / (4.0 * std::numbers::pi) * std::pow(10.0, loss_db / 20.0);
  }
  return model.breakpoint_m *
         std::pow(10.0, (loss_db - at_breakpoint) / (10.0 * model.far_exponent));
}

double received_power_dbm(double tx_dbm, double d_m, const PathLossModel& model)
{
  return tx_dbm - path_loss_db(d_m, model);
}

double psd_relative(const SpectralShape& shape, double offset_hz)
{
  if (std::fabs(offset_hz) > 0.5 * shape.occupied_bandwidth_hz) {
    return 0.0;
  }
  if (shape.kind == PsdKind::Uniform) {
    return 1.0;
  }
  return sinc_squared(offset_hz / shape.chip_rate_hz);
}

std::optional<double> inband_fraction_db(double interferer_center_hz,
                                         const SpectralShape& interferer_shape,
                                         double victim_center_hz,
                                         double victim_bandwidth_hz)
{
  interferer_shape.validate();
  if (!(victim_bandwidth_hz > 0.0)) {
    throw std::invalid_argument("victim bandwidth must be positive");
  }

  // Work in offsets from the interferer centre.
  const double half_occ = 0.5 * interferer_shape.occupied_bandwidth_hz;
  const double offset = victim_center_hz - interferer_center_hz;
  const double lo = std::max(offset - 0.5 * victim_bandwidth_hz, -half_occ);
  const double hi = std::min(offset + 0.5 * victim_bandwidth_hz, half_occ);
  if (!(hi > lo)) {
    return std::nullopt;
  }

  if (interferer_shape.kind == PsdKind::Uniform) {
    return 10.0 * std::log10((hi - lo) / interferer_shape.occupied_bandwidth_hz);
  }

  // Integrate in units of the chip rate to keep the integrand O(1).
  const double chip = interferer_shape.chip_rate_hz;
  auto psd = [](double x) { return sinc_squared(x); };
  const double total = integrate(psd, -half_occ / chip, 0.0, 1e-13) +
                       integrate(psd, 0.0, half_occ / chip, 1e-13);
  const double tol = 1e-9 * total;
  double inside = 0.0;
  if (lo < 0.0 && hi > 0.0) {
    // Split at the peak so each piece is monotone within the main lobe.
    inside = integrate(psd, lo / chip, 0.0, 0.5 * tol) + integrate(psd, 0.0, hi / chip, 0.5 * tol);
  } else {
    inside = integrate(psd, lo / chip, hi / chip, tol);
  }
  return 10.0 * std::log10(inside / total);
}

double sir_db(double signal_dbm, double inband_interference_dbm)
{
  return signal_dbm - inband_interference_dbm;
}

SpectralShape default_shape(const RadioProfile& profile)
{
  return SpectralShape::uniform(profile.bandwidth_hz);
}

double sensing_range_m(const RadioProfile& tx,
                       const RadioProfile& rx,
                       const PathLossModel& path,
                       const SpectralShape& tx_shape)
{
  tx.validate();
  rx.validate();
  const auto fraction = inband_fraction_db(tx.center_freq_hz, tx_shape, rx.center_freq_hz, rx.bandwidth_hz);
  if (!fraction) {
    return 0.0;
  }
  const double budget_db = tx.tx_power_dbm + *fraction - rx.rx_sensitivity_dbm;
  return distance_for_path_loss(budget_db, path);
}

CoexistenceRanges coexistence_ranges(const RadioProfile& wlan,
                                     const RadioProfile& zigbee,
                                     const PathLossModel& path,
                                     double sir_threshold_db,
                                     const SpectralShape& wlan_shape)
{
  if (!(sir_threshold_db >= 0.0)) {
    throw std::invalid_argument("SIR threshold must be >= 0 dB");
  }
  const auto wlan_fraction =
      inband_fraction_db(wlan.center_freq_hz, wlan_shape, zigbee.center_freq_hz, zigbee.bandwidth_hz);
  if (!wlan_fraction) {
    throw std::domain_error("WLAN spectrum does not overlap the Zigbee channel");
  }
  const double zigbee_hears_wlan = sensing_range_m(wlan, zigbee, path, wlan_shape);
  const double wlan_hears_zigbee = sensing_range_m(zigbee, wlan, path, default_shape(zigbee));

  const double harm_budget_db =
      wlan.tx_power_dbm + *wlan_fraction - (zigbee.rx_sensitivity_dbm - sir_threshold_db);

  CoexistenceRanges r{};
  r.r1_m = std::min(zigbee_hears_wlan, wlan_hears_zigbee);
  r.r2_m = zigbee_hears_wlan;
  r.r3_m = distance_for_path_loss(harm_budget_db, path);
  if (!(r.r1_m > 0.0)) {
    throw std::domain_error("Zigbee spectrum does not overlap the WLAN channel");
  }
  return r;
}

CoexistenceRanges coexistence_ranges(const RadioProfile& wlan,
                                     const RadioProfile& zigbee,
                                     const PathLossModel& path,
                                     double sir_threshold_db)
{
  return coexistence_ranges(wlan, zigbee, path, sir_threshold_db, default_shape(wlan));
}

} // namespace coex::rf
