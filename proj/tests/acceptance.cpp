// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "coex/coexistence_sim.hpp"
#include "coex/mac_timing.hpp"
#include "coex/phy_ber.hpp"
#include "coex/rf_propagation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#ifndef COEXSIM_PATH
#error "COEXSIM_PATH must point at the coexsim binary"
#endif
#ifndef GOLDEN_DIR
#error "GOLDEN_DIR must point at tests/golden"
#endif

using namespace coex;

namespace {

int g_failures = 0;

void report(int id, bool ok, const std::string& detail)
{
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) {
    ++g_failures;
  }
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0)
{
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double combined_se(const sim::PerResult& a, const sim::PerResult& b)
{
  return std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
}

// 1. closed-form BER chain anchors
void criterion_1()
{
  const double ber0 = phy::ber_from_snr(0.0, phy::BerModel::oqpsk_915());
  const double ser0 = phy::ser_noncoherent_mfsk(0.0, 16);
  const bool ok = std::abs(ber0 - 0.5) <= 1e-12 && std::abs(ser0 - 15.0 / 16.0) <= 1e-12;
  report(1, ok, fmt("ber(0)=%.17g ser(0,16)=%.17g", ber0, ser0));
}

// 2. non-coherent 16-FSK symbol errors by direct noise simulation
void criterion_2()
{
  constexpr int kTrials = 1000000;
  constexpr int kM = 16;
  std::mt19937_64 gen(20240917);
  std::normal_distribution<double> noise(0.0, std::sqrt(0.5)); // N0 = 1 split over I and Q
  bool ok = true;
  std::string detail;
  for (double esn0 : {1.0, 4.0, 8.0}) {
    const double amp = std::sqrt(esn0);
    long errors = 0;
    for (int t = 0; t < kTrials; ++t) {
      const std::complex<double> s0(amp + noise(gen), noise(gen));
      const double e0 = std::norm(s0);
      bool wrong = false;
      for (int k = 1; k < kM; ++k) {
        const std::complex<double> sk(noise(gen), noise(gen));
        if (std::norm(sk) > e0) {
          wrong = true;
        }
      }
      errors += wrong;
    }
    const double p_hat = static_cast<double>(errors) / kTrials;
    const double p = phy::ser_noncoherent_mfsk(esn0, kM);
    const double se = std::sqrt(p * (1 - p) / kTrials);
    const double z = (p_hat - p) / se;
    ok = ok && std::abs(z) <= 3.0;
    detail += fmt("esn0=%g mc=%.6f model=%.6f z=%+.2f; ", esn0, p_hat, p, z);
  }
  report(2, ok, detail);
}

// 3. duty-cycle channel occupancy
void criterion_3()
{
  const auto occ = phy::channel_occupancy(phy::DutyCycleModel{32, 250e3, 0.1});
  const bool ok = occ.busy_s == 1.024e-3 && std::abs(occ.idle_s - 9.216e-3) <= 1e-15;
  report(3, ok,
         fmt("busy=%.9g ms idle=%.9g ms (printed 92.16 ms implies duty %.4f)", occ.busy_s * 1e3, occ.idle_s * 1e3,
             occ.busy_s / (occ.busy_s + 92.16e-3)));
}

// 4. coexistence ranges against the published 22 / 67 / 95 m
void criterion_4()
{
  const auto r = rf::coexistence_ranges(rf::RadioProfile::wlan11b_default(), rf::RadioProfile::zigbee154_default(),
                                        rf::PathLossModel{0.125, 8.0, 4.0}, 6.0);
  const double e1 = r.r1_m / 22.0 - 1.0;
  const double e2 = r.r2_m / 67.0 - 1.0;
  const double e3 = r.r3_m / 95.0 - 1.0;
  const bool ok = std::abs(e1) <= 0.02 && std::abs(e2) <= 0.05 && std::abs(e3) <= 0.05;
  report(4, ok,
         fmt("r1=%.3f r2=%.3f r3=%.3f m", r.r1_m, r.r2_m, r.r3_m) +
             fmt(" (errors %+.2f%% %+.2f%% %+.2f%%)", 100 * e1, 100 * e2, 100 * e3));
}

// 5. CCA timing window
void criterion_5()
{
  const auto gaps = mac::IdleGapModel::from_profile(rf::RadioProfile::wlan11b_default());
  const auto frame = mac::FrameTiming::from_profile(rf::RadioProfile::zigbee154_default());
  const double window = gaps.gap_for(4);
  const double fit = mac::cca_fit_probability(gaps, frame.cca_s);
  const bool ok = std::abs(window - 130e-6) <= 1e-15 && window >= frame.cca_s && gaps.gap_for(3) < frame.cca_s &&
                  fit == 28.0 / 32.0;
  report(5, ok, fmt("DIFS+4*Tbs=%.6g us CCA=%.6g us fit=%.6g", window * 1e6, frame.cca_s * 1e6, fit));
}

// Enough simulated time for at least 10^4 transmitted packets per point.
constexpr double kSweepDuration = 400.0;

// 6. co-channel distance sweep
void criterion_6()
{
  sim::Scenario base;
  base.duration_s = kSweepDuration;
  const std::vector<double> d = {3.0, 10.0, 30.0, 90.0};
  const auto rows = sim::sweep_distance(base, d);
  bool ok = true;
  std::string detail;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i].result;
    const double expect_rssi = base.wlan.tx_power_dbm - rf::path_loss_db(d[i], base.path);
    ok = ok && r.packets_sent >= 10000 && std::abs(r.rssi_dbm - expect_rssi) <= 1e-6;
    if (i > 0) {
      const auto& prev = rows[i - 1].result;
      ok = ok && r.per <= prev.per + combined_se(prev, r) && r.rssi_dbm < prev.rssi_dbm;
    }
    detail += fmt("%gm per=%.4f se=%.4f rssi=%.2f; ", d[i], r.per, r.std_error, r.rssi_dbm);
  }
  report(6, ok, detail);
}

// 7. channel-offset sweep at 3 m, sinc^2 spectrum
void criterion_7()
{
  sim::Scenario base;
  base.duration_s = kSweepDuration;
  base.interferer_shape = rf::SpectralShape::sinc_squared(22e6, 11e6);
  const std::vector<double> offsets = {2e6, 3e6, 7e6, 8e6};
  const double oracle_db[] = {-7.470272652665963562, -8.0741719402495578555, -13.698526872228860551,
                              -16.358432037220218791};
  const auto rows = sim::sweep_offset(base, offsets);
  bool ok = true;
  std::string detail;
  double worst_db = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto frac = rf::inband_fraction_db(base.wlan.center_freq_hz, base.interferer_shape,
                                             base.wlan.center_freq_hz - offsets[i], base.zigbee.bandwidth_hz);
    ok = ok && frac.has_value();
    if (frac) {
      worst_db = std::max(worst_db, std::abs(*frac - oracle_db[i]));
    }
    const auto& r = rows[i].result;
    ok = ok && r.packets_sent >= 10000;
    if (i > 0) {
      const auto& prev = rows[i - 1].result;
      ok = ok && r.per <= prev.per + 3.0 * combined_se(prev, r);
      ok = ok && frac && *frac < oracle_db[i - 1] + 1e-6;
    }
    detail += fmt("%gMHz per=%.4f se=%.4f; ", offsets[i] / 1e6, r.per, r.std_error);
  }
  ok = ok && worst_db <= 1e-6;
  report(7, ok, detail + fmt("max in-band error %.2e dB", worst_db));
}

// 8. analytic model against the simulator in blind-access range R3
void criterion_8()
{
  int agreed = 0;
  int total = 0;
  std::string detail;
  for (int cw : {31, 63, 127, 255}) {
    for (bool ack : {false, true}) {
      sim::Scenario s;
      s.d_interferer_m = 80.0;
      s.d_link_m = 40.0;
      s.wlan.cw_min = cw;
      s.ack_enabled = ack;
      s.duration_s = 200.0;
      if (sim::classify_range(s) != rf::RangeClass::R3 || s.power_pass()) {
        continue;
      }
      const double q = 1.0 - sim::analytic_success(s);
      const auto r = sim::run_simulation(s);
      const double se = std::sqrt(q * (1 - q) / static_cast<double>(r.packets_sent));
      const bool ok = r.packets_sent >= 10000 && (se > 0 ? std::abs(r.per - q) <= 3.0 * se : r.per == q);
      ++total;
      agreed += ok;
      detail += fmt("cw=%g ack=%g per=%.4f analytic=%.4f; ", cw, ack, r.per, q);
    }
  }
  report(8, total >= 5 && agreed == total, fmt("%g/%g agree. ", agreed, total) + detail);
}

std::string slurp(const std::filesystem::path& p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// 9. byte-identical CSV across invocations and against the golden file
void criterion_9()
{
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("coex_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string args = " sweep --sweep-distance 3,10,30,90 --duration 20 --seed 7 --out ";
  const fs::path a = dir / "a.csv";
  const fs::path b = dir / "b.csv";
  const int rc_a = std::system((std::string(COEXSIM_PATH) + args + a.string()).c_str());
  const int rc_b = std::system((std::string(COEXSIM_PATH) + args + b.string()).c_str());
  const std::string ta = slurp(a);
  const std::string tb = slurp(b);
  const std::string golden = slurp(fs::path(GOLDEN_DIR) / "sweep_distance_seed7.csv");
  fs::remove_all(dir);
  const bool ok = rc_a == 0 && rc_b == 0 && !ta.empty() && ta == tb && ta == golden;
  report(9, ok,
         std::string("runs ") + (ta == tb ? "identical" : "differ") + ", golden " + (ta == golden ? "matches" : "differs"));
}

} // namespace

int main()
{
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  return g_failures == 0 ? 0 : 1;
}
