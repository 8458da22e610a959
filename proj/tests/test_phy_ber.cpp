#include "coex/phy_ber.hpp"

#include <doctest.h>

#include <boost/math/special_functions/binomial.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <utility>
#include <stdexcept>

using namespace coex::phy;

namespace {

// Reference SER at 100 decimal digits; no cancellation worries at this width.
double ser_reference(double esn0, int m)
{
  using big = boost::multiprecision::cpp_bin_float_100;
  big sum = 0;
  for (int j = 2; j <= m; ++j) {
    const big c = boost::math::binomial_coefficient<big>(static_cast<unsigned>(m), static_cast<unsigned>(j));
    const big term = c * exp(big(esn0) * (big(1) / j - 1));
    sum += (j % 2 == 0) ? term : -term;
  }
  return static_cast<double>(sum / m);
}

} // namespace

TEST_CASE("db conversions")
{
  CHECK(db_to_linear(0.0) == 1.0);
  CHECK(db_to_linear(10.0) == doctest::Approx(10.0));
  CHECK(linear_to_db(100.0) == doctest::Approx(20.0));
  CHECK(std::isinf(linear_to_db(0.0)));
  CHECK(std::isnan(linear_to_db(-1.0)));
}

TEST_CASE("SNR to Eb/N0 and Es/N0")
{
  const auto m915 = BerModel::oqpsk_915();
  const auto m2450 = BerModel::oqpsk_2450();
  CHECK(snr_to_ebn0(1.0, m915) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(snr_to_ebn0(1.0, m2450) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(snr_to_ebn0(0.0, m915) == 0.0);
  CHECK(ebn0_to_esn0(2.5, m915) == doctest::Approx(10.0));
  CHECK_THROWS_AS(snr_to_ebn0(-0.1, m915), std::invalid_argument);
}

TEST_CASE("SER at zero energy is (M-1)/M")
{
  for (int m : {2, 4, 8, 16, 32, 64}) {
    CHECK(ser_noncoherent_mfsk(0.0, m) == doctest::Approx((m - 1.0) / m).epsilon(1e-13));
  }
  CHECK(std::abs(ser_noncoherent_mfsk(0.0, 16) - 15.0 / 16.0) < 1e-12);
}

TEST_CASE("binary FSK matches its closed form")
{
  for (double e : {0.0, 0.3, 1.0, 4.0, 12.0, 40.0}) {
    CHECK(ser_noncoherent_mfsk(e, 2) == doctest::Approx(0.5 * std::exp(-e / 2)).epsilon(1e-13));
  }
}

TEST_CASE("16-FSK SER against frozen high-precision values")
{
  CHECK(ser_noncoherent_mfsk(1.0, 16) == doctest::Approx(0.7734450003009655045).epsilon(1e-13));
  CHECK(ser_noncoherent_mfsk(4.0, 16) == doctest::Approx(0.3275413261233321358).epsilon(1e-13));
  CHECK(ser_noncoherent_mfsk(8.0, 16) == doctest::Approx(0.07230064758499012316).epsilon(1e-12));
  CHECK(ser_noncoherent_mfsk(20.0, 16) == doctest::Approx(0.0003028625398555273195).epsilon(1e-10));
  CHECK(std::abs(ser_noncoherent_mfsk(50.0, 16) - 1.040477504145556195e-10) < 1e-12);
}

TEST_CASE("SER agrees with multiprecision reference across M and esn0")
{
  const std::pair<int, double> cases[] = {{2, 1e-15}, {4, 1e-15}, {8, 1e-14}, {16, 1e-12}, {32, 1e-14}, {64, 1e-14}};
  for (const auto& [m, tol] : cases) {
    for (double e = 0.0; e <= 50.0; e += 0.73) {
      const double ref = ser_reference(e, m);
      CAPTURE(m);
      CAPTURE(e);
      CHECK(std::abs(ser_noncoherent_mfsk(e, m) - ref) < tol);
    }
  }
}

TEST_CASE("SER is monotone non-increasing and bounded")
{
  double prev = ser_noncoherent_mfsk(0.0, 16);
  for (double e = 0.05; e < 60.0; e += 0.05) {
    const double p = ser_noncoherent_mfsk(e, 16);
    REQUIRE(p >= 0.0);
    REQUIRE(p <= prev + 1e-15);
    prev = p;
  }
}

TEST_CASE("SER input validation")
{
  CHECK_THROWS_AS(ser_noncoherent_mfsk(-1.0, 16), std::invalid_argument);
  CHECK_THROWS_AS(ser_noncoherent_mfsk(1.0, 12), std::invalid_argument);
  CHECK_THROWS_AS(ser_noncoherent_mfsk(1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(ser_noncoherent_mfsk(1.0, 128), std::invalid_argument);
  CHECK_THROWS_AS(ser_noncoherent_mfsk(std::nan(""), 16), std::invalid_argument);
}

TEST_CASE("SER to BER")
{
  CHECK(ser_to_ber(15.0 / 16.0, 16) == doctest::Approx(0.5));
  CHECK(ser_to_ber(0.0, 16) == 0.0);
  CHECK(ser_to_ber(1.0, 16) == doctest::Approx(8.0 / 15.0));
  CHECK(ser_to_ber(0.5, 2) == doctest::Approx(0.5));
  CHECK_THROWS_AS(ser_to_ber(1.5, 16), std::invalid_argument);
}

TEST_CASE("BER chain for the 915 MHz PHY")
{
  const auto model = BerModel::oqpsk_915();
  CHECK(std::abs(ber_from_snr(0.0, model) - 0.5) < 1e-12);
  CHECK(ber_from_snr(0.01, model) == doctest::Approx(0.4919447366735195329).epsilon(1e-13));
  CHECK(ber_from_snr(0.05, model) == doctest::Approx(0.4577819311734270114).epsilon(1e-13));
  CHECK(ber_from_snr(0.1, model) == doctest::Approx(0.4125040001605149358).epsilon(1e-13));
  CHECK(ber_from_snr(0.2, model) == doctest::Approx(0.3220506778452640210).epsilon(1e-13));
  CHECK(ber_from_snr(0.5, model) == doctest::Approx(0.1232621052564748776).epsilon(1e-12));
  CHECK(ber_from_snr(1.0, model) == doctest::Approx(0.01658805004577552090).epsilon(1e-11));
}

TEST_CASE("BER decreases with SNR")
{
  for (const auto& model : {BerModel::oqpsk_915(), BerModel::oqpsk_2450()}) {
    double prev = 0.5;
    for (double snr = 0.01; snr < 5.0; snr *= 1.1) {
      const double b = ber_from_snr(snr, model);
      REQUIRE(b < prev);
      prev = b;
    }
  }
  // the 2.4 GHz PHY spreads twice as much, so it is better at equal SNR
  CHECK(ber_from_snr(0.3, BerModel::oqpsk_2450()) < ber_from_snr(0.3, BerModel::oqpsk_915()));
}

TEST_CASE("PER from BER")
{
  CHECK(per_from_ber(0.0, 256) == 0.0);
  CHECK(per_from_ber(1.0, 256) == 1.0);
  CHECK(per_from_ber(0.5, 1) == doctest::Approx(0.5));
  CHECK(per_from_ber(0.001, 256) == doctest::Approx(0.2259571811394917158).epsilon(1e-14));
  // tiny BER keeps relative precision
  CHECK(per_from_ber(1e-15, 100) == doctest::Approx(1e-13).epsilon(1e-9));
  CHECK_THROWS_AS(per_from_ber(-0.1, 256), std::invalid_argument);
  CHECK_THROWS_AS(per_from_ber(0.1, 0), std::invalid_argument);
}

TEST_CASE("PER grows with packet length")
{
  double prev = 0.0;
  for (long bits = 8; bits <= 1024; bits += 8) {
    const double p = per_from_ber(0.01, bits);
    REQUIRE(p > prev);
    prev = p;
  }
}

TEST_CASE("model validation")
{
  BerModel m = BerModel::oqpsk_915();
  CHECK_NOTHROW(m.validate());
  m.code_block_m = 10;
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
  m = BerModel::oqpsk_915();
  m.chip_rate_cps = 1e5;
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
  m = BerModel::oqpsk_915();
  m.matched_filter_gain = 0.0;
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
}

TEST_CASE("channel occupancy from duty cycle")
{
  const auto occ = channel_occupancy(DutyCycleModel{32, 250e3, 0.1});
  CHECK(occ.busy_s == doctest::Approx(1.024e-3).epsilon(1e-15));
  CHECK(occ.idle_s == doctest::Approx(9.216e-3).epsilon(1e-14));
  // printed figure of 92.16 ms corresponds to about 1.1 % duty, not 10 %
  CHECK(occ.idle_s != doctest::Approx(92.16e-3));

  const auto full = channel_occupancy(DutyCycleModel{32, 250e3, 1.0});
  CHECK(full.idle_s == 0.0);

  const auto half = channel_occupancy(DutyCycleModel{10, 250e3, 0.5});
  CHECK(half.idle_s == doctest::Approx(half.busy_s));

  CHECK_THROWS_AS(channel_occupancy(DutyCycleModel{32, 250e3, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(channel_occupancy(DutyCycleModel{0, 250e3, 0.1}), std::invalid_argument);
  CHECK_THROWS_AS(channel_occupancy(DutyCycleModel{32, 250e3, 1.5}), std::invalid_argument);
}
