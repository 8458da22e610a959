#include "coex/coexistence_sim.hpp"

#include "coex/event_queue.hpp"
#include "coex/random.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace coex::sim {

mac::FrameTiming Scenario::zigbee_frame() const
{
  return mac::FrameTiming::from_profile(zigbee, zigbee_phy_header_bytes, zigbee_mac_overhead_bytes);
}

mac::IdleGapModel Scenario::wlan_gaps() const
{
  return mac::IdleGapModel::from_profile(wlan);
}

double Scenario::wlan_rssi_dbm() const
{
  return rf::received_power_dbm(wlan.tx_power_dbm, d_interferer_m, path);
}

std::optional<double> Scenario::wlan_inband_dbm() const
{
  const auto fraction = rf::inband_fraction_db(wlan.center_freq_hz, interferer_shape, zigbee.center_freq_hz,
                                               zigbee.bandwidth_hz);
  if (!fraction) {
    return std::nullopt;
  }
  return wlan_rssi_dbm() + *fraction;
}

double Scenario::zigbee_signal_dbm() const
{
  return rf::received_power_dbm(zigbee.tx_power_dbm, d_link_m, path);
}

double Scenario::sir_db() const
{
  const auto interference = wlan_inband_dbm();
  if (!interference) {
    return std::numeric_limits<double>::infinity();
  }
  return rf::sir_db(zigbee_signal_dbm(), *interference);
}

void Scenario::validate() const
{
  if (!wlan.is_wlan()) {
    throw std::invalid_argument("interferer profile must be a WLAN profile");
  }
  if (zigbee.is_wlan()) {
    throw std::invalid_argument("victim profile must be an 802.15.4 profile");
  }
  wlan.validate();
  zigbee.validate();
  path.validate();
  interferer_shape.validate();
  ber_model.validate();
  if (!(d_interferer_m > 0.0) || !(d_link_m > 0.0)) {
    throw std::invalid_argument("distances must be > 0 m");
  }
  if (!(duration_s > 0.0)) {
    throw std::invalid_argument("duration must be > 0 s");
  }
  if (!(sir_threshold_db >= 0.0 && sir_threshold_db <= 20.0)) {
    throw std::invalid_argument("SIR threshold must be in [0, 20] dB");
  }
  if (zigbee_offered_load_pps && !(*zigbee_offered_load_pps > 0.0)) {
    throw std::invalid_argument("offered load must be > 0 packets/s");
  }
  if (sir_soft_success && !(*sir_soft_success > 0.0 && *sir_soft_success <= 1.0)) {
    throw std::invalid_argument("soft SIR success probability must be in (0, 1]");
  }
  if (zigbee_csma.min_be < 0 || zigbee_csma.max_be < zigbee_csma.min_be || zigbee_csma.max_be > 20 ||
      zigbee_csma.max_backoffs < 0) {
    throw std::invalid_argument("CSMA-CA needs 0 <= min_be <= max_be <= 20 and max_backoffs >= 0");
  }
  if (wlan_cw_max < wlan.cw_min) {
    throw std::invalid_argument("WLAN cw_max must be >= cw_min");
  }
  if (zigbee_mac_overhead_bytes + zigbee.payload_bytes > 128) {
    throw std::invalid_argument("Zigbee MAC overhead plus payload exceeds the 128-byte PSDU");
  }
  zigbee_frame().validate();
}

rf::RangeClass classify_range(const Scenario& scenario)
{
  scenario.validate();
  if (!scenario.wlan_inband_dbm()) {
    return rf::RangeClass::Beyond;
  }
  const auto ranges = rf::coexistence_ranges(scenario.wlan, scenario.zigbee, scenario.path,
                                             scenario.sir_threshold_db, scenario.interferer_shape);
  const double d = scenario.d_interferer_m;
  if (d <= ranges.r1_m) {
    return rf::RangeClass::R1;
  }
  if (d <= ranges.r2_m) {
    return rf::RangeClass::R2;
  }
  if (d <= ranges.r3_m) {
    return rf::RangeClass::R3;
  }
  return rf::RangeClass::Beyond;
}

double analytic_success(const Scenario& scenario)
{
  const auto range_class = classify_range(scenario);
  const double busy = mac::wlan_exchange_duration(scenario.wlan);
  const auto gaps = scenario.wlan_gaps();
  const auto frame = scenario.zigbee_frame();
  const bool pass = scenario.power_pass();
  if (pass && scenario.sir_soft_success) {
    const double clear =
        mac::analytic_success_probability(range_class, busy, gaps, frame, false, scenario.ack_enabled);
    return clear + (1.0 - clear) * *scenario.sir_soft_success;
  }
  return mac::analytic_success_probability(range_class, busy, gaps, frame, pass, scenario.ack_enabled);
}

namespace {

struct Interval
{
  double start;
  double end;
};

bool intersects(double a_start, double a_end, double b_start, double b_end)
{
  return a_start < b_end && b_start < a_end;
}

class Simulation
{
public:
  explicit Simulation(const Scenario& scenario);
  PerResult run();

private:
  enum class WlanPhase { Deferring, Difs, Slots, Transmitting };

  // WLAN station (saturated, CSMA/CA with frozen backoff).
  void wlan_begin_contention();
  void wlan_start_difs();
  void wlan_difs_done();
  void wlan_transmit();
  void wlan_exchange_done(Interval data);
  void wlan_medium_busy();
  void wlan_medium_idle();

  // Zigbee sender/receiver pair (unslotted CSMA-CA).
  void zigbee_arrival();
  void zigbee_start_packet();
  void zigbee_backoff();
  void zigbee_start_cca();
  void zigbee_end_cca();
  void zigbee_start_data();
  void zigbee_end_data();
  void zigbee_start_ack();
  void zigbee_end_ack();
  void zigbee_resolve(bool received);
  void zigbee_finish_packet();
  void zigbee_on_air(double end);
  void zigbee_off_air();

  bool wlan_overlaps(double start, double end);
  bool zigbee_overlaps(double start, double end);
  bool frame_survives(double start, double end, double noise_loss);

  const Scenario& m_sc;
  EventQueue m_queue;
  RandomStream m_rng;

  rf::RangeClass m_class;
  bool m_zigbee_senses_wlan;
  bool m_wlan_senses_zigbee;
  bool m_interference;
  bool m_power_pass;
  double m_data_noise_loss = 0.0;
  double m_ack_noise_loss = 0.0;

  // WLAN
  double m_wlan_data_s;
  double m_wlan_sifs_s;
  double m_wlan_ack_s;
  double m_difs_s;
  double m_slot_s;
  int m_cw;
  WlanPhase m_phase = WlanPhase::Deferring;
  int m_slots_left = 0;
  double m_phase_start = 0.0;
  EventId m_timer = 0;
  std::deque<Interval> m_wlan_frames;

  // Zigbee
  mac::FrameTiming m_frame;
  double m_data_s;
  double m_unit_backoff_s;
  int m_zigbee_on_air = 0;
  std::deque<Interval> m_zigbee_frames;
  bool m_active = false;
  bool m_arrivals_done = false;
  std::int64_t m_queued = 0;
  int m_nb = 0;
  int m_be = 0;
  double m_cca_start = 0.0;
  double m_tx_start = 0.0;
  bool m_soft_drawn = false;

  PerResult m_result;
};

Simulation::Simulation(const Scenario& scenario)
    : m_sc(scenario), m_rng(scenario.seed), m_frame(scenario.zigbee_frame())
{
  m_class = classify_range(scenario);
  m_zigbee_senses_wlan = m_class == rf::RangeClass::R1 || m_class == rf::RangeClass::R2;
  m_wlan_senses_zigbee = m_class == rf::RangeClass::R1;
  m_interference = m_class != rf::RangeClass::Beyond;
  m_power_pass = scenario.power_pass();

  if (scenario.noise_floor_dbm) {
    const double snr_db = scenario.zigbee_signal_dbm() - *scenario.noise_floor_dbm;
    const double ber = phy::ber_from_snr(phy::db_to_linear(snr_db), scenario.ber_model);
    m_data_noise_loss = phy::per_from_ber(ber, static_cast<long>(m_frame.frame_bytes()) * 8);
    const long ack_bits = std::max(1L, std::lround(m_frame.ack_duration_s * m_frame.bit_rate_bps));
    m_ack_noise_loss = phy::per_from_ber(ber, ack_bits);
  }

  m_wlan_data_s = scenario.wlan.payload_bytes * 8.0 / scenario.wlan.bit_rate_bps;
  m_wlan_sifs_s = scenario.wlan.sifs_s;
  m_wlan_ack_s = scenario.wlan.ack_duration_s;
  m_difs_s = *scenario.wlan.difs_s;
  m_slot_s = scenario.wlan.backoff_slot_s;
  m_cw = scenario.wlan.cw_min;

  m_data_s = mac::zigbee_frame_airtime(m_frame);
  m_unit_backoff_s = scenario.zigbee.backoff_slot_s;

  m_result.range_class = m_class;
  m_result.rssi_dbm = scenario.wlan_rssi_dbm();
}

PerResult Simulation::run()
{
  wlan_begin_contention();

  if (m_sc.zigbee_offered_load_pps) {
    const double period = 1.0 / *m_sc.zigbee_offered_load_pps;
    m_queue.schedule(m_rng.uniform01() * period, [this] { zigbee_arrival(); });
  } else {
    m_queued = 1;
    m_queue.schedule(0.0, [this] { zigbee_start_packet(); });
  }

  while (!(m_arrivals_done && !m_active && m_queued == 0)) {
    if (!m_queue.step()) {
      break;
    }
  }

  auto& r = m_result;
  if (r.packets_sent > 0) {
    r.per = static_cast<double>(r.packets_lost) / static_cast<double>(r.packets_sent);
    r.std_error = std::sqrt(r.per * (1.0 - r.per) / static_cast<double>(r.packets_sent));
  } else {
    r.per = std::numeric_limits<double>::quiet_NaN();
    r.std_error = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

// ---------------------------------------------------------------- WLAN

void Simulation::wlan_begin_contention()
{
  m_slots_left = m_rng.uniform_int(0, m_cw);
  if (m_wlan_senses_zigbee && m_zigbee_on_air > 0) {
    m_phase = WlanPhase::Deferring;
  } else {
    wlan_start_difs();
  }
}

void Simulation::wlan_start_difs()
{
  m_phase = WlanPhase::Difs;
  m_phase_start = m_queue.now();
  m_timer = m_queue.schedule(m_queue.now() + m_difs_s, [this] { wlan_difs_done(); });
}

void Simulation::wlan_difs_done()
{
  if (m_slots_left == 0) {
    wlan_transmit();
    return;
  }
  m_phase = WlanPhase::Slots;
  m_phase_start = m_queue.now();
  m_timer = m_queue.schedule(m_queue.now() + m_slots_left * m_slot_s, [this] { wlan_transmit(); });
}

void Simulation::wlan_transmit()
{
  m_phase = WlanPhase::Transmitting;
  const double t = m_queue.now();
  const Interval data{t, t + m_wlan_data_s};
  const double ack_start = data.end + m_wlan_sifs_s;
  // No pending Zigbee query starts before the current packet's last CCA.
  const double horizon = m_active ? m_cca_start : t;
  while (!m_wlan_frames.empty() && m_wlan_frames.front().end <= horizon) {
    m_wlan_frames.pop_front();
  }
  m_wlan_frames.push_back(data);
  m_wlan_frames.push_back(Interval{ack_start, ack_start + m_wlan_ack_s});
  m_queue.schedule(ack_start + m_wlan_ack_s, [this, data] { wlan_exchange_done(data); });
}

void Simulation::wlan_exchange_done(Interval data)
{
  if (m_sc.wlan_cw_doubling) {
    if (zigbee_overlaps(data.start, data.end)) {
      m_cw = std::min(2 * m_cw + 1, m_sc.wlan_cw_max);
    } else {
      m_cw = m_sc.wlan.cw_min;
    }
  }
  wlan_begin_contention();
}

void Simulation::wlan_medium_busy()
{
  switch (m_phase) {
  case WlanPhase::Difs:
    m_queue.cancel(m_timer);
    m_phase = WlanPhase::Deferring;
    break;
  case WlanPhase::Slots: {
    const double elapsed = m_queue.now() - m_phase_start;
    const int done = m_slot_s > 0.0 ? static_cast<int>(std::floor(elapsed / m_slot_s + 1e-9)) : m_slots_left;
    if (done >= m_slots_left) {
      // The counter hits zero at this very instant: the WLAN transmits anyway.
      break;
    }
    m_slots_left -= done;
    m_queue.cancel(m_timer);
    m_phase = WlanPhase::Deferring;
    break;
  }
  case WlanPhase::Deferring:
  case WlanPhase::Transmitting:
    break;
  }
}

void Simulation::wlan_medium_idle()
{
  if (m_phase == WlanPhase::Deferring) {
    wlan_start_difs();
  }
}

// -------------------------------------------------------------- Zigbee

void Simulation::zigbee_arrival()
{
  ++m_queued;
  const double next = m_queue.now() + 1.0 / *m_sc.zigbee_offered_load_pps;
  if (next < m_sc.duration_s) {
    m_queue.schedule(next, [this] { zigbee_arrival(); });
  } else {
    m_arrivals_done = true;
  }
  if (!m_active) {
    zigbee_start_packet();
  }
}

void Simulation::zigbee_start_packet()
{
  --m_queued;
  m_active = true;
  m_nb = 0;
  m_be = m_sc.zigbee_csma.min_be;
  zigbee_backoff();
}

void Simulation::zigbee_backoff()
{
  const std::uint64_t periods = m_rng.uniform_index(std::uint64_t{1} << m_be);
  m_queue.schedule(m_queue.now() + static_cast<double>(periods) * m_unit_backoff_s,
                   [this] { zigbee_start_cca(); });
}

void Simulation::zigbee_start_cca()
{
  m_cca_start = m_queue.now();
  m_queue.schedule(m_queue.now() + m_frame.cca_s, [this] { zigbee_end_cca(); });
}

void Simulation::zigbee_end_cca()
{
  const bool busy = m_zigbee_senses_wlan && wlan_overlaps(m_cca_start, m_queue.now());
  if (!busy) {
    zigbee_start_data();
    return;
  }
  ++m_nb;
  m_be = std::min(m_be + 1, m_sc.zigbee_csma.max_be);
  if (m_nb > m_sc.zigbee_csma.max_backoffs) {
    ++m_result.access_failures;
    zigbee_finish_packet();
    return;
  }
  zigbee_backoff();
}

void Simulation::zigbee_start_data()
{
  m_tx_start = m_queue.now();
  m_soft_drawn = false;
  zigbee_on_air(m_tx_start + m_data_s);
  m_queue.schedule(m_tx_start + m_data_s, [this] { zigbee_end_data(); });
}

void Simulation::zigbee_end_data()
{
  zigbee_off_air();
  const bool received = frame_survives(m_tx_start, m_queue.now(), m_data_noise_loss);
  if (!m_sc.ack_enabled) {
    zigbee_resolve(received);
    return;
  }
  const double ack_start = m_queue.now() + m_frame.sifs_s;
  if (received) {
    m_queue.schedule(ack_start, [this] { zigbee_start_ack(); });
  } else {
    // The sender sits out the ACK wait before giving up.
    m_queue.schedule(ack_start + m_frame.ack_duration_s, [this] { zigbee_resolve(false); });
  }
}

void Simulation::zigbee_start_ack()
{
  m_tx_start = m_queue.now();
  zigbee_on_air(m_tx_start + m_frame.ack_duration_s);
  m_queue.schedule(m_tx_start + m_frame.ack_duration_s, [this] { zigbee_end_ack(); });
}

void Simulation::zigbee_end_ack()
{
  zigbee_off_air();
  zigbee_resolve(frame_survives(m_tx_start, m_queue.now(), m_ack_noise_loss));
}

void Simulation::zigbee_resolve(bool received)
{
  ++m_result.packets_sent;
  if (!received) {
    ++m_result.packets_lost;
  }
  zigbee_finish_packet();
}

void Simulation::zigbee_finish_packet()
{
  m_active = false;
  if (!m_sc.zigbee_offered_load_pps) {
    if (m_queue.now() < m_sc.duration_s) {
      m_queued = 1;
    } else {
      m_arrivals_done = true;
    }
  }
  if (m_queued > 0) {
    zigbee_start_packet();
  }
}

void Simulation::zigbee_on_air(double end)
{
  if (m_sc.wlan_cw_doubling) {
    m_zigbee_frames.push_back(Interval{m_queue.now(), end});
  }
  ++m_zigbee_on_air;
  if (m_wlan_senses_zigbee) {
    wlan_medium_busy();
  }
}

void Simulation::zigbee_off_air()
{
  --m_zigbee_on_air;
  if (m_wlan_senses_zigbee && m_zigbee_on_air == 0) {
    wlan_medium_idle();
  }
}

// ------------------------------------------------------------- checks

bool Simulation::wlan_overlaps(double start, double end)
{
  // Queries arrive with non-decreasing start times, so frames that ended
  // before this one started are never needed again.
  while (!m_wlan_frames.empty() && m_wlan_frames.front().end <= start) {
    m_wlan_frames.pop_front();
  }
  for (const auto& f : m_wlan_frames) {
    if (f.start >= end) {
      break;
    }
    if (intersects(f.start, f.end, start, end)) {
      return true;
    }
  }
  return false;
}

bool Simulation::zigbee_overlaps(double start, double end)
{
  while (!m_zigbee_frames.empty() && m_zigbee_frames.front().end <= start) {
    m_zigbee_frames.pop_front();
  }
  for (const auto& f : m_zigbee_frames) {
    if (f.start >= end) {
      break;
    }
    if (intersects(f.start, f.end, start, end)) {
      return true;
    }
  }
  return false;
}

bool Simulation::frame_survives(double start, double end, double noise_loss)
{
  bool ok = true;
  if (m_interference && wlan_overlaps(start, end)) {
    ok = m_power_pass;
    // one soft draw per data/ACK exchange
    if (ok && m_sc.sir_soft_success && !m_soft_drawn) {
      m_soft_drawn = true;
      ok = m_rng.bernoulli(*m_sc.sir_soft_success);
    }
  }
  if (ok && noise_loss > 0.0) {
    ok = !m_rng.bernoulli(noise_loss);
  }
  return ok;
}

template <typename Mutate>
std::vector<SweepRow> run_sweep(const Scenario& base, std::span<const double> values, Mutate mutate)
{
  if (values.empty()) {
    throw std::invalid_argument("sweep needs at least one value");
  }
  base.validate();
  std::vector<SweepRow> rows(values.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t i = next++; i < values.size(); i = next++) {
      try {
        Scenario s = base;
        mutate(s, values[i]);
        s.seed = derive_seed(base.seed, i);
        rows[i] = SweepRow{values[i], run_simulation(s)};
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) {
          failure = std::current_exception();
        }
      }
    }
  };

  const std::size_t threads =
      std::min<std::size_t>(values.size(), std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::jthread> pool;
  for (std::size_t t = 1; t < threads; ++t) {
    pool.emplace_back(worker);
  }
  worker();
  pool.clear();

  if (failure) {
    std::rethrow_exception(failure);
  }
  return rows;
}

} // namespace

PerResult run_simulation(const Scenario& scenario)
{
  scenario.validate();
  Simulation sim(scenario);
  return sim.run();
}

std::vector<SweepRow> sweep_distance(const Scenario& base, std::span<const double> distances_m)
{
  return run_sweep(base, distances_m, [](Scenario& s, double d) { s.d_interferer_m = d; });
}

std::vector<SweepRow> sweep_offset(const Scenario& base, std::span<const double> offsets_hz)
{
  return run_sweep(base, offsets_hz,
                   [](Scenario& s, double offset) { s.zigbee.center_freq_hz = s.wlan.center_freq_hz - offset; });
}

} // namespace coex::sim
