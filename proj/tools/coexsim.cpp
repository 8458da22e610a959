// coexsim: coexistence analysis front end. Writes CSV.

#include "coex/commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct Overrides
{
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> psd;
  std::optional<double> sir_threshold_db;
  std::optional<double> duration_s;
  std::optional<double> distance_m;
  std::string out = "stdout";
};

coex::cli::ScenarioConfig build_config(const Overrides& o)
{
  using namespace coex;
  cli::ScenarioConfig config = o.config_path.empty() ? cli::default_config() : cli::load_config(o.config_path);
  auto& s = config.scenario;
  if (o.seed) {
    s.seed = *o.seed;
  }
  if (o.psd) {
    // uniform shapes carry no chip rate; fall back to DSSS 11 Mchip/s
    const double chip = s.interferer_shape.chip_rate_hz > 0 ? s.interferer_shape.chip_rate_hz : 11.0e6;
    s.interferer_shape = *o.psd == "uniform" ? rf::SpectralShape::uniform(s.wlan.bandwidth_hz)
                                             : rf::SpectralShape::sinc_squared(s.wlan.bandwidth_hz, chip);
  }
  if (o.sir_threshold_db) {
    s.sir_threshold_db = *o.sir_threshold_db;
  }
  if (o.duration_s) {
    s.duration_s = *o.duration_s;
  }
  if (o.distance_m) {
    s.d_interferer_m = *o.distance_m;
  }
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw cli::ConfigError(0, e.what());
  }
  return config;
}

void write_output(const std::string& target, const std::string& csv)
{
  if (target == "stdout" || target == "-") {
    std::cout << csv;
    std::cout.flush();
    if (!std::cout) {
      throw std::runtime_error("failed writing to stdout");
    }
    return;
  }
  std::ofstream file(target, std::ios::binary);
  if (!file) {
    throw std::runtime_error("cannot open " + target + " for writing");
  }
  file << csv;
  if (!file) {
    throw std::runtime_error("failed writing " + target);
  }
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"802.15.4 / 802.11 coexistence analysis"};
  app.set_version_flag("--version", std::string(coex::cli::kToolVersion));
  app.require_subcommand(1);
  app.fallthrough();

  Overrides o;
  app.add_option("--config", o.config_path, "Scenario file")->check(CLI::ExistingFile);
  app.add_option("--seed", o.seed, "Random seed");
  app.add_option("--psd", o.psd, "WLAN spectral shape")->check(CLI::IsMember({"uniform", "sinc2"}));
  app.add_option("--sir-threshold-db", o.sir_threshold_db, "SIR capture threshold in dB");
  app.add_option("--duration", o.duration_s, "Simulated seconds per run");
  app.add_option("--out", o.out, "Output path or 'stdout'");

  auto* ranges = app.add_subcommand("ranges", "Coexistence ranges r1/r2/r3");

  auto* ber = app.add_subcommand("ber", "BER/PER against SNR");
  std::vector<double> snr_linear;
  std::vector<double> snr_db;
  std::string phy = "915";
  long packet_bytes = 32;
  ber->add_option("--snr-linear", snr_linear, "Linear SNR points")->delimiter(',');
  ber->add_option("--snr-db", snr_db, "SNR points in dB")->delimiter(',');
  ber->add_option("--phy", phy, "O-QPSK PHY band")->check(CLI::IsMember({"915", "2450"}));
  ber->add_option("--packet-bytes", packet_bytes, "Bytes per packet for PER")->check(CLI::Range(1L, 1L << 20));

  auto* sim = app.add_subcommand("sim", "One simulation run");
  sim->add_option("--distance", o.distance_m, "WLAN to Zigbee receiver distance in meters");

  auto* sweep = app.add_subcommand("sweep", "Distance or channel-offset sweep");
  std::vector<double> sweep_distance;
  std::vector<double> sweep_offset;
  auto* dist_opt = sweep->add_option("--sweep-distance", sweep_distance, "Distances in meters")->delimiter(',');
  auto* off_opt = sweep->add_option("--sweep-offset-mhz", sweep_offset, "Channel offsets in MHz")->delimiter(',');
  dist_opt->excludes(off_opt);
  sweep->require_option(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  coex::cli::ScenarioConfig config;
  try {
    config = build_config(o);
  } catch (const coex::cli::ConfigError& e) {
    std::cerr << "coexsim: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "coexsim: config error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    coex::cli::ResultTable table;
    if (*ranges) {
      table = coex::cli::cmd_ranges(config);
    } else if (*ber) {
      coex::cli::BerOptions opts;
      opts.snr_linear = snr_linear;
      for (const double db : snr_db) {
        opts.snr_linear.push_back(coex::phy::db_to_linear(db));
      }
      if (opts.snr_linear.empty()) {
        std::cerr << "coexsim: ber needs --snr-linear or --snr-db\n";
        return kExitConfig;
      }
      opts.packet_bits = packet_bytes * 8;
      opts.model = phy == "915" ? coex::phy::BerModel::oqpsk_915() : coex::phy::BerModel::oqpsk_2450();
      table = coex::cli::cmd_ber(config, opts);
    } else if (*sim) {
      table = coex::cli::cmd_sim(config);
    } else {
      coex::cli::SweepOptions opts;
      if (!sweep_distance.empty()) {
        opts.kind = coex::cli::SweepKind::Distance;
        opts.values = sweep_distance;
      } else {
        opts.kind = coex::cli::SweepKind::Offset;
        opts.values = sweep_offset;
      }
      table = coex::cli::cmd_sweep(config, opts);
    }
    write_output(o.out, table.to_csv());
  } catch (const std::invalid_argument& e) {
    std::cerr << "coexsim: invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "coexsim: error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
