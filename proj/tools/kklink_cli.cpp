// kklink command-line front end.
//
// Subcommands (each takes a JSON config file and an output directory):
//   modulate    generate a frame, write waveform.kkwv + sidecar.json
//   demodulate  recover symbols/bits from a waveform + sidecar pair
//   simulate    run a single end-to-end point, write point.json
//   sweep       run a sweep, write report.csv / report.json
//   compare     KK-16 / PAM-4 / CAP-16 under a shared DAC and rate budget
//
// Exits 0 on success; on failure prints a JSON error record to stderr and
// exits nonzero.
#include "kklink/experiment.hpp"
#include "kklink/rng.hpp"
#include "kklink/sidecar.hpp"
#include "kklink/waveform_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using kklink::Index;
using nlohmann::json;
using nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path);
}

std::vector<int> frame_bits(std::uint64_t seed, Index n_symbols, int bits_per_symbol) {
  kklink::Rng rng(kklink::mix_seed(seed, 0));
  return rng.bits(n_symbols * bits_per_symbol);
}

// --- modulate ---------------------------------------------------------------

void cmd_modulate(const std::string& config_path, const std::string& out_dir,
                  std::optional<std::uint64_t> seed_override) {
  auto cfg = kklink::experiment_config_from_json(read_file(config_path));
  if (seed_override) cfg.seed = *seed_override;
  cfg.validate();
  std::filesystem::create_directories(out_dir);
  const auto dir = std::filesystem::path(out_dir);

  kklink::TxSidecar side;
  side.format = kklink::to_string(cfg.format);
  side.frame_symbols = cfg.frame_symbols;
  side.seed = cfg.seed;
  const auto bits = frame_bits(cfg.seed, cfg.frame_symbols, cfg.bits_per_symbol());

  kklink::RealWaveform wave;
  switch (cfg.format) {
    case kklink::ModemFormat::kk: {
      const auto frame = kklink::map_bits(bits, cfg.kk.levels_per_rail);
      const auto mod = kklink::kk_modulate(frame, cfg.kk);
      wave = mod.waveform;
      side.amplitude_a = cfg.kk.amplitude_a;
      side.symbol_rate = cfg.kk.symbol_rate;
      side.rolloff = cfg.kk.rolloff;
      side.span_symbols = cfg.kk.span_symbols;
      side.samples_per_symbol = cfg.kk.samples_per_symbol;
      side.levels_per_rail = cfg.kk.levels_per_rail;
      side.bias = mod.bias;
      side.tx_rms = mod.tx_rms;
      break;
    }
    case kklink::ModemFormat::pam4: {
      wave = kklink::pam4_modulate(bits, cfg.pam);
      side.symbol_rate = cfg.pam.symbol_rate;
      side.rolloff = cfg.pam.rolloff;
      side.span_symbols = cfg.pam.span_symbols;
      side.samples_per_symbol = cfg.pam.samples_per_symbol;
      side.tx_rms = std::sqrt(wave.samples.square().mean());
      break;
    }
    case kklink::ModemFormat::cap16: {
      wave = kklink::cap16_modulate(bits, cfg.cap);
      side.symbol_rate = cfg.cap.symbol_rate;
      side.rolloff = cfg.cap.rolloff;
      side.span_symbols = cfg.cap.span_symbols;
      side.samples_per_symbol = cfg.cap.samples_per_symbol;
      side.tx_rms = std::sqrt(wave.samples.square().mean());
      break;
    }
  }
  kklink::write_waveform((dir / "waveform.kkwv").string(), wave);
  kklink::write_sidecar((dir / "sidecar.json").string(), side);
  std::cout << "wrote " << (dir / "waveform.kkwv").string() << " (" << wave.size() << " samples)\n";
}

// --- demodulate -------------------------------------------------------------

void cmd_demodulate(const std::string& config_path, const std::string& out_dir,
                    std::optional<std::uint64_t> seed_override) {
  const json j = json::parse(read_file(config_path));
  const auto wave_path = j.at("waveform").get<std::string>();
  const auto side_path = j.at("sidecar").get<std::string>();
  auto side = kklink::read_sidecar(side_path);
  if (seed_override) side.seed = *seed_override;

  kklink::EqualizerConfig eq;
  if (j.contains("equalizer")) {
    const auto& je = j.at("equalizer");
    if (je.contains("main_taps")) eq.main_taps = je.at("main_taps").get<int>();
    if (je.contains("cross_taps")) eq.cross_taps = je.at("cross_taps").get<int>();
    if (je.contains("step_size")) eq.step_size = je.at("step_size").get<double>();
    if (je.contains("training_symbols")) eq.training_symbols = je.at("training_symbols").get<Index>();
    if (je.contains("passes")) eq.passes = je.at("passes").get<int>();
  }
  const kklink::RealWaveform rx = kklink::read_real_waveform(wave_path);

  std::filesystem::create_directories(out_dir);
  const auto dir = std::filesystem::path(out_dir);

  const Index n = side.frame_symbols;
  kklink::SymbolFrame soft;
  std::vector<int> rx_bits;
  long long clamped = 0;

  if (side.format == "kk") {
    kklink::KkConfig k;
    k.amplitude_a = side.amplitude_a;
    k.symbol_rate = side.symbol_rate;
    k.rolloff = side.rolloff;
    k.span_symbols = side.span_symbols;
    k.samples_per_symbol = side.samples_per_symbol;
    k.levels_per_rail = side.levels_per_rail;
    const auto tx_bits = frame_bits(side.seed, n, k.bits_per_symbol());
    const auto tx = kklink::map_bits(tx_bits, k.levels_per_rail);
    auto dem = kklink::kk_demodulate(rx, side.bias, side.tx_rms, k);
    clamped = dem.clamped_samples;
    const Index train_n = std::min<Index>(eq.training_symbols, n);
    kklink::EqualizerConfig eqf = eq;
    eqf.training_symbols = train_n;
    const auto state = kklink::train_lms(dem.symbols.i_symbols, dem.symbols.q_symbols, tx.i_symbols,
                                         tx.q_symbols, eqf);
    auto pair = kklink::equalize_aligned(dem.symbols.i_symbols, dem.symbols.q_symbols, state);
    soft = {std::move(pair.r_i), std::move(pair.r_q), k.levels_per_rail};
    rx_bits = kklink::unmap_symbols({kklink::slice_rail(soft.i_symbols, k.levels_per_rail),
                                     kklink::slice_rail(soft.q_symbols, k.levels_per_rail),
                                     k.levels_per_rail});
    write_file((dir / "equalizer.json").string(), kklink::equalizer_state_to_json(state));
  } else if (side.format == "pam4") {
    kklink::PamConfig p;
    p.symbol_rate = side.symbol_rate;
    p.rolloff = side.rolloff;
    p.span_symbols = side.span_symbols;
    p.samples_per_symbol = side.samples_per_symbol;
    const auto tx_bits = frame_bits(side.seed, n, 2);
    const auto tx_symbols = kklink::gray_map_rail(tx_bits, 4);
    const Index train_n = std::min<Index>(eq.training_symbols, n);
    auto dem = kklink::pam4_demodulate(rx, p, eq, tx_symbols.head(train_n));
    soft = {dem.soft, kklink::RealArray::Zero(dem.soft.size()), 4};
    rx_bits = std::move(dem.bits);
  } else {
    kklink::CapConfig c;
    c.symbol_rate = side.symbol_rate;
    c.rolloff = side.rolloff;
    c.span_symbols = side.span_symbols;
    c.samples_per_symbol = side.samples_per_symbol;
    const auto tx_bits = frame_bits(side.seed, n, 4);
    const auto tx = kklink::map_bits(tx_bits, 4);
    const Index train_n = std::min<Index>(eq.training_symbols, n);
    const kklink::SymbolFrame training{tx.i_symbols.head(train_n), tx.q_symbols.head(train_n), 4};
    auto dem = kklink::cap16_demodulate(rx, c, eq, training);
    soft = std::move(dem.soft);
    rx_bits = std::move(dem.bits);
  }

  // soft symbols
  std::string sym_csv = "i,q\n";
  for (Index k = 0; k < soft.size(); ++k) {
    std::ostringstream row;
    row.precision(17);
    row << soft.i_symbols[k] << ',' << soft.q_symbols[k] << '\n';
    sym_csv += row.str();
  }
  write_file((dir / "symbols.csv").string(), sym_csv);

  std::string bit_text;
  bit_text.reserve(rx_bits.size() + 1);
  for (int b : rx_bits) bit_text += b ? '1' : '0';
  bit_text += '\n';
  write_file((dir / "bits.txt").string(), bit_text);

  // BER against the regenerated transmit bits, guard symbols excluded
  const int bps = side.format == "pam4" ? 2 : 4;
  const auto tx_bits = frame_bits(side.seed, n, bps);
  const Index guard = side.span_symbols;
  const Index train_n = std::min<Index>(eq.training_symbols, n);
  const Index start = std::max(guard, train_n);
  const Index end = n - guard;
  long long errors = 0, bits_counted = 0;
  for (Index s = start; s < end; ++s) {
    for (int b = 0; b < bps; ++b) {
      const auto i = static_cast<std::size_t>(s * bps + b);
      ++bits_counted;
      errors += tx_bits[i] != rx_bits[i];
    }
  }
  ordered_json metrics;
  metrics["format"] = side.format;
  metrics["symbols"] = n;
  metrics["bits_counted"] = bits_counted;
  metrics["bit_errors"] = errors;
  metrics["ber"] = bits_counted > 0 ? static_cast<double>(errors) / static_cast<double>(bits_counted) : 0.0;
  metrics["clamped_samples"] = clamped;
  write_file((dir / "metrics.json").string(), metrics.dump(2));
  std::cout << "ber " << metrics["ber"] << " over " << bits_counted << " bits\n";
}

// --- simulate / sweep / compare ----------------------------------------------

double current_axis_value(const kklink::ExperimentConfig& cfg) {
  switch (cfg.axis) {
    case kklink::SweepAxis::amplitude_a: return cfg.kk.amplitude_a;
    case kklink::SweepAxis::osnr_db: return cfg.channel.osnr_db;
    case kklink::SweepAxis::symbol_rate:
      return cfg.format == kklink::ModemFormat::kk    ? cfg.kk.symbol_rate
             : cfg.format == kklink::ModemFormat::pam4 ? cfg.pam.symbol_rate
                                                        : cfg.cap.symbol_rate;
    case kklink::SweepAxis::main_taps: return cfg.equalizer.main_taps;
    case kklink::SweepAxis::cross_taps: return cfg.equalizer.cross_taps;
    case kklink::SweepAxis::power_scale: return cfg.channel.power_scale;
  }
  return 0.0;
}

void cmd_simulate(const std::string& config_path, const std::string& out_dir,
                  std::optional<std::uint64_t> seed_override) {
  auto cfg = kklink::experiment_config_from_json(read_file(config_path));
  if (seed_override) cfg.seed = *seed_override;
  kklink::BerReport report;
  report.config = cfg;
  report.points.push_back(kklink::run_point(cfg, current_axis_value(cfg)));
  kklink::emit_report(report, out_dir);
  std::cout << kklink::report_csv(report);
}

void cmd_sweep(const std::string& config_path, const std::string& out_dir,
               std::optional<std::uint64_t> seed_override) {
  auto cfg = kklink::experiment_config_from_json(read_file(config_path));
  if (seed_override) cfg.seed = *seed_override;
  const auto report = kklink::run_sweep(cfg);
  kklink::emit_report(report, out_dir);
  std::cout << kklink::report_csv(report);
}

void cmd_compare(const std::string& config_path, const std::string& out_dir,
                 std::optional<std::uint64_t> seed_override) {
  auto cfg = kklink::compare_config_from_json(read_file(config_path));
  if (seed_override) cfg.seed = *seed_override;
  const auto cmp = kklink::compare_formats(cfg);
  kklink::emit_comparison(cmp, out_dir);
  std::cout << kklink::dac_budget_csv(cmp);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kramers-Kronig intensity-modulation link simulator"};
  app.require_subcommand(1);

  std::uint64_t seed_value = 0;
  bool seed_set = false;
  app.add_option_function<std::uint64_t>(
         "--seed", [&](std::uint64_t v) { seed_value = v; seed_set = true; },
         "Override the config seed")
      ->expected(1);

  struct Sub {
    CLI::App* cmd;
    std::string config;
    std::string out_dir;
    void (*fn)(const std::string&, const std::string&, std::optional<std::uint64_t>);
  };
  std::vector<Sub> subs;
  subs.reserve(8);  // CLI11 keeps references into the elements
  auto add = [&](const char* name, const char* help, auto fn) {
    auto* cmd = app.add_subcommand(name, help);
    subs.push_back({cmd, "", "", fn});
    auto& sub = subs.back();
    cmd->add_option("config", sub.config, "JSON config file")->required()->check(CLI::ExistingFile);
    cmd->add_option("out_dir", sub.out_dir, "Output directory")->required();
  };
  add("modulate", "Generate a modulated frame", &cmd_modulate);
  add("demodulate", "Demodulate a waveform + sidecar pair", &cmd_demodulate);
  add("simulate", "Run one end-to-end point", &cmd_simulate);
  add("sweep", "Run a parameter sweep", &cmd_sweep);
  add("compare", "Compare KK-16 / PAM-4 / CAP-16 under a shared budget", &cmd_compare);

  CLI11_PARSE(app, argc, argv);

  const std::optional<std::uint64_t> seed = seed_set ? std::optional<std::uint64_t>(seed_value) : std::nullopt;
  try {
    for (auto& sub : subs) {
      if (sub.cmd->parsed()) {
        sub.fn(sub.config, sub.out_dir, seed);
        return 0;
      }
    }
    throw std::runtime_error("no subcommand selected");
  } catch (const std::exception& e) {
    nlohmann::ordered_json err;
    err["error"] = e.what();
    for (auto& sub : subs)
      if (sub.cmd->parsed()) err["command"] = sub.cmd->get_name();
    std::cerr << err.dump() << "\n";
    return 1;
  }
}
