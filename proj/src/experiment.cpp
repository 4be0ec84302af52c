#include "kklink/experiment.hpp"

#include "kklink/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kklink {

std::string to_string(ModemFormat f) {
  switch (f) {
    case ModemFormat::kk: return "kk";
    case ModemFormat::pam4: return "pam4";
    case ModemFormat::cap16: return "cap16";
  }
  throw std::logic_error("unknown modem format");
}

ModemFormat modem_format_from_string(const std::string& s) {
  if (s == "kk") return ModemFormat::kk;
  if (s == "pam4") return ModemFormat::pam4;
  if (s == "cap16") return ModemFormat::cap16;
  throw std::invalid_argument("unknown modem format '" + s + "'");
}

std::string to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::amplitude_a: return "amplitude_a";
    case SweepAxis::osnr_db: return "osnr_db";
    case SweepAxis::symbol_rate: return "symbol_rate";
    case SweepAxis::main_taps: return "main_taps";
    case SweepAxis::cross_taps: return "cross_taps";
    case SweepAxis::power_scale: return "power_scale";
  }
  throw std::logic_error("unknown sweep axis");
}

SweepAxis sweep_axis_from_string(const std::string& s) {
  if (s == "amplitude_a") return SweepAxis::amplitude_a;
  if (s == "osnr_db") return SweepAxis::osnr_db;
  if (s == "symbol_rate") return SweepAxis::symbol_rate;
  if (s == "main_taps") return SweepAxis::main_taps;
  if (s == "cross_taps") return SweepAxis::cross_taps;
  if (s == "power_scale") return SweepAxis::power_scale;
  throw std::invalid_argument("unknown sweep axis '" + s + "'");
}

int ExperimentConfig::bits_per_symbol() const {
  switch (format) {
    case ModemFormat::kk: return kk.bits_per_symbol();
    case ModemFormat::pam4: return 2;
    case ModemFormat::cap16: return 4;
  }
  throw std::logic_error("unknown modem format");
}

void ExperimentConfig::validate() const {
  if (frames < 1) throw std::invalid_argument("ExperimentConfig: frames must be >= 1");
  if (frame_symbols < 4) throw std::invalid_argument("ExperimentConfig: frame_symbols must be >= 4");
  equalizer.validate();
  switch (format) {
    case ModemFormat::kk: kk.validate(); break;
    case ModemFormat::pam4: pam.validate(); break;
    case ModemFormat::cap16: cap.validate(); break;
  }
}

namespace {

struct FrameStats {
  long long bits = 0;
  long long bit_errors = 0;
  long long symbols = 0;
  long long symbol_errors = 0;
  long long excluded = 0;
  long long clamped = 0;
  double err_energy = 0.0;
  double ref_energy = 0.0;
  bool min_phase_ok = true;
};

struct MetricWindow {
  Index start;
  Index end;
};

MetricWindow metric_window(Index n_symbols, Index guard, Index training, Index warm_up) {
  const Index start = std::max({guard, training, warm_up});
  const Index end = n_symbols - guard;
  if (end <= start)
    throw std::invalid_argument("experiment: frame too short for guard/training exclusions");
  return {start, end};
}

void count_bit_errors(const std::vector<int>& tx, const std::vector<int>& rx, Index start_sym,
                      Index end_sym, int bits_per_symbol, FrameStats& st) {
  for (Index n = start_sym; n < end_sym; ++n) {
    for (int b = 0; b < bits_per_symbol; ++b) {
      const std::size_t i = static_cast<std::size_t>(n * bits_per_symbol + b);
      st.bits += 1;
      st.bit_errors += tx[i] != rx[i];
    }
  }
}

void dump_constellation(const SymbolFrame& soft, Index start, Index end, Index cap,
                        std::vector<std::array<double, 2>>& out) {
  for (Index n = start; n < end && static_cast<Index>(out.size()) < cap; ++n)
    out.push_back({soft.i_symbols[n], soft.q_symbols[n]});
}

FrameStats run_kk_frame(const KkConfig& kcfg, const ChannelConfig& ch, const EqualizerConfig& eq,
                        Index n_symbols, std::uint64_t bit_seed, std::uint64_t noise_seed,
                        Index iq_cap, std::vector<std::array<double, 2>>* iq_out) {
  Rng rng(bit_seed);
  const auto bits = rng.bits(n_symbols * kcfg.bits_per_symbol());
  const SymbolFrame tx = map_bits(bits, kcfg.levels_per_rail);
  const ModulatedFrame mod = kk_modulate(tx, kcfg);

  ChannelConfig chf = ch;
  chf.seed = noise_seed;
  const RealWaveform rx = apply_channel(mod.waveform, chf);
  const KkDemodResult dem = kk_demodulate(rx, mod.bias, mod.tx_rms, kcfg);

  EqualizerConfig eqf = eq;
  eqf.training_symbols = std::min<Index>(eqf.training_symbols, n_symbols);
  const EqualizerState state =
      train_lms(dem.symbols.i_symbols, dem.symbols.q_symbols, tx.i_symbols, tx.q_symbols, eqf);
  const EqualizedPair out = equalize_aligned(dem.symbols.i_symbols, dem.symbols.q_symbols, state);

  const MetricWindow w =
      metric_window(n_symbols, kcfg.span_symbols, eqf.training_symbols, out.warm_up);

  FrameStats st;
  st.min_phase_ok = mod.min_phase_ok;
  st.clamped = dem.clamped_samples;
  st.excluded = n_symbols - (w.end - w.start);

  const RealArray dec_i = slice_rail(out.r_i, kcfg.levels_per_rail);
  const RealArray dec_q = slice_rail(out.r_q, kcfg.levels_per_rail);
  for (Index n = w.start; n < w.end; ++n) {
    const double ei = out.r_i[n] - tx.i_symbols[n];
    const double eqv = out.r_q[n] - tx.q_symbols[n];
    st.err_energy += ei * ei + eqv * eqv;
    st.ref_energy += tx.i_symbols[n] * tx.i_symbols[n] + tx.q_symbols[n] * tx.q_symbols[n];
    st.symbols += 1;
    st.symbol_errors += (dec_i[n] != tx.i_symbols[n]) || (dec_q[n] != tx.q_symbols[n]);
  }
  const SymbolFrame decided{dec_i, dec_q, kcfg.levels_per_rail};
  const auto rx_bits = unmap_symbols(decided);
  count_bit_errors(bits, rx_bits, w.start, w.end, kcfg.bits_per_symbol(), st);
  if (iq_out) dump_constellation({out.r_i, out.r_q, kcfg.levels_per_rail}, w.start, w.end, iq_cap, *iq_out);
  return st;
}

FrameStats run_pam_frame(const PamConfig& pcfg, const ChannelConfig& ch, const EqualizerConfig& eq,
                         Index n_symbols, std::uint64_t bit_seed, std::uint64_t noise_seed,
                         Index iq_cap, std::vector<std::array<double, 2>>* iq_out) {
  Rng rng(bit_seed);
  const auto bits = rng.bits(n_symbols * 2);
  const RealArray tx_symbols = gray_map_rail(bits, 4);
  const RealWaveform wave = pam4_modulate(bits, pcfg);

  ChannelConfig chf = ch;
  chf.seed = noise_seed;
  const RealWaveform rx = apply_channel(wave, chf);

  const Index train_n = std::min<Index>(eq.training_symbols, n_symbols);
  const PamDemodResult dem = pam4_demodulate(rx, pcfg, eq, tx_symbols.head(train_n));

  const MetricWindow w = metric_window(n_symbols, pcfg.span_symbols, train_n, dem.warm_up);

  FrameStats st;
  st.excluded = n_symbols - (w.end - w.start);
  const RealArray dec = slice_rail(dem.soft, 4);
  for (Index n = w.start; n < w.end; ++n) {
    const double e = dem.soft[n] - tx_symbols[n];
    st.err_energy += e * e;
    st.ref_energy += tx_symbols[n] * tx_symbols[n];
    st.symbols += 1;
    st.symbol_errors += dec[n] != tx_symbols[n];
  }
  count_bit_errors(bits, dem.bits, w.start, w.end, 2, st);
  if (iq_out) {
    for (Index n = w.start; n < w.end && static_cast<Index>(iq_out->size()) < iq_cap; ++n)
      iq_out->push_back({dem.soft[n], 0.0});
  }
  return st;
}

FrameStats run_cap_frame(const CapConfig& ccfg, const ChannelConfig& ch, const EqualizerConfig& eq,
                         Index n_symbols, std::uint64_t bit_seed, std::uint64_t noise_seed,
                         Index iq_cap, std::vector<std::array<double, 2>>* iq_out) {
  Rng rng(bit_seed);
  const auto bits = rng.bits(n_symbols * 4);
  const SymbolFrame tx = map_bits(bits, 4);
  const RealWaveform wave = cap16_modulate(bits, ccfg);

  ChannelConfig chf = ch;
  chf.seed = noise_seed;
  const RealWaveform rx = apply_channel(wave, chf);

  const Index train_n = std::min<Index>(eq.training_symbols, n_symbols);
  const SymbolFrame training{tx.i_symbols.head(train_n), tx.q_symbols.head(train_n), 4};
  const CapDemodResult dem = cap16_demodulate(rx, ccfg, eq, training);

  const MetricWindow w = metric_window(n_symbols, ccfg.span_symbols, train_n, dem.warm_up);

  FrameStats st;
  st.excluded = n_symbols - (w.end - w.start);
  const RealArray dec_i = slice_rail(dem.soft.i_symbols, 4);
  const RealArray dec_q = slice_rail(dem.soft.q_symbols, 4);
  for (Index n = w.start; n < w.end; ++n) {
    const double ei = dem.soft.i_symbols[n] - tx.i_symbols[n];
    const double eqv = dem.soft.q_symbols[n] - tx.q_symbols[n];
    st.err_energy += ei * ei + eqv * eqv;
    st.ref_energy += tx.i_symbols[n] * tx.i_symbols[n] + tx.q_symbols[n] * tx.q_symbols[n];
    st.symbols += 1;
    st.symbol_errors += (dec_i[n] != tx.i_symbols[n]) || (dec_q[n] != tx.q_symbols[n]);
  }
  const auto rx_bits = unmap_symbols({dec_i, dec_q, 4});
  count_bit_errors(bits, rx_bits, w.start, w.end, 4, st);
  if (iq_out) dump_constellation(dem.soft, w.start, w.end, iq_cap, *iq_out);
  return st;
}

// Applies the sweep-axis value onto a copy of the config.
ExperimentConfig materialize(const ExperimentConfig& cfg, double value) {
  ExperimentConfig out = cfg;
  switch (cfg.axis) {
    case SweepAxis::amplitude_a:
      out.kk.amplitude_a = value;
      break;
    case SweepAxis::osnr_db:
      out.channel.osnr_db = value;
      break;
    case SweepAxis::symbol_rate:
      out.kk.symbol_rate = value;
      out.pam.symbol_rate = value;
      out.cap.symbol_rate = value;
      break;
    case SweepAxis::main_taps:
      out.equalizer.main_taps = static_cast<int>(value);
      break;
    case SweepAxis::cross_taps:
      out.equalizer.cross_taps = static_cast<int>(value);
      break;
    case SweepAxis::power_scale:
      out.channel.power_scale = value;
      break;
  }
  return out;
}

}  // namespace

PointRecord run_point(const ExperimentConfig& base, double grid_value) {
  const ExperimentConfig cfg = materialize(base, grid_value);
  cfg.validate();

  PointRecord rec;
  rec.grid_value = grid_value;

  FrameStats total;
  int min_phase_frames = 0;
  std::vector<std::array<double, 2>>* iq = cfg.dump_constellations ? &rec.constellation : nullptr;

  for (int f = 0; f < cfg.frames; ++f) {
    const std::uint64_t bit_seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(2 * f));
    const std::uint64_t noise_seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(2 * f + 1));
    FrameStats st;
    switch (cfg.format) {
      case ModemFormat::kk:
        st = run_kk_frame(cfg.kk, cfg.channel, cfg.equalizer, cfg.frame_symbols, bit_seed, noise_seed,
                          cfg.constellation_symbols, iq);
        break;
      case ModemFormat::pam4:
        st = run_pam_frame(cfg.pam, cfg.channel, cfg.equalizer, cfg.frame_symbols, bit_seed, noise_seed,
                           cfg.constellation_symbols, iq);
        break;
      case ModemFormat::cap16:
        st = run_cap_frame(cfg.cap, cfg.channel, cfg.equalizer, cfg.frame_symbols, bit_seed, noise_seed,
                           cfg.constellation_symbols, iq);
        break;
    }
    total.bits += st.bits;
    total.bit_errors += st.bit_errors;
    total.symbols += st.symbols;
    total.symbol_errors += st.symbol_errors;
    total.excluded += st.excluded;
    total.clamped += st.clamped;
    total.err_energy += st.err_energy;
    total.ref_energy += st.ref_energy;
    min_phase_frames += st.min_phase_ok;
  }

  rec.bits = total.bits;
  rec.errors = total.bit_errors;
  rec.ber = total.bits > 0 ? static_cast<double>(total.bit_errors) / static_cast<double>(total.bits) : 0.0;
  rec.ser = total.symbols > 0 ? static_cast<double>(total.symbol_errors) / static_cast<double>(total.symbols) : 0.0;
  rec.evm_pct = total.ref_energy > 0.0 ? 100.0 * std::sqrt(total.err_energy / total.ref_energy) : 0.0;
  rec.warm_up_excluded = total.excluded;
  rec.clamped_samples = total.clamped;
  rec.min_phase_rate = static_cast<double>(min_phase_frames) / static_cast<double>(cfg.frames);
  return rec;
}

BerReport run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.grid.empty()) throw std::invalid_argument("run_sweep: empty sweep grid");

  BerReport report;
  report.config = cfg;
  report.points.reserve(cfg.grid.size());
  std::vector<double> bers;
  std::vector<long long> bits;
  for (double v : cfg.grid) {
    report.points.push_back(run_point(cfg, v));
    bers.push_back(report.points.back().ber);
    bits.push_back(report.points.back().bits);
  }
  report.sensitivity = interpolate_sensitivity(cfg.grid, bers, bits);
  return report;
}

std::optional<SensitivityResult> interpolate_sensitivity(const std::vector<double>& grid,
                                                         const std::vector<double>& ber,
                                                         const std::vector<long long>& bits,
                                                         double threshold) {
  if (grid.size() != ber.size() || grid.size() != bits.size() || grid.size() < 2) return std::nullopt;

  // zero counts cannot sit on a log axis; floor at the sub-resolution level
  auto floored = [&](std::size_t i) {
    const double f = bits[i] > 0 ? 0.25 / static_cast<double>(bits[i]) : 1e-12;
    return std::max(ber[i], f);
  };

  struct Crossing {
    std::size_t i;
    double value;
  };
  std::vector<Crossing> crossings;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double b0 = floored(i), b1 = floored(i + 1);
    const bool above0 = b0 > threshold, above1 = b1 > threshold;
    if (above0 == above1) continue;
    const double l0 = std::log10(b0), l1 = std::log10(b1), lt = std::log10(threshold);
    const double v = grid[i] + (grid[i + 1] - grid[i]) * (lt - l0) / (l1 - l0);
    crossings.push_back({i, v});
  }
  if (crossings.empty()) return std::nullopt;
  if (crossings.size() == 1) return SensitivityResult{crossings.front().value, false};
  // several crossings: report the one after which the curve stays compliant
  for (auto it = crossings.rbegin(); it != crossings.rend(); ++it) {
    bool compliant_after = true;
    for (std::size_t j = it->i + 1; j < grid.size(); ++j) compliant_after &= floored(j) <= threshold;
    if (compliant_after) return SensitivityResult{it->value, true};
  }
  return SensitivityResult{crossings.back().value, true};
}

FormatComparison compare_formats(const CompareConfig& cfg) {
  if (cfg.power_grid.empty()) throw std::invalid_argument("compare_formats: empty power grid");
  if (cfg.dac_rate <= 0.0 || cfg.bit_rate <= 0.0)
    throw std::invalid_argument("compare_formats: rates must be positive");

  FormatComparison out;
  out.config = cfg;

  struct Plan {
    ModemFormat format;
    int bits_per_symbol;
  };
  const Plan plans[] = {{ModemFormat::kk, 4}, {ModemFormat::pam4, 2}, {ModemFormat::cap16, 4}};

  for (const Plan& p : plans) {
    const double symbol_rate = cfg.bit_rate / p.bits_per_symbol;
    const int sps = static_cast<int>(cfg.dac_rate / symbol_rate);
    if (sps < 2 || symbol_rate * sps > cfg.dac_rate + 1e-6)
      throw std::invalid_argument("compare_formats: bit rate does not fit the DAC budget for " +
                                  to_string(p.format));

    ExperimentConfig run;
    run.format = p.format;
    run.kk.amplitude_a = cfg.kk_amplitude_a;
    run.kk.symbol_rate = symbol_rate;
    run.kk.rolloff = cfg.rolloff;
    run.kk.span_symbols = cfg.span_symbols;
    run.kk.samples_per_symbol = sps;
    run.pam.symbol_rate = symbol_rate;
    run.pam.rolloff = cfg.rolloff;
    run.pam.span_symbols = cfg.span_symbols;
    run.pam.samples_per_symbol = sps;
    run.cap.symbol_rate = symbol_rate;
    run.cap.rolloff = cfg.rolloff;
    run.cap.span_symbols = cfg.span_symbols;
    run.cap.samples_per_symbol = sps;
    run.channel = cfg.channel;
    run.equalizer = cfg.equalizer;
    run.frame_symbols = cfg.frame_symbols;
    run.frames = cfg.frames;
    run.seed = cfg.seed;
    run.axis = SweepAxis::power_scale;
    run.grid = cfg.power_grid;

    const BerReport rep = run_sweep(run);
    CompareEntry entry;
    entry.format = to_string(p.format);
    entry.symbol_rate = symbol_rate;
    entry.samples_per_symbol = sps;
    entry.bits_per_symbol = p.bits_per_symbol;
    entry.bit_rate = symbol_rate * p.bits_per_symbol;
    entry.points = rep.points;
    entry.sensitivity = rep.sensitivity;
    out.entries.push_back(std::move(entry));
  }

  // Achievable-rate table at the DAC budget with an oversampling ratio of 2.
  for (const Plan& p : plans) {
    DacBudgetRow row;
    row.format = to_string(p.format);
    row.dac_rate = cfg.dac_rate;
    row.samples_per_symbol = 2;
    row.max_symbol_rate = cfg.dac_rate / 2.0;
    row.bits_per_symbol = p.bits_per_symbol;
    row.max_bit_rate = row.max_symbol_rate * p.bits_per_symbol;
    out.dac_budget.push_back(row);
  }

  out.reference_note =
      "Reported hardware results at 2.5 Gb/s: KK receiver sensitivity approx -31.5/-32/-33 dBm "
      "for A=8/10/20, beating PAM-4 by 0.6 dB and CAP-16 by 1.5 dB; approx -27.5 dBm for KK at "
      "5 Gb/s. Detector-specific absolute values, quoted for context only and not asserted by "
      "this simulation.";
  return out;
}

}  // namespace kklink
