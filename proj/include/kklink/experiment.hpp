// Experiment harness: composes modem -> channel -> equalizer -> metrics into
// reproducible sweeps emitted as CSV/JSON data files.
#pragma once

#include "kklink/cap16.hpp"
#include "kklink/channel.hpp"
#include "kklink/equalizer.hpp"
#include "kklink/kk_modem.hpp"
#include "kklink/pam4.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace kklink {

// Hard-decision FEC limit used for sensitivity readouts.
inline constexpr double kHdFecBer = 3.8e-3;

enum class ModemFormat { kk, pam4, cap16 };
std::string to_string(ModemFormat f);
ModemFormat modem_format_from_string(const std::string& s);

enum class SweepAxis { amplitude_a, osnr_db, symbol_rate, main_taps, cross_taps, power_scale };
std::string to_string(SweepAxis a);
SweepAxis sweep_axis_from_string(const std::string& s);

struct ExperimentConfig {
  ModemFormat format = ModemFormat::kk;
  KkConfig kk;
  PamConfig pam;
  CapConfig cap;
  ChannelConfig channel;
  EqualizerConfig equalizer;
  Index frame_symbols = 3000;
  int frames = 10;
  std::uint64_t seed = 1;
  SweepAxis axis = SweepAxis::osnr_db;
  std::vector<double> grid;
  bool dump_constellations = false;
  Index constellation_symbols = 4000;  // per-point cap on dumped points

  void validate() const;
  int bits_per_symbol() const;
};

struct PointRecord {
  double grid_value = 0.0;
  double ber = 0.0;
  long long bits = 0;
  long long errors = 0;
  double evm_pct = 0.0;
  double ser = 0.0;
  long long warm_up_excluded = 0;  // symbols excluded from metrics (guards, training, warm-up)
  long long clamped_samples = 0;
  double min_phase_rate = 1.0;  // fraction of frames passing the winding check
  std::vector<std::array<double, 2>> constellation;
};

struct SensitivityResult {
  double value = 0.0;
  bool flagged = false;  // curve crossed the threshold more than once
};

struct BerReport {
  ExperimentConfig config;
  std::vector<PointRecord> points;
  std::optional<SensitivityResult> sensitivity;
};

// One grid point: deterministic given (config, grid_value); per-frame bit and
// noise seeds are derived from config.seed and the frame index only, so grid
// points see paired randomness.
PointRecord run_point(const ExperimentConfig& cfg, double grid_value);

BerReport run_sweep(const ExperimentConfig& cfg);

// Log-linear BER interpolation against kHdFecBer. Zero-BER points are floored
// at 0.25/bits for the interpolation. Returns nothing when the threshold is
// never bracketed; flags (and returns the crossing after which the curve
// stays compliant) when it is bracketed more than once.
std::optional<SensitivityResult> interpolate_sensitivity(const std::vector<double>& grid,
                                                         const std::vector<double>& ber,
                                                         const std::vector<long long>& bits,
                                                         double threshold = kHdFecBer);

// CSV with header grid_value,ber,bits,errors,evm_pct,ser,min_phase_rate,clamped_samples
std::string report_csv(const BerReport& report);
std::vector<PointRecord> parse_report_csv(const std::string& text);
std::string report_json(const BerReport& report);

// Writes report.csv, report.json and constellation_<n>.csv files when dumps
// were requested.
void emit_report(const BerReport& report, const std::string& out_dir);

// --- format comparison under a shared DAC sample-rate and bit-rate budget ---

struct CompareConfig {
  double dac_rate = 2.5e9;  // converter sample rate budget
  double bit_rate = 2.5e9;  // matched line rate for the sensitivity runs
  ChannelConfig channel;
  EqualizerConfig equalizer;
  std::vector<double> power_grid;
  Index frame_symbols = 3000;
  int frames = 6;
  std::uint64_t seed = 1;
  double kk_amplitude_a = 20.0;
  double rolloff = 0.1;
  int span_symbols = 30;
};

struct CompareEntry {
  std::string format;
  double symbol_rate = 0.0;
  int samples_per_symbol = 0;
  int bits_per_symbol = 0;
  double bit_rate = 0.0;
  std::vector<PointRecord> points;  // power_scale sweep
  std::optional<SensitivityResult> sensitivity;
};

struct DacBudgetRow {
  std::string format;
  double dac_rate = 0.0;
  int samples_per_symbol = 0;
  double max_symbol_rate = 0.0;
  int bits_per_symbol = 0;
  double max_bit_rate = 0.0;
};

struct FormatComparison {
  CompareConfig config;
  std::vector<CompareEntry> entries;
  std::vector<DacBudgetRow> dac_budget;  // at the DAC budget and sps = 2
  std::string reference_note;            // reported hardware numbers, metadata only
};

FormatComparison compare_formats(const CompareConfig& cfg);
std::string comparison_json(const FormatComparison& c);
std::string dac_budget_csv(const FormatComparison& c);
std::string sensitivity_csv(const FormatComparison& c);
void emit_comparison(const FormatComparison& c, const std::string& out_dir);

// Config (de)serialization for the CLI.
std::string experiment_config_to_json(const ExperimentConfig& cfg);
ExperimentConfig experiment_config_from_json(const std::string& text);
std::string compare_config_to_json(const CompareConfig& cfg);
CompareConfig compare_config_from_json(const std::string& text);

}  // namespace kklink
