#include "kklink/experiment.hpp"

#include <json.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace kklink {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// shortest exact representation; CSV re-parses must reproduce doubles bit-for-bit
std::string fmt(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

double get_or(const json& j, const char* key, double fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  return j.at(key).get<double>();
}

// null or missing means infinite (no bandwidth limit / no noise)
double get_or_inf(const json& j, const char* key) {
  return get_or(j, key, std::numeric_limits<double>::infinity());
}

ordered_json channel_to_json(const ChannelConfig& c) {
  ordered_json j;
  if (std::isinf(c.f3db_hz)) j["f3db_hz"] = nullptr; else j["f3db_hz"] = c.f3db_hz;
  if (std::isinf(c.osnr_db)) j["osnr_db"] = nullptr; else j["osnr_db"] = c.osnr_db;
  j["ref_bandwidth_hz"] = c.ref_bandwidth_hz;
  j["power_scale"] = c.power_scale;
  j["seed"] = c.seed;
  return j;
}

ChannelConfig channel_from_json(const json& j) {
  ChannelConfig c;
  c.f3db_hz = get_or_inf(j, "f3db_hz");
  c.osnr_db = get_or_inf(j, "osnr_db");
  c.ref_bandwidth_hz = get_or(j, "ref_bandwidth_hz", c.ref_bandwidth_hz);
  c.power_scale = get_or(j, "power_scale", c.power_scale);
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

ordered_json equalizer_to_json(const EqualizerConfig& e) {
  ordered_json j;
  j["main_taps"] = e.main_taps;
  j["cross_taps"] = e.cross_taps;
  j["step_size"] = e.step_size;
  j["training_symbols"] = e.training_symbols;
  j["passes"] = e.passes;
  return j;
}

EqualizerConfig equalizer_from_json(const json& j) {
  EqualizerConfig e;
  if (j.contains("main_taps")) e.main_taps = j.at("main_taps").get<int>();
  if (j.contains("cross_taps")) e.cross_taps = j.at("cross_taps").get<int>();
  if (j.contains("step_size")) e.step_size = j.at("step_size").get<double>();
  if (j.contains("training_symbols")) e.training_symbols = j.at("training_symbols").get<Index>();
  if (j.contains("passes")) e.passes = j.at("passes").get<int>();
  return e;
}

ordered_json kk_to_json(const KkConfig& k) {
  ordered_json j;
  j["amplitude_a"] = k.amplitude_a;
  j["symbol_rate"] = k.symbol_rate;
  j["rolloff"] = k.rolloff;
  j["span_symbols"] = k.span_symbols;
  j["samples_per_symbol"] = k.samples_per_symbol;
  j["levels_per_rail"] = k.levels_per_rail;
  return j;
}

KkConfig kk_from_json(const json& j) {
  KkConfig k;
  k.amplitude_a = get_or(j, "amplitude_a", k.amplitude_a);
  k.symbol_rate = get_or(j, "symbol_rate", k.symbol_rate);
  k.rolloff = get_or(j, "rolloff", k.rolloff);
  if (j.contains("span_symbols")) k.span_symbols = j.at("span_symbols").get<int>();
  if (j.contains("samples_per_symbol")) k.samples_per_symbol = j.at("samples_per_symbol").get<int>();
  if (j.contains("levels_per_rail")) k.levels_per_rail = j.at("levels_per_rail").get<int>();
  return k;
}

ordered_json pam_to_json(const PamConfig& p) {
  ordered_json j;
  j["symbol_rate"] = p.symbol_rate;
  j["rolloff"] = p.rolloff;
  j["span_symbols"] = p.span_symbols;
  j["samples_per_symbol"] = p.samples_per_symbol;
  return j;
}

PamConfig pam_from_json(const json& j) {
  PamConfig p;
  p.symbol_rate = get_or(j, "symbol_rate", p.symbol_rate);
  p.rolloff = get_or(j, "rolloff", p.rolloff);
  if (j.contains("span_symbols")) p.span_symbols = j.at("span_symbols").get<int>();
  if (j.contains("samples_per_symbol")) p.samples_per_symbol = j.at("samples_per_symbol").get<int>();
  return p;
}

ordered_json cap_to_json(const CapConfig& c) {
  ordered_json j;
  j["symbol_rate"] = c.symbol_rate;
  j["rolloff"] = c.rolloff;
  j["span_symbols"] = c.span_symbols;
  j["samples_per_symbol"] = c.samples_per_symbol;
  j["center_frequency"] = c.center_frequency;
  return j;
}

CapConfig cap_from_json(const json& j) {
  CapConfig c;
  c.symbol_rate = get_or(j, "symbol_rate", c.symbol_rate);
  c.rolloff = get_or(j, "rolloff", c.rolloff);
  if (j.contains("span_symbols")) c.span_symbols = j.at("span_symbols").get<int>();
  if (j.contains("samples_per_symbol")) c.samples_per_symbol = j.at("samples_per_symbol").get<int>();
  c.center_frequency = get_or(j, "center_frequency", c.center_frequency);
  return c;
}

ordered_json point_to_json(const PointRecord& p) {
  ordered_json j;
  j["grid_value"] = p.grid_value;
  j["ber"] = p.ber;
  j["bits"] = p.bits;
  j["errors"] = p.errors;
  j["evm_pct"] = p.evm_pct;
  j["ser"] = p.ser;
  j["warm_up_excluded"] = p.warm_up_excluded;
  j["clamped_samples"] = p.clamped_samples;
  j["min_phase_rate"] = p.min_phase_rate;
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("emit: cannot open " + path);
  out << text;
  if (!out) throw std::runtime_error("emit: failed writing " + path);
}

}  // namespace

std::string experiment_config_to_json(const ExperimentConfig& cfg) {
  ordered_json j;
  j["format"] = to_string(cfg.format);
  j["kk"] = kk_to_json(cfg.kk);
  j["pam4"] = pam_to_json(cfg.pam);
  j["cap16"] = cap_to_json(cfg.cap);
  j["channel"] = channel_to_json(cfg.channel);
  j["equalizer"] = equalizer_to_json(cfg.equalizer);
  j["frame_symbols"] = cfg.frame_symbols;
  j["frames"] = cfg.frames;
  j["seed"] = cfg.seed;
  j["sweep"] = ordered_json{{"axis", to_string(cfg.axis)}, {"values", cfg.grid}};
  j["dump_constellations"] = cfg.dump_constellations;
  j["constellation_symbols"] = cfg.constellation_symbols;
  return j.dump(2);
}

ExperimentConfig experiment_config_from_json(const std::string& text) {
  const json j = json::parse(text);
  ExperimentConfig cfg;
  cfg.format = modem_format_from_string(j.at("format").get<std::string>());
  if (j.contains("kk")) cfg.kk = kk_from_json(j.at("kk"));
  if (j.contains("pam4")) cfg.pam = pam_from_json(j.at("pam4"));
  if (j.contains("cap16")) cfg.cap = cap_from_json(j.at("cap16"));
  if (j.contains("channel")) cfg.channel = channel_from_json(j.at("channel"));
  if (j.contains("equalizer")) cfg.equalizer = equalizer_from_json(j.at("equalizer"));
  if (j.contains("frame_symbols")) cfg.frame_symbols = j.at("frame_symbols").get<Index>();
  if (j.contains("frames")) cfg.frames = j.at("frames").get<int>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("sweep")) {
    cfg.axis = sweep_axis_from_string(j.at("sweep").at("axis").get<std::string>());
    cfg.grid = j.at("sweep").at("values").get<std::vector<double>>();
  }
  if (j.contains("dump_constellations")) cfg.dump_constellations = j.at("dump_constellations").get<bool>();
  if (j.contains("constellation_symbols")) cfg.constellation_symbols = j.at("constellation_symbols").get<Index>();
  return cfg;
}

std::string compare_config_to_json(const CompareConfig& cfg) {
  ordered_json j;
  j["dac_rate"] = cfg.dac_rate;
  j["bit_rate"] = cfg.bit_rate;
  j["channel"] = channel_to_json(cfg.channel);
  j["equalizer"] = equalizer_to_json(cfg.equalizer);
  j["power_grid"] = cfg.power_grid;
  j["frame_symbols"] = cfg.frame_symbols;
  j["frames"] = cfg.frames;
  j["seed"] = cfg.seed;
  j["kk_amplitude_a"] = cfg.kk_amplitude_a;
  j["rolloff"] = cfg.rolloff;
  j["span_symbols"] = cfg.span_symbols;
  return j.dump(2);
}

CompareConfig compare_config_from_json(const std::string& text) {
  const json j = json::parse(text);
  CompareConfig cfg;
  cfg.dac_rate = get_or(j, "dac_rate", cfg.dac_rate);
  cfg.bit_rate = get_or(j, "bit_rate", cfg.bit_rate);
  if (j.contains("channel")) cfg.channel = channel_from_json(j.at("channel"));
  if (j.contains("equalizer")) cfg.equalizer = equalizer_from_json(j.at("equalizer"));
  if (j.contains("power_grid")) cfg.power_grid = j.at("power_grid").get<std::vector<double>>();
  if (j.contains("frame_symbols")) cfg.frame_symbols = j.at("frame_symbols").get<Index>();
  if (j.contains("frames")) cfg.frames = j.at("frames").get<int>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.kk_amplitude_a = get_or(j, "kk_amplitude_a", cfg.kk_amplitude_a);
  cfg.rolloff = get_or(j, "rolloff", cfg.rolloff);
  if (j.contains("span_symbols")) cfg.span_symbols = j.at("span_symbols").get<int>();
  return cfg;
}

std::string report_csv(const BerReport& report) {
  std::string out = "grid_value,ber,bits,errors,evm_pct,ser,min_phase_rate,clamped_samples\n";
  for (const auto& p : report.points) {
    out += fmt(p.grid_value) + ',' + fmt(p.ber) + ',' + std::to_string(p.bits) + ',' +
           std::to_string(p.errors) + ',' + fmt(p.evm_pct) + ',' + fmt(p.ser) + ',' +
           fmt(p.min_phase_rate) + ',' + std::to_string(p.clamped_samples) + '\n';
  }
  return out;
}

std::vector<PointRecord> parse_report_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "grid_value,ber,bits,errors,evm_pct,ser,min_phase_rate,clamped_samples")
    throw std::runtime_error("parse_report_csv: unexpected header");
  std::vector<PointRecord> points;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 8) throw std::runtime_error("parse_report_csv: bad row '" + line + "'");
    PointRecord p;
    p.grid_value = std::stod(fields[0]);
    p.ber = std::stod(fields[1]);
    p.bits = std::stoll(fields[2]);
    p.errors = std::stoll(fields[3]);
    p.evm_pct = std::stod(fields[4]);
    p.ser = std::stod(fields[5]);
    p.min_phase_rate = std::stod(fields[6]);
    p.clamped_samples = std::stoll(fields[7]);
    points.push_back(p);
  }
  return points;
}

std::string report_json(const BerReport& report) {
  ordered_json j;
  j["config"] = ordered_json::parse(experiment_config_to_json(report.config));
  j["points"] = ordered_json::array();
  for (const auto& p : report.points) j["points"].push_back(point_to_json(p));
  if (report.sensitivity) {
    j["sensitivity"] = ordered_json{{"axis", to_string(report.config.axis)},
                                    {"value", report.sensitivity->value},
                                    {"hd_fec_ber", kHdFecBer},
                                    {"flagged_non_monotone", report.sensitivity->flagged}};
  } else {
    j["sensitivity"] = nullptr;  // threshold not bracketed
  }
  return j.dump(2);
}

void emit_report(const BerReport& report, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const auto dir = std::filesystem::path(out_dir);
  write_text((dir / "report.csv").string(), report_csv(report));
  write_text((dir / "report.json").string(), report_json(report));
  if (report.config.dump_constellations) {
    for (std::size_t i = 0; i < report.points.size(); ++i) {
      std::string body = "i,q\n";
      for (const auto& iq : report.points[i].constellation)
        body += fmt(iq[0]) + ',' + fmt(iq[1]) + '\n';
      write_text((dir / ("constellation_" + std::to_string(i) + ".csv")).string(), body);
    }
  }
}

std::string comparison_json(const FormatComparison& c) {
  ordered_json j;
  j["config"] = ordered_json::parse(compare_config_to_json(c.config));
  j["entries"] = ordered_json::array();
  for (const auto& e : c.entries) {
    ordered_json ej;
    ej["format"] = e.format;
    ej["symbol_rate"] = e.symbol_rate;
    ej["samples_per_symbol"] = e.samples_per_symbol;
    ej["bits_per_symbol"] = e.bits_per_symbol;
    ej["bit_rate"] = e.bit_rate;
    ej["points"] = ordered_json::array();
    for (const auto& p : e.points) ej["points"].push_back(point_to_json(p));
    if (e.sensitivity) {
      ej["sensitivity_power_scale"] = e.sensitivity->value;
      ej["sensitivity_flagged"] = e.sensitivity->flagged;
    } else {
      ej["sensitivity_power_scale"] = nullptr;
      ej["sensitivity_note"] = "threshold not bracketed";
    }
    j["entries"].push_back(ej);
  }
  j["dac_budget"] = ordered_json::array();
  for (const auto& r : c.dac_budget) {
    j["dac_budget"].push_back(ordered_json{{"format", r.format},
                                           {"dac_rate", r.dac_rate},
                                           {"samples_per_symbol", r.samples_per_symbol},
                                           {"max_symbol_rate", r.max_symbol_rate},
                                           {"bits_per_symbol", r.bits_per_symbol},
                                           {"max_bit_rate", r.max_bit_rate}});
  }
  j["reference_note"] = c.reference_note;
  return j.dump(2);
}

std::string dac_budget_csv(const FormatComparison& c) {
  std::string out = "format,dac_rate,samples_per_symbol,max_symbol_rate,bits_per_symbol,max_bit_rate\n";
  for (const auto& r : c.dac_budget) {
    out += r.format + ',' + fmt(r.dac_rate) + ',' + std::to_string(r.samples_per_symbol) + ',' +
           fmt(r.max_symbol_rate) + ',' + std::to_string(r.bits_per_symbol) + ',' + fmt(r.max_bit_rate) + '\n';
  }
  return out;
}

std::string sensitivity_csv(const FormatComparison& c) {
  std::string out = "format,bit_rate,sensitivity_power_scale,flagged,bracketed\n";
  for (const auto& e : c.entries) {
    out += e.format + ',' + fmt(e.bit_rate) + ',';
    if (e.sensitivity) {
      out += fmt(e.sensitivity->value) + ',' + (e.sensitivity->flagged ? "1" : "0") + ",1\n";
    } else {
      out += ",,0\n";
    }
  }
  return out;
}

void emit_comparison(const FormatComparison& c, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const auto dir = std::filesystem::path(out_dir);
  write_text((dir / "comparison.json").string(), comparison_json(c));
  write_text((dir / "dac_budget.csv").string(), dac_budget_csv(c));
  write_text((dir / "sensitivity.csv").string(), sensitivity_csv(c));
}

}  // namespace kklink
