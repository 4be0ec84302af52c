#include "kklink/sidecar.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace kklink {

std::string sidecar_to_json(const TxSidecar& s) {
  nlohmann::ordered_json j;
  j["format"] = s.format;
  j["amplitude_a"] = s.amplitude_a;
  j["symbol_rate"] = s.symbol_rate;
  j["rolloff"] = s.rolloff;
  j["span_symbols"] = s.span_symbols;
  j["samples_per_symbol"] = s.samples_per_symbol;
  j["levels_per_rail"] = s.levels_per_rail;
  j["bias"] = s.bias;
  j["tx_rms"] = s.tx_rms;
  j["frame_symbols"] = s.frame_symbols;
  j["seed"] = s.seed;
  return j.dump(2);
}

TxSidecar sidecar_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  TxSidecar s;
  s.format = j.at("format").get<std::string>();
  if (s.format != "kk" && s.format != "pam4" && s.format != "cap16")
    throw std::runtime_error("sidecar: unknown format '" + s.format + "'");
  s.amplitude_a = j.at("amplitude_a").get<double>();
  s.symbol_rate = j.at("symbol_rate").get<double>();
  s.rolloff = j.at("rolloff").get<double>();
  s.span_symbols = j.at("span_symbols").get<int>();
  s.samples_per_symbol = j.at("samples_per_symbol").get<int>();
  s.levels_per_rail = j.at("levels_per_rail").get<int>();
  s.bias = j.at("bias").get<double>();
  s.tx_rms = j.at("tx_rms").get<double>();
  s.frame_symbols = j.at("frame_symbols").get<Index>();
  s.seed = j.at("seed").get<std::uint64_t>();
  return s;
}

void write_sidecar(const std::string& path, const TxSidecar& s) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("sidecar write: cannot open " + path);
  out << sidecar_to_json(s) << "\n";
  if (!out) throw std::runtime_error("sidecar write: failed writing " + path);
}

TxSidecar read_sidecar(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("sidecar read: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return sidecar_from_json(ss.str());
}

}  // namespace kklink
