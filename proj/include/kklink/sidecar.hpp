// Frame metadata sidecar (JSON text) carrying everything the receiver needs
// out-of-band: modulation parameters, bias point, transmit rms and the bit
// seed that reproduces the payload.
#pragma once

#include "kklink/waveform.hpp"

#include <cstdint>
#include <string>

namespace kklink {

struct TxSidecar {
  std::string format;  // "kk" | "pam4" | "cap16"
  double amplitude_a = 0.0;
  double symbol_rate = 0.0;
  double rolloff = 0.0;
  int span_symbols = 0;
  int samples_per_symbol = 0;
  int levels_per_rail = 4;
  double bias = 0.0;
  double tx_rms = 0.0;
  Index frame_symbols = 0;
  std::uint64_t seed = 0;
};

std::string sidecar_to_json(const TxSidecar& s);
TxSidecar sidecar_from_json(const std::string& text);

void write_sidecar(const std::string& path, const TxSidecar& s);
TxSidecar read_sidecar(const std::string& path);

}  // namespace kklink
