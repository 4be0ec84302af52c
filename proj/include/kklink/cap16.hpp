// CAP-16 reference modem: two Gray-mapped 4-level rails on an orthogonal
// passband filter pair f_I = g cos, f_Q = g sin (g = RRC), two transmit and
// two receive filters, and the 2x2 cross-coupled equalizer.
#pragma once

#include "kklink/equalizer.hpp"
#include "kklink/gray.hpp"
#include "kklink/waveform.hpp"

#include <vector>

namespace kklink {

struct CapConfig {
  double symbol_rate = 625e6;
  double rolloff = 0.1;
  int span_symbols = 30;
  int samples_per_symbol = 4;
  double center_frequency = 0.0;  // 0 -> default R_s(1+rolloff)/2

  double carrier_frequency() const {
    return center_frequency > 0.0 ? center_frequency : symbol_rate * (1.0 + rolloff) / 2.0;
  }
  double sample_rate() const { return symbol_rate * samples_per_symbol; }
  void validate() const;
};

struct CapFilterPair {
  RealArray f_i;  // g(t) cos(2 pi f_c t), even about the center tap
  RealArray f_q;  // g(t) sin(2 pi f_c t), odd about the center tap
  Index delay = 0;
};

CapFilterPair cap_filters(const CapConfig& cfg);

RealWaveform cap16_modulate(const std::vector<int>& bits, const CapConfig& cfg);

struct CapDemodResult {
  SymbolFrame soft;
  std::vector<int> bits;
  Index warm_up = 0;
};

// training: known symbol prefix for the equalizer (empty -> skip).
CapDemodResult cap16_demodulate(const RealWaveform& received, const CapConfig& cfg,
                                const EqualizerConfig& eq, const SymbolFrame& training);

}  // namespace kklink
