// PAM-4 reference modem: Gray-mapped 4-level real baseband with RRC shaping,
// matched filtering and a single-channel trained FFE.
#pragma once

#include "kklink/equalizer.hpp"
#include "kklink/waveform.hpp"

#include <vector>

namespace kklink {

struct PamConfig {
  double symbol_rate = 1.25e9;
  double rolloff = 0.1;
  int span_symbols = 30;
  int samples_per_symbol = 2;
  // levels fixed at Gray-labeled {-3,-1,+1,+3}

  double sample_rate() const { return symbol_rate * samples_per_symbol; }
  void validate() const;
};

RealWaveform pam4_modulate(const std::vector<int>& bits, const PamConfig& cfg);

struct PamDemodResult {
  RealArray soft;          // equalized soft symbols
  std::vector<int> bits;   // sliced and inverse-Gray decoded
  Index warm_up = 0;
};

// training: known symbol prefix (may be empty; the FFE is then skipped and
// raw matched-filter outputs are sliced).
PamDemodResult pam4_demodulate(const RealWaveform& received, const PamConfig& cfg,
                               const EqualizerConfig& eq, const RealArray& training);

}  // namespace kklink
