#include "kklink/pam4.hpp"

#include "kklink/gray.hpp"
#include "kklink/pulse_shape.hpp"

#include <stdexcept>

namespace kklink {

void PamConfig::validate() const {
  if (symbol_rate <= 0.0) throw std::invalid_argument("PamConfig: symbol_rate must be > 0");
  if (rolloff < 0.0 || rolloff > 1.0) throw std::invalid_argument("PamConfig: rolloff must be in [0, 1]");
  if (span_symbols < 2) throw std::invalid_argument("PamConfig: span_symbols must be >= 2");
  if (samples_per_symbol < 1) throw std::invalid_argument("PamConfig: samples_per_symbol must be >= 1");
}

RealWaveform pam4_modulate(const std::vector<int>& bits, const PamConfig& cfg) {
  cfg.validate();
  if (bits.empty() || bits.size() % 2 != 0)
    throw std::invalid_argument("pam4_modulate: bit count must be a positive multiple of 2");
  const PulseShape pulse = rrc_taps(cfg.rolloff, cfg.span_symbols, cfg.samples_per_symbol);
  const RealArray symbols = gray_map_rail(bits, 4);
  return {shape(symbols, pulse) / pulse.center_tap(), cfg.sample_rate()};
}

PamDemodResult pam4_demodulate(const RealWaveform& received, const PamConfig& cfg,
                               const EqualizerConfig& eq, const RealArray& training) {
  cfg.validate();
  require_valid(received, "pam4_demodulate");
  const PulseShape pulse = rrc_taps(cfg.rolloff, cfg.span_symbols, cfg.samples_per_symbol);
  const int sps = cfg.samples_per_symbol;
  const Index n_symbols = (received.size() - pulse.taps.size() + 1) / sps;
  if (n_symbols < 1 || n_symbols * sps + pulse.taps.size() - 1 != received.size())
    throw std::invalid_argument("pam4_demodulate: waveform length does not match a shaped frame");

  const RealArray filtered = matched_filter(received.samples, pulse);
  const Index offset = best_timing_offset(filtered, 2 * pulse.delay(), sps, n_symbols);
  RealArray soft = downsample(filtered, offset, sps, n_symbols) * pulse.center_tap();

  PamDemodResult out;
  if (training.size() > 0) {
    if (training.size() > n_symbols) throw std::invalid_argument("pam4_demodulate: training prefix too long");
    EqualizerConfig cfg_eq = eq;
    cfg_eq.cross_taps = 0;  // single channel
    cfg_eq.training_symbols = training.size();
    RealArray ref = RealArray::Zero(n_symbols);
    ref.head(training.size()) = training;
    const RealArray zeros = RealArray::Zero(n_symbols);
    const EqualizerState state = train_lms(soft, zeros, ref, zeros, cfg_eq);
    EqualizedPair pair = equalize_aligned(soft, zeros, state);
    soft = std::move(pair.r_i);
    out.warm_up = pair.warm_up;
  }
  out.bits = gray_unmap_rail(slice_rail(soft, 4), 4);
  out.soft = std::move(soft);
  return out;
}

}  // namespace kklink
