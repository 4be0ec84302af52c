#include "kklink/cap16.hpp"

#include "kklink/pulse_shape.hpp"

#include <cmath>
#include <stdexcept>

namespace kklink {

void CapConfig::validate() const {
  if (symbol_rate <= 0.0) throw std::invalid_argument("CapConfig: symbol_rate must be > 0");
  if (rolloff < 0.0 || rolloff > 1.0) throw std::invalid_argument("CapConfig: rolloff must be in [0, 1]");
  if (span_symbols < 2) throw std::invalid_argument("CapConfig: span_symbols must be >= 2");
  if (samples_per_symbol < 2) throw std::invalid_argument("CapConfig: samples_per_symbol must be >= 2");
  if (!(carrier_frequency() < sample_rate() / 2.0))
    throw std::invalid_argument("CapConfig: center frequency not representable at this sample rate");
}

CapFilterPair cap_filters(const CapConfig& cfg) {
  cfg.validate();
  const PulseShape g = rrc_taps(cfg.rolloff, cfg.span_symbols, cfg.samples_per_symbol);
  const double w = 2.0 * M_PI * cfg.carrier_frequency() / cfg.sample_rate();
  const Index n = g.taps.size();
  CapFilterPair pair;
  pair.delay = g.delay();
  pair.f_i = RealArray(n);
  pair.f_q = RealArray(n);
  for (Index k = 0; k < n; ++k) {
    const double t = static_cast<double>(k - pair.delay);
    pair.f_i[k] = g.taps[k] * std::cos(w * t);
    pair.f_q[k] = g.taps[k] * std::sin(w * t);
  }
  return pair;
}

namespace {

RealArray upsample_zero_stuff(const RealArray& symbols, int sps) {
  RealArray up = RealArray::Zero(symbols.size() * sps);
  for (Index k = 0; k < symbols.size(); ++k) up[k * sps] = symbols[k];
  return up;
}

}  // namespace

RealWaveform cap16_modulate(const std::vector<int>& bits, const CapConfig& cfg) {
  cfg.validate();
  if (bits.empty() || bits.size() % 4 != 0)
    throw std::invalid_argument("cap16_modulate: bit count must be a positive multiple of 4");
  const SymbolFrame frame = map_bits(bits, 4);
  const CapFilterPair f = cap_filters(cfg);
  const RealArray up_i = upsample_zero_stuff(frame.i_symbols, cfg.samples_per_symbol);
  const RealArray up_q = upsample_zero_stuff(frame.q_symbols, cfg.samples_per_symbol);
  return {convolve_full(up_i, f.f_i) - convolve_full(up_q, f.f_q), cfg.sample_rate()};
}

CapDemodResult cap16_demodulate(const RealWaveform& received, const CapConfig& cfg,
                                const EqualizerConfig& eq, const SymbolFrame& training) {
  cfg.validate();
  require_valid(received, "cap16_demodulate");
  const CapFilterPair f = cap_filters(cfg);
  const int sps = cfg.samples_per_symbol;
  const Index taps_len = f.f_i.size();
  const Index n_symbols = (received.size() - taps_len + 1) / sps;
  if (n_symbols < 1 || n_symbols * sps + taps_len - 1 != received.size())
    throw std::invalid_argument("cap16_demodulate: waveform length does not match a shaped frame");

  // Matched (correlation) receive filters; the autocorrelation peak
  // normalizes the cascade back to nominal levels.
  const double peak_i = f.f_i.square().sum();
  const double peak_q = f.f_q.square().sum();
  const RealArray r_i = correlate_full(received.samples, f.f_i) / peak_i;
  const RealArray r_q = correlate_full(received.samples, f.f_q) / (-peak_q);

  const Index nominal = 2 * f.delay;
  const RealArray envelope = (r_i.square() + r_q.square()).sqrt();
  const Index offset = best_timing_offset(envelope, nominal, sps, n_symbols);

  SymbolFrame soft{downsample(r_i, offset, sps, n_symbols), downsample(r_q, offset, sps, n_symbols), 4};

  CapDemodResult out;
  if (training.size() > 0) {
    if (training.size() > n_symbols) throw std::invalid_argument("cap16_demodulate: training prefix too long");
    EqualizerConfig cfg_eq = eq;
    cfg_eq.training_symbols = training.size();
    RealArray ref_i = RealArray::Zero(n_symbols);
    RealArray ref_q = RealArray::Zero(n_symbols);
    ref_i.head(training.size()) = training.i_symbols;
    ref_q.head(training.size()) = training.q_symbols;
    const EqualizerState state = train_lms(soft.i_symbols, soft.q_symbols, ref_i, ref_q, cfg_eq);
    EqualizedPair pair = equalize_aligned(soft.i_symbols, soft.q_symbols, state);
    soft.i_symbols = std::move(pair.r_i);
    soft.q_symbols = std::move(pair.r_q);
    out.warm_up = pair.warm_up;
  }
  out.bits = unmap_symbols({slice_rail(soft.i_symbols, 4), slice_rail(soft.q_symbols, 4), 4});
  out.soft = std::move(soft);
  return out;
}

}  // namespace kklink
