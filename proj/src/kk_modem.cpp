#include "kklink/kk_modem.hpp"

#include "kklink/hilbert.hpp"
#include "kklink/mix.hpp"
#include "kklink/winding.hpp"

#include <cmath>
#include <stdexcept>

namespace kklink {

int KkConfig::bits_per_symbol() const { return 2 * bits_per_level(levels_per_rail); }

void KkConfig::validate() const {
  if (amplitude_a < 0.0) throw std::invalid_argument("KkConfig: amplitude_a must be >= 0");
  if (symbol_rate <= 0.0) throw std::invalid_argument("KkConfig: symbol_rate must be > 0");
  if (rolloff < 0.0 || rolloff > 1.0) throw std::invalid_argument("KkConfig: rolloff must be in [0, 1]");
  if (span_symbols < 2) throw std::invalid_argument("KkConfig: span_symbols must be >= 2");
  if (samples_per_symbol < 2) throw std::invalid_argument("KkConfig: samples_per_symbol must be >= 2");
  bits_per_level(levels_per_rail);
  if (!(samples_per_symbol * symbol_rate > 2.0 * carrier_frequency()))
    throw std::invalid_argument("KkConfig: carrier not representable at this sample rate");
}

namespace {

// Both rails shaped so that nominal constellation levels appear at symbol
// instants (shape() itself has unit-energy gain).
std::pair<RealArray, RealArray> shaped_rails(const SymbolFrame& frame, const PulseShape& pulse) {
  const double gain = 1.0 / pulse.center_tap();
  return {shape(frame.i_symbols, pulse) * gain, shape(frame.q_symbols, pulse) * gain};
}

}  // namespace

ModulatedFrame kk_modulate(const SymbolFrame& frame, const KkConfig& config) {
  config.validate();
  if (frame.size() == 0 || frame.i_symbols.size() != frame.q_symbols.size())
    throw std::invalid_argument("kk_modulate: invalid symbol frame");

  const PulseShape pulse = rrc_taps(config.rolloff, config.span_symbols, config.samples_per_symbol);
  const auto [i_t, q_t] = shaped_rails(frame, pulse);

  const double fs = config.sample_rate();
  const double omega = 2.0 * M_PI * config.carrier_frequency();
  const Index n = i_t.size();
  const double a = config.amplitude_a;

  RealArray y(n);
  ComplexArray h(n);
  for (Index k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / fs;
    const double c = std::cos(omega * t);
    const double s = std::sin(omega * t);
    const double re = i_t[k] + a * c;
    const double im = q_t[k] + a * s;
    y[k] = std::sqrt(re * re + im * im);
    // h = A + (I - iQ) e^{iwt}; |h| equals y above
    h[k] = a + Complex(i_t[k], -q_t[k]) * Complex(c, s);
  }

  ModulatedFrame out;
  out.bias = y.mean();
  out.peak_to_peak = y.maxCoeff() - y.minCoeff();
  out.waveform = {y - out.bias, fs};
  out.tx_rms = std::sqrt(out.waveform.samples.square().mean());
  out.config = config;
  try {
    out.min_phase_ok = winding_number<Real>(h) == 0;
  } catch (const std::domain_error&) {
    // trajectory touches the origin: not minimum phase
    out.min_phase_ok = false;
  }
  return out;
}

PhaseRetrieval kk_phase_retrieve(const RealWaveform& magnitude) {
  require_valid(magnitude, "kk_phase_retrieve");
  const double mean = magnitude.samples.mean();
  if (!(mean > 0.0)) throw std::invalid_argument("kk_phase_retrieve: frame mean must be positive");
  const double floor = 1e-6 * mean;

  RealArray clamped = magnitude.samples.max(floor);
  const Index n_clamped = (magnitude.samples < floor).count();
  RealArray phase = hilbert<Real>(clamped.log());
  return {{std::move(phase), magnitude.sample_rate}, n_clamped};
}

KkDemodResult kk_demodulate(const RealWaveform& received, double bias, double tx_rms,
                            const KkConfig& config) {
  config.validate();
  require_valid(received, "kk_demodulate");
  if (std::abs(received.sample_rate - config.sample_rate()) > 1e-6 * config.sample_rate())
    throw std::invalid_argument("kk_demodulate: waveform sample rate does not match config");
  if (!std::isfinite(tx_rms) || tx_rms < 0.0) throw std::runtime_error("kk_demodulate: invalid tx_rms");

  const PulseShape pulse = rrc_taps(config.rolloff, config.span_symbols, config.samples_per_symbol);
  const int sps = config.samples_per_symbol;
  const Index n = received.size();
  const Index n_symbols = (n - pulse.taps.size() + 1) / sps;
  if (n_symbols < 1 || n_symbols * sps + pulse.taps.size() - 1 != n)
    throw std::invalid_argument("kk_demodulate: waveform length does not match a shaped frame");

  // AGC: undo any linear link gain by matching the transmitted rms. A silent
  // frame (either rms zero) passes through unscaled.
  const double rx_rms = std::sqrt(received.samples.square().mean());
  double gain = 1.0;
  if (rx_rms > 0.0 && tx_rms > 0.0) gain = tx_rms / rx_rms;
  if (!(gain > 0.0) || !std::isfinite(gain)) throw std::runtime_error("kk_demodulate: AGC gain estimate <= 0");

  RealWaveform intensity{received.samples * gain + bias, received.sample_rate};
  PhaseRetrieval pr = kk_phase_retrieve(intensity);

  ComplexArray h_hat(n);
  for (Index k = 0; k < n; ++k) h_hat[k] = std::polar(intensity.samples[k], pr.phase.samples[k]);

  ComplexArray s_hat = mix<Real>(h_hat - config.amplitude_a, received.sample_rate,
                                 config.carrier_frequency(), -1);

  // s = I - iQ
  RealArray i_t = matched_filter(s_hat.real(), pulse);
  RealArray q_t = matched_filter((-s_hat.imag()).eval(), pulse);

  const Index nominal = 2 * pulse.delay();
  const RealArray envelope = (i_t.square() + q_t.square()).sqrt();
  const Index offset = best_timing_offset(envelope, nominal, sps, n_symbols);

  const double gain_fix = pulse.center_tap();
  SymbolFrame soft{downsample(i_t, offset, sps, n_symbols) * gain_fix,
                   downsample(q_t, offset, sps, n_symbols) * gain_fix, config.levels_per_rail};
  return {std::move(soft), pr.clamped_samples};
}

double evm_percent(const SymbolFrame& received, const SymbolFrame& reference) {
  const Index n = reference.size();
  if (n < 1 || received.size() != n || reference.q_symbols.size() != n ||
      received.q_symbols.size() != received.i_symbols.size())
    throw std::invalid_argument("evm_percent: frames must be non-empty and equal length");
  double err = 0.0, ref = 0.0;
  for (Index k = 0; k < n; ++k) {
    const double ei = received.i_symbols[k] - reference.i_symbols[k];
    const double eq = received.q_symbols[k] - reference.q_symbols[k];
    err += ei * ei + eq * eq;
    ref += reference.i_symbols[k] * reference.i_symbols[k] + reference.q_symbols[k] * reference.q_symbols[k];
  }
  if (ref == 0.0) throw std::domain_error("evm_percent: reference frame has zero energy");
  return 100.0 * std::sqrt(err / ref);
}

double evm_percent_rail(const RealArray& received, const RealArray& reference) {
  if (reference.size() < 1 || received.size() != reference.size())
    throw std::invalid_argument("evm_percent_rail: sequences must be non-empty and equal length");
  const double ref = reference.square().sum();
  if (ref == 0.0) throw std::domain_error("evm_percent_rail: reference has zero energy");
  return 100.0 * std::sqrt((received - reference).square().sum() / ref);
}

}  // namespace kklink
