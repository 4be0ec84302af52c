// Kramers-Kronig intensity modem.
//
// Transmit: Gray-mapped I/Q rails are RRC-shaped and combined with a carrier
// at f_c = R_s(1+rolloff)/2 into the nonnegative intensity
//   y(t) = sqrt((I(t) + A cos wt)^2 + (Q(t) + A sin wt)^2),
// the modulus of the single-sideband signal h(t) = A + s(t) e^{iwt} with
// s = I - iQ. The DC bias mean(y) is removed before transmission and travels
// out-of-band in the frame metadata.
//
// Receive: when h is minimum phase (its trajectory does not wind around the
// origin), the phase is recovered from the intensity alone as the Hilbert
// transform of log|h|; the baseband is then (|h| e^{i phi} - A) e^{-iwt},
// matched-filtered and downsampled back to soft symbols.
#pragma once

#include "kklink/gray.hpp"
#include "kklink/pulse_shape.hpp"
#include "kklink/waveform.hpp"

namespace kklink {

struct KkConfig {
  double amplitude_a = 20.0;  // the constant A
  double symbol_rate = 1e9;   // baud
  double rolloff = 0.1;
  int span_symbols = 30;
  int samples_per_symbol = 8;
  int levels_per_rail = 4;  // 4 -> KK-16, 2 -> KK-4

  // Carrier is derived, never stored.
  double carrier_frequency() const { return symbol_rate * (1.0 + rolloff) / 2.0; }
  double sample_rate() const { return symbol_rate * samples_per_symbol; }
  int bits_per_symbol() const;  // both rails together
  void validate() const;
};

struct ModulatedFrame {
  RealWaveform waveform;     // y' = y - mean(y), zero-mean drive signal
  double bias = 0.0;         // mean(y); restored at the receiver
  double tx_rms = 0.0;       // rms of y'; AGC reference
  double peak_to_peak = 0.0;
  bool min_phase_ok = false;  // winding number of A + s(t)e^{iwt} is zero
  KkConfig config;
};

struct PhaseRetrieval {
  RealWaveform phase;
  Index clamped_samples = 0;  // intensity samples floored before the log
};

struct KkDemodResult {
  SymbolFrame symbols;  // soft symbols; decisions happen downstream
  Index clamped_samples = 0;
};

ModulatedFrame kk_modulate(const SymbolFrame& frame, const KkConfig& config);

// phi = hilbert(log magnitude). Samples below 1e-6 * frame mean are clamped
// up before the log and counted.
PhaseRetrieval kk_phase_retrieve(const RealWaveform& magnitude);

// bias and tx_rms are the transmitter-reported values from the frame
// metadata. The received waveform is first rescaled so its rms matches
// tx_rms (AGC), then offset by bias to re-form |h|.
KkDemodResult kk_demodulate(const RealWaveform& received, double bias, double tx_rms,
                            const KkConfig& config);

// Error vector magnitude in percent, symbols taken as S = I + iQ:
// 100 * sqrt(sum |S' - S|^2 / sum |S|^2).
double evm_percent(const SymbolFrame& received, const SymbolFrame& reference);

// Per-rail variant used for quadrature-channel distortion studies.
double evm_percent_rail(const RealArray& received, const RealArray& reference);

}  // namespace kklink
