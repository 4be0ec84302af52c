// Two-channel cross-coupled feed-forward equalizer with LMS adaptation,
// operating on symbol-spaced post-matched-filter samples:
//
//   r_I(n) = sum_m x_I(n-m) w_I(m)  + sum_l x_Q(n-dc-l) w_IQ(l)
//   r_Q(n) = sum_m x_Q(n-m) w_Q(m)  + sum_l x_I(n-dc-l) w_QI(l)
//
// The main filters are causal with the trained decision delay at their
// center. The cross filters are offset by dc = cross_delay() so that their
// window brackets the decision instant, filling the earlier side first: on a
// zero-phase link the cross-coupling is odd about the decision instant (a
// null on it, peaks immediately adjacent), so the first tap must sit next to
// the decided symbol, and a couple of taps already span both peaks.
//
// Single-channel use (PAM) feeds zeros on the Q inputs with cross_taps = 0.
#pragma once

#include "kklink/waveform.hpp"

#include <algorithm>
#include <string>

namespace kklink {

struct EqualizerConfig {
  int main_taps = 10;   // M
  int cross_taps = 6;   // L
  double step_size = 1e-3;
  Index training_symbols = 1000;
  int passes = 1;

  // Center-spike position of the main filters; equalize_aligned compensates
  // this many symbols of delay.
  Index decision_delay() const { return main_taps / 2; }
  // Offset of the cross-filter window; its lags run dc .. dc+L-1 around the
  // decision instant, one extra on the earlier side when L is odd.
  Index cross_delay() const {
    return cross_taps > 0 ? std::max<Index>(0, decision_delay() - (cross_taps + 1) / 2) : 0;
  }
  void validate() const;
};

struct EqualizerState {
  RealArray w_i;   // M main taps, I channel
  RealArray w_iq;  // L cross taps, Q into I
  RealArray w_q;   // M main taps, Q channel
  RealArray w_qi;  // L cross taps, I into Q
  double converged_mse = 0.0;
  EqualizerConfig config;
};

EqualizerState make_center_spike_state(const EqualizerConfig& cfg);

struct EqualizedPair {
  RealArray r_i;
  RealArray r_q;
  Index warm_up = 0;  // leading outputs computed on zero-padded history
};

// Raw causal filter; history before sample 0 is zero. warm_up = max(M,L)-1.
EqualizedPair equalize(const RealArray& x_i, const RealArray& x_q, const EqualizerState& state);

// equalize() advanced by decision_delay so output k estimates symbol k; the
// tail is computed on zero-extended input.
EqualizedPair equalize_aligned(const RealArray& x_i, const RealArray& x_q, const EqualizerState& state);

// Joint LMS from a known training prefix (the first cfg.training_symbols of
// the reference, center-spike initialization, cfg.passes epochs). Throws on
// divergence (epoch MSE above 10x the first epoch's).
EqualizerState train_lms(const RealArray& x_i, const RealArray& x_q, const RealArray& ref_i,
                         const RealArray& ref_q, const EqualizerConfig& cfg);

// JSON round trip for reproducibility (tap arrays plus config echo).
std::string equalizer_state_to_json(const EqualizerState& state);
EqualizerState equalizer_state_from_json(const std::string& text);

}  // namespace kklink
