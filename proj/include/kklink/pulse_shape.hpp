// Root-raised-cosine pulse shaping. The matched cascade RRC*RRC is ISI-free
// at symbol spacing, so the same taps serve transmit shaping and receive
// matched filtering.
#pragma once

#include "kklink/waveform.hpp"

namespace kklink {

struct PulseShape {
  RealArray taps;             // unit energy, symmetric, span*sps + 1 long
  int samples_per_symbol = 0;
  double rolloff = 0.0;
  int span_symbols = 0;

  // Group delay of the symmetric FIR, in samples.
  Index delay() const { return (taps.size() - 1) / 2; }

  // Tap multiplying a symbol at its own center instant. Modems divide by
  // this so that nominal constellation levels appear at symbol instants.
  double center_tap() const { return taps[delay()]; }
};

// Closed-form RRC impulse response sampled at sps points per symbol over
// span_symbols symbols, singularities evaluated by their analytic limits,
// normalized to unit energy.
PulseShape rrc_taps(double rolloff, int span_symbols, int samples_per_symbol);

// Zero-stuffed upsampling by pulse.samples_per_symbol followed by full
// convolution with the taps. Output length is
// (symbols.size() + span_symbols) * samples_per_symbol; symbol k is centered
// at sample k*sps + pulse.delay().
RealArray shape(const RealArray& symbols, const PulseShape& pulse);

// Full linear convolution / cross-correlation with an arbitrary FIR.
RealArray convolve_full(const RealArray& x, const RealArray& h);
RealArray correlate_full(const RealArray& x, const RealArray& h);

// Full convolution with the taps (the taps are symmetric, so convolution and
// correlation coincide). Adds another pulse.delay() of group delay.
RealArray matched_filter(const RealArray& x, const PulseShape& pulse);

// x[offset + k*sps] for k = 0..count-1. Throws if the slice runs out of x.
RealArray downsample(const RealArray& x, Index offset, int sps, Index count);

// Timing-phase search: among offsets nominal+p, p in (-sps/2, sps/2], pick
// the one maximizing mean squared sample value over `count` symbol instants.
Index best_timing_offset(const RealArray& x, Index nominal, int sps, Index count);

}  // namespace kklink
