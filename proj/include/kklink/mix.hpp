// Carrier mixing: pointwise multiplication by exp(sign * i * 2*pi*f*t),
// t taken from the sample index and rate, phase origin at sample 0.
#pragma once

#include "kklink/waveform.hpp"

#include <cmath>

namespace kklink {

template <typename Scalar>
Array1<std::complex<Scalar>> mix(const Array1<std::complex<Scalar>>& x, Scalar sample_rate, Scalar freq,
                                 int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("mix: sign must be +1 or -1");
  if (!(std::abs(freq) < sample_rate / 2)) throw std::domain_error("mix: |freq| must be below Nyquist");

  const Scalar step = Scalar(sign) * Scalar(2) * Scalar(M_PI) * freq / sample_rate;
  Array1<std::complex<Scalar>> out(x.size());
  for (Index k = 0; k < x.size(); ++k) {
    // polar() per sample rather than a recurrence: no phase drift over long frames
    out[k] = x[k] * std::polar(Scalar(1), step * Scalar(k));
  }
  return out;
}

inline ComplexWaveform mix(const ComplexWaveform& x, double freq, int sign) {
  require_valid(x, "mix");
  return {mix<Real>(x.samples, x.sample_rate, freq, sign), x.sample_rate};
}

}  // namespace kklink
