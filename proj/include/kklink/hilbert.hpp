// Discrete Hilbert transform via the frequency-domain analytic-signal
// method: negative-frequency bins zeroed, positive doubled, DC and Nyquist
// untouched. Exact for signals periodic in the frame; frames are processed
// whole and callers guard the edges.
//
// Sign convention: hilbert(cos) = sin.
#pragma once

#include "kklink/waveform.hpp"

#include <unsupported/Eigen/FFT>

namespace kklink {

// Analytic signal x + i*H[x] of a real frame.
template <typename Scalar>
Array1<std::complex<Scalar>> analytic_signal(const Array1<Scalar>& x) {
  using CVec = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;
  const Index n = x.size();
  if (n < 4) throw std::invalid_argument("analytic_signal: need at least 4 samples");

  Eigen::FFT<Scalar> fft;
  CVec spectrum;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> xm = x.matrix();
  fft.fwd(spectrum, xm);

  // One-sided spectrum: double strictly-positive bins, zero strictly-negative
  // ones. Bin 0 (DC) and, for even n, bin n/2 (Nyquist) stay as-is.
  const Index half = n / 2;
  const Index pos_end = (n % 2 == 0) ? half : half + 1;
  for (Index k = 1; k < pos_end; ++k) spectrum[k] *= Scalar(2);
  for (Index k = (n % 2 == 0) ? half + 1 : pos_end; k < n; ++k) spectrum[k] = std::complex<Scalar>(0, 0);

  CVec out;
  fft.inv(out, spectrum);
  return out.array();
}

template <typename Scalar>
Array1<Scalar> hilbert(const Array1<Scalar>& x) {
  return analytic_signal(x).imag();
}

inline RealWaveform hilbert(const RealWaveform& x) {
  require_valid(x, "hilbert");
  return {hilbert<Real>(x.samples), x.sample_rate};
}

}  // namespace kklink
