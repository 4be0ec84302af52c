// Winding number of a complex time trajectory about the origin: the sum of
// principal-value phase increments between consecutive samples, divided by
// 2*pi and rounded. Zero is the minimum-phase criterion.
#pragma once

#include "kklink/waveform.hpp"

#include <cmath>

namespace kklink {

inline constexpr double kWindingOriginEps = 1e-12;

// Throws if any sample comes within `origin_eps` of the origin, where the
// winding question is ill-posed.
template <typename Scalar>
int winding_number(const Array1<std::complex<Scalar>>& h, Scalar origin_eps = Scalar(kWindingOriginEps)) {
  const Index n = h.size();
  if (n < 2) throw std::invalid_argument("winding_number: need at least 2 samples");

  Scalar accumulated = 0;
  for (Index k = 0; k < n; ++k) {
    if (std::abs(h[k]) < origin_eps) throw std::domain_error("winding_number: trajectory crosses the origin");
    if (k > 0) accumulated += std::arg(h[k] / h[k - 1]);
  }
  return static_cast<int>(std::lround(accumulated / (2.0 * M_PI)));
}

inline int winding_number(const ComplexWaveform& h, double origin_eps = kWindingOriginEps) {
  require_valid(h, "winding_number");
  return winding_number<Real>(h.samples, origin_eps);
}

}  // namespace kklink
