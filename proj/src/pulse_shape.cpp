#include "kklink/pulse_shape.hpp"

#include <cmath>
#include <stdexcept>

namespace kklink {

namespace {

// RRC impulse response at time t (in symbol periods, T = 1).
double rrc_point(double t, double a) {
  if (std::abs(t) < 1e-10) return 1.0 - a + 4.0 * a / M_PI;
  if (a > 0.0) {
    const double q = 4.0 * a * t;
    if (std::abs(1.0 - q * q) < 1e-9) {
      // removable singularity at |t| = 1/(4a)
      const double x = M_PI / (4.0 * a);
      return (a / std::sqrt(2.0)) * ((1.0 + 2.0 / M_PI) * std::sin(x) + (1.0 - 2.0 / M_PI) * std::cos(x));
    }
    return (std::sin(M_PI * t * (1.0 - a)) + 4.0 * a * t * std::cos(M_PI * t * (1.0 + a))) /
           (M_PI * t * (1.0 - q * q));
  }
  return std::sin(M_PI * t) / (M_PI * t);
}

}  // namespace

PulseShape rrc_taps(double rolloff, int span_symbols, int samples_per_symbol) {
  if (rolloff < 0.0 || rolloff > 1.0) throw std::invalid_argument("rrc_taps: rolloff must be in [0, 1]");
  if (span_symbols < 2) throw std::invalid_argument("rrc_taps: span_symbols must be >= 2");
  if (samples_per_symbol < 1) throw std::invalid_argument("rrc_taps: samples_per_symbol must be >= 1");

  const Index len = static_cast<Index>(span_symbols) * samples_per_symbol + 1;
  const Index center = (len - 1) / 2;
  RealArray taps(len);
  taps[center] = rrc_point(0.0, rolloff);
  for (Index k = 1; k <= center; ++k) {
    const double v = rrc_point(static_cast<double>(k) / samples_per_symbol, rolloff);
    taps[center + k] = v;
    taps[center - k] = v;  // mirrored, so symmetry is exact
  }
  taps /= std::sqrt(taps.square().sum());
  return {std::move(taps), samples_per_symbol, rolloff, span_symbols};
}

RealArray shape(const RealArray& symbols, const PulseShape& pulse) {
  if (symbols.size() == 0) throw std::invalid_argument("shape: empty symbol sequence");
  const int sps = pulse.samples_per_symbol;
  const Index n_up = symbols.size() * sps;
  const Index n_out = n_up + pulse.taps.size() - 1;
  RealArray out = RealArray::Zero(n_out);
  // Zero-stuffed input means the convolution collapses to one tap read per
  // (symbol, output) pair; accumulate symbol-by-symbol.
  for (Index k = 0; k < symbols.size(); ++k) {
    if (symbols[k] != 0.0) out.segment(k * sps, pulse.taps.size()) += symbols[k] * pulse.taps;
  }
  return out;
}

RealArray convolve_full(const RealArray& x, const RealArray& h) {
  if (x.size() == 0 || h.size() == 0) throw std::invalid_argument("convolve_full: empty input");
  const Index n_out = x.size() + h.size() - 1;
  RealArray out(n_out);
  const Eigen::VectorXd xv = x.matrix();
  const Eigen::VectorXd hv = h.matrix();
  for (Index n = 0; n < n_out; ++n) {
    const Index j_lo = std::max<Index>(0, n - h.size() + 1);
    const Index j_hi = std::min<Index>(n, x.size() - 1);
    // sum_j x[j] * h[n - j]
    out[n] = xv.segment(j_lo, j_hi - j_lo + 1).dot(hv.segment(n - j_hi, j_hi - j_lo + 1).reverse());
  }
  return out;
}

RealArray correlate_full(const RealArray& x, const RealArray& h) {
  return convolve_full(x, h.reverse().eval());
}

RealArray matched_filter(const RealArray& x, const PulseShape& pulse) {
  return convolve_full(x, pulse.taps);
}

RealArray downsample(const RealArray& x, Index offset, int sps, Index count) {
  if (offset < 0 || offset + (count - 1) * sps >= x.size())
    throw std::out_of_range("downsample: slice exceeds input");
  RealArray out(count);
  for (Index k = 0; k < count; ++k) out[k] = x[offset + k * sps];
  return out;
}

Index best_timing_offset(const RealArray& x, Index nominal, int sps, Index count) {
  Index best = nominal;
  double best_energy = -1.0;
  for (int p = -(sps / 2) + 1; p <= sps / 2; ++p) {
    const Index off = nominal + p;
    if (off < 0 || off + (count - 1) * sps >= x.size()) continue;
    double e = 0.0;
    for (Index k = 0; k < count; ++k) e += x[off + k * sps] * x[off + k * sps];
    if (e > best_energy) {
      best_energy = e;
      best = off;
    }
  }
  return best;
}

}  // namespace kklink
