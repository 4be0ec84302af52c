// Waveform containers: uniformly sampled real/complex signals with an
// explicit sample rate. All DSP in this library operates on these.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>

namespace kklink {

using Real = double;
using Complex = std::complex<double>;
using Eigen::Index;

template <typename Scalar>
using Array1 = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

using RealArray = Array1<Real>;
using ComplexArray = Array1<Complex>;

struct RealWaveform {
  RealArray samples;
  double sample_rate = 0.0;  // Hz

  Index size() const { return samples.size(); }
  double duration() const { return static_cast<double>(samples.size()) / sample_rate; }
};

struct ComplexWaveform {
  ComplexArray samples;
  double sample_rate = 0.0;  // Hz

  Index size() const { return samples.size(); }
  double duration() const { return static_cast<double>(samples.size()) / sample_rate; }
};

inline void require_valid(const RealWaveform& w, const char* what) {
  if (w.sample_rate <= 0.0) throw std::invalid_argument(std::string(what) + ": sample_rate must be > 0");
  if (w.samples.size() == 0) throw std::invalid_argument(std::string(what) + ": empty waveform");
}

inline void require_valid(const ComplexWaveform& w, const char* what) {
  if (w.sample_rate <= 0.0) throw std::invalid_argument(std::string(what) + ": sample_rate must be > 0");
  if (w.samples.size() == 0) throw std::invalid_argument(std::string(what) + ": empty waveform");
}

// Sample instants k / sample_rate, k = 0..n-1. Phase origin is sample 0.
inline RealArray time_axis(Index n, double sample_rate) {
  return RealArray::LinSpaced(n, 0.0, static_cast<double>(n - 1)) / sample_rate;
}

}  // namespace kklink
