#include "kklink/mix.hpp"
#include "kklink/rng.hpp"

#include <doctest.h>

#include <unsupported/Eigen/FFT>

#include <cmath>

using namespace kklink;

namespace {

ComplexArray random_baseband(Index n, std::uint64_t seed) {
  Rng rng(seed);
  // narrowband: slow random walk, spectrum concentrated near DC
  ComplexArray x(n);
  Complex acc(1.0, 0.0);
  for (Index k = 0; k < n; ++k) {
    acc += Complex(0.05 * rng.normal(), 0.05 * rng.normal());
    x[k] = acc;
  }
  x -= x.mean();
  return x;
}

Index peak_bin(const ComplexArray& x) {
  Eigen::FFT<double> fft;
  Eigen::VectorXcd spec;
  Eigen::VectorXcd xv = x.matrix();
  fft.fwd(spec, xv);
  Index best = 0;
  double mag = -1.0;
  for (Index k = 0; k < spec.size(); ++k) {
    if (std::abs(spec[k]) > mag) {
      mag = std::abs(spec[k]);
      best = k;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("mix followed by unmix is the identity") {
  const ComplexWaveform x{random_baseband(2048, 3), 1e6};
  const ComplexWaveform back = mix(mix(x, 2.13e5, +1), 2.13e5, -1);
  CHECK((back.samples - x.samples).abs().maxCoeff() < 1e-12);
}

TEST_CASE("mixing a constant produces a pure tone") {
  const Index n = 1024;
  const double fs = 1024.0, f = 32.0;
  const ComplexWaveform one{ComplexArray::Constant(n, Complex(1.0, 0.0)), fs};
  const ComplexWaveform tone = mix(one, f, +1);
  for (Index k = 0; k < n; ++k) {
    const Complex want = std::polar(1.0, 2.0 * M_PI * f * static_cast<double>(k) / fs);
    CHECK(std::abs(tone.samples[k] - want) < 1e-12);
  }
}

TEST_CASE("mixing shifts the spectrum peak by the carrier bin") {
  const Index n = 4096;
  const double fs = 4096.0;
  const ComplexArray x = random_baseband(n, 8);
  const Index base = peak_bin(x);
  REQUIRE(base < 64);  // narrowband by construction
  const Index k0 = 512;
  const ComplexArray up = mix<double>(x, fs, static_cast<double>(k0), +1);
  CHECK(peak_bin(up) == base + k0);
}

TEST_CASE("mix validates carrier and sign") {
  const ComplexWaveform x{random_baseband(64, 1), 100.0};
  CHECK_THROWS_AS(mix(x, 50.0, +1), std::domain_error);   // at Nyquist
  CHECK_THROWS_AS(mix(x, -60.0, -1), std::domain_error);  // beyond Nyquist
  CHECK_THROWS_AS(mix(x, 10.0, 0), std::invalid_argument);
  CHECK_NOTHROW(mix(x, 49.9, -1));
}
