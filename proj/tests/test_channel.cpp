#include "kklink/channel.hpp"
#include "kklink/rng.hpp"

#include <doctest.h>

#include <unsupported/Eigen/FFT>

#include <cmath>

using namespace kklink;

namespace {

Eigen::VectorXcd spectrum(const RealArray& x) {
  Eigen::FFT<double> fft;
  Eigen::VectorXcd out;
  Eigen::VectorXd xv = x.matrix();
  fft.fwd(out, xv);
  return out;
}

RealWaveform tone(Index n, double fs, double f, double amp = 1.0) {
  RealArray x(n);
  for (Index k = 0; k < n; ++k) x[k] = amp * std::cos(2.0 * M_PI * f * static_cast<double>(k) / fs);
  return {x, fs};
}

}  // namespace

TEST_CASE("gaussian lowpass: unit DC gain") {
  const RealWaveform dc{RealArray::Constant(512, 2.5), 8e9};
  const RealWaveform out = gaussian_lowpass(dc, 1e9);
  CHECK((out.samples - 2.5).abs().maxCoeff() < 1e-12);
}

TEST_CASE("gaussian lowpass: half power at f3db, closed form beyond") {
  // fs/n = 15.625 MHz per bin; 1 GHz and 2 GHz sit on bins 64 and 128
  const Index n = 512;
  const double fs = 8e9, f3db = 1e9;

  const RealWaveform at_f3 = gaussian_lowpass(tone(n, fs, 1e9), f3db);
  const double gain_f3 = 2.0 * std::abs(spectrum(at_f3.samples)[64]) / static_cast<double>(n);
  CHECK(gain_f3 * gain_f3 == doctest::Approx(0.5).epsilon(1e-9));

  const RealWaveform at_2f3 = gaussian_lowpass(tone(n, fs, 2e9), f3db);
  const double gain_2f3 = 2.0 * std::abs(spectrum(at_2f3.samples)[128]) / static_cast<double>(n);
  CHECK(gain_2f3 == doctest::Approx(0.25).epsilon(1e-9));  // 2^-(2^2/2)
}

TEST_CASE("gaussian lowpass: linear, spectrum scales by |H|, output stays real") {
  Rng rng(6);
  const RealWaveform x{rng.normal_array(1024), 8e9};
  const RealWaveform y{rng.normal_array(1024), 8e9};
  const double f3db = 1.3e9;

  const RealWaveform lin_lhs =
      gaussian_lowpass({2.0 * x.samples - 3.0 * y.samples, x.sample_rate}, f3db);
  const RealArray lin_rhs =
      2.0 * gaussian_lowpass(x, f3db).samples - 3.0 * gaussian_lowpass(y, f3db).samples;
  CHECK((lin_lhs.samples - lin_rhs).abs().maxCoeff() < 1e-9);

  const auto in_spec = spectrum(x.samples);
  const auto out_spec = spectrum(gaussian_lowpass(x, f3db).samples);
  for (Index k = 0; k < in_spec.size(); ++k) {
    const double f = (k <= 512 ? double(k) : double(k) - 1024.0) * x.sample_rate / 1024.0;
    const double want = std::exp2(-0.5 * (f / f3db) * (f / f3db)) * std::abs(in_spec[k]);
    CHECK(std::abs(std::abs(out_spec[k]) - want) < 1e-9 * x.samples.abs().maxCoeff() * 1024);
  }

  CHECK(detail::gaussian_lowpass_complex(x, f3db).imag().abs().maxCoeff() < 1e-12);
}

TEST_CASE("infinite bandwidth and infinite OSNR pass the signal through") {
  Rng rng(8);
  const RealWaveform x{rng.normal_array(256), 8e9};
  ChannelConfig cfg;
  cfg.power_scale = 0.35;
  const RealWaveform out = apply_channel(x, cfg);
  CHECK((out.samples - 0.35 * x.samples).abs().maxCoeff() == 0.0);
}

TEST_CASE("noise variance matches the OSNR conversion within 0.1 dB") {
  Rng rng(3);
  const RealWaveform x{rng.normal_array(1000000), 8e9};
  ChannelConfig cfg;
  cfg.osnr_db = 12.0;
  cfg.seed = 77;
  const RealWaveform out = add_noise(x, cfg);
  const double sigma2 = (out.samples - x.samples).square().mean();
  const double want =
      x.samples.square().mean() * ((x.sample_rate / 2.0) / cfg.ref_bandwidth_hz) / std::pow(10.0, 1.2);
  CHECK(std::abs(10.0 * std::log10(sigma2 / want)) < 0.1);
}

TEST_CASE("noise floor stays fixed as power_scale varies") {
  Rng rng(4);
  const RealWaveform x{rng.normal_array(200000), 8e9};
  ChannelConfig cfg;
  cfg.osnr_db = 15.0;
  cfg.seed = 5;
  const RealWaveform unit = add_noise(x, cfg);
  cfg.power_scale = 0.1;
  const RealWaveform tenth = add_noise(x, cfg);
  const double n_unit = (unit.samples - x.samples).square().mean();
  const double n_tenth = (tenth.samples - 0.1 * x.samples).square().mean();
  CHECK(n_tenth == doctest::Approx(n_unit).epsilon(1e-12));
}

TEST_CASE("noise is deterministic per seed") {
  Rng rng(9);
  const RealWaveform x{rng.normal_array(4096), 8e9};
  ChannelConfig cfg;
  cfg.osnr_db = 10.0;
  cfg.seed = 123;
  const RealWaveform a = add_noise(x, cfg);
  const RealWaveform b = add_noise(x, cfg);
  CHECK((a.samples - b.samples).abs().maxCoeff() == 0.0);
  cfg.seed = 124;
  const RealWaveform c = add_noise(x, cfg);
  CHECK((a.samples - c.samples).abs().maxCoeff() > 0.0);
}

TEST_CASE("config validation") {
  ChannelConfig cfg;
  cfg.f3db_hz = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = ChannelConfig{};
  cfg.ref_bandwidth_hz = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = ChannelConfig{};
  cfg.power_scale = -0.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  CHECK_THROWS_AS(gaussian_lowpass({RealArray::Constant(8, 1.0), 1.0}, -2.0), std::invalid_argument);
}
