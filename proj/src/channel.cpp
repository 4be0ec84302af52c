#include "kklink/channel.hpp"

#include "kklink/rng.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <stdexcept>

namespace kklink {

void ChannelConfig::validate() const {
  if (!(f3db_hz > 0.0)) throw std::invalid_argument("ChannelConfig: f3db_hz must be > 0");
  if (!(ref_bandwidth_hz > 0.0)) throw std::invalid_argument("ChannelConfig: ref_bandwidth_hz must be > 0");
  if (!(power_scale >= 0.0)) throw std::invalid_argument("ChannelConfig: power_scale must be >= 0");
}

namespace detail {

ComplexArray gaussian_lowpass_complex(const RealWaveform& x, double f3db_hz) {
  const Index n = x.size();
  Eigen::FFT<double> fft;
  Eigen::VectorXcd spectrum;
  Eigen::VectorXd xm = x.samples.matrix();
  fft.fwd(spectrum, xm);

  const double df = x.sample_rate / static_cast<double>(n);
  for (Index k = 0; k < n; ++k) {
    const double f = (k <= n / 2) ? k * df : (k - n) * df;
    const double u = f / f3db_hz;
    spectrum[k] *= std::exp2(-0.5 * u * u);
  }

  Eigen::VectorXcd out;
  fft.inv(out, spectrum);
  return out.array();
}

}  // namespace detail

RealWaveform gaussian_lowpass(const RealWaveform& x, double f3db_hz) {
  require_valid(x, "gaussian_lowpass");
  if (!(f3db_hz > 0.0)) throw std::invalid_argument("gaussian_lowpass: f3db must be > 0");
  if (std::isinf(f3db_hz)) return x;
  return {detail::gaussian_lowpass_complex(x, f3db_hz).real(), x.sample_rate};
}

RealWaveform add_noise(const RealWaveform& x, const ChannelConfig& cfg) {
  require_valid(x, "add_noise");
  cfg.validate();
  RealWaveform out{x.samples * cfg.power_scale, x.sample_rate};
  if (std::isinf(cfg.osnr_db)) return out;

  // OSNR = signal power over the noise falling in ref_bandwidth, i.e. the
  // noise spectral density is P / (OSNR * ref_bw); flat over the simulated
  // band that density accumulates to sigma^2 = density * fs/2 per sample.
  const double p_ref = x.samples.square().mean();
  const double sigma2 = p_ref * ((x.sample_rate / 2.0) / cfg.ref_bandwidth_hz) / std::pow(10.0, cfg.osnr_db / 10.0);
  Rng rng(cfg.seed);
  out.samples += std::sqrt(sigma2) * rng.normal_array(x.size());
  return out;
}

RealWaveform apply_channel(const RealWaveform& x, const ChannelConfig& cfg) {
  cfg.validate();
  return add_noise(std::isinf(cfg.f3db_hz) ? x : gaussian_lowpass(x, cfg.f3db_hz), cfg);
}

}  // namespace kklink
