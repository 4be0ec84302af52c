// Link model: Gaussian low-pass bandwidth limitation plus OSNR-parameterized
// additive white Gaussian noise, with a linear received-power knob for
// sensitivity sweeps.
#pragma once

#include "kklink/waveform.hpp"

#include <cstdint>
#include <limits>

namespace kklink {

struct ChannelConfig {
  double f3db_hz = std::numeric_limits<double>::infinity();     // inf = unlimited bandwidth
  double osnr_db = std::numeric_limits<double>::infinity();     // inf = noiseless
  double ref_bandwidth_hz = 12.5e9;  // OSNR noise reference bandwidth (0.1 nm convention)
  double power_scale = 1.0;          // linear gain emulating received optical power
  std::uint64_t seed = 0;

  void validate() const;
};

// Zero-phase frequency-domain filter with |H(f)| = 2^(-(f/f3db)^2 / 2), so
// H(0) = 1 and |H(f3db)|^2 = 1/2. f3db = inf passes the input through.
RealWaveform gaussian_lowpass(const RealWaveform& x, double f3db_hz);

// power_scale is applied first; white noise is added with the spectral
// density P_ref / (10^(osnr_db/10) * ref_bandwidth), i.e. per-sample variance
//   sigma^2 = P_ref * ((sample_rate/2) / ref_bandwidth) / 10^(osnr_db/10),
// with P_ref the mean power of x before power_scale: osnr_db states the OSNR
// at unit scale and the noise floor stays fixed as power_scale varies.
RealWaveform add_noise(const RealWaveform& x, const ChannelConfig& cfg);

// gaussian_lowpass then add_noise.
RealWaveform apply_channel(const RealWaveform& x, const ChannelConfig& cfg);

namespace detail {
// Complex inverse transform before the real part is taken; exposed so tests
// can bound the imaginary residue.
ComplexArray gaussian_lowpass_complex(const RealWaveform& x, double f3db_hz);
}  // namespace detail

}  // namespace kklink
