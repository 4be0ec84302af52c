// Deterministic random sources. Gaussian samples use an explicit Box-Muller
// so the output stream does not depend on the standard library's
// normal_distribution implementation.
#pragma once

#include "kklink/waveform.hpp"

#include <cstdint>
#include <random>

namespace kklink {

// splitmix64 step; used to derive stream seeds (seed ^ index would collide
// for adjacent indices under mt19937_64's own scrambling less reliably).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  int bit() { return static_cast<int>(gen_() & 1u); }

  // Standard normal via Box-Muller; caches the second deviate.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  RealArray normal_array(Index n) {
    RealArray out(n);
    for (Index i = 0; i < n; ++i) out[i] = normal();
    return out;
  }

  std::vector<int> bits(Index n) {
    std::vector<int> out(static_cast<std::size_t>(n));
    for (auto& b : out) b = bit();
    return out;
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace kklink
