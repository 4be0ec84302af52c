#include "kklink/gray.hpp"

#include <cmath>
#include <stdexcept>

namespace kklink {

namespace {

// label (b0 << 1 | b1) -> level
constexpr double kGray4[4] = {-3.0, -1.0, +3.0, +1.0};

int level4_to_label(double level) {
  if (level == -3.0) return 0b00;
  if (level == -1.0) return 0b01;
  if (level == +1.0) return 0b11;
  if (level == +3.0) return 0b10;
  throw std::invalid_argument("gray_unmap_rail: value off the 4-level alphabet");
}

}  // namespace

int bits_per_level(int levels_per_rail) {
  if (levels_per_rail == 2) return 1;
  if (levels_per_rail == 4) return 2;
  throw std::invalid_argument("levels_per_rail must be 2 or 4");
}

RealArray gray_map_rail(const std::vector<int>& bits, int levels_per_rail) {
  const int bpl = bits_per_level(levels_per_rail);
  if (bits.size() % static_cast<std::size_t>(bpl) != 0)
    throw std::invalid_argument("gray_map_rail: bit count not divisible by bits per level");
  const Index n = static_cast<Index>(bits.size()) / bpl;
  RealArray out(n);
  for (Index k = 0; k < n; ++k) {
    if (bpl == 1) {
      out[k] = bits[static_cast<std::size_t>(k)] ? +1.0 : -1.0;
    } else {
      const int label = (bits[static_cast<std::size_t>(2 * k)] << 1) | bits[static_cast<std::size_t>(2 * k + 1)];
      out[k] = kGray4[label];
    }
  }
  return out;
}

std::vector<int> gray_unmap_rail(const RealArray& levels, int levels_per_rail) {
  const int bpl = bits_per_level(levels_per_rail);
  std::vector<int> bits;
  bits.reserve(static_cast<std::size_t>(levels.size() * bpl));
  for (Index k = 0; k < levels.size(); ++k) {
    if (bpl == 1) {
      if (levels[k] != 1.0 && levels[k] != -1.0)
        throw std::invalid_argument("gray_unmap_rail: value off the 2-level alphabet");
      bits.push_back(levels[k] > 0 ? 1 : 0);
    } else {
      const int label = level4_to_label(levels[k]);
      bits.push_back((label >> 1) & 1);
      bits.push_back(label & 1);
    }
  }
  return bits;
}

RealArray slice_rail(const RealArray& soft, int levels_per_rail) {
  bits_per_level(levels_per_rail);  // validate
  RealArray out(soft.size());
  for (Index k = 0; k < soft.size(); ++k) {
    const double v = soft[k];
    if (levels_per_rail == 2) {
      out[k] = v >= 0.0 ? +1.0 : -1.0;
    } else {
      out[k] = v < -2.0 ? -3.0 : v < 0.0 ? -1.0 : v < 2.0 ? +1.0 : +3.0;
    }
  }
  return out;
}

SymbolFrame map_bits(const std::vector<int>& bits, int levels_per_rail) {
  const int bpl = bits_per_level(levels_per_rail);
  if (bits.empty() || bits.size() % static_cast<std::size_t>(2 * bpl) != 0)
    throw std::invalid_argument("map_bits: bit count must be a positive multiple of 2*log2(levels)");
  std::vector<int> i_bits, q_bits;
  i_bits.reserve(bits.size() / 2);
  q_bits.reserve(bits.size() / 2);
  for (std::size_t i = 0; i < bits.size(); i += 2) {
    i_bits.push_back(bits[i]);
    q_bits.push_back(bits[i + 1]);
  }
  return {gray_map_rail(i_bits, levels_per_rail), gray_map_rail(q_bits, levels_per_rail), levels_per_rail};
}

std::vector<int> unmap_symbols(const SymbolFrame& frame) {
  if (frame.i_symbols.size() != frame.q_symbols.size())
    throw std::invalid_argument("unmap_symbols: rail length mismatch");
  const auto i_bits = gray_unmap_rail(frame.i_symbols, frame.levels_per_rail);
  const auto q_bits = gray_unmap_rail(frame.q_symbols, frame.levels_per_rail);
  std::vector<int> bits;
  bits.reserve(i_bits.size() + q_bits.size());
  for (std::size_t k = 0; k < i_bits.size(); ++k) {
    bits.push_back(i_bits[k]);
    bits.push_back(q_bits[k]);
  }
  return bits;
}

}  // namespace kklink
