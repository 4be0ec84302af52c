// Gray-labeled multilevel symbol mapping.
//
// Rail alphabet is {-3,-1,+1,+3} (4 levels, 2 bits) or {-1,+1} (2 levels,
// 1 bit), labels 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3 so adjacent levels
// differ in exactly one bit. For two-rail frames the bit stream is split
// alternately: even-index bits feed the I rail, odd-index bits the Q rail.
#pragma once

#include "kklink/waveform.hpp"

#include <vector>

namespace kklink {

struct SymbolFrame {
  RealArray i_symbols;
  RealArray q_symbols;
  int levels_per_rail = 4;

  Index size() const { return i_symbols.size(); }
};

int bits_per_level(int levels_per_rail);  // 1 or 2; throws otherwise

// Single-rail map: consumes bits_per_level(levels) bits per symbol, in order.
RealArray gray_map_rail(const std::vector<int>& bits, int levels_per_rail);

// Inverse of gray_map_rail on exact constellation levels.
std::vector<int> gray_unmap_rail(const RealArray& levels, int levels_per_rail);

// Nearest constellation level (decision at Gray-level midpoints).
RealArray slice_rail(const RealArray& soft, int levels_per_rail);

// Two-rail map: bit count must divide 2 * bits_per_level(levels).
SymbolFrame map_bits(const std::vector<int>& bits, int levels_per_rail);

// Inverse of map_bits; expects exact levels (slice first for soft input).
std::vector<int> unmap_symbols(const SymbolFrame& frame);

}  // namespace kklink
