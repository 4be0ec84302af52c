#include "kklink/gray.hpp"
#include "kklink/rng.hpp"

#include <doctest.h>

using namespace kklink;

TEST_CASE("4-level Gray table") {
  // 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3
  CHECK(gray_map_rail({0, 0}, 4)[0] == -3.0);
  CHECK(gray_map_rail({0, 1}, 4)[0] == -1.0);
  CHECK(gray_map_rail({1, 1}, 4)[0] == +1.0);
  CHECK(gray_map_rail({1, 0}, 4)[0] == +3.0);
  CHECK(gray_map_rail({0}, 2)[0] == -1.0);
  CHECK(gray_map_rail({1}, 2)[0] == +1.0);
}

TEST_CASE("adjacent levels differ in exactly one bit") {
  const double levels[4] = {-3.0, -1.0, +1.0, +3.0};
  for (int i = 0; i + 1 < 4; ++i) {
    RealArray pair(2);
    pair[0] = levels[i];
    pair[1] = levels[i + 1];
    const auto bits = gray_unmap_rail(pair, 4);
    const int differing = (bits[0] != bits[2]) + (bits[1] != bits[3]);
    CHECK(differing == 1);
  }
}

TEST_CASE("map then inverse map is the identity on 30000 random bits") {
  Rng rng(123);
  const auto bits = rng.bits(30000);
  for (int levels : {2, 4}) {
    const SymbolFrame frame = map_bits(bits, levels);
    CHECK(unmap_symbols(frame) == bits);
  }
}

TEST_CASE("bit stream alternates between the rails") {
  // bits: I0a Q0a I0b Q0b I1a Q1a I1b Q1b
  const std::vector<int> bits = {1, 0, 0, 0, 0, 1, 1, 1};
  const SymbolFrame f = map_bits(bits, 4);
  REQUIRE(f.size() == 2);
  CHECK(f.i_symbols[0] == +3.0);  // I bits (1,0)
  CHECK(f.q_symbols[0] == -3.0);  // Q bits (0,0)
  CHECK(f.i_symbols[1] == -1.0);  // I bits (0,1)
  CHECK(f.q_symbols[1] == +1.0);  // Q bits (1,1)
}

TEST_CASE("length and alphabet validation") {
  CHECK_THROWS_AS(map_bits({1, 0, 1}, 4), std::invalid_argument);
  CHECK_THROWS_AS(map_bits({}, 4), std::invalid_argument);
  CHECK_THROWS_AS(map_bits({1, 0}, 3), std::invalid_argument);
  RealArray off(1);
  off[0] = 2.0;
  CHECK_THROWS_AS(gray_unmap_rail(off, 4), std::invalid_argument);
}

TEST_CASE("slicing decides at Gray-level midpoints") {
  RealArray soft(6);
  soft << -9.0, -2.01, -1.99, 1.3, 2.7, 0.0;
  const RealArray hard = slice_rail(soft, 4);
  CHECK(hard[0] == -3.0);
  CHECK(hard[1] == -3.0);
  CHECK(hard[2] == -1.0);
  CHECK(hard[3] == +1.0);
  CHECK(hard[4] == +3.0);
  CHECK(hard[5] == +1.0);  // ties resolve upward

  RealArray pm(3);
  pm << -0.4, 0.0, 2.0;
  const RealArray two = slice_rail(pm, 2);
  CHECK(two[0] == -1.0);
  CHECK(two[1] == +1.0);
  CHECK(two[2] == +1.0);
}
