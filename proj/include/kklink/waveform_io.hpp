// Binary waveform file format, shared repo-wide.
//
//   magic "KKWV" | format version u16 | channel count u8 | complex flag u8 |
//   sample rate f64 | sample count u64, all little-endian; payload f32
//   little-endian samples, interleaved re/im when complex.
#pragma once

#include "kklink/waveform.hpp"

#include <string>

namespace kklink {

inline constexpr std::uint16_t kWaveformFormatVersion = 1;

void write_waveform(const std::string& path, const RealWaveform& w);
void write_waveform(const std::string& path, const ComplexWaveform& w);

bool is_complex_waveform_file(const std::string& path);
RealWaveform read_real_waveform(const std::string& path);
ComplexWaveform read_complex_waveform(const std::string& path);

}  // namespace kklink
