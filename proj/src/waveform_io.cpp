#include "kklink/waveform_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace kklink {

static_assert(std::endian::native == std::endian::little, "little-endian host assumed for waveform I/O");

namespace {

constexpr char kMagic[4] = {'K', 'K', 'W', 'V'};

struct Header {
  std::uint16_t version;
  std::uint8_t channels;
  std::uint8_t complex_flag;
  double sample_rate;
  std::uint64_t sample_count;
};

void write_header(std::ofstream& out, const Header& h) {
  out.write(kMagic, 4);
  out.write(reinterpret_cast<const char*>(&h.version), 2);
  out.write(reinterpret_cast<const char*>(&h.channels), 1);
  out.write(reinterpret_cast<const char*>(&h.complex_flag), 1);
  out.write(reinterpret_cast<const char*>(&h.sample_rate), 8);
  out.write(reinterpret_cast<const char*>(&h.sample_count), 8);
}

Header read_header(std::ifstream& in, const std::string& path) {
  char magic[4];
  Header h{};
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&h.version), 2);
  in.read(reinterpret_cast<char*>(&h.channels), 1);
  in.read(reinterpret_cast<char*>(&h.complex_flag), 1);
  in.read(reinterpret_cast<char*>(&h.sample_rate), 8);
  in.read(reinterpret_cast<char*>(&h.sample_count), 8);
  if (!in) throw std::runtime_error("waveform read: truncated header in " + path);
  if (std::memcmp(magic, kMagic, 4) != 0) throw std::runtime_error("waveform read: bad magic in " + path);
  if (h.version != kWaveformFormatVersion)
    throw std::runtime_error("waveform read: unsupported format version in " + path);
  if (h.channels != 1) throw std::runtime_error("waveform read: only single-channel files supported: " + path);
  if (h.sample_rate <= 0.0) throw std::runtime_error("waveform read: invalid sample rate in " + path);
  return h;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("waveform write: cannot open " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("waveform read: cannot open " + path);
  return in;
}

}  // namespace

void write_waveform(const std::string& path, const RealWaveform& w) {
  require_valid(w, "write_waveform");
  auto out = open_out(path);
  write_header(out, {kWaveformFormatVersion, 1, 0, w.sample_rate, static_cast<std::uint64_t>(w.size())});
  std::vector<float> buf(static_cast<std::size_t>(w.size()));
  for (Index i = 0; i < w.size(); ++i) buf[static_cast<std::size_t>(i)] = static_cast<float>(w.samples[i]);
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(float)));
  if (!out) throw std::runtime_error("waveform write: failed writing " + path);
}

void write_waveform(const std::string& path, const ComplexWaveform& w) {
  require_valid(w, "write_waveform");
  auto out = open_out(path);
  write_header(out, {kWaveformFormatVersion, 1, 1, w.sample_rate, static_cast<std::uint64_t>(w.size())});
  std::vector<float> buf(static_cast<std::size_t>(w.size()) * 2);
  for (Index i = 0; i < w.size(); ++i) {
    buf[static_cast<std::size_t>(2 * i)] = static_cast<float>(w.samples[i].real());
    buf[static_cast<std::size_t>(2 * i + 1)] = static_cast<float>(w.samples[i].imag());
  }
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(float)));
  if (!out) throw std::runtime_error("waveform write: failed writing " + path);
}

bool is_complex_waveform_file(const std::string& path) {
  auto in = open_in(path);
  return read_header(in, path).complex_flag != 0;
}

RealWaveform read_real_waveform(const std::string& path) {
  auto in = open_in(path);
  const Header h = read_header(in, path);
  if (h.complex_flag != 0) throw std::runtime_error("waveform read: expected real samples in " + path);
  std::vector<float> buf(h.sample_count);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(float)));
  if (!in) throw std::runtime_error("waveform read: truncated payload in " + path);
  RealWaveform w{RealArray(static_cast<Index>(h.sample_count)), h.sample_rate};
  for (std::size_t i = 0; i < buf.size(); ++i) w.samples[static_cast<Index>(i)] = buf[i];
  return w;
}

ComplexWaveform read_complex_waveform(const std::string& path) {
  auto in = open_in(path);
  const Header h = read_header(in, path);
  if (h.complex_flag == 0) throw std::runtime_error("waveform read: expected complex samples in " + path);
  std::vector<float> buf(h.sample_count * 2);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(float)));
  if (!in) throw std::runtime_error("waveform read: truncated payload in " + path);
  ComplexWaveform w{ComplexArray(static_cast<Index>(h.sample_count)), h.sample_rate};
  for (std::size_t i = 0; i < h.sample_count; ++i)
    w.samples[static_cast<Index>(i)] = Complex(buf[2 * i], buf[2 * i + 1]);
  return w;
}

}  // namespace kklink
