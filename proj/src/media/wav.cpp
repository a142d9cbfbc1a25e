// Copyright 2026  The svsr Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "svsr/media/wav.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include <fmt/format.h>

#include "svsr/common/error.hpp"

namespace svsr::media {

static_assert(std::endian::native == std::endian::little, "WAV I/O assumes a little-endian host");

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

template <typename T>
T read_le(const std::uint8_t* p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  return v;
}

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T v) {
  const auto* p = reinterpret_cast<const std::uint8_t*>(&v);
  out.insert(out.end(), p, p + sizeof(T));
}

}  // namespace

void Waveform::validate() const {
  if (sample_rate <= 0) throw DataError(fmt::format("waveform sample_rate={} must be positive", sample_rate));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const float s = samples[i];
    if (!std::isfinite(s) || std::fabs(s) > 1.0f)
      throw DataError(fmt::format("waveform sample {} = {} outside [-1, 1]", i, s));
  }
}

Waveform parse_wav(const std::vector<std::uint8_t>& bytes, const std::string& origin) {
  auto fail = [&](const std::string& why) { return FormatError(fmt::format("{}: {}", origin, why)); };
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 || std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw fail("not a RIFF/WAVE file");

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const std::uint8_t* data = nullptr;
  std::size_t data_len = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const char* id = reinterpret_cast<const char*>(bytes.data() + pos);
    const auto len = read_le<std::uint32_t>(bytes.data() + pos + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (len < 16 || body + 16 > bytes.size()) throw fail("truncated fmt chunk");
      format = read_le<std::uint16_t>(bytes.data() + body);
      channels = read_le<std::uint16_t>(bytes.data() + body + 2);
      rate = read_le<std::uint32_t>(bytes.data() + body + 4);
      bits = read_le<std::uint16_t>(bytes.data() + body + 14);
      if (format == kFormatExtensible && len >= 26 && body + 26 <= bytes.size())
        format = read_le<std::uint16_t>(bytes.data() + body + 24);  // sub-format GUID prefix
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      data = bytes.data() + body;
      data_len = std::min<std::size_t>(len, bytes.size() - body);
      if (data_len < len) throw fail(fmt::format("truncated data chunk ({} of {} bytes)", data_len, len));
    }
    pos = body + len + (len & 1u);
  }
  if (!have_fmt) throw fail("missing fmt chunk");
  if (format != kFormatPcm) throw fail(fmt::format("format={} unsupported (PCM required)", format));
  if (channels != 1) throw fail(fmt::format("channels={} unsupported", channels));
  if (bits != 16) throw fail(fmt::format("bits_per_sample={} unsupported", bits));
  if (rate == 0) throw fail("sample_rate=0 unsupported");
  if (data == nullptr) throw fail("missing data chunk");

  Waveform w;
  w.sample_rate = static_cast<int>(rate);
  w.samples.resize(data_len / 2);
  for (std::size_t i = 0; i < w.samples.size(); ++i)
    w.samples[i] = static_cast<float>(read_le<std::int16_t>(data + 2 * i)) / 32768.0f;
  return w;
}

Waveform load_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_wav(bytes, path.string());
}

void save_wav(const std::filesystem::path& path, const Waveform& wave) {
  if (wave.sample_rate <= 0) throw DataError("cannot write waveform with non-positive sample rate");
  const auto data_bytes = static_cast<std::uint32_t>(wave.samples.size() * 2);
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  put_le<std::uint32_t>(out, 36 + data_bytes);
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  put_le<std::uint32_t>(out, 16);
  put_le<std::uint16_t>(out, kFormatPcm);
  put_le<std::uint16_t>(out, 1);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(wave.sample_rate));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(wave.sample_rate) * 2);
  put_le<std::uint16_t>(out, 2);
  put_le<std::uint16_t>(out, 16);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  put_le<std::uint32_t>(out, data_bytes);
  for (float s : wave.samples) {
    const double q = std::clamp(std::nearbyint(static_cast<double>(s) * 32768.0), -32768.0, 32767.0);
    put_le<std::int16_t>(out, static_cast<std::int16_t>(q));
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write " + path.string());
  f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
}

}  // namespace svsr::media
