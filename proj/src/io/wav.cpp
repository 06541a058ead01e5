// Copyright 2026 The sbd Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Minimal RIFF/WAVE support: PCM16 mono in and out. Chunks other than
// "fmt " and "data" are skipped.

#include <algorithm>
#include <cmath>
#include <cstring>

#include "sbd/errors.hpp"
#include "sbd/io.hpp"

namespace sbd::io {

namespace {

std::uint32_t le32(const unsigned char* p) {
  return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) | (std::uint32_t(p[2]) << 16) |
         (std::uint32_t(p[3]) << 24);
}

std::uint16_t le16(const unsigned char* p) { return std::uint16_t(p[0] | (p[1] << 8)); }

void put32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out += static_cast<char>((v >> (8 * i)) & 0xff);
}

void put16(std::string& out, std::uint16_t v) {
  out += static_cast<char>(v & 0xff);
  out += static_cast<char>(v >> 8);
}

}  // namespace

WavData read_wav(const fs::path& path) {
  const std::string raw = read_text(path);
  const auto* b = reinterpret_cast<const unsigned char*>(raw.data());
  const std::size_t n = raw.size();
  if (n < 12 || std::memcmp(b, "RIFF", 4) != 0 || std::memcmp(b + 8, "WAVE", 4) != 0)
    throw UnsupportedFormat(path.string() + ": not a RIFF/WAVE file");

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  std::size_t pos = 12;
  while (pos + 8 <= n) {
    const std::uint32_t size = le32(b + pos + 4);
    const std::size_t body = pos + 8;
    if (body + size > n) throw IoError(path.string() + ": truncated chunk");
    if (std::memcmp(b + pos, "fmt ", 4) == 0) {
      if (size < 16) throw IoError(path.string() + ": short fmt chunk");
      format = le16(b + body);
      channels = le16(b + body + 2);
      rate = le32(b + body + 4);
      bits = le16(b + body + 14);
      have_fmt = true;
    } else if (std::memcmp(b + pos, "data", 4) == 0) {
      if (!have_fmt) throw IoError(path.string() + ": data chunk before fmt chunk");
      if (format != 1 || bits != 16 || channels != 1)
        throw UnsupportedFormat(path.string() + ": only 16-bit mono PCM is supported (format " +
                                std::to_string(format) + ", " + std::to_string(channels) +
                                " channels, " + std::to_string(bits) + " bits)");
      const std::size_t count = size / 2;
      if (count == 0) throw IoError(path.string() + ": no samples");
      std::vector<double> s(count);
      for (std::size_t i = 0; i < count; ++i)
        s[i] = static_cast<std::int16_t>(le16(b + body + 2 * i)) / 32768.0;
      return {Signal(std::move(s)), rate};
    }
    pos = body + size + (size & 1u);
  }
  throw IoError(path.string() + ": no data chunk");
}

void write_wav(const fs::path& path, const Signal& samples, std::uint32_t sample_rate) {
  if (sample_rate == 0) throw InvalidArgument("sample rate must be positive");
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  put32(out, 36 + data_bytes);
  out += "WAVEfmt ";
  put32(out, 16);
  put16(out, 1);  // PCM
  put16(out, 1);  // mono
  put32(out, sample_rate);
  put32(out, sample_rate * 2);
  put16(out, 2);
  put16(out, 16);
  out += "data";
  put32(out, data_bytes);
  for (double v : samples.samples()) {
    const double q = std::clamp(std::round(v * 32768.0), -32768.0, 32767.0);
    put16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
  }
  write_text(path, out);
}

}  // namespace sbd::io
