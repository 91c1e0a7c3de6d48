// core/src/wav-io.cc

// Copyright 2026  Prosoda Authors

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

#include "prosoda/wav-io.h"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "prosoda/serialize.h"

namespace prosoda {

namespace {

constexpr uint16_t kFormatPcm = 0x0001;
constexpr uint16_t kFormatExtensible = 0xfffe;

struct FmtChunk {
  uint16_t format = 0;
  uint16_t channels = 0;
  uint32_t sample_rate = 0;
  uint16_t bits_per_sample = 0;
};

}  // namespace

Waveform ReadWav(const std::string& path) {
  std::string bytes;
  try {
    bytes = ReadFileBytes(path);
  } catch (const Error&) {
    Fail("wav-io: missing or unreadable file: " + path);
  }
  ByteReader r(bytes);

  auto read_tag = [&](const char* what) {
    char tag[5] = {0, 0, 0, 0, 0};
    for (int i = 0; i < 4; ++i) {
      try {
        tag[i] = static_cast<char>(r.U8());
      } catch (const Error&) {
        Fail(std::string("wav-io: truncated ") + what + " in " + path);
      }
    }
    return std::string(tag, 4);
  };

  if (read_tag("RIFF header") != "RIFF")
    Fail("wav-io: not a RIFF file: " + path);
  r.U32();  // declared riff size; actual chunk bounds are checked below
  if (read_tag("RIFF header") != "WAVE")
    Fail("wav-io: not a WAVE file: " + path);

  FmtChunk fmt;
  bool have_fmt = false;
  std::vector<double> samples;
  bool have_data = false;

  while (!r.AtEnd()) {
    if (bytes.size() - r.pos() < 8) {
      // Some writers append a single pad byte; anything else is truncation.
      if (bytes.size() - r.pos() == 1) break;
      Fail("wav-io: truncated chunk header in " + path);
    }
    std::string tag = read_tag("chunk header");
    uint32_t size = r.U32();
    if (r.pos() + size > bytes.size())
      Fail("wav-io: truncated '" + tag + "' chunk in " + path);
    size_t body = r.pos();

    if (tag == "fmt ") {
      if (size < 16) Fail("wav-io: malformed fmt chunk in " + path);
      fmt.format = r.U16();
      fmt.channels = r.U16();
      fmt.sample_rate = r.U32();
      r.U32();  // byte rate
      r.U16();  // block align
      fmt.bits_per_sample = r.U16();
      if (fmt.format == kFormatExtensible) {
        if (size < 40) Fail("wav-io: malformed extensible fmt chunk in " + path);
        r.U16();  // cbSize
        r.U16();  // valid bits
        r.U32();  // channel mask
        fmt.format = r.U16();  // first two bytes of the subformat GUID
      }
      have_fmt = true;
    } else if (tag == "data") {
      if (!have_fmt) Fail("wav-io: data chunk before fmt chunk in " + path);
      if (fmt.format != kFormatPcm)
        Fail("wav-io: unsupported encoding (not integer PCM) in " + path);
      if (fmt.bits_per_sample != 16)
        Fail("wav-io: expected 16-bit PCM, got " +
             std::to_string(fmt.bits_per_sample) + "-bit in " + path);
      if (fmt.channels != 1)
        Fail("wav-io: expected 1 channel, got " +
             std::to_string(fmt.channels) + " in " + path);
      if (size % 2 != 0) Fail("wav-io: truncated sample in " + path);
      size_t n = size / 2;
      samples.resize(n);
      for (size_t i = 0; i < n; ++i) {
        auto v = static_cast<int16_t>(r.U16());
        samples[i] = static_cast<double>(v) / 32768.0;
      }
      have_data = true;
    }

    // Skip any unread remainder plus the pad byte for odd-sized chunks.
    size_t next = body + size + (size % 2);
    while (r.pos() < next && !r.AtEnd()) r.U8();
  }

  if (!have_fmt) Fail("wav-io: no fmt chunk in " + path);
  if (!have_data) Fail("wav-io: no data chunk in " + path);
  if (fmt.sample_rate == 0) Fail("wav-io: zero sample rate in " + path);

  Waveform w;
  w.samples = std::move(samples);
  w.sample_rate = static_cast<int>(fmt.sample_rate);
  return w;
}

void WriteWav(const std::string& path, const Waveform& w) {
  Require(w.sample_rate > 0, "wav-io: sample rate must be positive");
  ByteWriter out;
  uint32_t data_size = static_cast<uint32_t>(w.samples.size() * 2);
  out.Raw("RIFF", 4);
  out.U32(36 + data_size);
  out.Raw("WAVE", 4);
  out.Raw("fmt ", 4);
  out.U32(16);
  out.U16(kFormatPcm);
  out.U16(1);  // mono
  out.U32(static_cast<uint32_t>(w.sample_rate));
  out.U32(static_cast<uint32_t>(w.sample_rate) * 2);  // byte rate
  out.U16(2);                                         // block align
  out.U16(16);                                        // bits per sample
  out.Raw("data", 4);
  out.U32(data_size);
  for (double x : w.samples) {
    double clipped = std::clamp(x, -1.0, 1.0);
    long q = std::lround(clipped * 32768.0);
    q = std::clamp(q, -32768l, 32767l);
    out.U16(static_cast<uint16_t>(static_cast<int16_t>(q)));
  }
  WriteFileBytes(path, out.bytes());
}

}  // namespace prosoda
