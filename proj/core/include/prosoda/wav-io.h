// core/include/prosoda/wav-io.h

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

#pragma once

#include <string>
#include <vector>

#include "prosoda/common.h"

namespace prosoda {

// Mono PCM audio. Samples live in [-1, 1]; the pipeline default rate is
// 16 kHz everywhere.
struct Waveform {
  std::vector<double> samples;
  int sample_rate = 16000;

  double DurationSeconds() const {
    return sample_rate > 0
               ? static_cast<double>(samples.size()) / sample_rate
               : 0.0;
  }
};

// Reads a RIFF/WAVE file holding 16-bit little-endian PCM, one channel.
// Both the canonical 44-byte header and WAVE_FORMAT_EXTENSIBLE headers are
// accepted. Samples are scaled by 1/32768. Missing files, non-PCM
// encodings, wrong channel counts and truncated chunks raise distinct
// Error messages.
Waveform ReadWav(const std::string& path);

// Writes 16-bit PCM mono with a canonical 44-byte header. Samples are
// clipped to [-1, 1] and quantized symmetrically with the reader's scale
// (round(x * 32768), clamped to the int16 range) so a write/read round
// trip is within one quantization step (1/32768) per sample.
void WriteWav(const std::string& path, const Waveform& w);

}  // namespace prosoda
