// core/include/prosoda/framing.h

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

#include "prosoda/common.h"
#include "prosoda/wav-io.h"

namespace prosoda {

// The pipeline's fixed analysis geometry at 16 kHz: 20 ms hop so frames
// align 1:1 with discrete units, 25 ms windows.
constexpr int kDefaultHop = 320;
constexpr int kDefaultFrameLen = 400;
constexpr double kHopSeconds = 0.020;

// Frame i covers samples [i*hop, i*hop + frame_len). No tail padding, so
// frame counts are deterministic and invertible.
struct FrameSeq {
  Matrix frames;  // n_frames x frame_len
  int hop = 0;
  int frame_len = 0;
  int sample_rate = 0;

  int n_frames() const { return frames.rows; }
};

// floor((n - frame_len)/hop) + 1 for n >= frame_len, else 0.
int NumFrames(long n_samples, int frame_len, int hop);

// Slices w into overlapping frames. Requires frame_len >= hop >= 1.
FrameSeq MakeFrames(const Waveform& w, int frame_len = kDefaultFrameLen,
                    int hop = kDefaultHop);

}  // namespace prosoda
