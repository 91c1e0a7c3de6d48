// core/src/framing.cc

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

#include "prosoda/framing.h"

namespace prosoda {

int NumFrames(long n_samples, int frame_len, int hop) {
  if (n_samples < frame_len) return 0;
  return static_cast<int>((n_samples - frame_len) / hop) + 1;
}

FrameSeq MakeFrames(const Waveform& w, int frame_len, int hop) {
  Require(hop >= 1, "framing: hop must be at least 1");
  Require(frame_len >= hop,
          "framing: frame length must be at least the hop size");

  FrameSeq fs;
  fs.hop = hop;
  fs.frame_len = frame_len;
  fs.sample_rate = w.sample_rate;
  int n = NumFrames(static_cast<long>(w.samples.size()), frame_len, hop);
  fs.frames = Matrix(n, frame_len);
  for (int i = 0; i < n; ++i) {
    const double* src = w.samples.data() + static_cast<size_t>(i) * hop;
    std::copy(src, src + frame_len, fs.frames.Row(i).data());
  }
  return fs;
}

}  // namespace prosoda
