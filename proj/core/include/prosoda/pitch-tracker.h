// core/include/prosoda/pitch-tracker.h

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

#include <vector>

#include "prosoda/common.h"
#include "prosoda/framing.h"
#include "prosoda/wav-io.h"

namespace prosoda {

struct PitchConfig {
  double f_min = 60.0;
  double f_max = 400.0;
  // Frames whose best correlation peak falls below this are unvoiced.
  double voicing_threshold = 0.30;
  // Weight on |log f_t - log f_{t-1}| in the path cost.
  double lambda = 0.35;
  // Extra cost for frame-to-frame jumps of 3/4 octave or more.
  double octave_penalty = 0.5;
  int max_candidates = 4;
  // Correlation window length in samples.
  int corr_window = 320;
};

// Per-frame F0 in Hz.  f0_hz[i] > 0 exactly when voiced[i]; unvoiced frames
// carry 0.
struct PitchTrack {
  std::vector<double> f0_hz;
  std::vector<bool> voiced;
  double hop_seconds = kHopSeconds;

  int n_frames() const { return static_cast<int>(f0_hz.size()); }
};

// One pitch hypothesis for a frame.  `bias` is an additive local cost on top
// of (1 - nccf); the tracker uses it to prefer shorter lags when a period and
// its double correlate equally well.
struct PitchCandidate {
  double freq = 0.0;
  double nccf = 0.0;
  double bias = 0.0;
};

// Cost of moving from a frame at f_prev Hz to one at f_cur Hz.
double TransitionCost(double f_prev, double f_cur, double lambda,
                      double octave_penalty);

// Normalized cross-correlation of x[start..start+corr_window) against itself
// shifted by each lag in [tau_min, tau_max].  Samples past the end of x are
// taken as zero.  Returns tau_max - tau_min + 1 values.
std::vector<double> FrameNccf(const std::vector<double>& x, int start,
                              int corr_window, int tau_min, int tau_max);

// Minimum-cost path through the candidate lattice: sum over frames of
// (1 - nccf + bias) plus TransitionCost between consecutive choices.
// Returns one candidate index per frame.  Every frame must offer at least
// one candidate.
std::vector<int> BestPitchPath(
    const std::vector<std::vector<PitchCandidate>>& lattice, double lambda,
    double octave_penalty);

// Frame-rate F0 with voicing decisions.  16 kHz mono input; the frame grid
// matches feature extraction (hop 320, 20 ms).
PitchTrack EstimateF0(const Waveform& w, const PitchConfig& cfg = {});

}  // namespace prosoda
