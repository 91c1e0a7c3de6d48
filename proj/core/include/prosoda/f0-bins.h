// core/include/prosoda/f0-bins.h

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

#include <optional>
#include <vector>

#include "prosoda/pitch-tracker.h"

namespace prosoda {

// Below this total activation mass a decoded frame is declared unvoiced.
constexpr double kActivationFloor = 0.1;

// Per-speaker F0 statistics over voiced frames only (population std).
struct SpeakerStats {
  int speaker_id = -1;
  double mean_f0 = 0.0;
  double std_f0 = 0.0;
  int n_voiced_frames = 0;
};

// Standardized F0: z-scores on voiced frames, NaN sentinel elsewhere.
struct StandardizedTrack {
  std::vector<double> z;
  std::vector<bool> voiced;
  double hop_seconds = kHopSeconds;

  int n_frames() const { return static_cast<int>(z.size()); }
};

// Uniform discretization of the standardized axis into d bins.
struct BinGrid {
  int d = 0;
  std::vector<double> edges;    // d + 1, strictly ascending
  std::vector<double> centers;  // midpoints of consecutive edges

  static BinGrid Uniform(int d, double lo, double hi);
};

void ValidateBinGrid(const BinGrid& g);

// Requires at least 2 voiced frames across the tracks and nonzero spread.
SpeakerStats ComputeSpeakerStats(const std::vector<PitchTrack>& tracks,
                                 int speaker_id);

StandardizedTrack Standardize(const PitchTrack& t, const SpeakerStats& s);
PitchTrack Destandardize(const StandardizedTrack& t, const SpeakerStats& s);

// One-hot over g.d bins; values outside the grid clamp to the end bins.
std::vector<double> EncodeBins(double z, const BinGrid& g);

// Weighted average of bin centers, or nullopt (unvoiced) when the total
// activation falls below activation_floor.
std::optional<double> DecodeBins(const std::vector<double>& a,
                                 const BinGrid& g,
                                 double activation_floor = kActivationFloor);

}  // namespace prosoda
