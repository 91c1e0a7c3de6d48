// core/src/f0-bins.cc

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

#include "prosoda/f0-bins.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace prosoda {

BinGrid BinGrid::Uniform(int d, double lo, double hi) {
  Require(d >= 1, "f0-bins: need at least one bin");
  Require(lo < hi, "f0-bins: grid range must be nonempty");
  BinGrid g;
  g.d = d;
  g.edges.resize(d + 1);
  g.centers.resize(d);
  for (int k = 0; k <= d; ++k) g.edges[k] = lo + (hi - lo) * k / d;
  for (int k = 0; k < d; ++k) g.centers[k] = (g.edges[k] + g.edges[k + 1]) / 2;
  return g;
}

void ValidateBinGrid(const BinGrid& g) {
  Require(g.d >= 1, "f0-bins: need at least one bin");
  Require(static_cast<int>(g.edges.size()) == g.d + 1 &&
              static_cast<int>(g.centers.size()) == g.d,
          "f0-bins: edge/center counts do not match d");
  for (int k = 0; k < g.d; ++k) {
    Require(g.edges[k] < g.edges[k + 1], "f0-bins: edges must be ascending");
    Require(g.centers[k] == (g.edges[k] + g.edges[k + 1]) / 2,
            "f0-bins: center " + std::to_string(k) + " is not the midpoint");
  }
}

SpeakerStats ComputeSpeakerStats(const std::vector<PitchTrack>& tracks,
                                 int speaker_id) {
  double sum = 0.0;
  int n = 0;
  for (const auto& t : tracks)
    for (int i = 0; i < t.n_frames(); ++i)
      if (t.voiced[i]) {
        sum += t.f0_hz[i];
        ++n;
      }
  Require(n >= 2, "f0-bins: speaker " + std::to_string(speaker_id) +
                      " has " + std::to_string(n) +
                      " voiced frames; need at least 2 for statistics");

  double mean = sum / n;
  double ss = 0.0;
  for (const auto& t : tracks)
    for (int i = 0; i < t.n_frames(); ++i)
      if (t.voiced[i]) {
        double d = t.f0_hz[i] - mean;
        ss += d * d;
      }
  double std = std::sqrt(ss / n);
  Require(std > 0.0, "f0-bins: speaker " + std::to_string(speaker_id) +
                         " has constant F0; std must be positive");

  SpeakerStats s;
  s.speaker_id = speaker_id;
  s.mean_f0 = mean;
  s.std_f0 = std;
  s.n_voiced_frames = n;
  return s;
}

StandardizedTrack Standardize(const PitchTrack& t, const SpeakerStats& s) {
  Require(s.std_f0 > 0.0, "f0-bins: speaker std must be positive");
  StandardizedTrack out;
  out.hop_seconds = t.hop_seconds;
  out.voiced = t.voiced;
  out.z.assign(t.n_frames(), std::numeric_limits<double>::quiet_NaN());
  for (int i = 0; i < t.n_frames(); ++i)
    if (t.voiced[i]) out.z[i] = (t.f0_hz[i] - s.mean_f0) / s.std_f0;
  return out;
}

PitchTrack Destandardize(const StandardizedTrack& t, const SpeakerStats& s) {
  Require(s.std_f0 > 0.0, "f0-bins: speaker std must be positive");
  PitchTrack out;
  out.hop_seconds = t.hop_seconds;
  out.voiced = t.voiced;
  out.f0_hz.assign(t.n_frames(), 0.0);
  for (int i = 0; i < t.n_frames(); ++i)
    if (t.voiced[i]) out.f0_hz[i] = s.mean_f0 + t.z[i] * s.std_f0;
  return out;
}

std::vector<double> EncodeBins(double z, const BinGrid& g) {
  std::vector<double> a(g.d, 0.0);
  auto it = std::upper_bound(g.edges.begin(), g.edges.end(), z);
  int k = static_cast<int>(it - g.edges.begin()) - 1;
  k = std::clamp(k, 0, g.d - 1);
  a[k] = 1.0;
  return a;
}

std::optional<double> DecodeBins(const std::vector<double>& a,
                                 const BinGrid& g, double activation_floor) {
  Require(static_cast<int>(a.size()) == g.d,
          "f0-bins: activation length does not match bin count");
  double mass = 0.0, acc = 0.0;
  for (int k = 0; k < g.d; ++k) {
    Require(a[k] >= 0.0 && a[k] <= 1.0,
            "f0-bins: activations must lie in [0, 1]");
    mass += a[k];
    acc += a[k] * g.centers[k];
  }
  if (mass < activation_floor) return std::nullopt;
  return acc / mass;
}

}  // namespace prosoda
