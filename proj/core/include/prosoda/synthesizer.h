// core/include/prosoda/synthesizer.h

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

#include <cstdint>
#include <vector>

#include "prosoda/bundle.h"
#include "prosoda/f0-bins.h"
#include "prosoda/kmeans.h"
#include "prosoda/pitch-tracker.h"
#include "prosoda/wav-io.h"

namespace prosoda {

struct SynthConfig {
  int sample_rate = 16000;
  int hop = 320;
  int win = 640;    // Hann OLA window, 2x hop
  int n_fft = 1024;
  double peak_norm = 0.9;
  // Unvoiced excitation level before shaping.  Kept well below pulse-train
  // power so windows straddling a voicing boundary stay pulse-dominated;
  // envelope-shaped noise at comparable power reads as a spurious
  // formant-frequency pitch.
  double noise_gain = 0.02;
  // Broadband floor added after peak normalization (about -50 dB), so
  // silence in the output re-tracks as silence rather than as the
  // overlap-add tail of the previous voiced frame.
  double noise_floor = 0.003;
  uint64_t noise_seed = 0x9e11;
  FeatureConfig features;  // mel geometry for centroid-to-envelope mapping
};

// F0 resampled to target_len frames by linear interpolation at frame time
// centers.  Unvoiced gaps are bridged for the interpolation itself; output
// voicing follows the nearest source frame.
PitchTrack ResampleF0(const PitchTrack& f0, int target_len);

// Per-frame conditioning rows: [f0_hz | emotion(96) | speaker one-hot].
// F0 is resampled to the unit frame rate; embedding and speaker identity
// are replicated down the time axis.
Matrix AlignConditioning(const std::vector<int>& units, const PitchTrack& f0,
                         const std::vector<double>& emotion, int speaker,
                         int n_speakers);

// Source-filter reconstruction: pulse-train or noise excitation per frame,
// shaped by the spectral envelope of the frame's codebook centroid, Hann
// overlap-add.  Output is exactly units.size() * hop samples, peak 0.9.
Waveform Synthesize(const std::vector<int>& units, const PitchTrack& f0,
                    const std::vector<double>& emotion, int speaker,
                    const Codebook& codebook, const SynthConfig& cfg);

enum class ResynthMode { kOracle, kBaseline, kProposed };

// Full analysis-resynthesis round trip through a trained bundle.
//   oracle:   ground-truth durations and F0 from the input itself
//   baseline: predictors conditioned on a zero emotion embedding
//   proposed: predictors conditioned on embed(w), or on donor_embedding
//             when given (cross-lingual transfer).
Waveform Resynthesize(const Waveform& w, ResynthMode mode, const Bundle& b,
                      int speaker_id,
                      const std::vector<double>* donor_embedding = nullptr);

}  // namespace prosoda
