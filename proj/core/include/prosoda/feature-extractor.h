// core/include/prosoda/feature-extractor.h

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
#include "prosoda/framing.h"
#include "prosoda/wav-io.h"

namespace prosoda {

// Log-mel geometry. The log-mel energies are the frame-level content
// features the rest of the pipeline consumes; the interface is pluggable
// so another frame-synchronous feature source can be swapped in behind
// FeatureSeq.
struct FeatureConfig {
  int n_fft = 512;
  int n_mels = 40;
  double fmin = 0.0;
  double fmax = 8000.0;
  double log_floor = 1e-10;
};

// Frame-level feature vectors at the fixed 20 ms hop.
struct FeatureSeq {
  Matrix vectors;  // n_frames x dim
  double hop_seconds = kHopSeconds;

  int n_frames() const { return vectors.rows; }
  int dim() const { return vectors.cols; }
};

// HTK mel scale.
double HzToMel(double hz);
double MelToHz(double mel);

// Hann-windowed magnitude-squared DFT bins, n_frames x (n_fft/2 + 1),
// computed with the radix-2 FFT. Requires n_fft >= frame_len and a power
// of two.
Matrix PowerSpectrum(const FrameSeq& frames, int n_fft);

// Triangular mel filterbank, n_mels x (n_fft/2 + 1). Every row has
// triangular support and a positive sum; an empty filter means the config
// is invalid for this n_fft.
Matrix MelFilterbank(const FeatureConfig& cfg, int n_fft, int sample_rate);

// ln(filterbank * spectrum + log_floor).
FeatureSeq LogMel(const Matrix& spectrum, const FeatureConfig& cfg,
                  int sample_rate);

// frame -> power_spectrum -> log_mel at the pipeline's fixed 20 ms hop and
// 25 ms window.
FeatureSeq ExtractFeatures(const Waveform& w, const FeatureConfig& cfg);

void ValidateFeatureConfig(const FeatureConfig& cfg, int sample_rate);

}  // namespace prosoda
