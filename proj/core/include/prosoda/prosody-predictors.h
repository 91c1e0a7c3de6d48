// core/include/prosoda/prosody-predictors.h

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

#include "prosoda/emotion-encoder.h"
#include "prosoda/f0-bins.h"
#include "prosoda/nn.h"
#include "prosoda/units.h"

namespace prosoda {

// Both predictors read rows of [unit embedding | 96-dim emotion embedding];
// the emotion vector is broadcast to every time step, identically at train
// and inference time.  The unconditioned baseline passes all-zero emotion
// vectors through the same code path.

struct PredictorConfig {
  int k = 0;  // unit vocabulary (codebook size); must be set
  int unit_embed_dim = 64;
  int conv_channels = 48;
  int kernel = 5;
  int epochs = 15;
  double lr = 1e-3;
  uint64_t seed = 29;
  int bins = 32;  // pitch model output width; ignored by the duration model
};

struct DurationModel {
  EmbeddingTable units;
  Network net;  // conv stack -> dense(-> 1), log-duration output
  int k = 0;
  int unit_embed_dim = 0;
};

struct PitchModel {
  EmbeddingTable units;
  Network net;  // conv stack -> dense(-> d) -> sigmoid
  int k = 0;
  int unit_embed_dim = 0;
  int d = 0;
};

struct DurationExample {
  ReducedUnits units;
  std::vector<double> emotion;  // 96-dim, or zeros for the baseline
};

struct PitchExample {
  std::vector<int> units;  // expanded, frame rate
  std::vector<double> emotion;
  Matrix targets;             // n_frames x d one-hot rows (voiced frames)
  std::vector<bool> voiced;   // loss mask
};

struct DurationTrainResult {
  DurationModel model;
  std::vector<double> epoch_losses;
};

struct PitchTrainResult {
  PitchModel model;
  std::vector<double> epoch_losses;
};

// MSE on log(duration).
DurationTrainResult TrainDuration(const std::vector<DurationExample>& pairs,
                                  const PredictorConfig& cfg);

// exp of the network output, rounded, clamped to >= 1.
std::vector<int> PredictDurations(const DurationModel& m,
                                  const std::vector<int>& reduced_units,
                                  const std::vector<double>& emotion);

// Per-bin binary cross-entropy masked to voiced frames.
PitchTrainResult TrainPitch(const std::vector<PitchExample>& pairs,
                            const PredictorConfig& cfg);

// Sigmoid activations decoded per frame, then destandardized with s.
// Frames whose activation mass falls below the decode floor come out
// unvoiced.  Voiced output is floored at 20 Hz so it stays positive.
PitchTrack PredictPitch(const PitchModel& m, const std::vector<int>& units,
                        const std::vector<double>& emotion,
                        const SpeakerStats& s, const BinGrid& g);

// Raw sigmoid activations (n_frames x d), exposed for decode tests.
Matrix PitchActivations(const PitchModel& m, const std::vector<int>& units,
                        const std::vector<double>& emotion);

void WriteDurationModel(ByteWriter* w, const DurationModel& m);
DurationModel ReadDurationModel(ByteReader* r);
void WritePitchModel(ByteWriter* w, const PitchModel& m);
PitchModel ReadPitchModel(ByteReader* r);

}  // namespace prosoda
