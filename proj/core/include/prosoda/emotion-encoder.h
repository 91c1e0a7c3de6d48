// core/include/prosoda/emotion-encoder.h

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

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "prosoda/feature-extractor.h"
#include "prosoda/nn.h"

namespace prosoda {

constexpr int kNumEmotions = 4;
constexpr int kEmotionDim = 96;

// Labels are indices 0..3 in this order everywhere (manifests, confusion
// matrices, bundle metadata).
extern const std::array<const char*, kNumEmotions> kEmotionNames;

// "Neutral" -> 0, ..., "Sad" -> 3; throws on anything else.
int ParseEmotionLabel(const std::string& name);

struct EmotionExample {
  FeatureSeq features;
  int label = 0;
  std::string language;
};

struct EmotionTrainConfig {
  int conv_channels = 32;
  int kernel = 5;
  int epochs = 25;
  double lr = 1e-3;
  // Small L2 pull keeps bottleneck activations compact, which keeps the
  // embedding space clusterable by emotion rather than by incidental
  // corpus structure.
  double weight_decay = 1e-4;
  double dropout = 0.0;
  uint64_t seed = 17;
};

// conv stack -> per-frame 96-dim bottleneck -> mean pool -> 4-way softmax.
// embed_layers counts the prefix ending at the pooled bottleneck.
struct EmotionModel {
  Network net;
  int embed_layers = 0;
  int feature_dim = 0;
};

struct EmotionTrainResult {
  EmotionModel model;
  double eval_accuracy = 0.0;
  std::array<int, kNumEmotions> class_counts{};  // training-set balance
  std::vector<double> epoch_losses;
};

// Cross-entropy training on the train split, accuracy reported on eval.
// The train split must contain at least two distinct labels.
EmotionTrainResult TrainEmotion(const std::vector<EmotionExample>& train,
                                const std::vector<EmotionExample>& eval,
                                const EmotionTrainConfig& cfg);

// Softmax class probabilities for one utterance.
std::array<double, kNumEmotions> Classify(const EmotionModel& m,
                                          const FeatureSeq& f);

// 96-dim mean-pooled bottleneck embedding.
std::vector<double> Embed(const EmotionModel& m, const FeatureSeq& f);

void WriteEmotionModel(ByteWriter* w, const EmotionModel& m);
EmotionModel ReadEmotionModel(ByteReader* r);

}  // namespace prosoda
