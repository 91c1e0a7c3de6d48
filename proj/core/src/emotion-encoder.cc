// core/src/emotion-encoder.cc

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

#include "prosoda/emotion-encoder.h"

#include <algorithm>
#include <numeric>
#include <set>

namespace prosoda {

const std::array<const char*, kNumEmotions> kEmotionNames = {
    "Neutral", "Angry", "Happy", "Sad"};

int ParseEmotionLabel(const std::string& name) {
  for (int i = 0; i < kNumEmotions; ++i)
    if (name == kEmotionNames[i]) return i;
  Fail("emotion: unknown label '" + name + "'");
}

EmotionTrainResult TrainEmotion(const std::vector<EmotionExample>& train,
                                const std::vector<EmotionExample>& eval,
                                const EmotionTrainConfig& cfg) {
  Require(!train.empty(), "emotion: empty training set");
  Require(!eval.empty(), "emotion: empty evaluation set");
  std::set<int> classes;
  for (const auto& ex : train) {
    Require(ex.label >= 0 && ex.label < kNumEmotions,
            "emotion: label " + std::to_string(ex.label) + " out of range");
    Require(ex.features.n_frames() > 0, "emotion: empty feature sequence");
    classes.insert(ex.label);
  }
  Require(classes.size() >= 2,
          "emotion: training set has a single class; need at least 2");
  const int dim = train[0].features.dim();
  for (const auto& ex : train)
    Require(ex.features.dim() == dim,
            "emotion: inconsistent feature dims in training set");

  NetworkSpec spec;
  spec.push_back(LayerSpec::Conv1d(dim, cfg.conv_channels, cfg.kernel));
  spec.push_back(LayerSpec::Relu());
  spec.push_back(LayerSpec::Dropout(cfg.dropout));
  spec.push_back(LayerSpec::Conv1d(cfg.conv_channels, cfg.conv_channels,
                                   cfg.kernel));
  spec.push_back(LayerSpec::Relu());
  spec.push_back(LayerSpec::Dense(cfg.conv_channels, kEmotionDim));
  spec.push_back(LayerSpec::MeanPoolTime());
  spec.push_back(LayerSpec::Dense(kEmotionDim, kNumEmotions));
  spec.push_back(LayerSpec::Softmax());

  EmotionTrainResult res;
  res.model.net = InitNetwork(spec, MixSeed(cfg.seed, 0xe301));
  res.model.embed_layers = 7;  // through MeanPoolTime
  res.model.feature_dim = dim;
  for (const auto& ex : train) ++res.class_counts[ex.label];

  AdamConfig adam;
  adam.lr = cfg.lr;
  adam.weight_decay = cfg.weight_decay;
  AdamState st = MakeAdamState(res.model.net, adam);
  Rng shuffle_rng(MixSeed(cfg.seed, 0xe302));
  Rng dropout_rng(MixSeed(cfg.seed, 0xe303));

  std::vector<int> order(train.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    // Fisher-Yates with our own rng so the trajectory is seed-reproducible.
    for (int i = static_cast<int>(order.size()) - 1; i > 0; --i)
      std::swap(order[i], order[shuffle_rng.UniformInt(i + 1)]);

    double total = 0.0;
    for (int idx : order) {
      const EmotionExample& ex = train[idx];
      Matrix target(1, kNumEmotions);
      target(0, ex.label) = 1.0;
      total += TrainStep(&res.model.net, &st, ex.features.vectors, target,
                         LossKind::kCrossEntropy, &dropout_rng);
    }
    res.epoch_losses.push_back(total / train.size());
  }

  int correct = 0;
  for (const auto& ex : eval) {
    auto probs = Classify(res.model, ex.features);
    int arg = 0;
    for (int c = 1; c < kNumEmotions; ++c)
      if (probs[c] > probs[arg]) arg = c;
    if (arg == ex.label) ++correct;
  }
  res.eval_accuracy = static_cast<double>(correct) / eval.size();
  return res;
}

std::array<double, kNumEmotions> Classify(const EmotionModel& m,
                                          const FeatureSeq& f) {
  Require(f.n_frames() > 0, "emotion: empty feature sequence");
  Require(f.dim() == m.feature_dim,
          "emotion: feature dim " + std::to_string(f.dim()) +
              " != model input dim " + std::to_string(m.feature_dim));
  Matrix out = Forward(m.net, f.vectors);
  std::array<double, kNumEmotions> probs;
  for (int c = 0; c < kNumEmotions; ++c) probs[c] = out(0, c);
  return probs;
}

std::vector<double> Embed(const EmotionModel& m, const FeatureSeq& f) {
  Require(f.n_frames() > 0, "emotion: empty feature sequence");
  Require(f.dim() == m.feature_dim,
          "emotion: feature dim " + std::to_string(f.dim()) +
              " != model input dim " + std::to_string(m.feature_dim));
  Matrix out = ForwardUpTo(m.net, f.vectors, m.embed_layers);
  Require(out.rows == 1 && out.cols == kEmotionDim,
          "emotion: embedding prefix does not end at the pooled bottleneck");
  return {out.data.begin(), out.data.end()};
}

void WriteEmotionModel(ByteWriter* w, const EmotionModel& m) {
  w->U32(static_cast<uint32_t>(kNumEmotions));
  for (const char* name : kEmotionNames) w->Str(name);
  w->I32(m.embed_layers);
  w->I32(m.feature_dim);
  WriteNetwork(w, m.net);
}

EmotionModel ReadEmotionModel(ByteReader* r) {
  uint32_t n = r->U32();
  Require(n == kNumEmotions, "emotion: label set size mismatch in bundle");
  for (int i = 0; i < kNumEmotions; ++i)
    Require(r->Str() == kEmotionNames[i],
            "emotion: label set mismatch in bundle");
  EmotionModel m;
  m.embed_layers = r->I32();
  m.feature_dim = r->I32();
  m.net = ReadNetwork(r);
  Require(m.embed_layers >= 1 && m.embed_layers <= m.net.n_layers(),
          "emotion: bad embedding prefix length");
  return m;
}

}  // namespace prosoda
