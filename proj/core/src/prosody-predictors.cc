// core/src/prosody-predictors.cc

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

#include "prosoda/prosody-predictors.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace prosoda {

namespace {

void CheckIds(const std::vector<int>& ids, int k) {
  for (int id : ids)
    Require(id >= 0 && id < k, "prosody: unit id " + std::to_string(id) +
                                   " outside codebook of size " +
                                   std::to_string(k));
}

void CheckEmotion(const std::vector<double>& e) {
  Require(static_cast<int>(e.size()) == kEmotionDim,
          "prosody: emotion embedding must have " +
              std::to_string(kEmotionDim) + " dims, got " +
              std::to_string(e.size()));
}

// Rows of [unit embedding | emotion embedding], emotion broadcast per frame.
Matrix BuildInput(const EmbeddingTable& emb, const std::vector<int>& ids,
                  const std::vector<double>& emotion) {
  const int e = emb.weights.cols;
  Matrix x(static_cast<int>(ids.size()), e + kEmotionDim);
  for (size_t t = 0; t < ids.size(); ++t) {
    auto src = emb.weights.Row(ids[t]);
    auto dst = x.Row(static_cast<int>(t));
    std::copy(src.begin(), src.end(), dst.begin());
    std::copy(emotion.begin(), emotion.end(), dst.begin() + e);
  }
  return x;
}

// One optimizer step over network and embedding table together.  The
// embedding gradient is the unit-embedding slice of the input gradient.
double CombinedStep(Network* net, AdamState* st, EmbeddingTable* emb,
                    const std::vector<int>& ids,
                    const std::vector<double>& emotion, const Matrix& target,
                    LossKind loss, const std::vector<bool>* mask,
                    const AdamConfig& adam) {
  Matrix x = BuildInput(*emb, ids, emotion);
  ForwardTrace trace;
  Matrix out = Forward(*net, x, nullptr, &trace);

  LossGrad lg;
  switch (loss) {
    case LossKind::kMse:
      lg = MseLoss(out, target);
      break;
    case LossKind::kBce:
      lg = BceLoss(out, target, mask);
      break;
    default:
      Fail("prosody: unsupported loss");
  }
  Require(std::isfinite(lg.value), "prosody: non-finite loss; training aborted");

  Gradients grads = Backward(*net, trace, lg.grad);
  ApplyAdam(net, grads, st);

  const int e = emb->weights.cols;
  Matrix emb_grad(grads.input.rows, e);
  for (int t = 0; t < grads.input.rows; ++t) {
    auto src = grads.input.Row(t);
    auto dst = emb_grad.Row(t);
    std::copy(src.begin(), src.begin() + e, dst.begin());
  }
  AdamStepEmbedding(emb, ids, emb_grad, adam);
  return lg.value;
}

void Shuffle(std::vector<int>* order, Rng* rng) {
  for (int i = static_cast<int>(order->size()) - 1; i > 0; --i)
    std::swap((*order)[i], (*order)[rng->UniformInt(i + 1)]);
}

}  // namespace

DurationTrainResult TrainDuration(const std::vector<DurationExample>& pairs,
                                  const PredictorConfig& cfg) {
  Require(!pairs.empty(), "prosody: empty duration training corpus");
  Require(cfg.k >= 2, "prosody: config must carry the codebook size");
  for (const auto& p : pairs) {
    Require(p.units.size() > 0, "prosody: empty reduced unit sequence");
    CheckIds(p.units.units, cfg.k);
    CheckEmotion(p.emotion);
    for (int d : p.units.durations)
      Require(d >= 1, "prosody: durations must be positive");
  }

  DurationTrainResult res;
  res.model.k = cfg.k;
  res.model.unit_embed_dim = cfg.unit_embed_dim;
  res.model.units = InitEmbeddingTable(cfg.k, cfg.unit_embed_dim,
                                       MixSeed(cfg.seed, 0xd001));
  NetworkSpec spec;
  const int in = cfg.unit_embed_dim + kEmotionDim;
  spec.push_back(LayerSpec::Conv1d(in, cfg.conv_channels, cfg.kernel));
  spec.push_back(LayerSpec::Relu());
  spec.push_back(LayerSpec::Conv1d(cfg.conv_channels, cfg.conv_channels, 3));
  spec.push_back(LayerSpec::Relu());
  spec.push_back(LayerSpec::Dense(cfg.conv_channels, 1));
  res.model.net = InitNetwork(spec, MixSeed(cfg.seed, 0xd002));

  AdamConfig adam;
  adam.lr = cfg.lr;
  AdamState st = MakeAdamState(res.model.net, adam);
  Rng shuffle_rng(MixSeed(cfg.seed, 0xd003));
  std::vector<int> order(pairs.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    Shuffle(&order, &shuffle_rng);
    double total = 0.0;
    for (int idx : order) {
      const DurationExample& p = pairs[idx];
      Matrix target(p.units.size(), 1);
      for (int i = 0; i < p.units.size(); ++i)
        target(i, 0) = std::log(static_cast<double>(p.units.durations[i]));
      total += CombinedStep(&res.model.net, &st, &res.model.units,
                            p.units.units, p.emotion, target, LossKind::kMse,
                            nullptr, adam);
    }
    res.epoch_losses.push_back(total / pairs.size());
  }
  return res;
}

std::vector<int> PredictDurations(const DurationModel& m,
                                  const std::vector<int>& reduced_units,
                                  const std::vector<double>& emotion) {
  Require(!reduced_units.empty(), "prosody: empty reduced unit sequence");
  CheckIds(reduced_units, m.k);
  CheckEmotion(emotion);
  Matrix x = BuildInput(m.units, reduced_units, emotion);
  Matrix out = Forward(m.net, x);
  std::vector<int> durations(reduced_units.size());
  for (size_t i = 0; i < reduced_units.size(); ++i) {
    double raw = std::min(out(static_cast<int>(i), 0), 12.0);
    durations[i] =
        std::max(1, static_cast<int>(std::lround(std::exp(raw))));
  }
  return durations;
}

PitchTrainResult TrainPitch(const std::vector<PitchExample>& pairs,
                            const PredictorConfig& cfg) {
  Require(!pairs.empty(), "prosody: empty pitch training corpus");
  Require(cfg.k >= 2, "prosody: config must carry the codebook size");
  Require(cfg.bins >= 1, "prosody: config must carry the bin count");
  for (const auto& p : pairs) {
    Require(!p.units.empty(), "prosody: empty unit sequence");
    CheckIds(p.units, cfg.k);
    CheckEmotion(p.emotion);
    Require(p.targets.rows == static_cast<int>(p.units.size()) &&
                p.voiced.size() == p.units.size(),
            "prosody: unit/target length mismatch (" +
                std::to_string(p.units.size()) + " units, " +
                std::to_string(p.targets.rows) + " target rows)");
    Require(p.targets.cols == cfg.bins,
            "prosody: target width " + std::to_string(p.targets.cols) +
                " != configured bins " + std::to_string(cfg.bins));
  }

  PitchTrainResult res;
  res.model.k = cfg.k;
  res.model.unit_embed_dim = cfg.unit_embed_dim;
  res.model.d = cfg.bins;
  res.model.units = InitEmbeddingTable(cfg.k, cfg.unit_embed_dim,
                                       MixSeed(cfg.seed, 0xf001));
  NetworkSpec spec;
  const int in = cfg.unit_embed_dim + kEmotionDim;
  spec.push_back(LayerSpec::Conv1d(in, cfg.conv_channels, cfg.kernel));
  spec.push_back(LayerSpec::Relu());
  spec.push_back(LayerSpec::Conv1d(cfg.conv_channels, cfg.conv_channels, 3));
  spec.push_back(LayerSpec::Relu());
  spec.push_back(LayerSpec::Dense(cfg.conv_channels, cfg.bins));
  spec.push_back(LayerSpec::Sigmoid());
  res.model.net = InitNetwork(spec, MixSeed(cfg.seed, 0xf002));

  AdamConfig adam;
  adam.lr = cfg.lr;
  AdamState st = MakeAdamState(res.model.net, adam);
  Rng shuffle_rng(MixSeed(cfg.seed, 0xf003));
  std::vector<int> order(pairs.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    Shuffle(&order, &shuffle_rng);
    double total = 0.0;
    for (int idx : order) {
      const PitchExample& p = pairs[idx];
      total += CombinedStep(&res.model.net, &st, &res.model.units, p.units,
                            p.emotion, p.targets, LossKind::kBce, &p.voiced,
                            adam);
    }
    res.epoch_losses.push_back(total / pairs.size());
  }
  return res;
}

Matrix PitchActivations(const PitchModel& m, const std::vector<int>& units,
                        const std::vector<double>& emotion) {
  Require(!units.empty(), "prosody: empty unit sequence");
  CheckIds(units, m.k);
  CheckEmotion(emotion);
  Matrix x = BuildInput(m.units, units, emotion);
  return Forward(m.net, x);
}

PitchTrack PredictPitch(const PitchModel& m, const std::vector<int>& units,
                        const std::vector<double>& emotion,
                        const SpeakerStats& s, const BinGrid& g) {
  Require(g.d == m.d, "prosody: bin grid size " + std::to_string(g.d) +
                          " != model output width " + std::to_string(m.d));
  Require(s.std_f0 > 0.0, "prosody: speaker std must be positive");
  Matrix act = PitchActivations(m, units, emotion);

  PitchTrack track;
  track.f0_hz.assign(act.rows, 0.0);
  track.voiced.assign(act.rows, false);
  std::vector<double> row(g.d);
  for (int t = 0; t < act.rows; ++t) {
    auto r = act.Row(t);
    std::copy(r.begin(), r.end(), row.begin());
    auto z = DecodeBins(row, g);
    if (z) {
      track.voiced[t] = true;
      track.f0_hz[t] = std::max(20.0, s.mean_f0 + *z * s.std_f0);
    }
  }
  return track;
}

void WriteDurationModel(ByteWriter* w, const DurationModel& m) {
  w->I32(m.k);
  w->I32(m.unit_embed_dim);
  WriteEmbeddingTable(w, m.units);
  WriteNetwork(w, m.net);
}

DurationModel ReadDurationModel(ByteReader* r) {
  DurationModel m;
  m.k = r->I32();
  m.unit_embed_dim = r->I32();
  m.units = ReadEmbeddingTable(r);
  m.net = ReadNetwork(r);
  Require(m.units.weights.rows == m.k &&
              m.units.weights.cols == m.unit_embed_dim,
          "prosody: duration model embedding shape mismatch");
  return m;
}

void WritePitchModel(ByteWriter* w, const PitchModel& m) {
  w->I32(m.k);
  w->I32(m.unit_embed_dim);
  w->I32(m.d);
  WriteEmbeddingTable(w, m.units);
  WriteNetwork(w, m.net);
}

PitchModel ReadPitchModel(ByteReader* r) {
  PitchModel m;
  m.k = r->I32();
  m.unit_embed_dim = r->I32();
  m.d = r->I32();
  m.units = ReadEmbeddingTable(r);
  m.net = ReadNetwork(r);
  Require(m.units.weights.rows == m.k &&
              m.units.weights.cols == m.unit_embed_dim,
          "prosody: pitch model embedding shape mismatch");
  return m;
}

}  // namespace prosoda
