// core/include/prosoda/nn.h

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

#include "prosoda/common.h"
#include "prosoda/serialize.h"

namespace prosoda {

// Tensors are (time x channels) matrices throughout; layers that have no
// time structure treat rows independently.

enum class LayerKind {
  kConv1d,
  kDense,
  kRelu,
  kSigmoid,
  kSoftmax,
  kMeanPoolTime,
  kDropout,
};

struct LayerSpec {
  LayerKind kind = LayerKind::kRelu;
  int in_ch = 0, out_ch = 0, kernel = 0;  // conv1d (kernel odd, zero "same")
  int in = 0, out = 0;                    // dense
  double p = 0.0;                         // dropout keep-out probability

  static LayerSpec Conv1d(int in_ch, int out_ch, int kernel);
  static LayerSpec Dense(int in, int out);
  static LayerSpec Relu();
  static LayerSpec Sigmoid();
  static LayerSpec Softmax();
  static LayerSpec MeanPoolTime();
  static LayerSpec Dropout(double p);
};

using NetworkSpec = std::vector<LayerSpec>;

// Weight matrix plus bias; empty for parameterless layers.  Dense weights
// are (in x out); conv weights are (out_ch x in_ch*kernel).
struct ParamBlock {
  Matrix w;
  std::vector<double> b;
};

struct Network {
  NetworkSpec spec;
  std::vector<ParamBlock> params;
  uint64_t seed = 0;

  int n_layers() const { return static_cast<int>(spec.size()); }
};

// Glorot-uniform weights, zero biases, deterministic in `seed`.
Network InitNetwork(const NetworkSpec& spec, uint64_t seed);

// Checks layer-to-layer width compatibility; throws on mismatch.
void ValidateSpec(const NetworkSpec& spec);

// Per-layer inputs captured during forward; xs[i] feeds layer i and
// xs.back() is the network output.  Dropout masks are kept for backward.
struct ForwardTrace {
  std::vector<Matrix> xs;
  std::vector<Matrix> masks;
};

// Inference when dropout_rng is null; training mode samples inverted
// dropout masks from it.
Matrix Forward(const Network& net, const Matrix& x, Rng* dropout_rng = nullptr,
               ForwardTrace* trace = nullptr);

// Runs only the first n_layers layers (inference mode).
Matrix ForwardUpTo(const Network& net, const Matrix& x, int n_layers);

struct Gradients {
  std::vector<ParamBlock> layers;
  Matrix input;
};

// Exact reverse-mode gradients for every parameter plus the network input.
Gradients Backward(const Network& net, const ForwardTrace& trace,
                   const Matrix& out_grad);

enum class LossKind { kMse, kCrossEntropy, kBce };

struct LossGrad {
  double value = 0.0;
  Matrix grad;
};

LossGrad MseLoss(const Matrix& pred, const Matrix& target);
// Expects post-softmax probabilities against one-hot rows.
LossGrad CrossEntropyLoss(const Matrix& prob, const Matrix& onehot);
// Per-element binary cross-entropy; rows with mask=false contribute nothing.
// A null mask means all rows count.
LossGrad BceLoss(const Matrix& prob, const Matrix& target,
                 const std::vector<bool>* row_mask = nullptr);

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.0;
};

struct AdamState {
  AdamConfig cfg;
  long long step = 0;
  std::vector<ParamBlock> m, v;
};

AdamState MakeAdamState(const Network& net, const AdamConfig& cfg = {});

// One bias-corrected moment update over a flat parameter view.
void AdamUpdate(std::span<double> param, std::span<const double> grad,
                std::span<double> m, std::span<double> v, long long step,
                const AdamConfig& cfg);

void ApplyAdam(Network* net, const Gradients& grads, AdamState* st);

// Forward, loss, backward, Adam; returns the pre-update loss.  Aborts on a
// non-finite loss.  `mask` applies to BCE only.
double TrainStep(Network* net, AdamState* st, const Matrix& x,
                 const Matrix& target, LossKind loss,
                 Rng* dropout_rng = nullptr,
                 const std::vector<bool>* mask = nullptr);

// Learned id -> vector table with its own Adam moments (dense update; rows
// untouched by a step still decay their moments).
struct EmbeddingTable {
  Matrix weights;
  Matrix m, v;
  long long step = 0;
};

EmbeddingTable InitEmbeddingTable(int vocab, int dim, uint64_t seed);
Matrix EmbedRows(const EmbeddingTable& t, const std::vector<int>& ids);
// Scatter-adds grad_rows (one per id) into a dense gradient, then Adam.
void AdamStepEmbedding(EmbeddingTable* t, const std::vector<int>& ids,
                       const Matrix& grad_rows, const AdamConfig& cfg);

void WriteNetwork(ByteWriter* w, const Network& net);
Network ReadNetwork(ByteReader* r);
void WriteEmbeddingTable(ByteWriter* w, const EmbeddingTable& t);
EmbeddingTable ReadEmbeddingTable(ByteReader* r);

}  // namespace prosoda
