// core/src/nn.cc

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

#include "prosoda/nn.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace prosoda {

LayerSpec LayerSpec::Conv1d(int in_ch, int out_ch, int kernel) {
  LayerSpec s;
  s.kind = LayerKind::kConv1d;
  s.in_ch = in_ch;
  s.out_ch = out_ch;
  s.kernel = kernel;
  return s;
}
LayerSpec LayerSpec::Dense(int in, int out) {
  LayerSpec s;
  s.kind = LayerKind::kDense;
  s.in = in;
  s.out = out;
  return s;
}
LayerSpec LayerSpec::Relu() { return LayerSpec{LayerKind::kRelu}; }
LayerSpec LayerSpec::Sigmoid() { return LayerSpec{LayerKind::kSigmoid}; }
LayerSpec LayerSpec::Softmax() { return LayerSpec{LayerKind::kSoftmax}; }
LayerSpec LayerSpec::MeanPoolTime() {
  return LayerSpec{LayerKind::kMeanPoolTime};
}
LayerSpec LayerSpec::Dropout(double p) {
  LayerSpec s;
  s.kind = LayerKind::kDropout;
  s.p = p;
  return s;
}

void ValidateSpec(const NetworkSpec& spec) {
  Require(!spec.empty(), "nn: empty network spec");
  int width = -1;  // unknown until the first parametric layer
  for (size_t i = 0; i < spec.size(); ++i) {
    const LayerSpec& l = spec[i];
    switch (l.kind) {
      case LayerKind::kConv1d:
        Require(l.in_ch >= 1 && l.out_ch >= 1 && l.kernel >= 1,
                "nn: conv1d layer " + std::to_string(i) + " has bad shape");
        Require(l.kernel % 2 == 1,
                "nn: conv1d kernel must be odd for same padding");
        Require(width < 0 || width == l.in_ch,
                "nn: conv1d layer " + std::to_string(i) + " expects " +
                    std::to_string(l.in_ch) + " channels but gets " +
                    std::to_string(width));
        width = l.out_ch;
        break;
      case LayerKind::kDense:
        Require(l.in >= 1 && l.out >= 1,
                "nn: dense layer " + std::to_string(i) + " has bad shape");
        Require(width < 0 || width == l.in,
                "nn: dense layer " + std::to_string(i) + " expects " +
                    std::to_string(l.in) + " inputs but gets " +
                    std::to_string(width));
        width = l.out;
        break;
      case LayerKind::kDropout:
        Require(l.p >= 0.0 && l.p < 1.0, "nn: dropout p must be in [0, 1)");
        break;
      default:
        break;
    }
  }
}

Network InitNetwork(const NetworkSpec& spec, uint64_t seed) {
  ValidateSpec(spec);
  Network net;
  net.spec = spec;
  net.seed = seed;
  net.params.resize(spec.size());
  Rng rng(seed);
  for (size_t i = 0; i < spec.size(); ++i) {
    const LayerSpec& l = spec[i];
    if (l.kind == LayerKind::kConv1d) {
      double a = std::sqrt(6.0 / (l.in_ch * l.kernel + l.out_ch * l.kernel));
      net.params[i].w = Matrix(l.out_ch, l.in_ch * l.kernel);
      for (double& v : net.params[i].w.data) v = rng.Uniform(-a, a);
      net.params[i].b.assign(l.out_ch, 0.0);
    } else if (l.kind == LayerKind::kDense) {
      double a = std::sqrt(6.0 / (l.in + l.out));
      net.params[i].w = Matrix(l.in, l.out);
      for (double& v : net.params[i].w.data) v = rng.Uniform(-a, a);
      net.params[i].b.assign(l.out, 0.0);
    }
  }
  return net;
}

namespace {

Matrix DenseForward(const ParamBlock& p, const Matrix& x) {
  Require(x.cols == p.w.rows, "nn: dense input width " +
                                  std::to_string(x.cols) + " != " +
                                  std::to_string(p.w.rows));
  Matrix y(x.rows, p.w.cols);
  for (int t = 0; t < x.rows; ++t) {
    auto xr = x.Row(t);
    auto yr = y.Row(t);
    for (int o = 0; o < p.w.cols; ++o) yr[o] = p.b[o];
    for (int i = 0; i < p.w.rows; ++i) {
      double xi = xr[i];
      auto wr = p.w.Row(i);
      for (int o = 0; o < p.w.cols; ++o) yr[o] += xi * wr[o];
    }
  }
  return y;
}

Matrix Conv1dForward(const LayerSpec& l, const ParamBlock& p, const Matrix& x) {
  Require(x.cols == l.in_ch, "nn: conv1d input channels " +
                                 std::to_string(x.cols) + " != " +
                                 std::to_string(l.in_ch));
  const int pad = l.kernel / 2;
  Matrix y(x.rows, l.out_ch);
  for (int t = 0; t < x.rows; ++t) {
    auto yr = y.Row(t);
    for (int o = 0; o < l.out_ch; ++o) yr[o] = p.b[o];
    for (int kk = 0; kk < l.kernel; ++kk) {
      int xi = t + kk - pad;
      if (xi < 0 || xi >= x.rows) continue;
      auto xr = x.Row(xi);
      for (int o = 0; o < l.out_ch; ++o) {
        auto wr = p.w.Row(o);
        double acc = 0.0;
        for (int ic = 0; ic < l.in_ch; ++ic)
          acc += wr[ic * l.kernel + kk] * xr[ic];
        yr[o] += acc;
      }
    }
  }
  return y;
}

Matrix SoftmaxRows(const Matrix& x) {
  Matrix y(x.rows, x.cols);
  for (int t = 0; t < x.rows; ++t) {
    auto xr = x.Row(t);
    auto yr = y.Row(t);
    double mx = xr[0];
    for (int c = 1; c < x.cols; ++c) mx = std::max(mx, xr[c]);
    double sum = 0.0;
    for (int c = 0; c < x.cols; ++c) {
      yr[c] = std::exp(xr[c] - mx);
      sum += yr[c];
    }
    for (int c = 0; c < x.cols; ++c) yr[c] /= sum;
  }
  return y;
}

}  // namespace

Matrix Forward(const Network& net, const Matrix& x, Rng* dropout_rng,
               ForwardTrace* trace) {
  Require(x.rows >= 1 && x.cols >= 1, "nn: empty input tensor");
  if (trace) {
    trace->xs.clear();
    trace->masks.assign(net.n_layers(), Matrix());
  }
  Matrix cur = x;
  for (int i = 0; i < net.n_layers(); ++i) {
    if (trace) trace->xs.push_back(cur);
    const LayerSpec& l = net.spec[i];
    switch (l.kind) {
      case LayerKind::kConv1d:
        cur = Conv1dForward(l, net.params[i], cur);
        break;
      case LayerKind::kDense:
        cur = DenseForward(net.params[i], cur);
        break;
      case LayerKind::kRelu:
        for (double& v : cur.data) v = std::max(0.0, v);
        break;
      case LayerKind::kSigmoid:
        for (double& v : cur.data) v = 1.0 / (1.0 + std::exp(-v));
        break;
      case LayerKind::kSoftmax:
        cur = SoftmaxRows(cur);
        break;
      case LayerKind::kMeanPoolTime: {
        Matrix pooled(1, cur.cols);
        for (int t = 0; t < cur.rows; ++t)
          for (int c = 0; c < cur.cols; ++c) pooled(0, c) += cur(t, c);
        for (int c = 0; c < cur.cols; ++c) pooled(0, c) /= cur.rows;
        cur = pooled;
        break;
      }
      case LayerKind::kDropout: {
        if (dropout_rng && l.p > 0.0) {
          Matrix mask(cur.rows, cur.cols);
          double scale = 1.0 / (1.0 - l.p);
          for (size_t j = 0; j < cur.Size(); ++j)
            mask.data[j] = dropout_rng->Uniform() < l.p ? 0.0 : scale;
          for (size_t j = 0; j < cur.Size(); ++j) cur.data[j] *= mask.data[j];
          if (trace) trace->masks[i] = mask;
        }
        break;
      }
    }
  }
  if (trace) trace->xs.push_back(cur);
  return cur;
}

Matrix ForwardUpTo(const Network& net, const Matrix& x, int n_layers) {
  Require(n_layers >= 0 && n_layers <= net.n_layers(),
          "nn: layer count out of range");
  Network prefix;
  prefix.spec.assign(net.spec.begin(), net.spec.begin() + n_layers);
  prefix.params.assign(net.params.begin(), net.params.begin() + n_layers);
  return n_layers == 0 ? x : Forward(prefix, x);
}

Gradients Backward(const Network& net, const ForwardTrace& trace,
                   const Matrix& out_grad) {
  Require(static_cast<int>(trace.xs.size()) == net.n_layers() + 1,
          "nn: trace does not match network");
  Gradients g;
  g.layers.resize(net.n_layers());
  Matrix grad = out_grad;

  for (int i = net.n_layers() - 1; i >= 0; --i) {
    const LayerSpec& l = net.spec[i];
    const Matrix& x = trace.xs[i];
    const Matrix& y = trace.xs[i + 1];
    switch (l.kind) {
      case LayerKind::kDense: {
        const ParamBlock& p = net.params[i];
        g.layers[i].w = Matrix(p.w.rows, p.w.cols);
        g.layers[i].b.assign(p.b.size(), 0.0);
        Matrix dx(x.rows, x.cols);
        for (int t = 0; t < x.rows; ++t) {
          auto xr = x.Row(t);
          auto gr = grad.Row(t);
          auto dxr = dx.Row(t);
          for (int o = 0; o < p.w.cols; ++o) g.layers[i].b[o] += gr[o];
          for (int in = 0; in < p.w.rows; ++in) {
            auto wr = p.w.Row(in);
            auto dwr = g.layers[i].w.Row(in);
            double acc = 0.0;
            for (int o = 0; o < p.w.cols; ++o) {
              dwr[o] += xr[in] * gr[o];
              acc += wr[o] * gr[o];
            }
            dxr[in] = acc;
          }
        }
        grad = std::move(dx);
        break;
      }
      case LayerKind::kConv1d: {
        const ParamBlock& p = net.params[i];
        const int pad = l.kernel / 2;
        g.layers[i].w = Matrix(p.w.rows, p.w.cols);
        g.layers[i].b.assign(p.b.size(), 0.0);
        Matrix dx(x.rows, x.cols);
        for (int t = 0; t < x.rows; ++t) {
          auto gr = grad.Row(t);
          for (int o = 0; o < l.out_ch; ++o) g.layers[i].b[o] += gr[o];
          for (int kk = 0; kk < l.kernel; ++kk) {
            int xi = t + kk - pad;
            if (xi < 0 || xi >= x.rows) continue;
            auto xr = x.Row(xi);
            auto dxr = dx.Row(xi);
            for (int o = 0; o < l.out_ch; ++o) {
              auto wr = p.w.Row(o);
              auto dwr = g.layers[i].w.Row(o);
              double go = gr[o];
              for (int ic = 0; ic < l.in_ch; ++ic) {
                dwr[ic * l.kernel + kk] += go * xr[ic];
                dxr[ic] += go * wr[ic * l.kernel + kk];
              }
            }
          }
        }
        grad = std::move(dx);
        break;
      }
      case LayerKind::kRelu:
        for (size_t j = 0; j < grad.Size(); ++j)
          if (x.data[j] <= 0.0) grad.data[j] = 0.0;
        break;
      case LayerKind::kSigmoid:
        for (size_t j = 0; j < grad.Size(); ++j)
          grad.data[j] *= y.data[j] * (1.0 - y.data[j]);
        break;
      case LayerKind::kSoftmax:
        for (int t = 0; t < y.rows; ++t) {
          auto yr = y.Row(t);
          auto gr = grad.Row(t);
          double dot = 0.0;
          for (int c = 0; c < y.cols; ++c) dot += yr[c] * gr[c];
          for (int c = 0; c < y.cols; ++c) gr[c] = yr[c] * (gr[c] - dot);
        }
        break;
      case LayerKind::kMeanPoolTime: {
        Matrix dx(x.rows, x.cols);
        for (int t = 0; t < x.rows; ++t)
          for (int c = 0; c < x.cols; ++c) dx(t, c) = grad(0, c) / x.rows;
        grad = std::move(dx);
        break;
      }
      case LayerKind::kDropout:
        if (trace.masks[i].Size() > 0)
          for (size_t j = 0; j < grad.Size(); ++j)
            grad.data[j] *= trace.masks[i].data[j];
        break;
    }
  }
  g.input = std::move(grad);
  return g;
}

LossGrad MseLoss(const Matrix& pred, const Matrix& target) {
  Require(pred.rows == target.rows && pred.cols == target.cols,
          "nn: MSE shape mismatch");
  LossGrad lg;
  lg.grad = Matrix(pred.rows, pred.cols);
  const double n = static_cast<double>(pred.Size());
  for (size_t j = 0; j < pred.Size(); ++j) {
    double d = pred.data[j] - target.data[j];
    lg.value += d * d / n;
    lg.grad.data[j] = 2.0 * d / n;
  }
  return lg;
}

LossGrad CrossEntropyLoss(const Matrix& prob, const Matrix& onehot) {
  Require(prob.rows == onehot.rows && prob.cols == onehot.cols,
          "nn: cross-entropy shape mismatch");
  LossGrad lg;
  lg.grad = Matrix(prob.rows, prob.cols);
  const double n = prob.rows;
  for (size_t j = 0; j < prob.Size(); ++j) {
    double p = prob.data[j] + 1e-12;
    double t = onehot.data[j];
    if (t != 0.0) lg.value -= t * std::log(p) / n;
    lg.grad.data[j] = -t / p / n;
  }
  return lg;
}

LossGrad BceLoss(const Matrix& prob, const Matrix& target,
                 const std::vector<bool>* row_mask) {
  Require(prob.rows == target.rows && prob.cols == target.cols,
          "nn: BCE shape mismatch");
  Require(!row_mask || static_cast<int>(row_mask->size()) == prob.rows,
          "nn: BCE mask length mismatch");
  int active = 0;
  for (int t = 0; t < prob.rows; ++t)
    if (!row_mask || (*row_mask)[t]) ++active;

  LossGrad lg;
  lg.grad = Matrix(prob.rows, prob.cols);
  if (active == 0) return lg;  // all rows masked: zero loss, zero gradient

  const double n = static_cast<double>(active) * prob.cols;
  for (int t = 0; t < prob.rows; ++t) {
    if (row_mask && !(*row_mask)[t]) continue;
    for (int c = 0; c < prob.cols; ++c) {
      double p = std::clamp(prob(t, c), 1e-12, 1.0 - 1e-12);
      double y = target(t, c);
      lg.value -= (y * std::log(p) + (1.0 - y) * std::log(1.0 - p)) / n;
      lg.grad(t, c) = (-y / p + (1.0 - y) / (1.0 - p)) / n;
    }
  }
  return lg;
}

AdamState MakeAdamState(const Network& net, const AdamConfig& cfg) {
  AdamState st;
  st.cfg = cfg;
  st.m.resize(net.params.size());
  st.v.resize(net.params.size());
  for (size_t i = 0; i < net.params.size(); ++i) {
    const ParamBlock& p = net.params[i];
    st.m[i].w = Matrix(p.w.rows, p.w.cols);
    st.v[i].w = Matrix(p.w.rows, p.w.cols);
    st.m[i].b.assign(p.b.size(), 0.0);
    st.v[i].b.assign(p.b.size(), 0.0);
  }
  return st;
}

void AdamUpdate(std::span<double> param, std::span<const double> grad,
                std::span<double> m, std::span<double> v, long long step,
                const AdamConfig& cfg) {
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
  for (size_t j = 0; j < param.size(); ++j) {
    double g = grad[j] + cfg.weight_decay * param[j];
    m[j] = cfg.beta1 * m[j] + (1.0 - cfg.beta1) * g;
    v[j] = cfg.beta2 * v[j] + (1.0 - cfg.beta2) * g * g;
    double mh = m[j] / bc1;
    double vh = v[j] / bc2;
    param[j] -= cfg.lr * mh / (std::sqrt(vh) + cfg.eps);
  }
}

void ApplyAdam(Network* net, const Gradients& grads, AdamState* st) {
  Require(grads.layers.size() == net->params.size(),
          "nn: gradient/parameter layer count mismatch");
  ++st->step;
  for (size_t i = 0; i < net->params.size(); ++i) {
    ParamBlock& p = net->params[i];
    if (p.w.Size() == 0) continue;
    AdamUpdate(p.w.data, grads.layers[i].w.data, st->m[i].w.data,
               st->v[i].w.data, st->step, st->cfg);
    AdamUpdate(p.b, grads.layers[i].b, st->m[i].b, st->v[i].b, st->step,
               st->cfg);
  }
}

double TrainStep(Network* net, AdamState* st, const Matrix& x,
                 const Matrix& target, LossKind loss, Rng* dropout_rng,
                 const std::vector<bool>* mask) {
  ForwardTrace trace;
  Matrix out = Forward(*net, x, dropout_rng, &trace);

  LossGrad lg;
  switch (loss) {
    case LossKind::kMse:
      lg = MseLoss(out, target);
      break;
    case LossKind::kCrossEntropy:
      lg = CrossEntropyLoss(out, target);
      break;
    case LossKind::kBce:
      lg = BceLoss(out, target, mask);
      break;
  }
  Require(std::isfinite(lg.value),
          "nn: non-finite loss at step " + std::to_string(st->step + 1) +
              "; training aborted");

  Gradients grads = Backward(*net, trace, lg.grad);
  ApplyAdam(net, grads, st);
  return lg.value;
}

EmbeddingTable InitEmbeddingTable(int vocab, int dim, uint64_t seed) {
  Require(vocab >= 1 && dim >= 1, "nn: bad embedding table shape");
  EmbeddingTable t;
  t.weights = Matrix(vocab, dim);
  t.m = Matrix(vocab, dim);
  t.v = Matrix(vocab, dim);
  double a = std::sqrt(6.0 / (vocab + dim));
  Rng rng(seed);
  for (double& v : t.weights.data) v = rng.Uniform(-a, a);
  return t;
}

Matrix EmbedRows(const EmbeddingTable& t, const std::vector<int>& ids) {
  Matrix out(static_cast<int>(ids.size()), t.weights.cols);
  for (size_t i = 0; i < ids.size(); ++i) {
    Require(ids[i] >= 0 && ids[i] < t.weights.rows,
            "nn: embedding id " + std::to_string(ids[i]) + " out of range");
    auto src = t.weights.Row(ids[i]);
    auto dst = out.Row(static_cast<int>(i));
    std::copy(src.begin(), src.end(), dst.begin());
  }
  return out;
}

void AdamStepEmbedding(EmbeddingTable* t, const std::vector<int>& ids,
                       const Matrix& grad_rows, const AdamConfig& cfg) {
  Require(static_cast<int>(ids.size()) == grad_rows.rows &&
              grad_rows.cols == t->weights.cols,
          "nn: embedding gradient shape mismatch");
  Matrix dense(t->weights.rows, t->weights.cols);
  for (size_t i = 0; i < ids.size(); ++i) {
    auto g = grad_rows.Row(static_cast<int>(i));
    auto d = dense.Row(ids[i]);
    for (int c = 0; c < dense.cols; ++c) d[c] += g[c];
  }
  ++t->step;
  AdamUpdate(t->weights.data, dense.data, t->m.data, t->v.data, t->step, cfg);
}

void WriteNetwork(ByteWriter* w, const Network& net) {
  w->U32(1);  // layout version
  w->U64(net.seed);
  w->U32(static_cast<uint32_t>(net.spec.size()));
  for (const LayerSpec& l : net.spec) {
    w->U8(static_cast<uint8_t>(l.kind));
    w->I32(l.in_ch);
    w->I32(l.out_ch);
    w->I32(l.kernel);
    w->I32(l.in);
    w->I32(l.out);
    w->F64(l.p);
  }
  for (const ParamBlock& p : net.params) {
    w->I32(p.w.rows);
    w->I32(p.w.cols);
    w->VecF64(p.w.data);
    w->VecF64(p.b);
  }
}

Network ReadNetwork(ByteReader* r) {
  uint32_t version = r->U32();
  Require(version == 1, "nn: unsupported network layout version " +
                            std::to_string(version));
  Network net;
  net.seed = r->U64();
  uint32_t n = r->U32();
  net.spec.resize(n);
  for (uint32_t i = 0; i < n; ++i) {
    LayerSpec& l = net.spec[i];
    l.kind = static_cast<LayerKind>(r->U8());
    l.in_ch = r->I32();
    l.out_ch = r->I32();
    l.kernel = r->I32();
    l.in = r->I32();
    l.out = r->I32();
    l.p = r->F64();
  }
  net.params.resize(n);
  for (uint32_t i = 0; i < n; ++i) {
    ParamBlock& p = net.params[i];
    int rows = r->I32();
    int cols = r->I32();
    p.w.rows = rows;
    p.w.cols = cols;
    p.w.data = r->VecF64();
    Require(p.w.data.size() == static_cast<size_t>(rows) * cols,
            "nn: parameter blob size mismatch");
    p.b = r->VecF64();
  }
  ValidateSpec(net.spec);
  return net;
}

void WriteEmbeddingTable(ByteWriter* w, const EmbeddingTable& t) {
  w->I32(t.weights.rows);
  w->I32(t.weights.cols);
  w->VecF64(t.weights.data);
}

EmbeddingTable ReadEmbeddingTable(ByteReader* r) {
  int rows = r->I32();
  int cols = r->I32();
  Require(rows >= 1 && cols >= 1, "nn: bad embedding table header");
  EmbeddingTable t;
  t.weights.rows = rows;
  t.weights.cols = cols;
  t.weights.data = r->VecF64();
  Require(t.weights.data.size() == static_cast<size_t>(rows) * cols,
          "nn: embedding blob size mismatch");
  t.m = Matrix(rows, cols);
  t.v = Matrix(rows, cols);
  return t;
}

}  // namespace prosoda
