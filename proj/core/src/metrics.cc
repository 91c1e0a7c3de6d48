// core/src/metrics.cc

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

#include "prosoda/metrics.h"

#include <cmath>
#include <cstdio>
#include <map>

#include "prosoda/serialize.h"

namespace prosoda {

CccResult Ccc(std::span<const double> x, std::span<const double> y) {
  Require(x.size() == y.size(),
          "metrics: CCC inputs differ in length (" +
              std::to_string(x.size()) + " vs " + std::to_string(y.size()) +
              ")");
  Require(x.size() >= 2, "metrics: CCC needs at least 2 paired values");
  const double n = static_cast<double>(x.size());

  CccResult r;
  for (size_t i = 0; i < x.size(); ++i) {
    r.mean_x += x[i];
    r.mean_y += y[i];
  }
  r.mean_x /= n;
  r.mean_y /= n;

  double cov = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    double dx = x[i] - r.mean_x;
    double dy = y[i] - r.mean_y;
    r.var_x += dx * dx;
    r.var_y += dy * dy;
    cov += dx * dy;
  }
  r.var_x /= n;
  r.var_y /= n;
  cov /= n;

  Require(r.var_x > 0.0 || r.var_y > 0.0,
          "metrics: CCC undefined; both sequences are constant");
  r.pearson =
      (r.var_x > 0.0 && r.var_y > 0.0) ? cov / std::sqrt(r.var_x * r.var_y)
                                       : 0.0;
  double dm = r.mean_x - r.mean_y;
  r.ccc = 2.0 * cov / (r.var_x + r.var_y + dm * dm);
  return r;
}

CccResult CccVoicedPairs(const std::vector<double>& f0_ref,
                         const std::vector<bool>& voiced_ref,
                         const std::vector<double>& f0_pred,
                         const std::vector<bool>& voiced_pred) {
  Require(f0_ref.size() == voiced_ref.size() &&
              f0_pred.size() == voiced_pred.size() &&
              f0_ref.size() == f0_pred.size(),
          "metrics: paired tracks must have equal length");
  std::vector<double> x, y;
  for (size_t i = 0; i < f0_ref.size(); ++i)
    if (voiced_ref[i] && voiced_pred[i]) {
      x.push_back(f0_ref[i]);
      y.push_back(f0_pred[i]);
    }
  Require(x.size() >= 2,
          "metrics: fewer than 2 frames voiced in both tracks");
  return Ccc(x, y);
}

namespace {

// Entropies in bits; ratios are scale-free so the base cancels, and powers
// of two come out exact for the hand-checkable cases.
double Entropy(const std::map<int, int>& counts, double n) {
  double h = 0.0;
  for (const auto& [label, c] : counts)
    if (c > 0) h -= (c / n) * std::log2(c / n);
  return h;
}

}  // namespace

VMeasureResult VMeasure(const std::vector<int>& true_labels,
                        const std::vector<int>& clusters) {
  Require(!true_labels.empty(), "metrics: empty labeling");
  Require(true_labels.size() == clusters.size(),
          "metrics: label/cluster length mismatch");
  const double n = static_cast<double>(true_labels.size());

  std::map<int, int> by_class, by_cluster;
  std::map<std::pair<int, int>, int> joint;
  for (size_t i = 0; i < true_labels.size(); ++i) {
    ++by_class[true_labels[i]];
    ++by_cluster[clusters[i]];
    ++joint[{true_labels[i], clusters[i]}];
  }

  double h_c = Entropy(by_class, n);
  double h_k = Entropy(by_cluster, n);
  double h_c_given_k = 0.0, h_k_given_c = 0.0;
  for (const auto& [ck, m] : joint) {
    double p = m / n;
    h_c_given_k -= p * std::log2(static_cast<double>(m) /
                                 by_cluster.at(ck.second));
    h_k_given_c -= p * std::log2(static_cast<double>(m) /
                                 by_class.at(ck.first));
  }

  VMeasureResult r;
  r.homogeneity = h_c == 0.0 ? 1.0 : 1.0 - h_c_given_k / h_c;
  r.completeness = h_k == 0.0 ? 1.0 : 1.0 - h_k_given_c / h_k;
  r.v = (r.homogeneity + r.completeness) == 0.0
            ? 0.0
            : 2.0 * r.homogeneity * r.completeness /
                  (r.homogeneity + r.completeness);
  return r;
}

ConfusionResult ConfusionAndAccuracy(const std::vector<int>& true_labels,
                                     const std::vector<int>& predicted) {
  Require(!true_labels.empty(), "metrics: empty label sequence");
  Require(true_labels.size() == predicted.size(),
          "metrics: label/prediction length mismatch");
  ConfusionResult r;
  int correct = 0;
  for (size_t i = 0; i < true_labels.size(); ++i) {
    int t = true_labels[i], p = predicted[i];
    Require(t >= 0 && t < kNumEmotions && p >= 0 && p < kNumEmotions,
            "metrics: label outside 0..3");
    ++r.matrix[t][p];
    if (t == p) ++correct;
  }
  r.accuracy = static_cast<double>(correct) / true_labels.size();
  return r;
}

void ExportEmbeddings(const std::vector<EmbeddingRecord>& records,
                      const std::string& path) {
  Require(!records.empty(), "metrics: nothing to export");
  std::string out;
  for (int i = 0; i < kEmotionDim; ++i) {
    out += "e" + std::to_string(i);
    out += ',';
  }
  out += "label,language\n";

  char buf[40];
  for (const EmbeddingRecord& rec : records) {
    Require(static_cast<int>(rec.embedding.size()) == kEmotionDim,
            "metrics: embedding must have 96 dims");
    Require(rec.label >= 0 && rec.label < kNumEmotions,
            "metrics: label outside 0..3");
    for (double v : rec.embedding) {
      std::snprintf(buf, sizeof buf, "%.12g", v);
      out += buf;
      out += ',';
    }
    out += kEmotionNames[rec.label];
    out += ',';
    out += rec.language;
    out += '\n';
  }
  WriteFileBytes(path, out);
}

}  // namespace prosoda
