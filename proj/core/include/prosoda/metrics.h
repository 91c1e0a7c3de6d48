// core/include/prosoda/metrics.h

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
#include <span>
#include <string>
#include <vector>

#include "prosoda/emotion-encoder.h"

namespace prosoda {

struct CccResult {
  double mean_x = 0.0, mean_y = 0.0;
  double var_x = 0.0, var_y = 0.0;  // population variances
  double pearson = 0.0;             // 0 when either sequence is constant
  double ccc = 0.0;
};

// Concordance correlation: 2*cov / (var_x + var_y + (mean_x - mean_y)^2),
// population moments.  Errors when both sequences are constant.
CccResult Ccc(std::span<const double> x, std::span<const double> y);

// Index-paired CCC over equal-length tracks, dropping frames unvoiced in
// either stream.  Length alignment happens upstream.
CccResult CccVoicedPairs(const std::vector<double>& f0_ref,
                         const std::vector<bool>& voiced_ref,
                         const std::vector<double>& f0_pred,
                         const std::vector<bool>& voiced_pred);

struct VMeasureResult {
  double homogeneity = 0.0;
  double completeness = 0.0;
  double v = 0.0;
};

// Entropy-based homogeneity/completeness/V.  Degenerate 0/0 ratios follow
// the 1.0 convention (a single-class partition is trivially homogeneous).
VMeasureResult VMeasure(const std::vector<int>& true_labels,
                        const std::vector<int>& clusters);

struct ConfusionResult {
  std::array<std::array<int, kNumEmotions>, kNumEmotions> matrix{};
  double accuracy = 0.0;
};

// Rows are true labels, columns predictions, accuracy = trace/total.
ConfusionResult ConfusionAndAccuracy(const std::vector<int>& true_labels,
                                     const std::vector<int>& predicted);

struct EmbeddingRecord {
  std::vector<double> embedding;  // 96 values
  int label = 0;
  std::string language;
};

// CSV with header: e0..e95,label,language; 12 significant digits.
void ExportEmbeddings(const std::vector<EmbeddingRecord>& records,
                      const std::string& path);

}  // namespace prosoda
