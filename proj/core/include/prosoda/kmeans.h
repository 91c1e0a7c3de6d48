// core/include/prosoda/kmeans.h

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
#include "prosoda/feature-extractor.h"

namespace prosoda {

struct Codebook {
  Matrix centroids;  // K x feature_dim
  int k = 0;
  int feature_dim = 0;
  uint64_t seed = 0;
};

struct KmeansOptions {
  double tol = 1e-6;  // stop when the largest centroid shift drops below this
  int max_iters = 300;
};

// Lloyd iterations from the given starting centroids.  Empty clusters are
// re-seeded to the point currently farthest from its assigned centroid.
// When inertia_log is non-null it receives the post-assignment inertia of
// every iteration.
Matrix RunLloyd(const Matrix& points, Matrix centroids,
                const KmeansOptions& opts = {},
                std::vector<double>* inertia_log = nullptr);

// Sum of squared distances from each point to its nearest centroid.
double Inertia(const Matrix& points, const Matrix& centroids);

// k-means++ initialization followed by Lloyd, deterministic given seed.
Codebook FitKmeans(const std::vector<FeatureSeq>& features, int k,
                   uint64_t seed, const KmeansOptions& opts = {});

// Nearest-centroid index per frame; ties go to the lowest index.
std::vector<int> AssignUnits(const FeatureSeq& f, const Codebook& c);

}  // namespace prosoda
