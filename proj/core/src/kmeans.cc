// core/src/kmeans.cc

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

#include "prosoda/kmeans.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace prosoda {

namespace {

double Dist2(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

int Nearest(std::span<const double> pt, const Matrix& centroids,
            double* best_d2) {
  int arg = 0;
  double best = Dist2(pt, centroids.Row(0));
  for (int c = 1; c < centroids.rows; ++c) {
    double d = Dist2(pt, centroids.Row(c));
    if (d < best) {
      best = d;
      arg = c;
    }
  }
  if (best_d2) *best_d2 = best;
  return arg;
}

}  // namespace

double Inertia(const Matrix& points, const Matrix& centroids) {
  double total = 0.0;
  for (int i = 0; i < points.rows; ++i) {
    double d2 = 0.0;
    Nearest(points.Row(i), centroids, &d2);
    total += d2;
  }
  return total;
}

Matrix RunLloyd(const Matrix& points, Matrix centroids,
                const KmeansOptions& opts, std::vector<double>* inertia_log) {
  Require(points.rows >= 1 && centroids.rows >= 1,
          "kmeans: empty points or centroids");
  Require(points.cols == centroids.cols,
          "kmeans: point dim " + std::to_string(points.cols) +
              " != centroid dim " + std::to_string(centroids.cols));
  const int n = points.rows, k = centroids.rows, dim = points.cols;

  std::vector<int> assign(n);
  std::vector<double> dist2(n);
  for (int iter = 0; iter < opts.max_iters; ++iter) {
    double inertia = 0.0;
    for (int i = 0; i < n; ++i) {
      assign[i] = Nearest(points.Row(i), centroids, &dist2[i]);
      inertia += dist2[i];
    }
    if (inertia_log) inertia_log->push_back(inertia);

    Matrix sums(k, dim);
    std::vector<int> counts(k, 0);
    for (int i = 0; i < n; ++i) {
      auto row = points.Row(i);
      for (int d = 0; d < dim; ++d) sums(assign[i], d) += row[d];
      ++counts[assign[i]];
    }

    // Re-seed empties from the worst-fit points, one point per cluster.
    std::vector<bool> taken(n, false);
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      int far = -1;
      for (int i = 0; i < n; ++i)
        if (!taken[i] && (far < 0 || dist2[i] > dist2[far])) far = i;
      Require(far >= 0, "kmeans: more empty clusters than points");
      taken[far] = true;
      auto row = points.Row(far);
      int old = assign[far];
      if (counts[old] > 0) {
        for (int d = 0; d < dim; ++d) sums(old, d) -= row[d];
        --counts[old];
      }
      for (int d = 0; d < dim; ++d) sums(c, d) = row[d];
      counts[c] = 1;
    }

    double shift2 = 0.0;
    for (int c = 0; c < k; ++c) {
      double s = 0.0;
      for (int d = 0; d < dim; ++d) {
        double next = sums(c, d) / counts[c];
        double delta = next - centroids(c, d);
        s += delta * delta;
        centroids(c, d) = next;
      }
      shift2 = std::max(shift2, s);
    }
    if (std::sqrt(shift2) < opts.tol) break;
  }
  return centroids;
}

Codebook FitKmeans(const std::vector<FeatureSeq>& features, int k,
                   uint64_t seed, const KmeansOptions& opts) {
  Require(k >= 2, "kmeans: need K >= 2");
  Require(!features.empty(), "kmeans: no feature sequences");
  const int dim = features[0].dim();
  int n = 0;
  for (const auto& f : features) {
    Require(f.dim() == dim, "kmeans: inconsistent feature dims across corpus");
    n += f.n_frames();
  }
  Require(n >= k, "kmeans: corpus has " + std::to_string(n) +
                      " frames but K = " + std::to_string(k));

  Matrix points(n, dim);
  int r = 0;
  for (const auto& f : features)
    for (int t = 0; t < f.n_frames(); ++t, ++r) {
      auto row = f.vectors.Row(t);
      for (int d = 0; d < dim; ++d) points(r, d) = row[d];
    }

  // k-means++ seeding: D^2-weighted draws after a uniform first pick.
  Rng rng(seed);
  Matrix centroids(k, dim);
  std::vector<double> d2(n);
  int first = rng.UniformInt(n);
  for (int d = 0; d < dim; ++d) centroids(0, d) = points(first, d);
  for (int i = 0; i < n; ++i) d2[i] = Dist2(points.Row(i), centroids.Row(0));

  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += d2[i];
    int pick;
    if (total > 0.0) {
      double u = rng.Uniform() * total;
      double acc = 0.0;
      pick = n - 1;
      for (int i = 0; i < n; ++i) {
        acc += d2[i];
        if (u < acc) {
          pick = i;
          break;
        }
      }
    } else {
      pick = rng.UniformInt(n);
    }
    for (int d = 0; d < dim; ++d) centroids(c, d) = points(pick, d);
    for (int i = 0; i < n; ++i)
      d2[i] = std::min(d2[i], Dist2(points.Row(i), centroids.Row(c)));
  }

  Codebook cb;
  cb.centroids = RunLloyd(points, std::move(centroids), opts);
  cb.k = k;
  cb.feature_dim = dim;
  cb.seed = seed;

  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) {
      bool same = true;
      for (int d = 0; d < dim && same; ++d)
        same = cb.centroids(a, d) == cb.centroids(b, d);
      Require(!same,
              "kmeans: duplicate centroids " + std::to_string(a) + " and " +
                  std::to_string(b) +
                  "; corpus has fewer than K distinct frames");
    }
  return cb;
}

std::vector<int> AssignUnits(const FeatureSeq& f, const Codebook& c) {
  Require(f.dim() == c.feature_dim,
          "kmeans: feature dim " + std::to_string(f.dim()) +
              " != codebook dim " + std::to_string(c.feature_dim));
  std::vector<int> units(f.n_frames());
  for (int t = 0; t < f.n_frames(); ++t)
    units[t] = Nearest(f.vectors.Row(t), c.centroids, nullptr);
  return units;
}

}  // namespace prosoda
