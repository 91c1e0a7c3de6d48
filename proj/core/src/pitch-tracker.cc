// core/src/pitch-tracker.cc

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

#include "prosoda/pitch-tracker.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace prosoda {

double TransitionCost(double f_prev, double f_cur, double lambda,
                      double octave_penalty) {
  double dlog = std::abs(std::log(f_cur) - std::log(f_prev));
  double cost = lambda * dlog;
  // The flat penalty fires well below a full octave.  Voiced speech moves
  // a few percent per frame, while halving errors that climb in two
  // sub-octave steps would otherwise pay only the linear term and undercut
  // a single penalized jump.
  if (dlog >= 0.4 * std::log(2.0)) cost += octave_penalty;
  return cost;
}

std::vector<double> FrameNccf(const std::vector<double>& x, int start,
                              int corr_window, int tau_min, int tau_max) {
  Require(corr_window >= 1 && tau_min >= 1 && tau_max >= tau_min,
          "pitch: bad NCCF window or lag range");
  const int n = static_cast<int>(x.size());
  const int span = corr_window + tau_max;

  std::vector<double> seg(span, 0.0);
  double mean = 0.0;
  int avail = std::min(span, std::max(0, n - start));
  for (int i = 0; i < avail; ++i) seg[i] = x[start + i];
  for (int i = 0; i < avail; ++i) mean += seg[i];
  if (avail > 0) mean /= avail;
  for (int i = 0; i < avail; ++i) seg[i] -= mean;

  double e0 = 0.0;
  for (int i = 0; i < corr_window; ++i) e0 += seg[i] * seg[i];
  // Energy of the shifted window, advanced one sample per lag.
  double et = 0.0;
  for (int i = tau_min; i < tau_min + corr_window; ++i) et += seg[i] * seg[i];

  std::vector<double> out(tau_max - tau_min + 1, 0.0);
  for (int tau = tau_min; tau <= tau_max; ++tau) {
    if (tau > tau_min) {
      et -= seg[tau - 1] * seg[tau - 1];
      et += seg[tau + corr_window - 1] * seg[tau + corr_window - 1];
    }
    double denom = e0 * et;
    if (denom > 0.0) {
      double num = 0.0;
      for (int i = 0; i < corr_window; ++i) num += seg[i] * seg[i + tau];
      out[tau - tau_min] = num / std::sqrt(denom);
    }
  }
  return out;
}

std::vector<int> BestPitchPath(
    const std::vector<std::vector<PitchCandidate>>& lattice, double lambda,
    double octave_penalty) {
  const int n = static_cast<int>(lattice.size());
  Require(n > 0, "pitch: empty candidate lattice");
  for (const auto& frame : lattice)
    Require(!frame.empty(), "pitch: frame with no candidates");

  const double kInf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> cost(n);
  std::vector<std::vector<int>> back(n);

  cost[0].resize(lattice[0].size());
  back[0].assign(lattice[0].size(), -1);
  for (size_t k = 0; k < lattice[0].size(); ++k)
    cost[0][k] = 1.0 - lattice[0][k].nccf + lattice[0][k].bias;

  for (int t = 1; t < n; ++t) {
    cost[t].assign(lattice[t].size(), kInf);
    back[t].assign(lattice[t].size(), -1);
    for (size_t k = 0; k < lattice[t].size(); ++k) {
      double local = 1.0 - lattice[t][k].nccf + lattice[t][k].bias;
      for (size_t j = 0; j < lattice[t - 1].size(); ++j) {
        double c = cost[t - 1][j] + local +
                   TransitionCost(lattice[t - 1][j].freq, lattice[t][k].freq,
                                  lambda, octave_penalty);
        if (c < cost[t][k]) {
          cost[t][k] = c;
          back[t][k] = static_cast<int>(j);
        }
      }
    }
  }

  int best = 0;
  for (size_t k = 1; k < cost[n - 1].size(); ++k)
    if (cost[n - 1][k] < cost[n - 1][best]) best = static_cast<int>(k);

  std::vector<int> path(n);
  path[n - 1] = best;
  for (int t = n - 1; t > 0; --t) path[t - 1] = back[t][path[t]];
  return path;
}

namespace {

// Preference for the shortest lag among near-equal peaks.  On clean
// periodic frames every period multiple scores within a few thousandths
// of the true lag, so the correlation alone leaves the octave choice to
// noise; the bias must outweigh that wiggle while staying far below the
// gap between a true peak and a spurious one.
constexpr double kLagBias = 0.05;

// Local maxima of the NCCF curve, refined by parabolic interpolation and
// kept to the cheapest cfg.max_candidates.  Truncation ranks by the same
// local cost the path search minimizes, bias included.  Ranking on raw
// correlation instead can evict the true lag, and once the short lag is
// gone from the lattice no later penalty can recover it.
std::vector<PitchCandidate> PickCandidates(const std::vector<double>& nccf,
                                           int tau_min, int sample_rate,
                                           const PitchConfig& cfg) {
  const int m = static_cast<int>(nccf.size());
  std::vector<int> peaks;
  for (int i = 1; i + 1 < m; ++i)
    if (nccf[i] > nccf[i - 1] && nccf[i] >= nccf[i + 1]) peaks.push_back(i);
  if (peaks.empty()) {
    int arg = 0;
    for (int i = 1; i < m; ++i)
      if (nccf[i] > nccf[arg]) arg = i;
    peaks.push_back(arg);
  }

  const double denom = tau_min + m - 1;
  std::sort(peaks.begin(), peaks.end(), [&](int a, int b) {
    return nccf[a] - kLagBias * (tau_min + a) / denom >
           nccf[b] - kLagBias * (tau_min + b) / denom;
  });
  if (static_cast<int>(peaks.size()) > cfg.max_candidates)
    peaks.resize(cfg.max_candidates);

  const int tau_max = tau_min + m - 1;
  std::vector<PitchCandidate> cands;
  for (int i : peaks) {
    double tau = tau_min + i;
    double value = nccf[i];
    if (i > 0 && i + 1 < m) {
      double a = nccf[i - 1], b = nccf[i], c = nccf[i + 1];
      double denom = a - 2.0 * b + c;
      if (denom < 0.0) {
        double delta = std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
        tau += delta;
        value = b - 0.25 * (a - c) * delta;
      }
    }
    PitchCandidate cand;
    cand.freq = std::clamp(sample_rate / tau, cfg.f_min, cfg.f_max);
    cand.nccf = std::clamp(value, -1.0, 1.0);
    cand.bias = kLagBias * tau / tau_max;
    cands.push_back(cand);
  }
  return cands;
}

}  // namespace

PitchTrack EstimateF0(const Waveform& w, const PitchConfig& cfg) {
  Require(!w.samples.empty(), "pitch: empty waveform");
  Require(cfg.f_min >= 50.0 && cfg.f_min < cfg.f_max && cfg.f_max <= 600.0,
          "pitch: invalid F0 range [" + std::to_string(cfg.f_min) + ", " +
              std::to_string(cfg.f_max) + "]; need 50 <= f_min < f_max <= 600");

  const int sr = w.sample_rate;
  const int tau_min = std::max(1, static_cast<int>(sr / cfg.f_max));
  const int tau_max = static_cast<int>(sr / cfg.f_min);
  const int n_frames =
      NumFrames(static_cast<int>(w.samples.size()), kDefaultFrameLen,
                kDefaultHop);

  PitchTrack track;
  track.f0_hz.assign(n_frames, 0.0);
  track.voiced.assign(n_frames, false);
  if (n_frames == 0) return track;

  std::vector<std::vector<PitchCandidate>> cands(n_frames);
  for (int t = 0; t < n_frames; ++t) {
    std::vector<double> nccf = FrameNccf(w.samples, t * kDefaultHop,
                                         cfg.corr_window, tau_min, tau_max);
    cands[t] = PickCandidates(nccf, tau_min, sr, cfg);
    double best = 0.0;
    for (const auto& c : cands[t]) best = std::max(best, c.nccf);
    track.voiced[t] = best >= cfg.voicing_threshold;
  }

  // The path is optimized independently over each maximal voiced run;
  // unvoiced frames carry no pitch and do not link their neighbors.
  int t = 0;
  while (t < n_frames) {
    if (!track.voiced[t]) {
      ++t;
      continue;
    }
    int end = t;
    while (end < n_frames && track.voiced[end]) ++end;
    std::vector<std::vector<PitchCandidate>> run(cands.begin() + t,
                                                 cands.begin() + end);
    std::vector<int> path = BestPitchPath(run, cfg.lambda, cfg.octave_penalty);
    for (int i = t; i < end; ++i) track.f0_hz[i] = run[i - t][path[i - t]].freq;
    t = end;
  }
  return track;
}

}  // namespace prosoda
