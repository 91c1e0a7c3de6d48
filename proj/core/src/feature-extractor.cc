// core/src/feature-extractor.cc

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

#include "prosoda/feature-extractor.h"

#include <cmath>
#include <complex>
#include <vector>

#include "prosoda/fft.h"

namespace prosoda {

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double MelToHz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

void ValidateFeatureConfig(const FeatureConfig& cfg, int sample_rate) {
  Require(IsPowerOfTwo(cfg.n_fft),
          "features: n_fft must be a power of two, got " +
              std::to_string(cfg.n_fft));
  Require(cfg.n_mels >= 1, "features: n_mels must be at least 1");
  Require(cfg.fmin >= 0.0 && cfg.fmin < cfg.fmax &&
              cfg.fmax <= sample_rate / 2.0,
          "features: need 0 <= fmin < fmax <= sample_rate/2");
  Require(cfg.log_floor > 0.0, "features: log_floor must be positive");
}

Matrix PowerSpectrum(const FrameSeq& frames, int n_fft) {
  Require(IsPowerOfTwo(n_fft), "features: n_fft must be a power of two");
  Require(n_fft >= frames.frame_len,
          "features: n_fft (" + std::to_string(n_fft) +
              ") must be >= frame length (" +
              std::to_string(frames.frame_len) + ")");

  const int n_bins = n_fft / 2 + 1;
  const int flen = frames.frame_len;
  std::vector<double> hann(flen);
  for (int i = 0; i < flen; ++i)
    hann[i] = 0.5 - 0.5 * std::cos(2.0 * M_PI * i / (flen - 1));

  Matrix spec(frames.n_frames(), n_bins);
  std::vector<std::complex<double>> buf(n_fft);
  for (int t = 0; t < frames.n_frames(); ++t) {
    auto row = frames.frames.Row(t);
    for (int i = 0; i < flen; ++i) buf[i] = row[i] * hann[i];
    for (int i = flen; i < n_fft; ++i) buf[i] = 0.0;
    Fft(buf);
    for (int k = 0; k < n_bins; ++k) spec(t, k) = std::norm(buf[k]);
  }
  return spec;
}

Matrix MelFilterbank(const FeatureConfig& cfg, int n_fft, int sample_rate) {
  ValidateFeatureConfig(cfg, sample_rate);
  const int n_bins = n_fft / 2 + 1;
  const double mel_lo = HzToMel(cfg.fmin);
  const double mel_hi = HzToMel(cfg.fmax);

  std::vector<double> hz(cfg.n_mels + 2);
  for (int i = 0; i < cfg.n_mels + 2; ++i)
    hz[i] = MelToHz(mel_lo + (mel_hi - mel_lo) * i / (cfg.n_mels + 1));

  Matrix fb(cfg.n_mels, n_bins);
  for (int m = 0; m < cfg.n_mels; ++m) {
    double f0 = hz[m], f1 = hz[m + 1], f2 = hz[m + 2];
    double sum = 0.0;
    for (int k = 0; k < n_bins; ++k) {
      double f = static_cast<double>(k) * sample_rate / n_fft;
      double w = 0.0;
      if (f > f0 && f < f1) w = (f - f0) / (f1 - f0);
      else if (f >= f1 && f < f2) w = (f2 - f) / (f2 - f1);
      fb(m, k) = w;
      sum += w;
    }
    Require(sum > 0.0,
            "features: mel filter " + std::to_string(m) +
                " covers no FFT bin; increase n_fft or reduce n_mels");
  }
  return fb;
}

FeatureSeq LogMel(const Matrix& spectrum, const FeatureConfig& cfg,
                  int sample_rate) {
  const int n_fft = (spectrum.cols - 1) * 2;
  Matrix fb = MelFilterbank(cfg, n_fft, sample_rate);

  FeatureSeq out;
  out.vectors = Matrix(spectrum.rows, cfg.n_mels);
  for (int t = 0; t < spectrum.rows; ++t) {
    auto srow = spectrum.Row(t);
    for (int m = 0; m < cfg.n_mels; ++m) {
      auto frow = fb.Row(m);
      double acc = 0.0;
      for (int k = 0; k < spectrum.cols; ++k) acc += frow[k] * srow[k];
      out.vectors(t, m) = std::log(acc + cfg.log_floor);
    }
  }
  return out;
}

FeatureSeq ExtractFeatures(const Waveform& w, const FeatureConfig& cfg) {
  ValidateFeatureConfig(cfg, w.sample_rate);
  FrameSeq frames = MakeFrames(w, kDefaultFrameLen, kDefaultHop);
  Matrix spec = PowerSpectrum(frames, cfg.n_fft);
  return LogMel(spec, cfg, w.sample_rate);
}

}  // namespace prosoda
