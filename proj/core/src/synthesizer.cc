// core/src/synthesizer.cc

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

#include "prosoda/synthesizer.h"

#include <algorithm>
#include <cmath>
#include <complex>

#include "prosoda/emotion-encoder.h"
#include "prosoda/fft.h"
#include "prosoda/units.h"

namespace prosoda {

PitchTrack ResampleF0(const PitchTrack& f0, int target_len) {
  Require(target_len >= 1, "synth: target length must be positive");
  Require(f0.n_frames() >= 1, "synth: empty F0 track");
  const int lf = f0.n_frames();

  // Bridge unvoiced gaps so the interpolant is defined everywhere; the
  // bridged values only matter where the output lands voiced.
  std::vector<double> filled = f0.f0_hz;
  int first = -1, last = -1;
  for (int i = 0; i < lf; ++i)
    if (f0.voiced[i]) {
      if (first < 0) first = i;
      last = i;
    }
  if (first >= 0) {
    for (int i = 0; i < first; ++i) filled[i] = filled[first];
    for (int i = last + 1; i < lf; ++i) filled[i] = filled[last];
    int prev = first;
    for (int i = first + 1; i <= last; ++i) {
      if (!f0.voiced[i]) continue;
      for (int j = prev + 1; j < i; ++j) {
        double w = static_cast<double>(j - prev) / (i - prev);
        filled[j] = (1.0 - w) * filled[prev] + w * filled[i];
      }
      prev = i;
    }
  }

  PitchTrack out;
  out.hop_seconds = f0.hop_seconds;
  out.f0_hz.assign(target_len, 0.0);
  out.voiced.assign(target_len, false);
  for (int i = 0; i < target_len; ++i) {
    double p = (i + 0.5) * lf / target_len - 0.5;
    p = std::clamp(p, 0.0, static_cast<double>(lf - 1));
    int lo = static_cast<int>(p);
    int hi = std::min(lo + 1, lf - 1);
    double w = p - lo;
    int nearest = w < 0.5 ? lo : hi;
    if (f0.voiced[nearest]) {
      out.voiced[i] = true;
      out.f0_hz[i] = (1.0 - w) * filled[lo] + w * filled[hi];
    }
  }
  return out;
}

Matrix AlignConditioning(const std::vector<int>& units, const PitchTrack& f0,
                         const std::vector<double>& emotion, int speaker,
                         int n_speakers) {
  Require(!units.empty(), "synth: empty unit sequence");
  Require(f0.n_frames() >= 1, "synth: empty F0 track");
  Require(speaker >= 0 && speaker < n_speakers,
          "synth: speaker index " + std::to_string(speaker) +
              " outside table of " + std::to_string(n_speakers));
  const int n = static_cast<int>(units.size());
  const int e = static_cast<int>(emotion.size());

  PitchTrack aligned =
      f0.n_frames() == n ? f0 : ResampleF0(f0, n);

  Matrix cond(n, 1 + e + n_speakers);
  for (int t = 0; t < n; ++t) {
    auto row = cond.Row(t);
    row[0] = aligned.f0_hz[t];
    std::copy(emotion.begin(), emotion.end(), row.begin() + 1);
    row[1 + e + speaker] = 1.0;
  }
  return cond;
}

namespace {

// Amplitude envelope over n_fft/2+1 linear bins, interpolated in log power
// between the mel band centers of the feature front end.
std::vector<double> CentroidEnvelope(std::span<const double> logmel,
                                     const FeatureConfig& fc, int sample_rate,
                                     int n_fft) {
  const int n_mels = static_cast<int>(logmel.size());
  const double mel_lo = HzToMel(fc.fmin);
  const double mel_hi = HzToMel(fc.fmax);
  std::vector<double> centers(n_mels);
  for (int m = 0; m < n_mels; ++m)
    centers[m] = MelToHz(mel_lo + (mel_hi - mel_lo) * (m + 1) / (n_mels + 1));

  const int n_bins = n_fft / 2 + 1;
  std::vector<double> env(n_bins);
  int m = 0;
  for (int k = 0; k < n_bins; ++k) {
    double f = static_cast<double>(k) * sample_rate / n_fft;
    double logp;
    if (f <= centers[0]) {
      logp = logmel[0];
    } else if (f >= centers[n_mels - 1]) {
      logp = logmel[n_mels - 1];
    } else {
      while (centers[m + 1] < f) ++m;
      double w = (f - centers[m]) / (centers[m + 1] - centers[m]);
      logp = (1.0 - w) * logmel[m] + w * logmel[m + 1];
    }
    env[k] = std::sqrt(std::exp(logp));
  }
  return env;
}

}  // namespace

Waveform Synthesize(const std::vector<int>& units, const PitchTrack& f0,
                    const std::vector<double>& emotion, int speaker,
                    const Codebook& codebook, const SynthConfig& cfg) {
  Require(!units.empty(), "synth: empty unit sequence");
  Require(cfg.win == 2 * cfg.hop, "synth: window must be twice the hop");
  Require(IsPowerOfTwo(cfg.n_fft) && cfg.n_fft >= cfg.win,
          "synth: n_fft must be a power of two >= the window");
  Require(speaker >= 0, "synth: speaker index must be non-negative");
  Require(emotion.empty() || static_cast<int>(emotion.size()) == kEmotionDim,
          "synth: emotion embedding must be empty or 96-dim");
  for (int u : units)
    Require(u >= 0 && u < codebook.k,
            "synth: unit " + std::to_string(u) + " outside codebook of size " +
                std::to_string(codebook.k));

  const int n = static_cast<int>(units.size());
  PitchTrack aligned = f0.n_frames() == n ? f0 : ResampleF0(f0, n);

  // Excitation stream: glottal pulses at the commanded period through voiced
  // frames, seeded Gaussian noise elsewhere.  The phase accumulator runs
  // across frame boundaries so contours stay continuous.  Pulses land
  // between samples and are laid down as a windowed sinc at the true
  // crossing instant; snapping them to the grid instead ties the pulse
  // shape to the sub-sample position, and with a non-integer period that
  // shape repeats only every second pulse, which re-tracks an octave down.
  // A trace of period jitter keeps the train from being a perfect comb.
  // Without it every period multiple correlates equally and the re-tracked
  // octave is decided by whichever lag a noisy onset frame happens to
  // anchor; with it the correlation decays across multiples and the true
  // period wins everywhere.
  const int total = n * cfg.hop + (cfg.win - cfg.hop);
  std::vector<double> exc(total, 0.0);
  Rng noise(cfg.noise_seed);
  double phase = 1.0;  // emit a pulse at the first voiced sample
  double jmul = 1.0;
  for (int pos = 0; pos < total; ++pos) {
    int frame = std::min(pos / cfg.hop, n - 1);
    double g = noise.Gaussian();
    if (aligned.voiced[frame] && aligned.f0_hz[frame] > 0.0) {
      double inc = aligned.f0_hz[frame] * jmul / cfg.sample_rate;
      phase += inc;
      if (phase >= 1.0) {
        phase -= 1.0;
        double d = phase / inc;
        jmul = std::clamp(1.0 + 0.005 * noise.Gaussian(), 0.9, 1.1);
        double h[8], hsum = 0.0;
        for (int m = 0; m < 8; ++m) {
          double u = m + d - 3.5;
          double s = u == 0.0 ? 1.0 : std::sin(M_PI * u) / (M_PI * u);
          double w = 0.5 - 0.5 * std::cos(2.0 * M_PI * (m + d) / 8.0);
          h[m] = s * w;
          hsum += h[m];
        }
        for (int m = 0; m < 8; ++m) {
          int q = pos + m;
          if (q < total) exc[q] += h[m] / hsum;
        }
      }
    } else {
      exc[pos] += cfg.noise_gain * g;
      phase = 1.0;
    }
  }

  // Hann OLA with zero-phase spectral shaping per frame.  Each windowed
  // segment sits centered in the FFT buffer so the envelope's impulse
  // response cannot wrap around the ends.
  std::vector<double> hann(cfg.win);
  for (int i = 0; i < cfg.win; ++i)
    hann[i] = 0.5 - 0.5 * std::cos(2.0 * M_PI * i / cfg.win);

  const int offset = (cfg.n_fft - cfg.win) / 2;
  std::vector<double> out(total, 0.0);
  std::vector<double> wsum(total, 0.0);
  std::vector<std::complex<double>> buf(cfg.n_fft);
  const int n_bins = cfg.n_fft / 2 + 1;

  for (int t = 0; t < n; ++t) {
    std::vector<double> env = CentroidEnvelope(
        codebook.centroids.Row(units[t]), cfg.features, cfg.sample_rate,
        cfg.n_fft);

    std::fill(buf.begin(), buf.end(), std::complex<double>(0.0, 0.0));
    const int start = t * cfg.hop;
    for (int i = 0; i < cfg.win; ++i)
      buf[offset + i] = exc[start + i] * hann[i];

    Fft(buf);
    buf[0] = 0.0;  // no DC; pulse trains would otherwise accumulate offset
    for (int k = 1; k < n_bins - 1; ++k) {
      buf[k] *= env[k];
      buf[cfg.n_fft - k] *= env[k];
    }
    buf[n_bins - 1] *= env[n_bins - 1];
    Fft(buf, /*inverse=*/true);

    for (int i = 0; i < cfg.win; ++i) {
      out[start + i] += buf[offset + i].real();
      wsum[start + i] += hann[i];
    }
  }

  Waveform w;
  w.sample_rate = cfg.sample_rate;
  w.samples.assign(out.begin(), out.begin() + n * cfg.hop);
  for (int i = 0; i < n * cfg.hop; ++i)
    if (wsum[i] > 1e-3) w.samples[i] /= wsum[i];

  double peak = 0.0;
  for (double v : w.samples) peak = std::max(peak, std::abs(v));
  if (peak > 0.0)
    for (double& v : w.samples) v *= cfg.peak_norm / peak;
  // Post-normalization broadband floor, mirroring the recording noise any
  // analysis corpus carries.  Silent stretches must not leave bare
  // overlap-add ringing, which re-tracks as a formant-frequency pitch.
  for (double& v : w.samples) v += cfg.noise_floor * noise.Gaussian();
  return w;
}

Waveform Resynthesize(const Waveform& w, ResynthMode mode, const Bundle& b,
                      int speaker_id,
                      const std::vector<double>* donor_embedding) {
  FeatureSeq features = ExtractFeatures(w, b.features);
  Require(features.n_frames() > 0, "synth: input too short to analyze");
  std::vector<int> units = AssignUnits(features, b.codebook);
  PitchTrack f0 = EstimateF0(w, b.tracker);

  SynthConfig cfg;
  cfg.features = b.features;

  if (mode == ResynthMode::kOracle) {
    // Ground-truth durations are the unit sequence itself; ground-truth F0
    // is the tracker output on the input.
    std::vector<double> emb = Embed(b.emotion, features);
    return Synthesize(units, f0, emb, speaker_id, b.codebook, cfg);
  }

  std::vector<double> emb(kEmotionDim, 0.0);
  if (mode == ResynthMode::kProposed)
    emb = donor_embedding ? *donor_embedding : Embed(b.emotion, features);

  const SpeakerStats& stats = b.SpeakerById(speaker_id);
  ReducedUnits reduced = Reduce(units);
  std::vector<int> durations =
      PredictDurations(b.duration, reduced.units, emb);
  ReducedUnits predicted;
  predicted.units = reduced.units;
  predicted.durations = durations;
  std::vector<int> expanded = Expand(predicted);
  PitchTrack pitch = PredictPitch(b.pitch, expanded, emb, stats, b.grid);
  return Synthesize(expanded, pitch, emb, speaker_id, b.codebook, cfg);
}

}  // namespace prosoda
