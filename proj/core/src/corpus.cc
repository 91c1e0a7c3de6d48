// core/src/corpus.cc

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

#include "prosoda/corpus.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "prosoda/emotion-encoder.h"

namespace prosoda {

namespace {

// Emotion profiles. f0_scale shifts the register, syl_slope is the
// fractional rise across each syllable, accent is the depth of the F0 arc
// each syllable carries, rate multiplies segment durations, tilt skews the
// spectrum toward highs (>0) or lows (<0). Happy carries a 5.5 Hz vibrato
// instead of a strong slope. Class F0 means straddle the per-speaker mean,
// so an unconditioned predictor collapses toward a flat mid-register
// contour. Register and accent depth are the cues a unit-conditioned
// predictor can recover: the arc is pinned to syllable position, which the
// quantizer resolves through the loudness arc below, while slope direction,
// vibrato phase and wander stay unpredictable and bound every condition
// away from the oracle.
struct EmotionProfile {
  double f0_scale;
  double syl_slope;
  double accent;
  double vibrato_amp;
  double vibrato_hz;
  double rate;
  double tilt;
  double jitter;
};

// Jitter stays in the natural half-to-one percent band.  Much past that
// the F1 ring, which dominates the radiated waveform, loses its
// period-to-period phase coherence and a doubled lag can outscore the
// true one.
const EmotionProfile kEmotionProfiles[kNumEmotions] = {
    // Neutral: mild declination, modest accents.
    {1.00, -0.06, 0.06, 0.004, 4.5, 1.00, 0.00, 0.006},
    // Angry: raised register, rising syllables, deep accents, fast,
    // bright, rough.
    {1.25, 0.12, 0.16, 0.006, 4.5, 0.70, 0.32, 0.009},
    // Happy: raised register, vibrato, lively accents.
    {1.12, 0.06, 0.12, 0.045, 5.5, 0.85, 0.06, 0.007},
    // Sad: lowered register, falling syllables, flat accents, slow, dark.
    {0.85, -0.07, 0.09, 0.004, 4.0, 1.40, -0.25, 0.006},
};

// intrinsic_f0 is the vowel-height F0 offset: close vowels (low F1) sit a
// few percent above open ones. It ties part of the contour to the vowel
// identity itself, exactly what a unit-conditioned predictor can see.
struct Vowel {
  double f1, f2, f3;
  double intrinsic_f0;
};

// Languages differ in vowel inventory (disjoint formant clusters), rhythm
// and expressiveness. "beta" realizes the same emotion profiles at 0.75
// strength, so classifiers trained on one language transfer imperfectly.
struct LanguageProfile {
  const char* name;
  Vowel vowels[3];
  double syl_base;       // seconds, vowel nucleus before rate scaling
  double gap_lo, gap_hi; // seconds, inter-syllable gap
  int min_syllables;
  int max_syllables;
  double expressiveness;
  double base_tilt;
  double base_f0[4];     // per speaker slot
  double formant_scale[4];
};

// Gaps stay longer than the synthesis OLA window (40 ms) so resynthesis
// smear at voicing boundaries lands on frames the reference also calls
// unvoiced.  Vowels keep F1 at 490 Hz or above: close vowels put their F1
// ring inside the tracker's lag range, where it reads as pitch whenever a
// window at a voicing edge holds only one pulse.
const LanguageProfile kLanguages[] = {
    {"alpha",
     {{730.0, 1090.0, 2440.0, -0.025},
      {660.0, 1720.0, 2410.0, 0.0},
      {570.0, 840.0, 2410.0, 0.025}},
     0.18,
     0.08,
     0.12,
     6,
     9,
     1.0,
     0.00,
     {115.0, 205.0, 132.0, 188.0},
     {1.00, 1.08, 0.96, 1.12}},
    {"beta",
     {{530.0, 1840.0, 2480.0, 0.02},
      {640.0, 1190.0, 2390.0, -0.02},
      {490.0, 1350.0, 2500.0, 0.03}},
     0.22,
     0.10,
     0.15,
     5,
     8,
     0.75,
     0.05,
     {125.0, 220.0, 142.0, 196.0},
     {1.00, 1.08, 0.96, 1.12}},
};

const LanguageProfile& FindLanguage(const std::string& name) {
  for (const auto& lang : kLanguages) {
    if (name == lang.name) return lang;
  }
  Fail("corpus: unknown language '" + name + "'");
}

// Two-pole Klatt resonator with unit DC gain.
class Resonator {
 public:
  void Set(double freq, double bw, int sr) {
    double r = std::exp(-M_PI * bw / sr);
    c1_ = 2.0 * r * std::cos(2.0 * M_PI * freq / sr);
    c2_ = -r * r;
    g_ = 1.0 - c1_ - c2_;
  }
  double Step(double x) {
    double y = g_ * x + c1_ * y1_ + c2_ * y2_;
    y2_ = y1_;
    y1_ = y;
    return y;
  }

 private:
  double c1_ = 0.0, c2_ = 0.0, g_ = 1.0;
  double y1_ = 0.0, y2_ = 0.0;
};

// Gap types: kSilence only at the utterance tail; interior gaps are always
// sustained fricatives.  Every analysis window near a voicing boundary
// then holds broadband energy at a level comparable to the vowels.  A
// quiet gap instead leaves such windows to a lone formant ring (which
// correlates with itself one ring period later) or to noise-floor flukes
// against the oncoming pulses, whose sparse support collapses the
// correlation's effective sample count; both read as voiced off pitch.
enum GapType { kSilence, kSibilant, kSoft };

struct Segment {
  bool voiced;
  GapType gap;  // unvoiced only
  int n_samples;
  Vowel vowel;  // voiced only
};

}  // namespace

Waveform GenUtterance(const std::string& language, int emotion, int speaker,
                      uint64_t utt_seed, int sample_rate) {
  Require(emotion >= 0 && emotion < kNumEmotions,
          "corpus: emotion out of range");
  Require(sample_rate > 0, "corpus: bad sample rate");
  const LanguageProfile& lang = FindLanguage(language);
  Require(speaker >= 0 && speaker < 4, "corpus: speaker slot out of range");

  const EmotionProfile& raw = kEmotionProfiles[emotion];
  const double expr = lang.expressiveness;
  // Expression scaling pulls every cue toward the Neutral values.
  EmotionProfile emo;
  emo.f0_scale = 1.0 + (raw.f0_scale - 1.0) * expr;
  emo.syl_slope = raw.syl_slope * expr;
  emo.accent = raw.accent * expr;
  emo.vibrato_amp = 0.004 + (raw.vibrato_amp - 0.004) * expr;
  emo.vibrato_hz = raw.vibrato_hz;
  emo.rate = 1.0 + (raw.rate - 1.0) * expr;
  emo.tilt = raw.tilt * expr;
  emo.jitter = raw.jitter;

  Rng rng(utt_seed);
  const int sr = sample_rate;
  const double base_f0 =
      lang.base_f0[speaker] * (1.0 + 0.02 * rng.Gaussian());
  const double fscale =
      lang.formant_scale[speaker] * (1.0 + 0.02 * (rng.Uniform() - 0.5));

  int n_syll = lang.min_syllables +
               rng.UniformInt(lang.max_syllables - lang.min_syllables + 1);

  std::vector<Segment> segments;
  int lead = sr / 20;  // 50 ms at both ends
  segments.push_back({false, kSoft, lead, {}});  // breathy attack
  for (int s = 0; s < n_syll; s++) {
    Segment v;
    v.voiced = true;
    v.gap = kSilence;
    const Vowel& base = lang.vowels[rng.UniformInt(3)];
    v.vowel = {base.f1 * fscale, base.f2 * fscale, base.f3 * fscale,
               base.intrinsic_f0};
    double dur =
        lang.syl_base * emo.rate * (0.85 + 0.3 * rng.Uniform());
    v.n_samples = std::max(1, static_cast<int>(std::lround(dur * sr)));
    segments.push_back(v);

    Segment g;
    g.voiced = false;
    g.gap = rng.Uniform() < 0.5 ? kSibilant : kSoft;
    double gap = lang.gap_lo + (lang.gap_hi - lang.gap_lo) * rng.Uniform();
    g.n_samples = std::max(1, static_cast<int>(std::lround(gap * sr)));
    segments.push_back(g);
  }
  segments.push_back({false, kSilence, lead, {}});

  int total = 0;
  for (const auto& seg : segments) total += seg.n_samples;

  std::vector<double> x(total, 0.0);

  Resonator f1, f2, f3, fric;
  fric.Set(4200.0, 1200.0, sr);

  const double vib_phase0 = 2.0 * M_PI * rng.Uniform();
  const int wander_hop = sr / 50;  // 20 ms
  double wander = 0.0;
  double phase = 1.0;  // pulse fires on the first voiced sample
  double jmul = 1.0;
  // Pending excitation, pulses spread over the next few samples.
  double fifo[8] = {0.0};
  // Glottal shaping: two one-pole sections roll the impulse train off at
  // -12 dB/oct so the low harmonics dominate, as they do in glottal flow.
  // Bare impulses put their energy into the formant rings, whose
  // subharmonics fall inside the tracker's lag range and beat the jittered
  // pitch-rate correlation.  The pole keeps the radiated bump narrower
  // than the shortest tracker lag, so an isolated pulse at a voicing edge
  // cannot correlate with itself.
  const double gp = 0.94;
  double g1 = 0.0, g2 = 0.0;
  // Asymmetric amplitude edges.  Onsets rise inside 10 ms; slower ramps
  // leave whole analysis windows at a few times the noise floor, where a
  // junk correlation can cross the voicing threshold and anchor the
  // dynamic-programming run off pitch.  Offsets die inside 2.5 ms: the
  // decaying formant ring after the last pulse then has shorter support
  // than the smallest lag the tracker scans, so it cannot pair with its
  // own next period.  A decaying sinusoid correlates near unity at exact
  // period multiples no matter how fast it decays; only cutting its
  // support defeats it.
  const int ramp_on = sr * 10 / 1000;
  const int ramp_off = sr * 25 / 10000;

  int pos = 0;
  for (const auto& seg : segments) {
    if (seg.voiced) {
      // Bandwidths sit at the broad end of the natural range.  The F1
      // ring must decay below the voicing threshold within two of its own
      // periods, the first lag the tracker can see; edge windows holding
      // a single pulse otherwise read the ring as pitch.
      f1.Set(seg.vowel.f1, 180.0, sr);
      f2.Set(seg.vowel.f2, 190.0, sr);
      f3.Set(seg.vowel.f3, 210.0, sr);
    }
    // Gaps keep fast edges on both sides; a slow gap ramp would hold the
    // frication below the level that drowns the vowel-edge artifacts.
    int r_on = seg.voiced ? ramp_on : ramp_off;
    for (int i = 0; i < seg.n_samples; i++, pos++) {
      if (pos % wander_hop == 0) {
        wander += 0.009 * rng.Gaussian();
        wander = std::clamp(wander, -0.045, 0.045);
      }
      double env = 1.0;
      if (i < r_on) env = 0.5 - 0.5 * std::cos(M_PI * i / r_on);
      int left = seg.n_samples - 1 - i;
      if (left < ramp_off)
        env = std::min(env, 0.5 - 0.5 * std::cos(M_PI * left / ramp_off));
      if (seg.voiced) {
        double progress = static_cast<double>(i) / seg.n_samples;
        double arc = std::sin(M_PI * progress);
        // Loudness follows the accent arc.  The frame quantizer separates
        // clusters by level, so unit identity encodes position within the
        // syllable, and the pitch arc riding on that position becomes
        // recoverable from the unit sequence alone.
        env *= 0.82 + 0.18 * arc;
        double t = static_cast<double>(pos) / sr;
        double f0 = base_f0 * emo.f0_scale *
                    (1.0 + emo.syl_slope * (progress - 0.5) +
                     emo.accent * arc + seg.vowel.intrinsic_f0 +
                     emo.vibrato_amp *
                         std::sin(2.0 * M_PI * emo.vibrato_hz * t +
                                  vib_phase0) +
                     wander);
        double src = fifo[0];
        for (int k = 0; k + 1 < 8; k++) fifo[k] = fifo[k + 1];
        fifo[7] = 0.0;
        double inc = f0 * jmul / sr;
        phase += inc;
        if (phase >= 1.0) {
          phase -= 1.0;
          // Pulses land between samples, so each is laid down as a
          // windowed sinc at its true instant.  Cruder placement ties the
          // pulse shape to the sub-sample position; with a non-integer
          // period the shape then repeats only every second pulse, and
          // the tracker hears that as an octave drop.  The gain keeps
          // vowels roughly 12 dB above the gap frication after the
          // shaping filter's loss.
          double d = phase / inc;
          double h[8], hsum = 0.0;
          for (int m = 0; m < 8; m++) {
            double u = m + d - 3.5;
            double s = u == 0.0 ? 1.0 : std::sin(M_PI * u) / (M_PI * u);
            double w = 0.5 - 0.5 * std::cos(2.0 * M_PI * (m + d) / 8.0);
            h[m] = s * w;
            hsum += h[m];
          }
          for (int m = 0; m < 8; m++) fifo[m] += 40.0 * h[m] / hsum;
          jmul = std::clamp(1.0 + emo.jitter * rng.Gaussian(), 0.8, 1.2);
        }
        g1 = gp * g1 + (1.0 - gp) * src;
        g2 = gp * g2 + (1.0 - gp) * g1;
        // The envelope sits after the filter.  A ramp on the excitation
        // alone leaves the resonators ringing at F1 past the last pulse,
        // and those tails carry no pitch-rate structure, so correlation
        // trackers read them as voiced at a formant subharmonic.
        x[pos] = env * f3.Step(f2.Step(f1.Step(g2)));
      } else {
        phase = 1.0;
        for (double& p : fifo) p = 0.0;
        // Both drawn even for silent segments so gap type does not change
        // how many values the segment consumes from the stream.
        double n = rng.Gaussian();
        double n2 = rng.Gaussian();
        double shaped = fric.Step(n);
        // Two fricative colors, both riding a broadband bed that carries
        // most of the power.  Normalized correlation over a window of
        // bandwidth B has noise of about 1/sqrt(B T); a narrowband-heavy
        // mix leaves that near 0.15, and two-sigma flukes then cross the
        // voicing threshold at arbitrary lags.  Levels allow for the
        // radiation boost at 4 kHz and sit near a third of the vowels,
        // like a crisp consonant.
        double col = 0.0, lev = 0.0;
        if (seg.gap == kSibilant) {
          col = 0.0055;
          lev = 0.024;
        } else if (seg.gap == kSoft) {
          col = 0.0010;
          lev = 0.028;
        }
        x[pos] = env * (col * shaped + lev * n2);
      }
    }
  }

  // Radiation and tilt: y = (1 - z^-1)(1 - a z^-1) x.  The fixed
  // difference is the lip radiation characteristic; it also zeroes the DC
  // that the shaped pulse train pushes through the filters.  'a' tilts
  // the spectrum, a > 0 favoring highs, as the voice-quality cue.
  double a = lang.base_tilt + emo.tilt;
  std::vector<double> y(total, 0.0);
  double prev = 0.0, dprev = 0.0;
  for (int i = 0; i < total; i++) {
    double d = x[i] - prev;
    prev = x[i];
    y[i] = d - a * dprev;
    dprev = d;
  }

  double peak = 0.0;
  for (double v : y) peak = std::max(peak, std::abs(v));
  if (peak > 0.0) {
    double gain = 0.75 / peak;
    for (double& v : y) v *= gain;
  }
  // Broadband floor at about -44 dB, as a modest recording chain would
  // have.  Without it the correlation tracker locks onto inaudible
  // resonator tails, which are perfectly periodic at the formant
  // frequency; the level also dilutes marginal correlations in the
  // low-amplitude windows at voicing edges below the voicing threshold.
  for (double& v : y) v += 0.005 * rng.Gaussian();

  Waveform w;
  w.sample_rate = sr;
  w.samples = std::move(y);
  return w;
}

std::vector<ManifestRecord> GenCorpus(const CorpusSpec& spec,
                                      const std::string& out_dir) {
  Require(!spec.languages.empty(), "corpus: no languages");
  Require(spec.speakers_per_language >= 1 && spec.speakers_per_language <= 4,
          "corpus: speakers_per_language must be in [1, 4]");
  Require(spec.utterances_per_combo >= 1, "corpus: utterances_per_combo < 1");
  Require(spec.train_fraction > 0.0 && spec.train_fraction < 1.0,
          "corpus: train_fraction must be in (0, 1)");
  for (const auto& name : spec.languages) FindLanguage(name);

  std::filesystem::create_directories(out_dir);

  // Split sizes are fixed per stratum, so every (language, emotion) cell
  // has identical train/eval counts.
  int n_train = static_cast<int>(
      std::lround(spec.train_fraction * spec.utterances_per_combo));
  n_train = std::clamp(n_train, 1, spec.utterances_per_combo - 1);

  std::vector<ManifestRecord> manifest;
  for (const auto& language : spec.languages) {
    for (int j = 0; j < spec.speakers_per_language; j++) {
      std::string speaker = language + "_spk" + std::to_string(j);
      for (int e = 0; e < kNumEmotions; e++) {
        for (int u = 0; u < spec.utterances_per_combo; u++) {
          std::string key = language + "/" + speaker + "/" +
                            kEmotionNames[e] + "/" + std::to_string(u);
          uint64_t utt_seed =
              MixSeed(spec.seed, Fnv1a64(key.data(), key.size()));
          Waveform w =
              GenUtterance(language, e, j, utt_seed, spec.sample_rate);

          char fname[128];
          std::snprintf(fname, sizeof(fname), "%s_spk%d_%s_%03d.wav",
                        language.c_str(), j, kEmotionNames[e], u);
          std::string path = out_dir + "/" + fname;
          WriteWav(path, w);

          ManifestRecord rec;
          rec.path = path;
          rec.speaker = speaker;
          rec.emotion = e;
          rec.language = language;
          rec.split = u < n_train ? "train" : "eval";
          manifest.push_back(std::move(rec));
        }
      }
    }
  }
  WriteManifest(manifest, out_dir + "/manifest.csv");
  return manifest;
}

void WriteManifest(const std::vector<ManifestRecord>& records,
                   const std::string& path) {
  std::string text = "path,speaker,emotion,language,split\n";
  for (const auto& r : records) {
    Require(r.emotion >= 0 && r.emotion < kNumEmotions,
            "corpus: manifest emotion out of range");
    text += r.path + "," + r.speaker + "," + kEmotionNames[r.emotion] + "," +
            r.language + "," + r.split + "\n";
  }
  WriteFileBytes(path, text);
}

std::vector<ManifestRecord> ReadManifest(const std::string& path) {
  std::string text = ReadFileBytes(path);
  std::istringstream in(text);
  std::string line;
  Require(static_cast<bool>(std::getline(in, line)),
          "corpus: empty manifest " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  Require(line == "path,speaker,emotion,language,split",
          "corpus: bad manifest header in " + path);

  std::string dir = std::filesystem::path(path).parent_path().string();
  std::vector<ManifestRecord> records;
  int line_no = 1;
  while (std::getline(in, line)) {
    line_no++;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    size_t start = 0;
    while (true) {
      size_t comma = line.find(',', start);
      if (comma == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    Require(fields.size() == 5, "corpus: manifest line " +
                                    std::to_string(line_no) +
                                    " needs 5 fields");
    ManifestRecord rec;
    rec.path = fields[0];
    rec.speaker = fields[1];
    rec.emotion = ParseEmotionLabel(fields[2]);
    rec.language = fields[3];
    rec.split = fields[4];
    Require(rec.split == "train" || rec.split == "eval",
            "corpus: manifest line " + std::to_string(line_no) +
                ": split must be train or eval");
    if (!std::filesystem::exists(rec.path)) {
      std::string alt = dir.empty() ? rec.path : dir + "/" + rec.path;
      Require(std::filesystem::exists(alt),
              "corpus: manifest references missing file " + rec.path);
      rec.path = alt;
    }
    records.push_back(std::move(rec));
  }
  Require(!records.empty(), "corpus: manifest has no rows");
  return records;
}

}  // namespace prosoda
