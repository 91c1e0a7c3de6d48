// core/src/pipeline.cc

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

#include "prosoda/pipeline.h"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <set>
#include <sstream>

#include "prosoda/wav-io.h"

namespace prosoda {

namespace {

std::string StrPrintf(const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, ap);
  va_end(ap);
  return buf;
}

std::string Trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

template <class F>
auto RunStage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    Fail(std::string("pipeline: stage '") + name + "' failed: " + e.what());
  }
}

int ArgMax4(const std::array<double, kNumEmotions>& p) {
  int best = 0;
  for (int i = 1; i < kNumEmotions; i++)
    if (p[i] > p[best]) best = i;
  return best;
}

}  // namespace

Config Config::FromFile(const std::string& path) {
  Config c;
  std::istringstream in(ReadFileBytes(path));
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    line_no++;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = Trim(line);
    if (line.empty()) continue;
    try {
      c.Apply(line);
    } catch (const Error& e) {
      Fail("config: " + path + ":" + std::to_string(line_no) + ": " +
           e.what());
    }
  }
  return c;
}

void Config::Apply(const std::string& assignment) {
  size_t eq = assignment.find('=');
  Require(eq != std::string::npos,
          "config: expected key=value, got '" + assignment + "'");
  std::string key = Trim(assignment.substr(0, eq));
  std::string value = Trim(assignment.substr(eq + 1));
  Require(!key.empty(), "config: empty key in '" + assignment + "'");
  kv_[key] = value;
}

bool Config::Has(const std::string& key) const { return kv_.count(key) > 0; }

std::string Config::GetString(const std::string& key,
                              const std::string& dflt) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? dflt : it->second;
}

int Config::GetInt(const std::string& key, int dflt) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return dflt;
  try {
    size_t pos = 0;
    long v = std::stol(it->second, &pos);
    Require(pos == it->second.size(), "trailing junk");
    return static_cast<int>(v);
  } catch (const std::exception&) {
    Fail("config: key '" + key + "' is not an integer: '" + it->second + "'");
  }
}

double Config::GetDouble(const std::string& key, double dflt) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return dflt;
  try {
    size_t pos = 0;
    double v = std::stod(it->second, &pos);
    Require(pos == it->second.size(), "trailing junk");
    return v;
  } catch (const std::exception&) {
    Fail("config: key '" + key + "' is not a number: '" + it->second + "'");
  }
}

uint64_t Config::GetU64(const std::string& key, uint64_t dflt) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return dflt;
  try {
    size_t pos = 0;
    uint64_t v = std::stoull(it->second, &pos, 0);
    Require(pos == it->second.size(), "trailing junk");
    return v;
  } catch (const std::exception&) {
    Fail("config: key '" + key + "' is not an unsigned integer: '" +
         it->second + "'");
  }
}

std::vector<std::string> Config::GetList(
    const std::string& key, const std::vector<std::string>& dflt) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return dflt;
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(it->second);
  while (std::getline(in, cur, ',')) {
    cur = Trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

CorpusSpec CorpusSpecFromConfig(const Config& c) {
  CorpusSpec spec;
  spec.languages = c.GetList("corpus.languages", spec.languages);
  spec.speakers_per_language =
      c.GetInt("corpus.speakers_per_language", spec.speakers_per_language);
  spec.utterances_per_combo =
      c.GetInt("corpus.utterances_per_combo", spec.utterances_per_combo);
  spec.train_fraction = c.GetDouble("corpus.train_fraction",
                                    spec.train_fraction);
  spec.sample_rate = c.GetInt("corpus.sample_rate", spec.sample_rate);
  spec.seed = c.GetU64("seed", spec.seed);
  return spec;
}

TrainConfig TrainConfigFromConfig(const Config& c) {
  TrainConfig t;
  t.seed = c.GetU64("seed", t.seed);
  t.kmeans_k = c.GetInt("train.kmeans_k", t.kmeans_k);
  t.kmeans.tol = c.GetDouble("train.kmeans_tol", t.kmeans.tol);
  t.kmeans.max_iters = c.GetInt("train.kmeans_max_iters", t.kmeans.max_iters);

  t.features.n_fft = c.GetInt("features.n_fft", t.features.n_fft);
  t.features.n_mels = c.GetInt("features.n_mels", t.features.n_mels);
  t.features.fmin = c.GetDouble("features.fmin", t.features.fmin);
  t.features.fmax = c.GetDouble("features.fmax", t.features.fmax);

  t.tracker.f_min = c.GetDouble("tracker.f_min", t.tracker.f_min);
  t.tracker.f_max = c.GetDouble("tracker.f_max", t.tracker.f_max);
  t.tracker.voicing_threshold =
      c.GetDouble("tracker.voicing_threshold", t.tracker.voicing_threshold);
  t.tracker.lambda = c.GetDouble("tracker.lambda", t.tracker.lambda);
  t.tracker.octave_penalty =
      c.GetDouble("tracker.octave_penalty", t.tracker.octave_penalty);

  t.bins = c.GetInt("train.bins", t.bins);
  t.bin_lo = c.GetDouble("train.bin_lo", t.bin_lo);
  t.bin_hi = c.GetDouble("train.bin_hi", t.bin_hi);

  t.emotion.conv_channels =
      c.GetInt("train.emotion_channels", t.emotion.conv_channels);
  t.emotion.kernel = c.GetInt("train.emotion_kernel", t.emotion.kernel);
  t.emotion.epochs = c.GetInt("train.emotion_epochs", t.emotion.epochs);
  t.emotion.lr = c.GetDouble("train.emotion_lr", t.emotion.lr);
  t.emotion.weight_decay =
      c.GetDouble("train.emotion_weight_decay", t.emotion.weight_decay);
  t.emotion.dropout = c.GetDouble("train.emotion_dropout", t.emotion.dropout);

  t.predictor.unit_embed_dim =
      c.GetInt("train.unit_embed_dim", t.predictor.unit_embed_dim);
  t.predictor.conv_channels =
      c.GetInt("train.predictor_channels", t.predictor.conv_channels);
  t.predictor.kernel = c.GetInt("train.predictor_kernel", t.predictor.kernel);
  t.predictor.epochs = c.GetInt("train.predictor_epochs", t.predictor.epochs);
  t.predictor.lr = c.GetDouble("train.predictor_lr", t.predictor.lr);
  return t;
}

Bundle TrainAll(const std::vector<ManifestRecord>& manifest,
                const TrainConfig& cfg, std::ostream* log) {
  Require(!manifest.empty(), "pipeline: empty manifest");
  std::vector<int> train_idx, eval_idx;
  for (size_t i = 0; i < manifest.size(); i++)
    (manifest[i].split == "train" ? train_idx : eval_idx)
        .push_back(static_cast<int>(i));
  Require(!train_idx.empty() && !eval_idx.empty(),
          "pipeline: manifest needs both train and eval records");

  // Speaker ids follow sorted name order over the train split.
  std::set<std::string> name_set;
  for (int i : train_idx) name_set.insert(manifest[i].speaker);
  std::vector<std::string> speaker_names(name_set.begin(), name_set.end());
  std::map<std::string, int> speaker_id;
  for (size_t i = 0; i < speaker_names.size(); i++)
    speaker_id[speaker_names[i]] = static_cast<int>(i);

  std::vector<Waveform> wavs(manifest.size());
  std::vector<FeatureSeq> feats(manifest.size());
  RunStage("features", [&] {
    int sample_rate = 0;
    for (size_t i = 0; i < manifest.size(); i++) {
      wavs[i] = ReadWav(manifest[i].path);
      if (sample_rate == 0) {
        sample_rate = wavs[i].sample_rate;
        ValidateFeatureConfig(cfg.features, sample_rate);
      }
      Require(wavs[i].sample_rate == sample_rate,
              "mixed sample rates in manifest (" + manifest[i].path + ")");
      feats[i] = ExtractFeatures(wavs[i], cfg.features);
    }
  });
  if (log)
    *log << "stage features: " << manifest.size() << " utterances, dim "
         << cfg.features.n_mels << "\n";

  Codebook codebook = RunStage("k-means", [&] {
    std::vector<FeatureSeq> train_feats;
    train_feats.reserve(train_idx.size());
    for (int i : train_idx) train_feats.push_back(feats[i]);
    return FitKmeans(train_feats, cfg.kmeans_k, MixSeed(cfg.seed, 0x6b6d),
                     cfg.kmeans);
  });
  if (log) *log << "stage k-means: K " << codebook.k << "\n";

  std::map<int, PitchTrack> tracks;  // train indices only
  std::vector<SpeakerStats> speakers;
  RunStage("f0", [&] {
    std::vector<std::vector<PitchTrack>> by_speaker(speaker_names.size());
    for (int i : train_idx) {
      PitchTrack t = EstimateF0(wavs[i], cfg.tracker);
      by_speaker[speaker_id[manifest[i].speaker]].push_back(t);
      tracks[i] = std::move(t);
    }
    for (size_t s = 0; s < by_speaker.size(); s++)
      speakers.push_back(
          ComputeSpeakerStats(by_speaker[s], static_cast<int>(s)));
  });
  if (log) {
    for (const SpeakerStats& s : speakers)
      *log << StrPrintf("stage f0: speaker %s mean %.1f Hz std %.1f Hz\n",
                        speaker_names[s.speaker_id].c_str(), s.mean_f0,
                        s.std_f0);
  }

  EmotionTrainResult emotion = RunStage("emotion", [&] {
    std::vector<EmotionExample> train_ex, eval_ex;
    for (int i : train_idx)
      train_ex.push_back(
          {feats[i], manifest[i].emotion, manifest[i].language});
    for (int i : eval_idx)
      eval_ex.push_back({feats[i], manifest[i].emotion, manifest[i].language});
    EmotionTrainConfig ecfg = cfg.emotion;
    ecfg.seed = MixSeed(cfg.seed, 0xe0);
    return TrainEmotion(train_ex, eval_ex, ecfg);
  });
  if (log)
    *log << StrPrintf("stage emotion: eval accuracy %.3f\n",
                      emotion.eval_accuracy);

  BinGrid grid = BinGrid::Uniform(cfg.bins, cfg.bin_lo, cfg.bin_hi);
  DurationTrainResult dur;
  PitchTrainResult pit;
  RunStage("predictors", [&] {
    std::vector<DurationExample> dpairs;
    std::vector<PitchExample> ppairs;
    for (int i : train_idx) {
      std::vector<int> units = AssignUnits(feats[i], codebook);
      std::vector<double> emb = Embed(emotion.model, feats[i]);
      dpairs.push_back({Reduce(units), emb});

      const PitchTrack& track = tracks[i];
      const SpeakerStats& st = speakers[speaker_id[manifest[i].speaker]];
      StandardizedTrack z = Standardize(track, st);
      // The tracker grid can run one frame past the feature grid (its
      // window is shorter); pair on the common prefix.
      int T = std::min(static_cast<int>(units.size()), z.n_frames());
      PitchExample pe;
      pe.units.assign(units.begin(), units.begin() + T);
      pe.emotion = std::move(emb);
      pe.targets = Matrix(T, grid.d);
      pe.voiced.assign(T, false);
      for (int t = 0; t < T; t++) {
        if (!z.voiced[t]) continue;
        pe.voiced[t] = true;
        std::vector<double> row = EncodeBins(z.z[t], grid);
        for (int j = 0; j < grid.d; j++) pe.targets(t, j) = row[j];
      }
      ppairs.push_back(std::move(pe));
    }
    PredictorConfig pcfg = cfg.predictor;
    pcfg.k = codebook.k;
    pcfg.bins = grid.d;
    pcfg.seed = MixSeed(cfg.seed, 0xd0);
    dur = TrainDuration(dpairs, pcfg);
    pcfg.seed = MixSeed(cfg.seed, 0xf0);
    pit = TrainPitch(ppairs, pcfg);
  });
  if (log)
    *log << StrPrintf(
        "stage predictors: duration loss %.4f, pitch loss %.4f\n",
        dur.epoch_losses.back(), pit.epoch_losses.back());

  Bundle b;
  b.codebook = std::move(codebook);
  b.emotion = std::move(emotion.model);
  b.duration = std::move(dur.model);
  b.pitch = std::move(pit.model);
  b.grid = std::move(grid);
  b.speakers = std::move(speakers);
  b.speaker_names = std::move(speaker_names);
  b.features = cfg.features;
  b.tracker = cfg.tracker;
  b.train_seed = cfg.seed;
  ValidateBundle(b);
  return b;
}

namespace {

// CCC of a resynthesized track against the reference, after resampling to
// the reference grid. A fully unvoiced prediction or a degenerate constant
// pair scores zero concordance instead of aborting the grid.
double SafeCcc(const PitchTrack& ref, const PitchTrack& pred) {
  try {
    PitchTrack r = ResampleF0(pred, static_cast<int>(ref.f0_hz.size()));
    return CccVoicedPairs(ref.f0_hz, ref.voiced, r.f0_hz, r.voiced).ccc;
  } catch (const Error&) {
    return 0.0;
  }
}

}  // namespace

ExperimentReport RunExperiment(const std::vector<ManifestRecord>& manifest,
                               const Bundle& bundle,
                               const ExperimentGrid& grid, std::ostream* log) {
  Require(!grid.conditions.empty(), "pipeline: no experiment conditions");
  Require(grid.donor_draws >= 1, "pipeline: donor_draws must be >= 1");
  for (const std::string& c : grid.conditions)
    Require(c == "oracle" || c == "proposed" || c == "baseline" ||
                c.rfind("cross:", 0) == 0,
            "pipeline: unknown condition '" + c + "'");

  std::vector<int> eval_idx;
  std::map<std::pair<std::string, int>, std::vector<int>> donors;
  for (size_t i = 0; i < manifest.size(); i++) {
    if (manifest[i].split == "eval")
      eval_idx.push_back(static_cast<int>(i));
    else
      donors[{manifest[i].language, manifest[i].emotion}].push_back(
          static_cast<int>(i));
  }
  Require(!eval_idx.empty(), "pipeline: no eval records in manifest");

  // Donor embeddings are computed once per donor utterance.
  std::map<int, std::vector<double>> donor_emb;
  auto DonorEmbedding = [&](int idx) -> const std::vector<double>& {
    auto it = donor_emb.find(idx);
    if (it != donor_emb.end()) return it->second;
    Waveform w = ReadWav(manifest[idx].path);
    FeatureSeq f = ExtractFeatures(w, bundle.features);
    return donor_emb.emplace(idx, Embed(bundle.emotion, f)).first->second;
  };

  ExperimentReport report;
  report.conditions = grid.conditions;

  for (int i : eval_idx) {
    const ManifestRecord& rec = manifest[i];
    Waveform wav = ReadWav(rec.path);
    FeatureSeq feats = ExtractFeatures(wav, bundle.features);
    PitchTrack ref = EstimateF0(wav, bundle.tracker);
    int sid = bundle.SpeakerIdByName(rec.speaker);

    UtteranceEval ue;
    ue.path = rec.path;
    ue.language = rec.language;
    ue.speaker = rec.speaker;
    ue.emotion = rec.emotion;
    ue.ser["original"] = ArgMax4(Classify(bundle.emotion, feats));

    for (const std::string& cond : grid.conditions) {
      if (cond.rfind("cross:", 0) == 0) {
        std::string donor_lang = cond.substr(6);
        if (rec.language == donor_lang) continue;
        auto pool_it = donors.find({donor_lang, rec.emotion});
        Require(pool_it != donors.end() && !pool_it->second.empty(),
                "pipeline: condition '" + cond +
                    "' has no donor utterances for emotion " +
                    kEmotionNames[rec.emotion]);
        std::vector<int> pool = pool_it->second;
        Rng rng(MixSeed(grid.seed, Fnv1a64(rec.path.data(), rec.path.size())));
        int draws = std::min<int>(grid.donor_draws,
                                  static_cast<int>(pool.size()));
        double sum = 0.0;
        for (int d = 0; d < draws; d++) {
          size_t j = d + rng.UniformInt(static_cast<int>(pool.size()) - d);
          std::swap(pool[d], pool[j]);
          Waveform syn = Resynthesize(wav, ResynthMode::kProposed, bundle, sid,
                                      &DonorEmbedding(pool[d]));
          sum += SafeCcc(ref, EstimateF0(syn, bundle.tracker));
        }
        ue.ccc[cond] = sum / draws;
      } else {
        ResynthMode mode = cond == "oracle"     ? ResynthMode::kOracle
                           : cond == "baseline" ? ResynthMode::kBaseline
                                                : ResynthMode::kProposed;
        Waveform syn = Resynthesize(wav, mode, bundle, sid);
        ue.ccc[cond] = SafeCcc(ref, EstimateF0(syn, bundle.tracker));
        ue.ser[cond] =
            ArgMax4(Classify(bundle.emotion, ExtractFeatures(syn,
                                                             bundle.features)));
      }
    }
    if (log) {
      *log << "eval " << rec.path;
      for (const auto& [cond, v] : ue.ccc) *log << StrPrintf(" %s=%.3f",
                                                             cond.c_str(), v);
      *log << "\n";
    }
    report.utterances.push_back(std::move(ue));
  }

  for (const std::string& cond : grid.conditions) {
    std::array<double, kNumEmotions> sum{};
    std::array<int, kNumEmotions> count{};
    for (const UtteranceEval& ue : report.utterances) {
      auto it = ue.ccc.find(cond);
      if (it == ue.ccc.end()) continue;
      sum[ue.emotion] += it->second;
      count[ue.emotion]++;
    }
    std::array<double, kNumEmotions> mean{};
    double macro = 0.0;
    int classes = 0;
    for (int e = 0; e < kNumEmotions; e++) {
      if (count[e] > 0) {
        mean[e] = sum[e] / count[e];
        macro += mean[e];
        classes++;
      } else {
        mean[e] = std::numeric_limits<double>::quiet_NaN();
      }
    }
    Require(classes > 0,
            "pipeline: condition '" + cond + "' has no eligible utterances");
    report.ccc_by_emotion[cond] = mean;
    report.ccc_mean[cond] = macro / classes;
  }

  std::vector<std::string> ser_keys = {"original"};
  for (const std::string& c : grid.conditions)
    if (c.rfind("cross:", 0) != 0) ser_keys.push_back(c);
  for (const std::string& key : ser_keys) {
    std::vector<int> truth, pred;
    for (const UtteranceEval& ue : report.utterances) {
      auto it = ue.ser.find(key);
      if (it == ue.ser.end()) continue;
      truth.push_back(ue.emotion);
      pred.push_back(it->second);
    }
    if (!truth.empty()) report.ser[key] = ConfusionAndAccuracy(truth, pred);
  }
  return report;
}

std::string RenderReport(const ExperimentReport& report) {
  std::string out;
  out += "CCC by emotion, eval split (rows: condition)\n";
  out += StrPrintf("%-14s", "condition");
  for (int e = 0; e < kNumEmotions; e++)
    out += StrPrintf("%9s", kEmotionNames[e]);
  out += StrPrintf("%9s\n", "mean");
  for (const std::string& cond : report.conditions) {
    out += StrPrintf("%-14s", cond.c_str());
    const auto& row = report.ccc_by_emotion.at(cond);
    for (int e = 0; e < kNumEmotions; e++) {
      if (std::isnan(row[e]))
        out += StrPrintf("%9s", "-");
      else
        out += StrPrintf("%9.4f", row[e]);
    }
    out += StrPrintf("%9.4f\n", report.ccc_mean.at(cond));
  }

  out += "\nSER accuracy\n";
  for (const auto& [key, conf] : report.ser)
    out += StrPrintf("%-14s%9.4f\n", key.c_str(), conf.accuracy);

  for (const auto& [key, conf] : report.ser) {
    out += "\nconfusion " + key + " (rows: true, cols: predicted)\n";
    out += StrPrintf("%-10s", "");
    for (int e = 0; e < kNumEmotions; e++)
      out += StrPrintf("%9s", kEmotionNames[e]);
    out += "\n";
    for (int t = 0; t < kNumEmotions; t++) {
      out += StrPrintf("%-10s", kEmotionNames[t]);
      for (int p = 0; p < kNumEmotions; p++)
        out += StrPrintf("%9d", conf.matrix[t][p]);
      out += "\n";
    }
  }
  return out;
}

void WriteReportFiles(const ExperimentReport& report,
                      const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  WriteFileBytes(out_dir + "/report.txt", RenderReport(report));

  std::string ccc = "condition";
  for (int e = 0; e < kNumEmotions; e++)
    ccc += std::string(",") + kEmotionNames[e];
  ccc += ",mean\n";
  for (const std::string& cond : report.conditions) {
    ccc += cond;
    const auto& row = report.ccc_by_emotion.at(cond);
    for (int e = 0; e < kNumEmotions; e++)
      ccc += std::isnan(row[e]) ? "," : StrPrintf(",%.6f", row[e]);
    ccc += StrPrintf(",%.6f\n", report.ccc_mean.at(cond));
  }
  WriteFileBytes(out_dir + "/ccc.csv", ccc);

  std::string ser = "condition,accuracy\n";
  for (const auto& [key, conf] : report.ser)
    ser += key + StrPrintf(",%.6f\n", conf.accuracy);
  WriteFileBytes(out_dir + "/ser.csv", ser);

  for (const auto& [key, conf] : report.ser) {
    std::string text = "true";
    for (int e = 0; e < kNumEmotions; e++)
      text += std::string(",") + kEmotionNames[e];
    text += "\n";
    for (int t = 0; t < kNumEmotions; t++) {
      text += kEmotionNames[t];
      for (int p = 0; p < kNumEmotions; p++)
        text += StrPrintf(",%d", conf.matrix[t][p]);
      text += "\n";
    }
    WriteFileBytes(out_dir + "/confusion_" + key + ".csv", text);
  }

  std::string utt = "path,language,speaker,emotion,condition,ccc\n";
  for (const UtteranceEval& ue : report.utterances)
    for (const auto& [cond, v] : ue.ccc)
      utt += ue.path + "," + ue.language + "," + ue.speaker + "," +
             kEmotionNames[ue.emotion] + "," + cond + StrPrintf(",%.6f\n", v);
  WriteFileBytes(out_dir + "/utterances.csv", utt);
}

}  // namespace prosoda
