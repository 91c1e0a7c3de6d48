// core/include/prosoda/pipeline.h

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
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "prosoda/bundle.h"
#include "prosoda/corpus.h"
#include "prosoda/metrics.h"
#include "prosoda/synthesizer.h"

namespace prosoda {

// Flat key=value configuration. Lines hold one assignment each, '#' starts
// a comment, later assignments win. Keys are dotted lowercase
// ("train.kmeans_k"); the full list lives in the README.
class Config {
 public:
  Config() = default;
  static Config FromFile(const std::string& path);

  // "key=value"; malformed text is an error.
  void Apply(const std::string& assignment);

  bool Has(const std::string& key) const;
  std::string GetString(const std::string& key, const std::string& dflt) const;
  int GetInt(const std::string& key, int dflt) const;
  double GetDouble(const std::string& key, double dflt) const;
  uint64_t GetU64(const std::string& key, uint64_t dflt) const;
  // Comma-separated values.
  std::vector<std::string> GetList(const std::string& key,
                                   const std::vector<std::string>& dflt) const;

  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

struct TrainConfig {
  uint64_t seed = 17;
  int kmeans_k = 100;
  KmeansOptions kmeans;
  FeatureConfig features;
  PitchConfig tracker;
  int bins = 32;
  double bin_lo = -4.0;
  double bin_hi = 4.0;
  EmotionTrainConfig emotion;
  PredictorConfig predictor;  // .k and .bins are filled by TrainAll
};

CorpusSpec CorpusSpecFromConfig(const Config& c);
TrainConfig TrainConfigFromConfig(const Config& c);

// Stages run strictly in order: features -> k-means -> f0 -> emotion ->
// predictors. Any stage failure aborts with the stage name in the message.
// Speaker ids are assigned by sorted speaker-name order over the train
// split. Progress lines go to log when non-null.
Bundle TrainAll(const std::vector<ManifestRecord>& manifest,
                const TrainConfig& cfg, std::ostream* log = nullptr);

// Experiment conditions: "oracle", "proposed", "baseline" and
// "cross:<language>" (resynthesis of other-language eval utterances
// conditioned on donor embeddings of the same emotion; donor_draws donors
// sampled without replacement from the donor language's train split, CCC
// averaged over draws).
struct ExperimentGrid {
  std::vector<std::string> conditions = {"oracle", "proposed", "baseline"};
  int donor_draws = 5;
  uint64_t seed = 1234;  // donor sampling only
};

struct UtteranceEval {
  std::string path;
  std::string language;
  std::string speaker;
  int emotion = 0;
  std::map<std::string, double> ccc;  // condition -> CCC vs reference track
  std::map<std::string, int> ser;     // "original" + resynth modes -> label
};

struct ExperimentReport {
  std::vector<std::string> conditions;
  std::vector<UtteranceEval> utterances;  // eval split, manifest order
  // Per condition: per-emotion mean CCC and the macro (mean-of-means) CCC.
  std::map<std::string, std::array<double, kNumEmotions>> ccc_by_emotion;
  std::map<std::string, double> ccc_mean;
  // Keyed "original", "oracle", "baseline", "proposed" (cross conditions
  // contribute CCC only).
  std::map<std::string, ConfusionResult> ser;
};

// Evaluates the eval split of the manifest. Deterministic given
// (manifest, bundle, grid.seed): donor draws are seeded per target path.
ExperimentReport RunExperiment(const std::vector<ManifestRecord>& manifest,
                               const Bundle& bundle,
                               const ExperimentGrid& grid,
                               std::ostream* log = nullptr);

// Human-readable tables (the same content WriteReportFiles puts in
// report.txt).
std::string RenderReport(const ExperimentReport& report);

// report.txt + ccc.csv + ser.csv + confusion_<key>.csv + utterances.csv.
void WriteReportFiles(const ExperimentReport& report,
                      const std::string& out_dir);

}  // namespace prosoda
