// core/include/prosoda/corpus.h

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
#include <string>
#include <vector>

#include "prosoda/wav-io.h"

namespace prosoda {

// One manifest row.  Speaker ids are strings; the pipeline maps them to
// dense indices in sorted order.
struct ManifestRecord {
  std::string path;
  std::string speaker;
  int emotion = 0;
  std::string language;
  std::string split;  // "train" or "eval"
};

struct CorpusSpec {
  std::vector<std::string> languages = {"alpha", "beta"};
  int speakers_per_language = 2;
  int utterances_per_combo = 10;  // per (language, emotion, speaker)
  double train_fraction = 0.8;
  uint64_t seed = 7;
  int sample_rate = 16000;
};

// Synthesizes the corpus into out_dir and returns the manifest rows.
// Per-utterance seeds derive from (seed, language, emotion, speaker, index),
// so the corpus is bitwise reproducible and order-independent.
std::vector<ManifestRecord> GenCorpus(const CorpusSpec& spec,
                                      const std::string& out_dir);

// One synthetic utterance, exposed for tests that need raw material
// without a directory of files.
Waveform GenUtterance(const std::string& language, int emotion, int speaker,
                      uint64_t utt_seed, int sample_rate = 16000);

// CSV with header path,speaker,emotion,language,split.
void WriteManifest(const std::vector<ManifestRecord>& records,
                   const std::string& path);

// Parses and validates; every referenced file must exist.
std::vector<ManifestRecord> ReadManifest(const std::string& path);

}  // namespace prosoda
