// core/include/prosoda/bundle.h

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

#include "prosoda/emotion-encoder.h"
#include "prosoda/f0-bins.h"
#include "prosoda/feature-extractor.h"
#include "prosoda/kmeans.h"
#include "prosoda/pitch-tracker.h"
#include "prosoda/prosody-predictors.h"

namespace prosoda {

// Every trained component in one container.  Saving embeds a hash per
// section plus cross-references (the predictors record the hash of the
// codebook they were trained against), so a bundle assembled from mixed
// training runs refuses to load.
struct Bundle {
  Codebook codebook;
  EmotionModel emotion;
  DurationModel duration;
  PitchModel pitch;
  BinGrid grid;
  std::vector<SpeakerStats> speakers;       // indexed by speaker_id
  std::vector<std::string> speaker_names;   // parallel to speakers
  FeatureConfig features;
  PitchConfig tracker;
  uint64_t train_seed = 0;

  const SpeakerStats& SpeakerById(int speaker_id) const;
  int SpeakerIdByName(const std::string& name) const;
};

// Structural consistency: model widths, vocabulary sizes, grid shape.
void ValidateBundle(const Bundle& b);

std::string SerializeBundle(const Bundle& b);
Bundle DeserializeBundle(const std::string& bytes);

void SaveBundle(const std::string& path, const Bundle& b);
Bundle LoadBundle(const std::string& path);

}  // namespace prosoda
