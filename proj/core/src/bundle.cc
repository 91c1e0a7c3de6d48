// core/src/bundle.cc

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

#include "prosoda/bundle.h"

#include <map>

namespace prosoda {

namespace {

constexpr char kMagic[] = "PRSDBNDL";  // 8 bytes
constexpr uint32_t kVersion = 1;
constexpr uint32_t kCodebookMagic = 0x4b4d4342;  // "KMCB"

std::string CodebookPayload(const Codebook& c) {
  ByteWriter w;
  w.U32(kCodebookMagic);
  w.U32(1);
  w.I32(c.k);
  w.I32(c.feature_dim);
  w.U64(c.seed);
  w.VecF64(c.centroids.data);
  return w.bytes();
}

Codebook ParseCodebook(const std::string& payload) {
  ByteReader r(payload);
  Require(r.U32() == kCodebookMagic, "bundle: bad codebook magic");
  Require(r.U32() == 1, "bundle: unsupported codebook version");
  Codebook c;
  c.k = r.I32();
  c.feature_dim = r.I32();
  c.seed = r.U64();
  c.centroids.rows = c.k;
  c.centroids.cols = c.feature_dim;
  c.centroids.data = r.VecF64();
  Require(c.centroids.data.size() ==
              static_cast<size_t>(c.k) * c.feature_dim,
          "bundle: codebook centroid blob size mismatch");
  return c;
}

std::string GridPayload(const BinGrid& g) {
  ByteWriter w;
  w.I32(g.d);
  w.VecF64(g.edges);
  w.VecF64(g.centers);
  return w.bytes();
}

BinGrid ParseGrid(const std::string& payload) {
  ByteReader r(payload);
  BinGrid g;
  g.d = r.I32();
  g.edges = r.VecF64();
  g.centers = r.VecF64();
  ValidateBinGrid(g);
  return g;
}

std::string SpeakersPayload(const std::vector<SpeakerStats>& speakers,
                            const std::vector<std::string>& names) {
  ByteWriter w;
  w.U32(static_cast<uint32_t>(speakers.size()));
  for (size_t i = 0; i < speakers.size(); i++) {
    const SpeakerStats& s = speakers[i];
    w.Str(names[i]);
    w.I32(s.speaker_id);
    w.F64(s.mean_f0);
    w.F64(s.std_f0);
    w.I32(s.n_voiced_frames);
  }
  return w.bytes();
}

void ParseSpeakers(const std::string& payload,
                   std::vector<SpeakerStats>* speakers,
                   std::vector<std::string>* names) {
  ByteReader r(payload);
  uint32_t n = r.U32();
  speakers->resize(n);
  names->resize(n);
  for (uint32_t i = 0; i < n; i++) {
    (*names)[i] = r.Str();
    SpeakerStats& s = (*speakers)[i];
    s.speaker_id = r.I32();
    s.mean_f0 = r.F64();
    s.std_f0 = r.F64();
    s.n_voiced_frames = r.I32();
  }
}

std::string FeaturesPayload(const FeatureConfig& f) {
  ByteWriter w;
  w.I32(f.n_fft);
  w.I32(f.n_mels);
  w.F64(f.fmin);
  w.F64(f.fmax);
  w.F64(f.log_floor);
  return w.bytes();
}

FeatureConfig ParseFeatures(const std::string& payload) {
  ByteReader r(payload);
  FeatureConfig f;
  f.n_fft = r.I32();
  f.n_mels = r.I32();
  f.fmin = r.F64();
  f.fmax = r.F64();
  f.log_floor = r.F64();
  return f;
}

std::string TrackerPayload(const PitchConfig& p) {
  ByteWriter w;
  w.F64(p.f_min);
  w.F64(p.f_max);
  w.F64(p.voicing_threshold);
  w.F64(p.lambda);
  w.F64(p.octave_penalty);
  w.I32(p.max_candidates);
  w.I32(p.corr_window);
  return w.bytes();
}

PitchConfig ParseTracker(const std::string& payload) {
  ByteReader r(payload);
  PitchConfig p;
  p.f_min = r.F64();
  p.f_max = r.F64();
  p.voicing_threshold = r.F64();
  p.lambda = r.F64();
  p.octave_penalty = r.F64();
  p.max_candidates = r.I32();
  p.corr_window = r.I32();
  return p;
}

}  // namespace

const SpeakerStats& Bundle::SpeakerById(int speaker_id) const {
  for (const SpeakerStats& s : speakers)
    if (s.speaker_id == speaker_id) return s;
  Fail("bundle: no statistics for speaker " + std::to_string(speaker_id));
}

int Bundle::SpeakerIdByName(const std::string& name) const {
  for (size_t i = 0; i < speaker_names.size(); i++)
    if (speaker_names[i] == name) return speakers[i].speaker_id;
  Fail("bundle: unknown speaker '" + name + "'");
}

void ValidateBundle(const Bundle& b) {
  Require(b.codebook.k >= 2 && b.codebook.centroids.rows == b.codebook.k,
          "bundle: malformed codebook");
  ValidateBinGrid(b.grid);
  Require(b.pitch.d == b.grid.d,
          "bundle: pitch model width " + std::to_string(b.pitch.d) +
              " != bin grid d " + std::to_string(b.grid.d));
  Require(b.duration.k == b.codebook.k,
          "bundle: duration model vocabulary " + std::to_string(b.duration.k) +
              " != codebook K " + std::to_string(b.codebook.k));
  Require(b.pitch.k == b.codebook.k,
          "bundle: pitch model vocabulary " + std::to_string(b.pitch.k) +
              " != codebook K " + std::to_string(b.codebook.k));
  Require(b.emotion.feature_dim == b.features.n_mels,
          "bundle: emotion model input dim != feature config n_mels");
  Require(!b.speakers.empty(), "bundle: no speaker statistics");
  Require(b.speaker_names.size() == b.speakers.size(),
          "bundle: speaker name table size mismatch");
  for (const SpeakerStats& s : b.speakers)
    Require(s.std_f0 > 0.0, "bundle: speaker " + std::to_string(s.speaker_id) +
                                " has non-positive F0 std");
}

std::string SerializeBundle(const Bundle& b) {
  ValidateBundle(b);

  std::map<std::string, std::string> sections;
  sections["codebook"] = CodebookPayload(b.codebook);
  {
    ByteWriter w;
    WriteEmotionModel(&w, b.emotion);
    sections["emotion"] = w.bytes();
  }
  const uint64_t codebook_hash = Fnv1a64(sections["codebook"]);
  sections["grid"] = GridPayload(b.grid);
  const uint64_t grid_hash = Fnv1a64(sections["grid"]);
  {
    // Predictors carry the hash of the codebook (and grid) they were
    // trained against; load refuses mismatched mixes.
    ByteWriter w;
    w.U64(codebook_hash);
    WriteDurationModel(&w, b.duration);
    sections["duration"] = w.bytes();
  }
  {
    ByteWriter w;
    w.U64(codebook_hash);
    w.U64(grid_hash);
    WritePitchModel(&w, b.pitch);
    sections["pitch"] = w.bytes();
  }
  sections["speakers"] = SpeakersPayload(b.speakers, b.speaker_names);
  sections["features"] = FeaturesPayload(b.features);
  sections["tracker"] = TrackerPayload(b.tracker);
  {
    ByteWriter w;
    w.U64(b.train_seed);
    sections["meta"] = w.bytes();
  }

  ByteWriter out;
  out.Raw(kMagic, 8);
  out.U32(kVersion);
  out.U32(static_cast<uint32_t>(sections.size()));
  for (const auto& [name, payload] : sections) {
    out.Str(name);
    out.U64(Fnv1a64(payload.data(), payload.size()));
    out.U64(payload.size());
    out.Raw(payload.data(), payload.size());
  }
  return out.bytes();
}

Bundle DeserializeBundle(const std::string& bytes) {
  Require(bytes.size() >= 8 && bytes.compare(0, 8, kMagic) == 0,
          "bundle: not a model bundle (bad magic)");
  ByteReader r(bytes);
  char magic[8];
  for (char& c : magic) c = static_cast<char>(r.U8());
  uint32_t version = r.U32();
  Require(version == kVersion, "bundle: unsupported version " +
                                   std::to_string(version));
  uint32_t n_sections = r.U32();

  std::map<std::string, std::string> sections;
  for (uint32_t i = 0; i < n_sections; ++i) {
    std::string name = r.Str();
    uint64_t hash = r.U64();
    uint64_t len = r.U64();
    std::string payload;
    payload.resize(len);
    for (uint64_t j = 0; j < len; ++j)
      payload[j] = static_cast<char>(r.U8());
    Require(Fnv1a64(payload.data(), payload.size()) == hash,
            "bundle: section '" + name + "' hash mismatch (file corrupt)");
    sections[name] = std::move(payload);
  }
  for (const char* name : {"codebook", "emotion", "duration", "pitch", "grid",
                           "speakers", "features", "tracker", "meta"})
    Require(sections.count(name) == 1,
            "bundle: missing section '" + std::string(name) + "'");

  Bundle b;
  b.codebook = ParseCodebook(sections["codebook"]);
  {
    ByteReader er(sections["emotion"]);
    b.emotion = ReadEmotionModel(&er);
  }
  b.grid = ParseGrid(sections["grid"]);
  const uint64_t codebook_hash = Fnv1a64(sections["codebook"]);
  const uint64_t grid_hash = Fnv1a64(sections["grid"]);
  {
    ByteReader dr(sections["duration"]);
    Require(dr.U64() == codebook_hash,
            "bundle: duration model was trained against a different codebook");
    b.duration = ReadDurationModel(&dr);
  }
  {
    ByteReader pr(sections["pitch"]);
    Require(pr.U64() == codebook_hash,
            "bundle: pitch model was trained against a different codebook");
    Require(pr.U64() == grid_hash,
            "bundle: pitch model was trained against a different bin grid");
    b.pitch = ReadPitchModel(&pr);
  }
  ParseSpeakers(sections["speakers"], &b.speakers, &b.speaker_names);
  b.features = ParseFeatures(sections["features"]);
  b.tracker = ParseTracker(sections["tracker"]);
  {
    ByteReader mr(sections["meta"]);
    b.train_seed = mr.U64();
  }
  ValidateBundle(b);
  return b;
}

void SaveBundle(const std::string& path, const Bundle& b) {
  WriteFileBytes(path, SerializeBundle(b));
}

Bundle LoadBundle(const std::string& path) {
  return DeserializeBundle(ReadFileBytes(path));
}

}  // namespace prosoda
