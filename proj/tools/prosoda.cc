// tools/prosoda.cc

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

// Command-line front end:
//   prosoda <subcommand> --config <file> [--seed N] [--out DIR] [--set k=v]
// Subcommands: gen-corpus, train, resynth, eval, export-embeddings.
// All parameters come from the key=value config file; --seed and --set
// override individual keys. Exit code 0 on success, 2 on a pipeline error.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "prosoda/pipeline.h"
#include "prosoda/wav-io.h"

namespace prosoda {
namespace {

uint64_t BundleHash(const Bundle& b) { return Fnv1a64(SerializeBundle(b)); }

int RunGenCorpus(const Config& cfg, const std::string& out) {
  CorpusSpec spec = CorpusSpecFromConfig(cfg);
  std::string dir = cfg.GetString("corpus.dir", out + "/corpus");
  std::vector<ManifestRecord> manifest = GenCorpus(spec, dir);
  std::printf("gen-corpus: %zu files in %s\n", manifest.size(), dir.c_str());
  return 0;
}

int RunTrain(const Config& cfg, const std::string& out) {
  std::string manifest_path =
      cfg.GetString("data.manifest", out + "/corpus/manifest.csv");
  std::vector<ManifestRecord> manifest = ReadManifest(manifest_path);
  TrainConfig tcfg = TrainConfigFromConfig(cfg);
  Bundle bundle = TrainAll(manifest, tcfg, &std::cout);
  std::string bundle_path = cfg.GetString("model.bundle", out + "/bundle.bin");
  SaveBundle(bundle_path, bundle);
  std::printf("train: wrote %s (hash %016llx)\n", bundle_path.c_str(),
              static_cast<unsigned long long>(BundleHash(bundle)));
  return 0;
}

int RunResynth(const Config& cfg, const std::string& out) {
  Bundle bundle =
      LoadBundle(cfg.GetString("model.bundle", out + "/bundle.bin"));
  std::string input = cfg.GetString("resynth.input", "");
  Require(!input.empty(), "resynth: config key resynth.input is required");
  std::string speaker = cfg.GetString("resynth.speaker", "");
  Require(!speaker.empty(), "resynth: config key resynth.speaker is required");
  std::string mode_name = cfg.GetString("resynth.mode", "proposed");
  ResynthMode mode;
  if (mode_name == "oracle") {
    mode = ResynthMode::kOracle;
  } else if (mode_name == "baseline") {
    mode = ResynthMode::kBaseline;
  } else if (mode_name == "proposed") {
    mode = ResynthMode::kProposed;
  } else {
    Fail("resynth: unknown mode '" + mode_name + "'");
  }

  Waveform w = ReadWav(input);
  int sid = bundle.SpeakerIdByName(speaker);

  std::vector<double> donor;
  const std::vector<double>* donor_ptr = nullptr;
  std::string donor_path = cfg.GetString("resynth.donor", "");
  if (!donor_path.empty()) {
    Require(mode == ResynthMode::kProposed,
            "resynth: resynth.donor only applies to mode proposed");
    Waveform dw = ReadWav(donor_path);
    donor = Embed(bundle.emotion, ExtractFeatures(dw, bundle.features));
    donor_ptr = &donor;
  }

  Waveform syn = Resynthesize(w, mode, bundle, sid, donor_ptr);
  std::string output = cfg.GetString("resynth.output", out + "/resynth.wav");
  WriteWav(output, syn);
  std::printf("resynth: %s -> %s (%s, %.2f s)\n", input.c_str(),
              output.c_str(), mode_name.c_str(), syn.DurationSeconds());
  return 0;
}

int RunEval(const Config& cfg, const std::string& out) {
  std::string manifest_path =
      cfg.GetString("data.manifest", out + "/corpus/manifest.csv");
  std::vector<ManifestRecord> manifest = ReadManifest(manifest_path);
  Bundle bundle =
      LoadBundle(cfg.GetString("model.bundle", out + "/bundle.bin"));

  ExperimentGrid grid;
  grid.conditions = cfg.GetList("eval.conditions", grid.conditions);
  grid.donor_draws = cfg.GetInt("eval.donor_draws", grid.donor_draws);
  grid.seed = cfg.GetU64("eval.seed", cfg.GetU64("seed", grid.seed));

  ExperimentReport report = RunExperiment(manifest, bundle, grid, nullptr);
  std::string report_dir = cfg.GetString("eval.report_dir", out + "/report");
  WriteReportFiles(report, report_dir);
  std::cout << RenderReport(report);
  std::printf("eval: report in %s\n", report_dir.c_str());
  return 0;
}

int RunExportEmbeddings(const Config& cfg, const std::string& out) {
  std::string manifest_path =
      cfg.GetString("data.manifest", out + "/corpus/manifest.csv");
  std::vector<ManifestRecord> manifest = ReadManifest(manifest_path);
  Bundle bundle =
      LoadBundle(cfg.GetString("model.bundle", out + "/bundle.bin"));
  std::string split = cfg.GetString("export.split", "eval");
  Require(split == "train" || split == "eval" || split == "all",
          "export-embeddings: export.split must be train, eval or all");

  std::vector<EmbeddingRecord> records;
  for (const ManifestRecord& rec : manifest) {
    if (split != "all" && rec.split != split) continue;
    Waveform w = ReadWav(rec.path);
    EmbeddingRecord er;
    er.embedding = Embed(bundle.emotion, ExtractFeatures(w, bundle.features));
    er.label = rec.emotion;
    er.language = rec.language;
    records.push_back(std::move(er));
  }
  Require(!records.empty(), "export-embeddings: no records in split " + split);
  std::string output = cfg.GetString("export.output", out + "/embeddings.csv");
  ExportEmbeddings(records, output);
  std::printf("export-embeddings: %zu rows -> %s\n", records.size(),
              output.c_str());
  return 0;
}

}  // namespace
}  // namespace prosoda

int main(int argc, char** argv) {
  CLI::App app{"prosoda: emotion-conditioned speech resynthesis pipeline"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  uint64_t seed = 0;
  std::vector<std::string> overrides;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"gen-corpus", "Generate the synthetic corpus and its manifest"},
      {"train", "Train all components and write the model bundle"},
      {"resynth", "Resynthesize one utterance through the bundle"},
      {"eval", "Run the experiment grid on the eval split"},
      {"export-embeddings", "Write emotion embeddings as CSV"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "key=value config file")
        ->required();
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--set", overrides, "extra key=value overrides");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    prosoda::Config cfg = prosoda::Config::FromFile(config_path);
    for (const std::string& o : overrides) cfg.Apply(o);
    if (app.get_subcommands()[0]->count("--seed") > 0)
      cfg.Apply("seed=" + std::to_string(seed));
    std::string out = out_dir.empty() ? cfg.GetString("out", "prosoda-out")
                                      : out_dir;

    const std::string cmd = app.get_subcommands()[0]->get_name();
    if (cmd == "gen-corpus") return prosoda::RunGenCorpus(cfg, out);
    if (cmd == "train") return prosoda::RunTrain(cfg, out);
    if (cmd == "resynth") return prosoda::RunResynth(cfg, out);
    if (cmd == "eval") return prosoda::RunEval(cfg, out);
    if (cmd == "export-embeddings")
      return prosoda::RunExportEmbeddings(cfg, out);
    std::cerr << "error: unknown subcommand " << cmd << "\n";
    return 1;
  } catch (const prosoda::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
