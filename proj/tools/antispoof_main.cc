// tools/antispoof_main.cc

// Copyright 2026 The antispoof Authors

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

// antispoof: synthetic-speech detection experiments from the command line.
//
//   antispoof learn-warp --config exp.conf
//   antispoof extract    --config exp.conf --family MFCC,ISOBT
//   antispoof train      --config exp.conf --components 512 --seed 0
//   antispoof score      --config exp.conf
//   antispoof report     --config exp.conf
//   antispoof run-all    --config exp.conf --workers 8
//
// Settings come from built-in defaults, then the --config file, then flags.
// On failure the last line on stderr is `error: <category>: <message>` and
// the exit status identifies the category.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iterator>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "antispoof/corpus.h"
#include "antispoof/error.h"
#include "antispoof/experiment.h"
#include "antispoof/toy_corpus.h"

namespace {

using namespace antispoof;

int ExitCode(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kConfig:
      return 2;
    case ErrorCategory::kInput:
      return 3;
    case ErrorCategory::kIo:
      return 4;
    case ErrorCategory::kCorruption:
      return 5;
    case ErrorCategory::kData:
      return 6;
  }
  return 1;
}

std::string Join(const std::vector<std::string> &items) {
  std::string out;
  for (const auto &s : items) out += (out.empty() ? "" : ",") + s;
  return out;
}

struct Flags {
  std::string config_path;
  std::vector<std::string> families;
  std::vector<std::string> dynamics;
  std::optional<int> components;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::string work_dir;
  std::string corpus_root;
  std::string train_protocol;
  std::string dev_protocol;
  std::vector<std::string> settings;
  bool quiet = false;
};

ExperimentConfig BuildConfig(const Flags &flags) {
  ExperimentConfig config;
  if (!flags.config_path.empty()) LoadConfigFile(&config, flags.config_path);
  auto set = [&](const char *key, const std::string &value) {
    ApplyConfigSetting(&config, key, value, std::filesystem::path());
  };
  for (const std::string &kv : flags.settings) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCategory::kConfig, "--set expects key=value, got '" + kv + "'");
    ApplyConfigSetting(&config, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!flags.corpus_root.empty()) set("corpus_root", flags.corpus_root);
  if (!flags.train_protocol.empty()) set("train_protocol", flags.train_protocol);
  if (!flags.dev_protocol.empty()) set("dev_protocol", flags.dev_protocol);
  if (!flags.work_dir.empty()) set("work_dir", flags.work_dir);
  if (!flags.families.empty()) set("families", Join(flags.families));
  if (!flags.dynamics.empty()) set("dynamics", Join(flags.dynamics));
  if (flags.components) set("components", std::to_string(*flags.components));
  if (flags.seed) set("seed", std::to_string(*flags.seed));
  if (flags.workers) set("workers", std::to_string(*flags.workers));
  if (flags.quiet) config.log = [](std::string_view) {};
  return config;
}

void PrintReport(const std::vector<EvalReport> &reports) {
  std::cout << FormatReportText(reports);
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Synthetic speech detection experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", "antispoof 0.1.0");

  Flags flags;
  app.add_option("--config", flags.config_path, "key=value experiment file")
      ->check(CLI::ExistingFile);
  app.add_option("--family", flags.families,
                 "feature families, comma separated or 'all'")
      ->delimiter(',');
  app.add_option("--dynamics", flags.dynamics,
                 "static, static+deltas, deltas; comma separated or 'all'")
      ->delimiter(',');
  app.add_option("--components", flags.components, "GMM components");
  app.add_option("--seed", flags.seed, "GMM initialisation seed");
  app.add_option("--workers", flags.workers, "worker threads");
  app.add_option("--work-dir", flags.work_dir, "experiment work directory");
  app.add_option("--corpus-root", flags.corpus_root, "root of the audio paths");
  app.add_option("--train-protocol", flags.train_protocol, "training protocol");
  app.add_option("--dev-protocol", flags.dev_protocol, "development protocol");
  app.add_option("--set", flags.settings, "extra key=value setting");
  app.add_flag("-q,--quiet", flags.quiet, "suppress progress output");

  auto *learn = app.add_subcommand("learn-warp", "learn the SFCC warp");
  auto *extract = app.add_subcommand("extract", "fill the feature cache");
  auto *train = app.add_subcommand("train", "train natural/synthetic models");
  auto *score = app.add_subcommand("score", "score the dev split");
  std::string natural_model, synthetic_model;
  score->add_option("--natural-model", natural_model,
                    "natural model file instead of the work-dir one");
  score->add_option("--synthetic-model", synthetic_model,
                    "synthetic model file instead of the work-dir one");
  auto *report = app.add_subcommand("report", "per-attack EER table");
  auto *run_all = app.add_subcommand("run-all", "whole pipeline");
  auto *show = app.add_subcommand("show-config", "print the effective config");

  auto *synth = app.add_subcommand("synth-corpus",
                                   "write a procedurally generated corpus");
  std::string synth_out;
  ToyCorpusOptions toy;
  synth->add_option("--out", synth_out, "output directory")->required();
  synth->add_option("--genuine", toy.num_genuine, "genuine utterances per split");
  synth->add_option("--spoof", toy.num_spoof, "spoof utterances per split");
  synth->add_option("--seconds", toy.seconds, "utterance length");
  synth->add_option("--corpus-seed", toy.seed, "generator seed");

  auto *convert = app.add_subcommand(
      "convert-protocol", "convert an ASVspoof 2015 CM protocol");
  std::string convert_in, convert_out, convert_audio = "wav";
  convert->add_option("--in", convert_in, "ASVspoof 2015 protocol")
      ->required()
      ->check(CLI::ExistingFile);
  convert->add_option("--out", convert_out, "output protocol")->required();
  convert->add_option("--audio-dir", convert_audio,
                      "audio directory relative to the corpus root");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    std::cerr << "error: config: " << e.what() << '\n';
    return ExitCode(ErrorCategory::kConfig);
  }

  try {
    if (synth->parsed()) {
      WriteToyCorpus(synth_out, toy);
      return 0;
    }
    if (convert->parsed()) {
      std::ifstream is(convert_in, std::ios::binary);
      if (!is) throw Error(ErrorCategory::kIo, "cannot open " + convert_in);
      const std::string text((std::istreambuf_iterator<char>(is)),
                             std::istreambuf_iterator<char>());
      std::ofstream os(convert_out, std::ios::binary);
      os << ConvertAsvspoof2015Protocol(text, convert_audio);
      if (!os)
        throw Error(ErrorCategory::kIo, "cannot write " + convert_out);
      return 0;
    }

    const ExperimentConfig config = BuildConfig(flags);
    if (show->parsed()) {
      std::cout << FormatConfig(config);
    } else if (learn->parsed()) {
      LearnWarp(config);
    } else if (extract->parsed()) {
      ExtractFeatures(config);
    } else if (train->parsed()) {
      TrainModels(config);
    } else if (score->parsed()) {
      if (natural_model.empty() && synthetic_model.empty()) {
        ScoreAll(config);
      } else {
        if (config.families.size() != 1 || config.dynamics.size() != 1)
          throw Error(ErrorCategory::kConfig,
                      "explicit model files need exactly one --family and "
                      "one --dynamics");
        const FeatureFamily f = config.families[0];
        const Dynamics d = config.dynamics[0];
        const GmmModel nat = ReadGmmFile(
            natural_model.empty() ? ModelPath(config, f, d, Label::kGenuine)
                                  : std::filesystem::path(natural_model));
        const GmmModel syn = ReadGmmFile(
            synthetic_model.empty() ? ModelPath(config, f, d, Label::kSpoof)
                                    : std::filesystem::path(synthetic_model));
        WriteScoreFile(ScorePath(config, f, d), ScoreDev(config, f, d, nat, syn));
      }
    } else if (report->parsed()) {
      PrintReport(MakeReport(config));
    } else if (run_all->parsed()) {
      PrintReport(RunAll(config));
    }
  } catch (const Error &e) {
    std::cerr << "error: " << CategoryName(e.category()) << ": " << e.what()
              << '\n';
    return ExitCode(e.category());
  } catch (const std::exception &e) {
    std::cerr << "error: internal: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
