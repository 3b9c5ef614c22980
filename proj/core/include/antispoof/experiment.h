// core/include/antispoof/experiment.h

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

// The experiment lifecycle behind the command-line tool: learn the SFCC
// warp, extract and cache features, train the two class models, score the
// dev split and tabulate per-attack EERs. Everything lives under one work
// directory:
//
//   <work>/sfcc.warp
//   <work>/cache/manifest.tsv, <work>/cache/<FAMILY>/<dynamics>/<utt>.ftr
//   <work>/models/<FAMILY>_<dynamics>.{natural,synthetic}.gmm
//   <work>/scores/<FAMILY>_<dynamics>.tsv
//   <work>/report.tsv, <work>/report.txt

#ifndef ANTISPOOF_EXPERIMENT_H_
#define ANTISPOOF_EXPERIMENT_H_

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "antispoof/corpus.h"
#include "antispoof/eval.h"
#include "antispoof/features.h"
#include "antispoof/frontend.h"
#include "antispoof/gmm.h"
#include "antispoof/warping.h"

namespace antispoof {

enum class WarpSource { kAllTraining, kGenuineOnly };

struct ExperimentConfig {
  std::filesystem::path corpus_root = ".";
  std::filesystem::path train_protocol;
  std::filesystem::path dev_protocol;
  std::filesystem::path work_dir = "work";

  std::vector<FeatureFamily> families = {kAllFamilies.begin(),
                                         kAllFamilies.end()};
  std::vector<Dynamics> dynamics = {kAllDynamics.begin(), kAllDynamics.end()};

  int sample_rate = 16000;
  FrontendOptions frontend;
  int num_filters = 20;
  int num_ceps = 20;
  BlockSpec block_spec = DefaultBlockSpec();
  WarpSource warp_source = WarpSource::kAllTraining;

  TrainingOptions training;
  int workers = 1;

  /// Progress and count reconciliation lines; stderr when unset.
  std::function<void(std::string_view)> log;

  FeatureConfig FeatureConfigFor(FeatureFamily family, Dynamics dynamics) const;
  int fft_size() const;
};

/// Applies one `key = value` setting. Unknown keys and malformed values
/// throw kConfig. Relative paths are resolved against `base_dir`.
void ApplyConfigSetting(ExperimentConfig *config, std::string_view key,
                        std::string_view value,
                        const std::filesystem::path &base_dir = {});

/// Reads a key=value file ('#' starts a comment) on top of `config`.
void LoadConfigFile(ExperimentConfig *config,
                    const std::filesystem::path &path);

/// Canonical key=value rendering of the configuration.
std::string FormatConfig(const ExperimentConfig &config);

std::filesystem::path WarpPath(const ExperimentConfig &config);
std::filesystem::path CacheDir(const ExperimentConfig &config);
std::filesystem::path ModelPath(const ExperimentConfig &config,
                                FeatureFamily family, Dynamics dynamics,
                                Label label);
std::filesystem::path ScorePath(const ExperimentConfig &config,
                                FeatureFamily family, Dynamics dynamics);

/// Accumulates the ensemble spectrum over the training split and writes the
/// equal-area warp. Throws kData when the split is empty.
WarpingFunction LearnWarp(const ExperimentConfig &config);

struct ExtractSummary {
  long long computed = 0;  // entries that had no valid cache file
  long long reused = 0;    // digest-valid entries left untouched
  long long repaired = 0;  // entries whose file failed its digest
};

/// Fills the feature cache for every (utterance, family, dynamics) of both
/// splits. Valid entries are skipped, corrupt ones recomputed.
ExtractSummary ExtractFeatures(const ExperimentConfig &config);

/// Trains the natural model on genuine training frames and the synthetic
/// model on spoof training frames, for every configured family/dynamics.
void TrainModels(const ExperimentConfig &config);

/// Log-likelihood-ratio scores of every dev utterance, ordered by id.
ScoreSet ScoreDev(const ExperimentConfig &config, FeatureFamily family,
                  Dynamics dynamics, const GmmModel &natural,
                  const GmmModel &synthetic);

/// ScoreDev with the stored models, for every configured family/dynamics;
/// writes the score files.
void ScoreAll(const ExperimentConfig &config);

/// Builds the report from the score files and writes report.tsv/.txt.
std::vector<EvalReport> MakeReport(const ExperimentConfig &config);

/// Whole pipeline. The warp is only learned when an SFCC-based family is
/// requested.
std::vector<EvalReport> RunAll(const ExperimentConfig &config);

}  // namespace antispoof

#endif  // ANTISPOOF_EXPERIMENT_H_
