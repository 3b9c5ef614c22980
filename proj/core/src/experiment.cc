// core/src/experiment.cc

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

#include "antispoof/experiment.h"

#include <algorithm>
#include <charconv>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

#include "antispoof/error.h"
#include "antispoof/parallel.h"
#include "binary_io.h"

namespace antispoof {

namespace {

void Log(const ExperimentConfig &config, const std::string &msg) {
  if (config.log)
    config.log(msg);
  else
    std::cerr << msg << '\n';
}

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> SplitList(std::string_view s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t comma = std::min(s.find(',', pos), s.size());
    std::string item = Trim(s.substr(pos, comma - pos));
    if (!item.empty()) out.push_back(std::move(item));
    pos = comma + 1;
  }
  return out;
}

template <typename T>
T ParseNumber(std::string_view key, std::string_view value) {
  T v{};
  const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size())
    throw Error(ErrorCategory::kConfig, "bad value '" + std::string(value) +
                                            "' for " + std::string(key));
  return v;
}

bool ParseBool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on")
    return true;
  if (value == "false" || value == "0" || value == "no" || value == "off")
    return false;
  throw Error(ErrorCategory::kConfig, "bad boolean '" + std::string(value) +
                                          "' for " + std::string(key));
}

std::string ConfigTag(FeatureFamily family, Dynamics dynamics) {
  std::string dyn(DynamicsName(dynamics));
  std::replace(dyn.begin(), dyn.end(), '+', '_');
  return std::string(FamilyName(family)) + "_" + dyn;
}

bool NeedsWarp(const ExperimentConfig &config) {
  for (FeatureFamily f : config.families) {
    const WarpKind k = RequiredWarpKind(f);
    if (k == WarpKind::kSfcc || k == WarpKind::kInvertedSfcc) return true;
  }
  return false;
}

struct Corpus {
  std::vector<ProtocolEntry> train;
  std::vector<ProtocolEntry> dev;
};

std::vector<ProtocolEntry> LoadSplit(const ExperimentConfig &config,
                                     Split split) {
  const auto &path =
      split == Split::kTrain ? config.train_protocol : config.dev_protocol;
  if (path.empty())
    throw Error(ErrorCategory::kConfig,
                std::string(SplitName(split)) + "_protocol is not set");
  auto entries = ParseProtocol(path, split);
  const ProtocolCounts c = CountProtocol(entries);
  std::ostringstream msg;
  msg << SplitName(split) << " protocol " << path.string() << ": "
      << entries.size() << " utterances, " << c.genuine << " genuine, "
      << c.spoof << " spoof (";
  for (int k = 0; k < kNumAttacks; ++k)
    msg << (k ? " " : "") << "S" << k + 1 << "=" << c.per_attack[k];
  msg << ", untagged=" << c.untagged_spoof << ")";
  Log(config, msg.str());
  return entries;
}

Corpus LoadCorpus(const ExperimentConfig &config, bool need_dev) {
  Corpus corpus;
  corpus.train = LoadSplit(config, Split::kTrain);
  if (need_dev) corpus.dev = LoadSplit(config, Split::kDev);
  std::set<std::string> seen;
  for (const auto *split : {&corpus.train, &corpus.dev})
    for (const ProtocolEntry &e : *split)
      if (!seen.insert(e.utterance_id).second)
        throw Error(ErrorCategory::kInput,
                    "utterance id " + e.utterance_id +
                        " appears more than once across the protocols");
  return corpus;
}

AudioBuffer LoadAudio(const ExperimentConfig &config, const ProtocolEntry &e) {
  AudioBuffer audio = ReadWav(config.corpus_root / e.audio_path);
  audio.utterance_id = e.utterance_id;
  if (audio.sample_rate != config.sample_rate)
    throw Error(ErrorCategory::kInput,
                e.utterance_id + " is sampled at " +
                    std::to_string(audio.sample_rate) + " Hz, corpus is " +
                    std::to_string(config.sample_rate) +
                    " Hz (resampling is not supported)");
  return audio;
}

GmmModel LoadModel(const std::filesystem::path &path) {
  if (!std::filesystem::exists(path))
    throw Error(ErrorCategory::kIo,
                "missing model " + path.string() + "; run train first");
  return ReadGmmFile(path);
}

}  // namespace

// ---------------------------------------------------------------------------
// Config

FeatureConfig ExperimentConfig::FeatureConfigFor(FeatureFamily family,
                                                 Dynamics dyn) const {
  FeatureConfig fc;
  fc.family = family;
  fc.dynamics = dyn;
  fc.num_filters = num_filters;
  fc.num_ceps = num_ceps;
  if (IsBlockFamily(family)) fc.block_spec = block_spec;
  fc.Validate();
  return fc;
}

int ExperimentConfig::fft_size() const {
  const int n = FrameLengthSamples(frontend.frame_ms, sample_rate);
  return frontend.pad_to_power_of_two ? NextPowerOfTwo(n) : n;
}

void ApplyConfigSetting(ExperimentConfig *config, std::string_view key_in,
                        std::string_view value_in,
                        const std::filesystem::path &base_dir) {
  const std::string key = Trim(key_in);
  const std::string value = Trim(value_in);
  auto as_path = [&](const std::string &v) {
    std::filesystem::path p(v);
    return (p.empty() || p.is_absolute() || base_dir.empty()) ? p : base_dir / p;
  };
  if (key == "corpus_root") {
    config->corpus_root = as_path(value);
  } else if (key == "train_protocol") {
    config->train_protocol = as_path(value);
  } else if (key == "dev_protocol") {
    config->dev_protocol = as_path(value);
  } else if (key == "work_dir") {
    config->work_dir = as_path(value);
  } else if (key == "families" || key == "family") {
    std::vector<FeatureFamily> items;
    for (const std::string &item : SplitList(value)) {
      if (item == "all") {
        items.assign(kAllFamilies.begin(), kAllFamilies.end());
      } else {
        items.push_back(ParseFamily(item));
      }
    }
    if (items.empty())
      throw Error(ErrorCategory::kConfig, "families list is empty");
    config->families = std::move(items);
  } else if (key == "dynamics") {
    std::vector<Dynamics> items;
    for (const std::string &item : SplitList(value)) {
      if (item == "all") {
        items.assign(kAllDynamics.begin(), kAllDynamics.end());
      } else {
        items.push_back(ParseDynamics(item));
      }
    }
    if (items.empty())
      throw Error(ErrorCategory::kConfig, "dynamics list is empty");
    config->dynamics = std::move(items);
  } else if (key == "sample_rate") {
    config->sample_rate = ParseNumber<int>(key, value);
  } else if (key == "frame_ms") {
    config->frontend.frame_ms = ParseNumber<double>(key, value);
  } else if (key == "overlap") {
    config->frontend.overlap_fraction = ParseNumber<double>(key, value);
  } else if (key == "pad_to_power_of_two") {
    config->frontend.pad_to_power_of_two = ParseBool(key, value);
  } else if (key == "pre_emphasis") {
    config->frontend.pre_emphasis = ParseBool(key, value);
  } else if (key == "pre_emphasis_coeff") {
    config->frontend.pre_emphasis_coeff = ParseNumber<double>(key, value);
  } else if (key == "num_filters") {
    config->num_filters = ParseNumber<int>(key, value);
  } else if (key == "num_ceps") {
    config->num_ceps = ParseNumber<int>(key, value);
  } else if (key == "blocks") {
    config->block_spec = ParseBlockSpec(value);
  } else if (key == "warp_source") {
    if (value == "all")
      config->warp_source = WarpSource::kAllTraining;
    else if (value == "genuine")
      config->warp_source = WarpSource::kGenuineOnly;
    else
      throw Error(ErrorCategory::kConfig,
                  "warp_source must be 'all' or 'genuine'");
  } else if (key == "components") {
    config->training.num_components = ParseNumber<int>(key, value);
  } else if (key == "em_iterations") {
    config->training.num_iterations = ParseNumber<int>(key, value);
  } else if (key == "seed") {
    config->training.seed = ParseNumber<std::uint64_t>(key, value);
  } else if (key == "variance_floor") {
    config->training.variance_floor_factor = ParseNumber<double>(key, value);
  } else if (key == "workers") {
    config->workers = ParseNumber<int>(key, value);
    if (config->workers < 1)
      throw Error(ErrorCategory::kConfig, "workers must be >= 1");
  } else {
    throw Error(ErrorCategory::kConfig,
                "unknown config key '" + key + "'");
  }
}

void LoadConfigFile(ExperimentConfig *config,
                    const std::filesystem::path &path) {
  const std::string text = internal::ReadFileBytes(path);
  const std::filesystem::path base = path.parent_path();
  std::istringstream is(text);
  std::string line;
  for (int line_no = 1; std::getline(is, line); ++line_no) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (Trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCategory::kConfig,
                  path.string() + ":" + std::to_string(line_no) +
                      ": expected key = value");
    try {
      ApplyConfigSetting(config, line.substr(0, eq), line.substr(eq + 1), base);
    } catch (const Error &e) {
      throw Error(e.category(), path.string() + ":" + std::to_string(line_no) +
                                    ": " + e.what());
    }
  }
}

std::string FormatConfig(const ExperimentConfig &config) {
  std::ostringstream os;
  os << "corpus_root = " << config.corpus_root.string() << '\n'
     << "train_protocol = " << config.train_protocol.string() << '\n'
     << "dev_protocol = " << config.dev_protocol.string() << '\n'
     << "work_dir = " << config.work_dir.string() << '\n';
  os << "families = ";
  for (std::size_t i = 0; i < config.families.size(); ++i)
    os << (i ? "," : "") << FamilyName(config.families[i]);
  os << "\ndynamics = ";
  for (std::size_t i = 0; i < config.dynamics.size(); ++i)
    os << (i ? "," : "") << DynamicsName(config.dynamics[i]);
  os << "\nsample_rate = " << config.sample_rate << '\n'
     << "frame_ms = " << config.frontend.frame_ms << '\n'
     << "overlap = " << config.frontend.overlap_fraction << '\n'
     << "pad_to_power_of_two = "
     << (config.frontend.pad_to_power_of_two ? "true" : "false") << '\n'
     << "pre_emphasis = " << (config.frontend.pre_emphasis ? "true" : "false")
     << '\n'
     << "pre_emphasis_coeff = " << config.frontend.pre_emphasis_coeff << '\n'
     << "num_filters = " << config.num_filters << '\n'
     << "num_ceps = " << config.num_ceps << '\n'
     << "blocks = " << FormatBlockSpec(config.block_spec) << '\n'
     << "warp_source = "
     << (config.warp_source == WarpSource::kAllTraining ? "all" : "genuine")
     << '\n'
     << "components = " << config.training.num_components << '\n'
     << "em_iterations = " << config.training.num_iterations << '\n'
     << "seed = " << config.training.seed << '\n'
     << "variance_floor = " << config.training.variance_floor_factor << '\n'
     << "workers = " << config.workers << '\n';
  return os.str();
}

std::filesystem::path WarpPath(const ExperimentConfig &config) {
  return config.work_dir / "sfcc.warp";
}

std::filesystem::path CacheDir(const ExperimentConfig &config) {
  return config.work_dir / "cache";
}

std::filesystem::path ModelPath(const ExperimentConfig &config,
                                FeatureFamily family, Dynamics dynamics,
                                Label label) {
  return config.work_dir / "models" /
         (ConfigTag(family, dynamics) +
          (label == Label::kGenuine ? ".natural.gmm" : ".synthetic.gmm"));
}

std::filesystem::path ScorePath(const ExperimentConfig &config,
                                FeatureFamily family, Dynamics dynamics) {
  return config.work_dir / "scores" / (ConfigTag(family, dynamics) + ".tsv");
}

// ---------------------------------------------------------------------------
// learn-warp

WarpingFunction LearnWarp(const ExperimentConfig &config) {
  const Corpus corpus = LoadCorpus(config, /*need_dev=*/false);
  std::vector<const ProtocolEntry *> use;
  for (const ProtocolEntry &e : corpus.train)
    if (config.warp_source == WarpSource::kAllTraining ||
        e.label == Label::kGenuine)
      use.push_back(&e);
  if (use.empty())
    throw Error(ErrorCategory::kData,
                "training split is empty; cannot learn the warp");

  const int fft_size = config.fft_size();
  std::vector<EnsembleSpectrum> partial(use.size());
  ParallelFor(static_cast<int>(use.size()), config.workers, [&](int i) {
    const AudioBuffer audio = LoadAudio(config, *use[i]);
    partial[i] = EnsembleSpectrum(fft_size, config.sample_rate);
    partial[i].Accumulate(ComputePowerSpectra(audio, config.frontend));
  });
  EnsembleSpectrum ensemble(fft_size, config.sample_rate);
  for (const EnsembleSpectrum &p : partial) ensemble.Merge(p);

  const WarpingFunction warp = EstimateSfccWarp(ensemble, config.num_filters);
  std::filesystem::create_directories(config.work_dir);
  WriteWarpFile(WarpPath(config), warp);
  Log(config, "learned warp from " + std::to_string(use.size()) +
                  " utterances (" + std::to_string(ensemble.num_frames()) +
                  " frames) -> " + WarpPath(config).string());
  return warp;
}

// ---------------------------------------------------------------------------
// extract

ExtractSummary ExtractFeatures(const ExperimentConfig &config) {
  const Corpus corpus = LoadCorpus(config, /*need_dev=*/true);
  const int fft_size = config.fft_size();

  std::map<WarpKind, FilterBank> banks;
  for (FeatureFamily family : config.families) {
    const WarpKind kind = RequiredWarpKind(family);
    if (banks.count(kind)) continue;
    WarpingFunction warp;
    if (kind == WarpKind::kMel || kind == WarpKind::kInvertedMel) {
      warp = MelWarp(config.num_filters, config.sample_rate);
    } else {
      const auto path = WarpPath(config);
      if (!std::filesystem::exists(path))
        throw Error(ErrorCategory::kIo,
                    "missing warp file " + path.string() +
                        "; run learn-warp before extracting " +
                        std::string(FamilyName(family)) + " features");
      warp = ReadWarpFile(path);
      if (warp.sample_rate != config.sample_rate ||
          warp.num_filters() != config.num_filters)
        throw Error(ErrorCategory::kConfig,
                    "warp file " + path.string() +
                        " does not match the configured sample rate and "
                        "filter count; rerun learn-warp");
    }
    if (kind == WarpKind::kInvertedMel || kind == WarpKind::kInvertedSfcc)
      warp = InvertWarp(warp);
    banks.emplace(kind, BuildWarpedFilterBank(warp, fft_size));
  }

  std::vector<const ProtocolEntry *> entries;
  for (const auto *split : {&corpus.train, &corpus.dev})
    for (const ProtocolEntry &e : *split) entries.push_back(&e);

  FeatureCache cache(CacheDir(config));
  std::vector<ExtractSummary> per_utt(entries.size());
  constexpr int kBatch = 64;
  for (std::size_t begin = 0; begin < entries.size(); begin += kBatch) {
    const int count =
        static_cast<int>(std::min<std::size_t>(kBatch, entries.size() - begin));
    ParallelFor(count, config.workers, [&](int k) {
      const ProtocolEntry &e = *entries[begin + k];
      ExtractSummary &s = per_utt[begin + k];
      std::vector<FeatureConfig> todo;
      for (FeatureFamily family : config.families) {
        for (Dynamics dyn : config.dynamics) {
          const FeatureCache::Key key{e.utterance_id, family, dyn};
          if (cache.IsValid(key)) {
            ++s.reused;
          } else {
            if (cache.Contains(key))
              ++s.repaired;
            else
              ++s.computed;
            todo.push_back(config.FeatureConfigFor(family, dyn));
          }
        }
      }
      if (todo.empty()) return;
      const AudioBuffer audio = LoadAudio(config, e);
      const PowerSpectrumSequence spectra =
          ComputePowerSpectra(audio, config.frontend);
      for (const FeatureConfig &fc : todo)
        cache.Store(Extract(spectra, fc, banks.at(RequiredWarpKind(fc.family)),
                            e.utterance_id));
    });
    cache.SaveManifest();
  }

  ExtractSummary total;
  for (const ExtractSummary &s : per_utt) {
    total.computed += s.computed;
    total.reused += s.reused;
    total.repaired += s.repaired;
  }
  Log(config, "extract: " + std::to_string(entries.size()) + " utterances, " +
                  std::to_string(total.computed) + " computed, " +
                  std::to_string(total.reused) + " reused, " +
                  std::to_string(total.repaired) + " repaired");
  return total;
}

// ---------------------------------------------------------------------------
// train

void TrainModels(const ExperimentConfig &config) {
  const Corpus corpus = LoadCorpus(config, /*need_dev=*/false);
  const FeatureCache cache(CacheDir(config));
  for (FeatureFamily family : config.families) {
    for (Dynamics dyn : config.dynamics) {
      const int dim = config.FeatureConfigFor(family, dyn).feature_dim();
      for (Label label : {Label::kGenuine, Label::kSpoof}) {
        std::vector<const ProtocolEntry *> use;
        for (const ProtocolEntry &e : corpus.train)
          if (e.label == label) use.push_back(&e);
        std::vector<FeatureMatrix> feats(use.size());
        ParallelFor(static_cast<int>(use.size()), config.workers, [&](int i) {
          feats[i] = cache.Load({use[i]->utterance_id, family, dyn});
        });
        Eigen::Index rows = 0;
        for (const FeatureMatrix &f : feats) {
          if (f.dim() != dim)
            throw Error(ErrorCategory::kCorruption,
                        "cached features for " + f.utterance_id + " have " +
                            std::to_string(f.dim()) + " columns, expected " +
                            std::to_string(dim));
          rows += f.num_frames();
        }
        Matrix pooled(rows, dim);
        Eigen::Index at = 0;
        for (const FeatureMatrix &f : feats) {
          pooled.middleRows(at, f.num_frames()) = f.values;
          at += f.num_frames();
        }

        const std::string what = std::string(FamilyName(family)) + "/" +
                                 std::string(DynamicsName(dyn)) + " " +
                                 (label == Label::kGenuine ? "natural"
                                                           : "synthetic");
        if (rows < config.training.num_components)
          throw Error(ErrorCategory::kData,
                      what + " model: " + std::to_string(rows) +
                          " training frames for " +
                          std::to_string(config.training.num_components) +
                          " components, short by " +
                          std::to_string(config.training.num_components - rows));
        TrainingOptions opts = config.training;
        opts.num_workers = config.workers;
        const TrainingResult result =
            TrainGmm(pooled, opts, FeatureFingerprint{family, dyn});
        WriteGmmFile(ModelPath(config, family, dyn, label), result.model);
        std::ostringstream msg;
        msg << "trained " << what << " model on " << use.size()
            << " utterances (" << rows << " frames), avg log-likelihood "
            << result.log_likelihood.front() << " -> "
            << result.log_likelihood.back();
        if (result.reseeded_components)
          msg << ", " << result.reseeded_components << " reseeds";
        Log(config, msg.str());
      }
    }
  }
}

// ---------------------------------------------------------------------------
// score / report

ScoreSet ScoreDev(const ExperimentConfig &config, FeatureFamily family,
                  Dynamics dynamics, const GmmModel &natural,
                  const GmmModel &synthetic) {
  std::vector<ProtocolEntry> dev = LoadSplit(config, Split::kDev);
  std::sort(dev.begin(), dev.end(), [](const auto &a, const auto &b) {
    return a.utterance_id < b.utterance_id;
  });
  const FeatureCache cache(CacheDir(config));
  ScoreSet scores;
  scores.entries.resize(dev.size());
  ParallelFor(static_cast<int>(dev.size()), config.workers, [&](int i) {
    const ProtocolEntry &e = dev[i];
    const FeatureMatrix f = cache.Load({e.utterance_id, family, dynamics});
    scores.entries[i] = ScoreEntry{e.utterance_id,
                                   LlrScore(f, natural, synthetic), e.label,
                                   e.attack};
  });
  return scores;
}

void ScoreAll(const ExperimentConfig &config) {
  for (FeatureFamily family : config.families) {
    for (Dynamics dyn : config.dynamics) {
      const GmmModel natural =
          LoadModel(ModelPath(config, family, dyn, Label::kGenuine));
      const GmmModel synthetic =
          LoadModel(ModelPath(config, family, dyn, Label::kSpoof));
      const ScoreSet scores = ScoreDev(config, family, dyn, natural, synthetic);
      WriteScoreFile(ScorePath(config, family, dyn), scores);
      Log(config, "scored " + std::to_string(scores.entries.size()) + " dev "
                  "trials for " + std::string(FamilyName(family)) + "/" +
                  std::string(DynamicsName(dyn)) + " -> " +
                  ScorePath(config, family, dyn).string());
    }
  }
}

std::vector<EvalReport> MakeReport(const ExperimentConfig &config) {
  std::vector<EvalReport> reports;
  for (FeatureFamily family : config.families) {
    for (Dynamics dyn : config.dynamics) {
      const auto path = ScorePath(config, family, dyn);
      if (!std::filesystem::exists(path))
        throw Error(ErrorCategory::kIo,
                    "missing score file " + path.string() + "; run score first");
      reports.push_back(PerAttackReport(ReadScoreFile(path), family, dyn));
    }
  }
  internal::WriteFileAtomic(config.work_dir / "report.tsv",
                            FormatReportTsv(reports));
  internal::WriteFileAtomic(config.work_dir / "report.txt",
                            FormatReportText(reports));
  return reports;
}

std::vector<EvalReport> RunAll(const ExperimentConfig &config) {
  if (NeedsWarp(config)) LearnWarp(config);
  ExtractFeatures(config);
  TrainModels(config);
  ScoreAll(config);
  return MakeReport(config);
}

}  // namespace antispoof
