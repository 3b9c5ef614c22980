// core/src/toy_corpus.cc

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

#include "antispoof/toy_corpus.h"

#include <cmath>
#include <cstdio>
#include <random>

#include "antispoof/error.h"
#include "binary_io.h"

namespace antispoof {

std::vector<ToyUtterance> GenerateToyCorpus(const ToyCorpusOptions &options) {
  if (options.num_genuine < 0 || options.num_spoof < 0 ||
      options.seconds <= 0.0 || options.sample_rate <= 0)
    throw Error(ErrorCategory::kConfig, "bad toy corpus options");
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 1.0);
  const int length =
      static_cast<int>(std::lround(options.seconds * options.sample_rate));

  std::vector<ToyUtterance> out;
  const int total = options.num_genuine + options.num_spoof;
  out.reserve(total);
  int spoof_index = 0;
  for (int i = 0; i < total; ++i) {
    ToyUtterance u;
    const bool genuine = i < options.num_genuine;
    u.label = genuine ? Label::kGenuine : Label::kSpoof;
    double pole;
    if (genuine) {
      pole = 0.85 + 0.10 * unit(rng);
    } else {
      u.attack = static_cast<Attack>(1 + spoof_index++ % kNumAttacks);
      pole = 0.2 + 0.2 * unit(rng);
    }
    const double gain = 0.02 + 0.08 * unit(rng);
    char id[64];
    std::snprintf(id, sizeof(id), "%s_%05d", options.id_prefix.c_str(), i);
    u.audio.utterance_id = id;
    u.audio.sample_rate = options.sample_rate;
    u.audio.samples.resize(length);
    double y = 0.0;
    for (int n = 0; n < length; ++n) {
      y = pole * y + noise(rng);
      u.audio.samples[n] = gain * (1.0 - pole) * y;
    }
    out.push_back(std::move(u));
  }
  return out;
}

void WriteToyCorpus(const std::filesystem::path &root,
                    const ToyCorpusOptions &train_options) {
  ToyCorpusOptions dev_options = train_options;
  dev_options.seed = train_options.seed + 1;
  dev_options.id_prefix = "D";
  for (Split split : {Split::kTrain, Split::kDev}) {
    const ToyCorpusOptions &opts =
        split == Split::kTrain ? train_options : dev_options;
    const std::string dir(SplitName(split));
    std::vector<ProtocolEntry> entries;
    for (const ToyUtterance &u : GenerateToyCorpus(opts)) {
      ProtocolEntry e;
      e.utterance_id = u.audio.utterance_id;
      e.audio_path = dir + "/" + e.utterance_id + ".wav";
      e.label = u.label;
      e.attack = u.attack;
      e.split = split;
      WriteWav(root / e.audio_path, u.audio);
      entries.push_back(std::move(e));
    }
    internal::WriteFileAtomic(root / (dir + ".lst"), FormatProtocol(entries));
  }
}

}  // namespace antispoof
