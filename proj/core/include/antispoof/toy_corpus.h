// core/include/antispoof/toy_corpus.h

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

// Procedurally generated two-class audio for smoke tests and the synthetic
// end-to-end check. "Genuine" utterances are white noise through a one-pole
// low-pass with a steep spectral tilt, "spoof" utterances use a much flatter
// tilt. Attack tags S1..S5 are assigned round-robin to spoof utterances.

#ifndef ANTISPOOF_TOY_CORPUS_H_
#define ANTISPOOF_TOY_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "antispoof/corpus.h"
#include "antispoof/frontend.h"

namespace antispoof {

struct ToyCorpusOptions {
  int num_genuine = 200;
  int num_spoof = 200;
  double seconds = 0.5;
  int sample_rate = 16000;
  std::uint64_t seed = 1;
  std::string id_prefix = "T";
};

struct ToyUtterance {
  AudioBuffer audio;
  Label label = Label::kGenuine;
  Attack attack = Attack::kNone;
};

std::vector<ToyUtterance> GenerateToyCorpus(const ToyCorpusOptions &options);

/// Writes train and dev WAVs under `root` plus `root/train.lst` and
/// `root/dev.lst`. The dev half uses seed + 1 and id prefix "D".
void WriteToyCorpus(const std::filesystem::path &root,
                    const ToyCorpusOptions &train_options);

}  // namespace antispoof

#endif  // ANTISPOOF_TOY_CORPUS_H_
