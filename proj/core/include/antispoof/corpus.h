// core/include/antispoof/corpus.h

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

#ifndef ANTISPOOF_CORPUS_H_
#define ANTISPOOF_CORPUS_H_

#include <array>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "antispoof/eval.h"
#include "antispoof/features.h"
#include "antispoof/frontend.h"

namespace antispoof {

/// Reads a RIFF/WAVE file holding 16-bit PCM mono audio. Samples are scaled
/// by 1/32768. Any other encoding, bit depth or channel count is rejected
/// with a kInput error naming the offending property.
AudioBuffer ReadWav(const std::filesystem::path &path);

/// Writes 16-bit PCM mono; samples are clipped to [-1, 1) and rounded.
void WriteWav(const std::filesystem::path &path, const AudioBuffer &audio);

enum class Split : std::uint8_t { kTrain, kDev };

std::string_view SplitName(Split split);

struct ProtocolEntry {
  std::string utterance_id;
  std::string audio_path;  // relative to the corpus root
  Label label = Label::kGenuine;
  Attack attack = Attack::kNone;
  Split split = Split::kTrain;
};

/// Protocol lines are `utt_id audio_path human|spoof S1..S5|-`, separated by
/// tabs or spaces. Blank lines and lines starting with '#' are skipped.
/// Errors carry the line number.
std::vector<ProtocolEntry> ParseProtocolText(std::string_view text,
                                             Split split,
                                             std::string_view source = "protocol");
std::vector<ProtocolEntry> ParseProtocol(const std::filesystem::path &path,
                                         Split split);

std::string FormatProtocol(std::span<const ProtocolEntry> entries);

struct ProtocolCounts {
  long long genuine = 0;
  long long spoof = 0;
  long long untagged_spoof = 0;
  std::array<long long, kNumAttacks> per_attack{};
};

ProtocolCounts CountProtocol(std::span<const ProtocolEntry> entries);

/// Converts an ASVspoof 2015 CM protocol (`speaker utt_id - attack key`,
/// attack "human" or S1..S10, key "human" or "spoof") to the protocol format
/// above, with audio at `<audio_dir>/<utt_id>.wav`. Attacks beyond S5 are
/// rejected since they only occur in the evaluation part of that corpus.
std::string ConvertAsvspoof2015Protocol(std::string_view text,
                                        std::string_view audio_dir);

/// Lower-case hex SHA-256.
std::string Sha256Hex(std::string_view bytes);

/// Feature files on disk plus a manifest of their digests. Files live at
/// `<root>/<family>/<dynamics>/<utt_id>.ftr`; the manifest is
/// `<root>/manifest.tsv` with rows `utt_id family_id dynamics_id path
/// digest`. All members may be called from several threads.
class FeatureCache {
 public:
  explicit FeatureCache(std::filesystem::path root);

  struct Key {
    std::string utterance_id;
    FeatureFamily family;
    Dynamics dynamics;
    auto operator<=>(const Key &) const = default;
  };

  const std::filesystem::path &root() const { return root_; }
  std::filesystem::path PathFor(const Key &key) const;

  /// True when the manifest lists the key, whatever the state of the file.
  bool Contains(const Key &key) const;

  /// True when the manifest lists the key and the file on disk still
  /// matches the recorded digest.
  bool IsValid(const Key &key) const;

  /// Reads the entry, verifying its digest. Throws kIo when it is not in the
  /// manifest and kCorruption when the file no longer matches.
  FeatureMatrix Load(const Key &key) const;

  /// Writes the file atomically and records its digest. The manifest on
  /// disk is only updated by SaveManifest().
  void Store(const FeatureMatrix &features);

  void SaveManifest() const;
  std::size_t size() const;

 private:
  struct Record {
    std::string relative_path;
    std::string digest;
  };

  void LoadManifest();

  std::filesystem::path root_;
  mutable std::mutex mu_;
  std::map<Key, Record> records_;
};

}  // namespace antispoof

#endif  // ANTISPOOF_CORPUS_H_
