// core/include/antispoof/eval.h

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

#ifndef ANTISPOOF_EVAL_H_
#define ANTISPOOF_EVAL_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "antispoof/features.h"

namespace antispoof {

enum class Label : std::uint8_t { kGenuine, kSpoof };

/// Spoofing method tag; kNone for genuine speech and untagged spoofs.
enum class Attack : std::uint8_t { kNone = 0, kS1, kS2, kS3, kS4, kS5 };

inline constexpr int kNumAttacks = 5;

std::string_view LabelName(Label label);     // "genuine" / "spoof"
std::string_view AttackName(Attack attack);  // "S1".."S5" / "-"
/// Accepts "S1".."S5" and "-". Throws kInput ("unknown attack tag").
Attack ParseAttack(std::string_view text);

struct ScoreEntry {
  std::string utterance_id;
  double score = 0.0;
  Label label = Label::kGenuine;
  Attack attack = Attack::kNone;
};

struct ScoreSet {
  std::vector<ScoreEntry> entries;
};

struct RocPoint {
  double pmiss = 0.0;
  double pfa = 0.0;
};

/// Vertices of the ROC convex hull from (Pmiss, Pfa) = (0, 1) to (1, 0).
/// Pmiss is the fraction of genuine trials scored below the threshold, Pfa
/// the fraction of spoof trials at or above it. The integer counts behind
/// every vertex are kept so that vertices can be compared exactly.
struct RocchCurve {
  std::vector<RocPoint> vertices;
  std::vector<long long> miss_counts;
  std::vector<long long> fa_counts;
  long long num_genuine = 0;
  long long num_spoof = 0;
};

/// ROCCH by pool-adjacent-violators on the genuine/spoof labels sorted by
/// score. Trials with equal scores always land in one pool, and adjacent
/// pools with equal genuine fraction are merged, so only true corners of the
/// hull are returned. Throws kData if either class is empty.
RocchCurve Rocch(std::span<const double> genuine_scores,
                 std::span<const double> spoof_scores);
RocchCurve Rocch(const ScoreSet &scores);

/// Where the hull crosses Pmiss == Pfa, in percent.
double EerFromRocch(const RocchCurve &curve);

/// Convenience: EerFromRocch(Rocch(genuine, spoof)).
double ComputeEer(std::span<const double> genuine_scores,
                  std::span<const double> spoof_scores);

/// One row of the results table.
struct EvalReport {
  FeatureFamily family = FeatureFamily::kMfcc;
  Dynamics dynamics = Dynamics::kStatic;
  std::array<std::optional<double>, kNumAttacks> eer_percent;  // S1..S5
  std::optional<double> average;
};

/// Unweighted mean of the cells that are present; nullopt if none are.
std::optional<double> AverageEer(
    std::span<const std::optional<double>> cells);

/// EER of all genuine trials against the spoof trials of each attack.
/// Attacks without trials are left empty rather than reported as zero.
EvalReport PerAttackReport(const ScoreSet &scores, FeatureFamily family,
                           Dynamics dynamics);

// Score file: TSV rows `utt_id  score  genuine|spoof  S1..S5|-`.
void WriteScoreFile(const std::filesystem::path &path, const ScoreSet &scores);
ScoreSet ReadScoreFile(const std::filesystem::path &path);

// Report TSV: header `feature type S1 S2 S3 S4 S5 Avg`, one row per report,
// EERs in percent with three decimals, "-" for empty cells.
std::string FormatReportTsv(std::span<const EvalReport> reports);
/// Same table with aligned columns for reading on a terminal.
std::string FormatReportText(std::span<const EvalReport> reports);
std::vector<EvalReport> ParseReportTsv(std::string_view text);

}  // namespace antispoof

#endif  // ANTISPOOF_EVAL_H_
