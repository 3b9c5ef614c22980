// core/src/eval.cc

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

#include "antispoof/eval.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "antispoof/error.h"
#include "binary_io.h"

namespace antispoof {

std::string_view LabelName(Label label) {
  return label == Label::kGenuine ? "genuine" : "spoof";
}

std::string_view AttackName(Attack attack) {
  static constexpr std::array<std::string_view, 6> kNames = {
      "-", "S1", "S2", "S3", "S4", "S5"};
  return kNames[static_cast<int>(attack)];
}

Attack ParseAttack(std::string_view text) {
  if (text == "-") return Attack::kNone;
  if (text.size() == 2 && text[0] == 'S' && text[1] >= '1' && text[1] <= '5')
    return static_cast<Attack>(text[1] - '0');
  throw Error(ErrorCategory::kInput,
              "unknown attack tag '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// ROCCH

namespace {

struct Pool {
  long long genuine = 0;
  long long spoof = 0;
};

// genuine fraction of a <= genuine fraction of b, exactly.
bool FractionLessEqual(const Pool &a, const Pool &b) {
  return a.genuine * (b.genuine + b.spoof) <= b.genuine * (a.genuine + a.spoof);
}

}  // namespace

RocchCurve Rocch(std::span<const double> genuine_scores,
                 std::span<const double> spoof_scores) {
  if (genuine_scores.empty() || spoof_scores.empty())
    throw Error(ErrorCategory::kData,
                "EER needs both genuine and spoof trials");

  std::vector<std::pair<double, bool>> trials;  // (score, is_genuine)
  trials.reserve(genuine_scores.size() + spoof_scores.size());
  for (double s : genuine_scores) trials.emplace_back(s, true);
  for (double s : spoof_scores) trials.emplace_back(s, false);
  for (const auto &t : trials)
    if (std::isnan(t.first))
      throw Error(ErrorCategory::kInput, "score is NaN");
  std::sort(trials.begin(), trials.end(),
            [](const auto &a, const auto &b) { return a.first < b.first; });

  // Pool adjacent violators on the genuine indicator. Each run of equal
  // scores enters as a single pool; a pool is merged into its predecessor
  // while the predecessor's genuine fraction is not strictly smaller.
  std::vector<Pool> pools;
  for (std::size_t i = 0; i < trials.size();) {
    Pool tie;
    std::size_t j = i;
    for (; j < trials.size() && trials[j].first == trials[i].first; ++j)
      (trials[j].second ? tie.genuine : tie.spoof) += 1;
    i = j;
    pools.push_back(tie);
    while (pools.size() >= 2) {
      const Pool &prev = pools[pools.size() - 2];
      const Pool &last = pools.back();
      // Strictly increasing fractions are kept apart.
      if (FractionLessEqual(prev, last) && !FractionLessEqual(last, prev)) break;
      Pool merged{prev.genuine + last.genuine, prev.spoof + last.spoof};
      pools.pop_back();
      pools.back() = merged;
    }
  }

  RocchCurve curve;
  curve.num_genuine = static_cast<long long>(genuine_scores.size());
  curve.num_spoof = static_cast<long long>(spoof_scores.size());
  long long miss = 0;
  long long fa = curve.num_spoof;
  auto emit = [&] {
    curve.miss_counts.push_back(miss);
    curve.fa_counts.push_back(fa);
    curve.vertices.push_back(
        {static_cast<double>(miss) / static_cast<double>(curve.num_genuine),
         static_cast<double>(fa) / static_cast<double>(curve.num_spoof)});
  };
  emit();
  for (const Pool &p : pools) {
    miss += p.genuine;
    fa -= p.spoof;
    emit();
  }
  return curve;
}

RocchCurve Rocch(const ScoreSet &scores) {
  std::vector<double> genuine, spoof;
  for (const ScoreEntry &e : scores.entries)
    (e.label == Label::kGenuine ? genuine : spoof).push_back(e.score);
  return Rocch(genuine, spoof);
}

double EerFromRocch(const RocchCurve &curve) {
  const auto &v = curve.vertices;
  if (v.size() < 2)
    throw Error(ErrorCategory::kData, "ROC hull has fewer than two vertices");
  // pfa - pmiss runs from +1 at the first vertex to -1 at the last; find
  // the segment where it changes sign.
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const double d0 = v[i].pfa - v[i].pmiss;
    const double d1 = v[i + 1].pfa - v[i + 1].pmiss;
    if (d0 == 0.0) return 100.0 * v[i].pmiss;
    if (d1 == 0.0) return 100.0 * v[i + 1].pmiss;
    if (d0 > 0.0 && d1 < 0.0) {
      const double t = d0 / (d0 - d1);
      return 100.0 * (v[i].pmiss + t * (v[i + 1].pmiss - v[i].pmiss));
    }
  }
  throw Error(ErrorCategory::kData, "ROC hull never crosses the EER line");
}

double ComputeEer(std::span<const double> genuine_scores,
                  std::span<const double> spoof_scores) {
  return EerFromRocch(Rocch(genuine_scores, spoof_scores));
}

// ---------------------------------------------------------------------------
// Reports

std::optional<double> AverageEer(
    std::span<const std::optional<double>> cells) {
  double sum = 0.0;
  int count = 0;
  for (const auto &c : cells) {
    if (!c) continue;
    sum += *c;
    ++count;
  }
  if (count == 0) return std::nullopt;
  return sum / count;
}

EvalReport PerAttackReport(const ScoreSet &scores, FeatureFamily family,
                           Dynamics dynamics) {
  std::vector<double> genuine;
  std::array<std::vector<double>, kNumAttacks> spoof;
  for (const ScoreEntry &e : scores.entries) {
    if (e.label == Label::kGenuine) {
      genuine.push_back(e.score);
    } else {
      if (e.attack == Attack::kNone)
        throw Error(ErrorCategory::kInput,
                    "spoof trial " + e.utterance_id + " has no attack tag");
      spoof[static_cast<int>(e.attack) - 1].push_back(e.score);
    }
  }
  if (genuine.empty())
    throw Error(ErrorCategory::kData, "report needs genuine trials");

  EvalReport report;
  report.family = family;
  report.dynamics = dynamics;
  for (int k = 0; k < kNumAttacks; ++k)
    if (!spoof[k].empty()) report.eer_percent[k] = ComputeEer(genuine, spoof[k]);
  report.average = AverageEer(report.eer_percent);
  return report;
}

// ---------------------------------------------------------------------------
// Files

namespace {

std::string ShortestDouble(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string Cell(const std::optional<double> &v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", *v);
  return buf;
}

std::vector<std::string> SplitFields(const std::string &line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  for (std::string f; is >> f;) out.push_back(f);
  return out;
}

double ParseDouble(const std::string &text, const std::string &where) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw Error(ErrorCategory::kInput, where + ": bad number '" + text + "'");
  return v;
}

}  // namespace

void WriteScoreFile(const std::filesystem::path &path, const ScoreSet &scores) {
  std::string text;
  for (const ScoreEntry &e : scores.entries) {
    text += e.utterance_id;
    text += '\t';
    text += ShortestDouble(e.score);
    text += '\t';
    text += LabelName(e.label);
    text += '\t';
    text += AttackName(e.attack);
    text += '\n';
  }
  internal::WriteFileAtomic(path, text);
}

ScoreSet ReadScoreFile(const std::filesystem::path &path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCategory::kIo, "cannot open " + path.string());
  ScoreSet out;
  std::string line;
  for (int line_no = 1; std::getline(is, line); ++line_no) {
    const auto fields = SplitFields(line);
    if (fields.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (fields.size() != 4)
      throw Error(ErrorCategory::kInput, where + ": expected 4 fields");
    ScoreEntry e;
    e.utterance_id = fields[0];
    e.score = ParseDouble(fields[1], where);
    if (fields[2] == "genuine")
      e.label = Label::kGenuine;
    else if (fields[2] == "spoof")
      e.label = Label::kSpoof;
    else
      throw Error(ErrorCategory::kInput,
                  where + ": unknown label '" + fields[2] + "'");
    e.attack = ParseAttack(fields[3]);
    out.entries.push_back(std::move(e));
  }
  return out;
}

std::string FormatReportTsv(std::span<const EvalReport> reports) {
  std::string out = "feature\ttype\tS1\tS2\tS3\tS4\tS5\tAvg\n";
  for (const EvalReport &r : reports) {
    out += FamilyName(r.family);
    out += '\t';
    out += DynamicsName(r.dynamics);
    for (const auto &c : r.eer_percent) out += "\t" + Cell(c);
    out += "\t" + Cell(r.average) + "\n";
  }
  return out;
}

std::string FormatReportText(std::span<const EvalReport> reports) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-8s %-14s %8s %8s %8s %8s %8s %8s\n",
                "Feature", "Type", "S1", "S2", "S3", "S4", "S5", "Avg.");
  out += buf;
  out += std::string(79, '-') + "\n";
  for (const EvalReport &r : reports) {
    std::snprintf(buf, sizeof(buf), "%-8s %-14s", FamilyName(r.family).data(),
                  DynamicsName(r.dynamics).data());
    out += buf;
    for (const auto &c : r.eer_percent) {
      std::snprintf(buf, sizeof(buf), " %8s", Cell(c).c_str());
      out += buf;
    }
    std::snprintf(buf, sizeof(buf), " %8s\n", Cell(r.average).c_str());
    out += buf;
  }
  return out;
}

std::vector<EvalReport> ParseReportTsv(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::vector<EvalReport> out;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto fields = SplitFields(line);
    if (fields.empty() || (line_no == 1 && fields[0] == "feature")) continue;
    const std::string where = "report line " + std::to_string(line_no);
    if (fields.size() != 8)
      throw Error(ErrorCategory::kInput, where + ": expected 8 fields");
    EvalReport r;
    r.family = ParseFamily(fields[0]);
    r.dynamics = ParseDynamics(fields[1]);
    for (int k = 0; k < kNumAttacks; ++k)
      if (fields[2 + k] != "-") r.eer_percent[k] = ParseDouble(fields[2 + k], where);
    if (fields[7] != "-") r.average = ParseDouble(fields[7], where);
    out.push_back(r);
  }
  return out;
}

}  // namespace antispoof
