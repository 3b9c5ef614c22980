// core/src/features.cc

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

#include "antispoof/features.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

#include "antispoof/error.h"
#include "binary_io.h"

namespace antispoof {

namespace {

constexpr std::array<std::string_view, 8> kFamilyNames = {
    "MFCC", "IMFCC", "SFCC", "ISFCC", "MOBT", "IMOBT", "SOBT", "ISOBT"};
constexpr std::array<std::string_view, 3> kDynamicsNames = {
    "static", "static+deltas", "deltas"};

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char &c : out) c = static_cast<char>(std::tolower(c));
  return out;
}

}  // namespace

std::string_view FamilyName(FeatureFamily family) {
  return kFamilyNames[static_cast<int>(family)];
}

std::string_view DynamicsName(Dynamics dynamics) {
  return kDynamicsNames[static_cast<int>(dynamics)];
}

FeatureFamily ParseFamily(std::string_view name) {
  const std::string want = Lower(name);
  for (std::size_t i = 0; i < kFamilyNames.size(); ++i)
    if (Lower(kFamilyNames[i]) == want) return static_cast<FeatureFamily>(i);
  throw Error(ErrorCategory::kConfig,
              "unknown feature family '" + std::string(name) + "'");
}

Dynamics ParseDynamics(std::string_view name) {
  const std::string want = Lower(name);
  if (want == "static") return Dynamics::kStatic;
  if (want == "static+deltas" || want == "static+dd" || want == "all")
    return Dynamics::kStaticDeltas;
  if (want == "deltas" || want == "dd" || want == "deltas-only")
    return Dynamics::kDeltasOnly;
  throw Error(ErrorCategory::kConfig,
              "unknown dynamics mode '" + std::string(name) + "'");
}

FeatureFamily FamilyFromId(int id) {
  if (id < 0 || id >= static_cast<int>(kFamilyNames.size()))
    throw Error(ErrorCategory::kCorruption,
                "feature family id out of range: " + std::to_string(id));
  return static_cast<FeatureFamily>(id);
}

Dynamics DynamicsFromId(int id) {
  if (id < 0 || id >= static_cast<int>(kDynamicsNames.size()))
    throw Error(ErrorCategory::kCorruption,
                "dynamics id out of range: " + std::to_string(id));
  return static_cast<Dynamics>(id);
}

bool IsBlockFamily(FeatureFamily family) {
  return static_cast<int>(family) >= static_cast<int>(FeatureFamily::kMobt);
}

WarpKind RequiredWarpKind(FeatureFamily family) {
  switch (family) {
    case FeatureFamily::kMfcc:
    case FeatureFamily::kMobt: return WarpKind::kMel;
    case FeatureFamily::kImfcc:
    case FeatureFamily::kImobt: return WarpKind::kInvertedMel;
    case FeatureFamily::kSfcc:
    case FeatureFamily::kSobt: return WarpKind::kSfcc;
    case FeatureFamily::kIsfcc:
    case FeatureFamily::kIsobt: return WarpKind::kInvertedSfcc;
  }
  return WarpKind::kMel;
}

// ---------------------------------------------------------------------------
// Block spec

int BlockSpec::output_dim() const {
  int dim = 0;
  for (const auto &[first, last] : blocks) dim += last - first + 1;
  return dim;
}

void BlockSpec::Validate(int num_filters) const {
  if (blocks.empty())
    throw Error(ErrorCategory::kConfig, "block spec has no blocks");
  std::vector<bool> covered(num_filters, false);
  for (const auto &[first, last] : blocks) {
    if (first < 1 || last > num_filters || first > last)
      throw Error(ErrorCategory::kConfig,
                  "block " + std::to_string(first) + "-" +
                      std::to_string(last) + " out of range for " +
                      std::to_string(num_filters) + " filters");
    for (int j = first; j <= last; ++j) covered[j - 1] = true;
  }
  for (int j = 0; j < num_filters; ++j)
    if (!covered[j])
      throw Error(ErrorCategory::kConfig,
                  "block spec leaves filter " + std::to_string(j + 1) +
                      " uncovered");
}

BlockSpec DefaultBlockSpec() { return BlockSpec{{{1, 7}, {6, 20}}}; }

BlockSpec ParseBlockSpec(std::string_view text) {
  BlockSpec spec;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string_view item = text.substr(pos, comma - pos);
    const std::size_t dash = item.find('-');
    int first = 0, last = 0;
    bool ok = dash != std::string_view::npos;
    if (ok) {
      auto r1 = std::from_chars(item.data(), item.data() + dash, first);
      auto r2 = std::from_chars(item.data() + dash + 1,
                                item.data() + item.size(), last);
      ok = r1.ec == std::errc() && r1.ptr == item.data() + dash &&
           r2.ec == std::errc() && r2.ptr == item.data() + item.size();
    }
    if (!ok)
      throw Error(ErrorCategory::kConfig,
                  "bad block '" + std::string(item) + "', expected A-B");
    spec.blocks.emplace_back(first, last);
    pos = comma + 1;
  }
  return spec;
}

std::string FormatBlockSpec(const BlockSpec &spec) {
  std::string out;
  for (const auto &[first, last] : spec.blocks) {
    if (!out.empty()) out += ',';
    out += std::to_string(first) + "-" + std::to_string(last);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Config

void FeatureConfig::Validate() const {
  if (num_filters < 1)
    throw Error(ErrorCategory::kConfig, "need at least one filter");
  if (IsBlockFamily(family)) {
    if (!block_spec)
      throw Error(ErrorCategory::kConfig,
                  std::string(FamilyName(family)) + " needs a block spec");
    block_spec->Validate(num_filters);
  } else {
    if (block_spec)
      throw Error(ErrorCategory::kConfig,
                  std::string(FamilyName(family)) +
                      " is a full-band family and takes no block spec");
    if (num_ceps < 1 || num_ceps > num_filters)
      throw Error(ErrorCategory::kConfig,
                  "num_ceps must lie in 1..num_filters");
  }
}

int FeatureConfig::static_dim() const {
  return block_spec ? block_spec->output_dim() : num_ceps;
}

int FeatureConfig::feature_dim() const {
  switch (dynamics) {
    case Dynamics::kStatic: return static_dim();
    case Dynamics::kStaticDeltas: return 3 * static_dim();
    case Dynamics::kDeltasOnly: return 2 * static_dim();
  }
  return static_dim();
}

FeatureConfig DefaultFeatureConfig(FeatureFamily family, Dynamics dynamics) {
  FeatureConfig config;
  config.family = family;
  config.dynamics = dynamics;
  if (IsBlockFamily(family)) config.block_spec = DefaultBlockSpec();
  return config;
}

// ---------------------------------------------------------------------------
// Transforms

Matrix FilterBankLogEnergies(const PowerSpectrumSequence &spectra,
                             const FilterBank &bank) {
  if (spectra.fft_size != bank.fft_size() ||
      spectra.spectra.cols() != bank.num_bins())
    throw Error(ErrorCategory::kConfig,
                "filter bank built for fft size " +
                    std::to_string(bank.fft_size()) +
                    " applied to spectra of fft size " +
                    std::to_string(spectra.fft_size));
  const int t_count = spectra.num_frames();
  Matrix out(t_count, bank.num_filters());
  for (int t = 0; t < t_count; ++t) {
    const std::span<const double> row(spectra.spectra.row(t).data(),
                                      static_cast<std::size_t>(bank.num_bins()));
    for (int j = 0; j < bank.num_filters(); ++j)
      out(t, j) = std::log(std::max(bank.FilterEnergy(j, row), kLogEnergyFloor));
  }
  return out;
}

Matrix DctMatrix(int size) {
  Matrix basis(size, size);
  const double s0 = std::sqrt(1.0 / size);
  const double sk = std::sqrt(2.0 / size);
  for (int k = 0; k < size; ++k)
    for (int n = 0; n < size; ++n)
      basis(k, n) = (k == 0 ? s0 : sk) *
                    std::cos(std::numbers::pi * k * (2 * n + 1) / (2.0 * size));
  return basis;
}

Matrix DctFull(const Matrix &log_energies, int num_ceps) {
  const int n = static_cast<int>(log_energies.cols());
  if (num_ceps < 1 || num_ceps > n)
    throw Error(ErrorCategory::kConfig,
                "num_ceps " + std::to_string(num_ceps) + " exceeds " +
                    std::to_string(n) + " filters");
  const Matrix basis = DctMatrix(n).topRows(num_ceps);
  return log_energies * basis.transpose();
}

Matrix DctBlock(const Matrix &log_energies, const BlockSpec &spec) {
  const int n = static_cast<int>(log_energies.cols());
  spec.Validate(n);
  Matrix out(log_energies.rows(), spec.output_dim());
  int col = 0;
  for (const auto &[first, last] : spec.blocks) {
    const int len = last - first + 1;
    const Matrix basis = DctMatrix(len);
    out.middleCols(col, len) =
        log_energies.middleCols(first - 1, len) * basis.transpose();
    col += len;
  }
  return out;
}

Matrix Deltas(const Matrix &features) {
  const Eigen::Index t_count = features.rows();
  Matrix out(t_count, features.cols());
  for (Eigen::Index t = 0; t < t_count; ++t) {
    const Eigen::Index prev = std::max<Eigen::Index>(t - 1, 0);
    const Eigen::Index next = std::min<Eigen::Index>(t + 1, t_count - 1);
    out.row(t) = (features.row(next) - features.row(prev)) * 0.5;
  }
  return out;
}

Matrix AppendDynamics(const Matrix &static_features, Dynamics dynamics) {
  if (dynamics == Dynamics::kStatic) return static_features;
  const Matrix delta = Deltas(static_features);
  const Matrix delta2 = Deltas(delta);
  const Eigen::Index d = static_features.cols();
  if (dynamics == Dynamics::kStaticDeltas) {
    Matrix out(static_features.rows(), 3 * d);
    out << static_features, delta, delta2;
    return out;
  }
  Matrix out(static_features.rows(), 2 * d);
  out << delta, delta2;
  return out;
}

FeatureMatrix Extract(const PowerSpectrumSequence &spectra,
                      const FeatureConfig &config, const FilterBank &bank,
                      std::string utterance_id) {
  config.Validate();
  if (bank.kind() != RequiredWarpKind(config.family))
    throw Error(ErrorCategory::kConfig,
                std::string(FamilyName(config.family)) + " needs a " +
                    std::string(WarpKindName(RequiredWarpKind(config.family))) +
                    " filter bank, got " +
                    std::string(WarpKindName(bank.kind())));
  if (bank.num_filters() != config.num_filters)
    throw Error(ErrorCategory::kConfig,
                "filter bank has " + std::to_string(bank.num_filters()) +
                    " filters, config expects " +
                    std::to_string(config.num_filters));
  if (spectra.num_frames() < 1)
    throw Error(ErrorCategory::kInput, "no frames to extract features from");

  const Matrix log_energies = FilterBankLogEnergies(spectra, bank);
  const Matrix cepstra = config.block_spec
                             ? DctBlock(log_energies, *config.block_spec)
                             : DctFull(log_energies, config.num_ceps);

  FeatureMatrix out;
  out.values = AppendDynamics(cepstra, config.dynamics);
  out.config = config;
  out.utterance_id = std::move(utterance_id);
  if (!out.values.allFinite())
    throw Error(ErrorCategory::kInput,
                "non-finite features for utterance " + out.utterance_id);
  return out;
}

// ---------------------------------------------------------------------------
// Feature file

namespace {
constexpr std::string_view kFeatureMagic = "FTR1";
}

std::string SerializeFeatures(const FeatureMatrix &features) {
  std::string out;
  const auto t_count = static_cast<std::uint32_t>(features.values.rows());
  const auto dim = static_cast<std::uint32_t>(features.values.cols());
  out.reserve(14 + 4ull * t_count * dim);
  out.append(kFeatureMagic);
  internal::PutLe(&out, t_count);
  internal::PutLe(&out, dim);
  out.push_back(static_cast<char>(features.config.family));
  out.push_back(static_cast<char>(features.config.dynamics));
  for (std::uint32_t t = 0; t < t_count; ++t)
    for (std::uint32_t d = 0; d < dim; ++d)
      internal::PutF32(&out, static_cast<float>(features.values(t, d)));
  return out;
}

FeatureMatrix ParseFeatures(std::string_view bytes) {
  internal::ByteReader in(bytes, "feature file");
  if (in.remaining() < kFeatureMagic.size() ||
      in.GetBytes(kFeatureMagic.size()) != kFeatureMagic)
    throw Error(ErrorCategory::kCorruption, "feature file: bad magic");
  const auto t_count = in.GetLe<std::uint32_t>();
  const auto dim = in.GetLe<std::uint32_t>();
  const FeatureFamily family = FamilyFromId(in.GetLe<std::uint8_t>());
  const Dynamics dynamics = DynamicsFromId(in.GetLe<std::uint8_t>());
  const std::size_t payload = 4ull * t_count * dim;
  if (in.remaining() != payload)
    throw Error(ErrorCategory::kCorruption,
                "feature file: payload is " + std::to_string(in.remaining()) +
                    " bytes, header says " + std::to_string(payload));

  FeatureMatrix out;
  out.config = DefaultFeatureConfig(family, dynamics);
  out.values.resize(t_count, dim);
  for (std::uint32_t t = 0; t < t_count; ++t)
    for (std::uint32_t d = 0; d < dim; ++d) out.values(t, d) = in.GetF32();
  return out;
}

void WriteFeatureFile(const std::filesystem::path &path,
                      const FeatureMatrix &features) {
  internal::WriteFileAtomic(path, SerializeFeatures(features));
}

FeatureMatrix ReadFeatureFile(const std::filesystem::path &path) {
  return ParseFeatures(internal::ReadFileBytes(path));
}

}  // namespace antispoof
