// core/include/antispoof/features.h

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

#ifndef ANTISPOOF_FEATURES_H_
#define ANTISPOOF_FEATURES_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "antispoof/frontend.h"
#include "antispoof/matrix.h"
#include "antispoof/warping.h"

namespace antispoof {

// Numeric values are the ids used in feature and model files.
enum class FeatureFamily : std::uint8_t {
  kMfcc = 0,
  kImfcc = 1,
  kSfcc = 2,
  kIsfcc = 3,
  kMobt = 4,
  kImobt = 5,
  kSobt = 6,
  kIsobt = 7,
};

enum class Dynamics : std::uint8_t {
  kStatic = 0,
  kStaticDeltas = 1,  // [static | delta | delta-delta]
  kDeltasOnly = 2,    // [delta | delta-delta]
};

inline constexpr std::array<FeatureFamily, 8> kAllFamilies = {
    FeatureFamily::kMfcc, FeatureFamily::kImfcc, FeatureFamily::kSfcc,
    FeatureFamily::kIsfcc, FeatureFamily::kMobt, FeatureFamily::kImobt,
    FeatureFamily::kSobt, FeatureFamily::kIsobt};
inline constexpr std::array<Dynamics, 3> kAllDynamics = {
    Dynamics::kStatic, Dynamics::kStaticDeltas, Dynamics::kDeltasOnly};

std::string_view FamilyName(FeatureFamily family);      // "MFCC", ...
std::string_view DynamicsName(Dynamics dynamics);       // "static", ...
FeatureFamily ParseFamily(std::string_view name);       // case-insensitive
Dynamics ParseDynamics(std::string_view name);
FeatureFamily FamilyFromId(int id);
Dynamics DynamicsFromId(int id);

bool IsBlockFamily(FeatureFamily family);
/// Bank kind a family is computed on (MFCC/MOBT: mel, IMFCC/IMOBT:
/// inverted mel, and so on).
WarpKind RequiredWarpKind(FeatureFamily family);

/// Filter index ranges, 1-based and inclusive, each transformed by its own
/// DCT. Blocks may overlap.
struct BlockSpec {
  std::vector<std::pair<int, int>> blocks;

  int output_dim() const;
  /// Checks every block is non-empty, inside 1..num_filters, and that the
  /// blocks together cover every filter. Throws kConfig otherwise.
  void Validate(int num_filters) const;
  bool operator==(const BlockSpec &) const = default;
};

/// Filters 1-7 and 6-20 of a 20-filter bank; 7 + 15 = 22 outputs. On the
/// 16 kHz mel bank these span 0-1128 Hz and 575-8000 Hz.
BlockSpec DefaultBlockSpec();

/// Parses "1-7,6-20".
BlockSpec ParseBlockSpec(std::string_view text);
std::string FormatBlockSpec(const BlockSpec &spec);

struct FeatureConfig {
  FeatureFamily family = FeatureFamily::kMfcc;
  Dynamics dynamics = Dynamics::kStatic;
  int num_filters = 20;
  int num_ceps = 20;                   // full-band families only
  std::optional<BlockSpec> block_spec; // block families only

  void Validate() const;
  /// Width of one static frame (num_ceps, or the block spec's output dim).
  int static_dim() const;
  /// Width after dynamics: static, 3x static or 2x static.
  int feature_dim() const;
};

/// Defaults for a family: 20 filters, 20 cepstra, DefaultBlockSpec() for
/// block families.
FeatureConfig DefaultFeatureConfig(FeatureFamily family, Dynamics dynamics);

struct FeatureMatrix {
  Matrix values;  // T x D
  FeatureConfig config;
  std::string utterance_id;

  int num_frames() const { return static_cast<int>(values.rows()); }
  int dim() const { return static_cast<int>(values.cols()); }
};

/// Floor applied to filter energies before the log.
inline constexpr double kLogEnergyFloor = 1e-10;

/// ln(max(sum_b bank[j][b] * spectra[t][b], 1e-10)), T x n_filters.
Matrix FilterBankLogEnergies(const PowerSpectrumSequence &spectra,
                             const FilterBank &bank);

/// Orthonormal DCT-II basis, row k = s_k cos(pi k (2n + 1) / 2N).
Matrix DctMatrix(int size);

/// Orthonormal DCT-II along each row, keeping coefficients 0..num_ceps-1.
Matrix DctFull(const Matrix &log_energies, int num_ceps);

/// Per-block orthonormal DCT-II, all coefficients kept, blocks concatenated.
Matrix DctBlock(const Matrix &log_energies, const BlockSpec &spec);

/// Three-frame central difference, (c[t+1] - c[t-1]) / 2, with the first
/// and last frames replicated past the ends.
Matrix Deltas(const Matrix &features);

Matrix AppendDynamics(const Matrix &static_features, Dynamics dynamics);

/// Full pipeline from power spectra: log energies, full-band or block DCT,
/// dynamics. The bank must be of the kind the family requires.
FeatureMatrix Extract(const PowerSpectrumSequence &spectra,
                      const FeatureConfig &config, const FilterBank &bank,
                      std::string utterance_id = {});

// Feature file: "FTR1", u32 T, u32 D, u8 family, u8 dynamics, then T*D
// float32 row-major, all little-endian. Values are narrowed to float32 on
// write. The non-default parts of FeatureConfig are not stored; readers get
// DefaultFeatureConfig() for the stored family and dynamics.
std::string SerializeFeatures(const FeatureMatrix &features);
FeatureMatrix ParseFeatures(std::string_view bytes);
void WriteFeatureFile(const std::filesystem::path &path,
                      const FeatureMatrix &features);
FeatureMatrix ReadFeatureFile(const std::filesystem::path &path);

}  // namespace antispoof

#endif  // ANTISPOOF_FEATURES_H_
