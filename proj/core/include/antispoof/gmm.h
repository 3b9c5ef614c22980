// core/include/antispoof/gmm.h

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

#ifndef ANTISPOOF_GMM_H_
#define ANTISPOOF_GMM_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "antispoof/features.h"
#include "antispoof/matrix.h"

namespace antispoof {

/// Which features a model was trained on. Scoring refuses to mix them.
struct FeatureFingerprint {
  FeatureFamily family = FeatureFamily::kMfcc;
  Dynamics dynamics = Dynamics::kStatic;
  bool operator==(const FeatureFingerprint &) const = default;
};

/// Diagonal-covariance Gaussian mixture.
struct GmmModel {
  Vector weights;    // C, sums to one
  Matrix means;      // C x D
  Matrix variances;  // C x D, strictly positive
  FeatureFingerprint fingerprint;
  std::uint64_t seed = 0;

  int num_components() const { return static_cast<int>(weights.size()); }
  int dim() const { return static_cast<int>(means.cols()); }

  /// Throws kConfig unless the shapes agree, the weights form a simplex and
  /// every variance is positive.
  void Validate() const;
};

struct TrainingOptions {
  int num_components = 512;
  int num_iterations = 10;
  std::uint64_t seed = 0;
  // Per-dimension variance floor as a fraction of the global data variance.
  double variance_floor_factor = 0.01;
  // Components whose responsibility mass falls below this are re-seeded.
  double min_component_mass = 1e-8;
  int num_workers = 1;
};

struct TrainingResult {
  GmmModel model;
  // Average per-frame log-likelihood of the training data under the initial
  // model and after each EM iteration (num_iterations + 1 entries).
  std::vector<double> log_likelihood;
  int reseeded_components = 0;
};

/// Maximum-likelihood EM. Means start at num_components distinct frames
/// picked with `seed`, variances at the global variance, weights uniform.
/// The result does not depend on num_workers.
TrainingResult TrainGmm(const Matrix &frames, const TrainingOptions &opts,
                        FeatureFingerprint fingerprint = {});

/// log p(x_t | model) for every row, log-sum-exp over components.
Vector FrameLogLikelihoods(const Matrix &frames, const GmmModel &model);

/// Mean of FrameLogLikelihoods over the rows of `frames`.
double AverageLogLikelihood(const Matrix &frames, const GmmModel &model);

/// AverageLogLikelihood under `natural` minus that under `synthetic`.
/// Positive values favour natural speech.
double LlrScore(const Matrix &frames, const GmmModel &natural,
                const GmmModel &synthetic);

/// As above, also checking both models were trained on the features'
/// family and dynamics.
double LlrScore(const FeatureMatrix &features, const GmmModel &natural,
                const GmmModel &synthetic);

// Model file: "GMM1", u32 C, u32 D, u8 family, u8 dynamics, u64 seed, then
// weights, means and variances as float64, all little-endian.
std::string SerializeGmm(const GmmModel &model);
GmmModel ParseGmm(std::string_view bytes);
void WriteGmmFile(const std::filesystem::path &path, const GmmModel &model);
GmmModel ReadGmmFile(const std::filesystem::path &path);

}  // namespace antispoof

#endif  // ANTISPOOF_GMM_H_
