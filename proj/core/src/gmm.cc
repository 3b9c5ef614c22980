// core/src/gmm.cc

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

#include "antispoof/gmm.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "antispoof/error.h"
#include "antispoof/parallel.h"
#include "binary_io.h"

namespace antispoof {

namespace {

// Fixed so that the E-step reduction order, and hence the trained model,
// does not depend on the number of workers.
constexpr Eigen::Index kChunkFrames = 2048;

// Absolute lower bound on any variance, for dimensions that are constant in
// the training data.
constexpr double kMinVariance = 1e-10;

const double kLog2Pi = std::log(2.0 * std::numbers::pi);

// Per-component terms of the expanded Gaussian log density:
//   log w_c N(x) = x . (mu_c / var_c) - 0.5 (x * x) . (1 / var_c) + offset_c
struct DensityTerms {
  Matrix mean_over_var;  // C x D
  Matrix inv_var;        // C x D
  Eigen::RowVectorXd offset;
};

DensityTerms Precompute(const GmmModel &model) {
  DensityTerms terms;
  terms.inv_var = model.variances.cwiseInverse();
  terms.mean_over_var = model.means.cwiseProduct(terms.inv_var);
  const int c_count = model.num_components();
  terms.offset.resize(c_count);
  for (int c = 0; c < c_count; ++c) {
    const double log_det = model.variances.row(c).array().log().sum();
    const double mahal0 =
        (model.means.row(c).array().square() * terms.inv_var.row(c).array())
            .sum();
    terms.offset(c) = std::log(model.weights(c)) -
                      0.5 * (model.dim() * kLog2Pi + log_det + mahal0);
  }
  return terms;
}

// Joint log densities log w_c N(x_t) for a block of frames, T x C.
Matrix JointLogDensities(const Eigen::Ref<const Matrix> &x,
                         const DensityTerms &terms) {
  Matrix out = x * terms.mean_over_var.transpose();
  out.noalias() -= 0.5 * (x.array().square().matrix() * terms.inv_var.transpose());
  out.rowwise() += terms.offset;
  return out;
}

// In place: each row becomes its posterior; returns per-row log-sum-exp.
Vector NormalizeRows(Matrix *log_joint) {
  Vector lse(log_joint->rows());
  for (Eigen::Index t = 0; t < log_joint->rows(); ++t) {
    auto row = log_joint->row(t);
    const double peak = row.maxCoeff();
    row.array() = (row.array() - peak).exp();
    const double total = row.sum();
    row /= total;
    lse(t) = peak + std::log(total);
  }
  return lse;
}

struct SufficientStats {
  Vector occupancy;  // C
  Matrix first;      // C x D
  Matrix second;     // C x D
  double log_likelihood = 0.0;

  void Zero(int c_count, int dim) {
    occupancy.setZero(c_count);
    first.setZero(c_count, dim);
    second.setZero(c_count, dim);
    log_likelihood = 0.0;
  }
  void Add(const SufficientStats &o) {
    occupancy += o.occupancy;
    first += o.first;
    second += o.second;
    log_likelihood += o.log_likelihood;
  }
};

SufficientStats EStep(const Matrix &frames, const GmmModel &model,
                      int num_workers) {
  const DensityTerms terms = Precompute(model);
  const Eigen::Index n = frames.rows();
  const int chunks = static_cast<int>((n + kChunkFrames - 1) / kChunkFrames);
  std::vector<SufficientStats> partial(chunks);
  ParallelFor(chunks, num_workers, [&](int k) {
    const Eigen::Index begin = k * kChunkFrames;
    const Eigen::Index len = std::min(kChunkFrames, n - begin);
    const auto x = frames.middleRows(begin, len);
    Matrix post = JointLogDensities(x, terms);
    const Vector lse = NormalizeRows(&post);
    SufficientStats &s = partial[k];
    s.occupancy = post.colwise().sum().transpose();
    s.first = post.transpose() * x;
    s.second = post.transpose() * x.array().square().matrix();
    s.log_likelihood = lse.sum();
  });
  SufficientStats total;
  total.Zero(model.num_components(), model.dim());
  for (const SufficientStats &s : partial) total.Add(s);
  return total;
}

void CheckFinite(const Matrix &frames) {
  if (!frames.allFinite())
    throw Error(ErrorCategory::kInput, "training data contains non-finite values");
}

}  // namespace

void GmmModel::Validate() const {
  const Eigen::Index c_count = weights.size();
  if (c_count < 1)
    throw Error(ErrorCategory::kConfig, "model has no components");
  if (means.rows() != c_count || variances.rows() != c_count ||
      means.cols() != variances.cols() || means.cols() < 1)
    throw Error(ErrorCategory::kConfig, "model parameter shapes disagree");
  if ((weights.array() < 0.0).any() || std::fabs(weights.sum() - 1.0) > 1e-12)
    throw Error(ErrorCategory::kConfig, "model weights are not a simplex");
  if (!(variances.array() > 0.0).all() || !variances.allFinite() ||
      !means.allFinite())
    throw Error(ErrorCategory::kConfig,
                "model variances must be positive and finite");
}

TrainingResult TrainGmm(const Matrix &frames, const TrainingOptions &opts,
                        FeatureFingerprint fingerprint) {
  const int c_count = opts.num_components;
  const Eigen::Index n = frames.rows();
  const int dim = static_cast<int>(frames.cols());
  if (c_count < 1 || opts.num_iterations < 1 ||
      !(opts.variance_floor_factor > 0.0))
    throw Error(ErrorCategory::kConfig,
                "training options must all be positive");
  if (dim < 1) throw Error(ErrorCategory::kInput, "training data has no columns");
  if (n < c_count)
    throw Error(ErrorCategory::kData,
                "only " + std::to_string(n) + " training frames for " +
                    std::to_string(c_count) +
                    " components; use fewer components or more data");
  CheckFinite(frames);

  // EM runs on globally centred data so that E[x^2] - mean^2 in the M-step
  // does not cancel for features with a large offset.
  const Eigen::RowVectorXd global_mean = frames.colwise().mean();
  const Matrix centred = frames.rowwise() - global_mean;
  const Eigen::RowVectorXd global_var =
      centred.array().square().colwise().sum() / static_cast<double>(n);
  const Eigen::RowVectorXd var_floor =
      (opts.variance_floor_factor * global_var.array()).max(kMinVariance);
  const Eigen::RowVectorXd init_var = global_var.array().max(var_floor.array());

  std::mt19937_64 rng(opts.seed);

  TrainingResult result;
  GmmModel &model = result.model;
  model.fingerprint = fingerprint;
  model.seed = opts.seed;
  model.weights = Vector::Constant(c_count, 1.0 / c_count);
  model.means.resize(c_count, dim);
  model.variances = init_var.replicate(c_count, 1);

  // Partial Fisher-Yates: c_count distinct frame indices.
  std::vector<Eigen::Index> order(n);
  for (Eigen::Index i = 0; i < n; ++i) order[i] = i;
  for (int c = 0; c < c_count; ++c) {
    std::uniform_int_distribution<Eigen::Index> pick(c, n - 1);
    std::swap(order[c], order[pick(rng)]);
    model.means.row(c) = centred.row(order[c]);
  }

  std::uniform_int_distribution<Eigen::Index> any_frame(0, n - 1);
  for (int it = 0; it < opts.num_iterations; ++it) {
    const SufficientStats stats = EStep(centred, model, opts.num_workers);
    result.log_likelihood.push_back(stats.log_likelihood / n);

    for (int c = 0; c < c_count; ++c) {
      const double occ = stats.occupancy(c);
      if (occ < opts.min_component_mass) {
        model.means.row(c) = centred.row(any_frame(rng));
        model.variances.row(c) = init_var;
        model.weights(c) = 1.0 / c_count;
        ++result.reseeded_components;
        continue;
      }
      const Eigen::RowVectorXd mean = stats.first.row(c) / occ;
      const Eigen::RowVectorXd var =
          stats.second.row(c).array() / occ - mean.array().square();
      model.means.row(c) = mean;
      model.variances.row(c) = var.array().max(var_floor.array());
      model.weights(c) = occ / static_cast<double>(n);
    }
    model.weights /= model.weights.sum();
  }
  result.log_likelihood.push_back(AverageLogLikelihood(centred, model));
  model.means.rowwise() += global_mean;
  return result;
}

Vector FrameLogLikelihoods(const Matrix &frames, const GmmModel &model) {
  if (frames.cols() != model.dim())
    throw Error(ErrorCategory::kConfig,
                "feature dimension " + std::to_string(frames.cols()) +
                    " does not match model dimension " +
                    std::to_string(model.dim()));
  const DensityTerms terms = Precompute(model);
  Vector out(frames.rows());
  for (Eigen::Index begin = 0; begin < frames.rows(); begin += kChunkFrames) {
    const Eigen::Index len = std::min(kChunkFrames, frames.rows() - begin);
    Matrix joint = JointLogDensities(frames.middleRows(begin, len), terms);
    out.segment(begin, len) = NormalizeRows(&joint);
  }
  return out;
}

double AverageLogLikelihood(const Matrix &frames, const GmmModel &model) {
  if (frames.rows() == 0)
    throw Error(ErrorCategory::kInput, "no frames to score");
  return FrameLogLikelihoods(frames, model).mean();
}

double LlrScore(const Matrix &frames, const GmmModel &natural,
                const GmmModel &synthetic) {
  if (!(natural.fingerprint == synthetic.fingerprint) ||
      natural.dim() != synthetic.dim())
    throw Error(ErrorCategory::kConfig,
                "natural and synthetic models were trained on different "
                "features");
  return AverageLogLikelihood(frames, natural) -
         AverageLogLikelihood(frames, synthetic);
}

double LlrScore(const FeatureMatrix &features, const GmmModel &natural,
                const GmmModel &synthetic) {
  const FeatureFingerprint want{features.config.family,
                                features.config.dynamics};
  if (!(natural.fingerprint == want))
    throw Error(ErrorCategory::kConfig,
                "model trained on " +
                    std::string(FamilyName(natural.fingerprint.family)) + "/" +
                    std::string(DynamicsName(natural.fingerprint.dynamics)) +
                    " cannot score " + std::string(FamilyName(want.family)) +
                    "/" + std::string(DynamicsName(want.dynamics)) +
                    " features");
  return LlrScore(features.values, natural, synthetic);
}

// ---------------------------------------------------------------------------
// Model file

namespace {
constexpr std::string_view kGmmMagic = "GMM1";
}

std::string SerializeGmm(const GmmModel &model) {
  model.Validate();
  std::string out;
  const auto c_count = static_cast<std::uint32_t>(model.num_components());
  const auto dim = static_cast<std::uint32_t>(model.dim());
  out.append(kGmmMagic);
  internal::PutLe(&out, c_count);
  internal::PutLe(&out, dim);
  out.push_back(static_cast<char>(model.fingerprint.family));
  out.push_back(static_cast<char>(model.fingerprint.dynamics));
  internal::PutLe(&out, model.seed);
  for (std::uint32_t c = 0; c < c_count; ++c)
    internal::PutF64(&out, model.weights(c));
  for (std::uint32_t c = 0; c < c_count; ++c)
    for (std::uint32_t d = 0; d < dim; ++d)
      internal::PutF64(&out, model.means(c, d));
  for (std::uint32_t c = 0; c < c_count; ++c)
    for (std::uint32_t d = 0; d < dim; ++d)
      internal::PutF64(&out, model.variances(c, d));
  return out;
}

GmmModel ParseGmm(std::string_view bytes) {
  internal::ByteReader in(bytes, "model file");
  if (in.remaining() < kGmmMagic.size() ||
      in.GetBytes(kGmmMagic.size()) != kGmmMagic)
    throw Error(ErrorCategory::kCorruption, "model file: bad magic");
  GmmModel model;
  const auto c_count = in.GetLe<std::uint32_t>();
  const auto dim = in.GetLe<std::uint32_t>();
  model.fingerprint.family = FamilyFromId(in.GetLe<std::uint8_t>());
  model.fingerprint.dynamics = DynamicsFromId(in.GetLe<std::uint8_t>());
  model.seed = in.GetLe<std::uint64_t>();
  const std::size_t payload = 8ull * c_count * (1 + 2ull * dim);
  if (in.remaining() != payload)
    throw Error(ErrorCategory::kCorruption,
                "model file: payload is " + std::to_string(in.remaining()) +
                    " bytes, header says " + std::to_string(payload));
  model.weights.resize(c_count);
  model.means.resize(c_count, dim);
  model.variances.resize(c_count, dim);
  for (std::uint32_t c = 0; c < c_count; ++c) model.weights(c) = in.GetF64();
  for (std::uint32_t c = 0; c < c_count; ++c)
    for (std::uint32_t d = 0; d < dim; ++d) model.means(c, d) = in.GetF64();
  for (std::uint32_t c = 0; c < c_count; ++c)
    for (std::uint32_t d = 0; d < dim; ++d) model.variances(c, d) = in.GetF64();
  try {
    model.Validate();
  } catch (const Error &e) {
    throw Error(ErrorCategory::kCorruption, std::string("model file: ") + e.what());
  }
  return model;
}

void WriteGmmFile(const std::filesystem::path &path, const GmmModel &model) {
  internal::WriteFileAtomic(path, SerializeGmm(model));
}

GmmModel ReadGmmFile(const std::filesystem::path &path) {
  return ParseGmm(internal::ReadFileBytes(path));
}

}  // namespace antispoof
