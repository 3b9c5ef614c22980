// tests/unit/gmm_test.cc

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
#include <cmath>
#include <numbers>
#include <random>

#include "antispoof/error.h"
#include "antispoof/gmm.h"
#include "doctest.h"
#include "oracles.h"

namespace antispoof {
namespace {

Matrix TwoClusters(int per_cluster, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  Matrix x(2 * per_cluster, 1);
  for (int i = 0; i < 2 * per_cluster; ++i)
    x(i, 0) = (i < per_cluster ? -10.0 : 10.0) + nd(rng);
  return x;
}

Matrix Sample(const GmmModel &m, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::discrete_distribution<int> pick(m.weights.data(), m.weights.data() + m.weights.size());
  std::normal_distribution<double> nd(0.0, 1.0);
  Matrix x(n, m.dim());
  for (int i = 0; i < n; ++i) {
    const int c = pick(rng);
    for (int d = 0; d < m.dim(); ++d)
      x(i, d) = m.means(c, d) + std::sqrt(m.variances(c, d)) * nd(rng);
  }
  return x;
}

GmmModel RandomModel(int c_count, int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.2, 2.0);
  GmmModel m;
  m.weights.resize(c_count);
  m.means = testing::RandomMatrix(c_count, dim, seed + 1, 3.0);
  m.variances.resize(c_count, dim);
  for (int c = 0; c < c_count; ++c) {
    m.weights(c) = u(rng);
    for (int d = 0; d < dim; ++d) m.variances(c, d) = u(rng);
  }
  m.weights /= m.weights.sum();
  return m;
}

TEST_CASE("single component reaches the closed form after one iteration") {
  Matrix x = testing::RandomMatrix(500, 4, 31, 2.0);
  x.col(0).array() += 50.0;  // a large offset must not cost precision
  const Eigen::RowVectorXd mean = x.colwise().mean();
  const Eigen::RowVectorXd var =
      (x.rowwise() - mean).array().square().colwise().sum() / 500.0;
  for (int iters : {1, 4}) {
    TrainingOptions opts;
    opts.num_components = 1;
    opts.num_iterations = iters;
    const GmmModel m = TrainGmm(x, opts).model;
    CHECK(m.weights(0) == 1.0);
    for (int d = 0; d < 4; ++d) {
      CHECK(std::abs(m.means(0, d) - mean(d)) <= 1e-12 * std::max(1.0, std::abs(mean(d))));
      CHECK(std::abs(m.variances(0, d) - var(d)) <= 1e-12 * var(d));
    }
  }
}

TEST_CASE("single component variance floor engages on a constant dimension") {
  Matrix x = testing::RandomMatrix(200, 2, 3);
  x.col(1).setConstant(5.0);
  TrainingOptions opts;
  opts.num_components = 1;
  opts.num_iterations = 2;
  const GmmModel m = TrainGmm(x, opts).model;
  CHECK(m.variances(0, 1) == 1e-10);
  CHECK(m.means(0, 1) == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("two well separated clusters are recovered") {
  const Matrix x = TwoClusters(500, 5);
  TrainingOptions opts;
  opts.num_components = 2;
  opts.seed = 3;
  const GmmModel m = TrainGmm(x, opts).model;
  const int lo = m.means(0, 0) < m.means(1, 0) ? 0 : 1;
  // Oracle: brute-force cluster means by sign.
  double neg = 0, pos = 0;
  for (int i = 0; i < 1000; ++i) (x(i, 0) < 0 ? neg : pos) += x(i, 0);
  neg /= 500;
  pos /= 500;
  CHECK(std::abs(m.means(lo, 0) - neg) < 1e-6);
  CHECK(std::abs(m.means(1 - lo, 0) - pos) < 1e-6);
  CHECK(std::abs(m.means(lo, 0) + 10.0) < 0.2);
  CHECK(std::abs(m.means(1 - lo, 0) - 10.0) < 0.2);
  CHECK(std::abs(m.weights(0) - 0.5) < 0.05);
}

TEST_CASE("EM is monotone, keeps the simplex and the floor") {
  const GmmModel truth = RandomModel(6, 5, 77);
  const Matrix x = Sample(truth, 3000, 78);
  TrainingOptions opts;
  opts.num_components = 8;
  opts.num_iterations = 10;
  opts.seed = 9;
  for (int iters = 1; iters <= 10; ++iters) {
    opts.num_iterations = iters;
    const TrainingResult r = TrainGmm(x, opts);
    REQUIRE(r.log_likelihood.size() == static_cast<std::size_t>(iters + 1));
    CHECK(std::abs(r.model.weights.sum() - 1.0) <= 1e-12);
    CHECK(r.model.weights.minCoeff() >= 0.0);
    const Eigen::RowVectorXd gvar =
        (x.rowwise() - x.colwise().mean()).array().square().colwise().mean();
    for (int c = 0; c < 8; ++c)
      for (int d = 0; d < 5; ++d) REQUIRE(r.model.variances(c, d) >= 0.01 * gvar(d) * (1 - 1e-15));
    for (int i = 1; i <= iters; ++i)
      REQUIRE(r.log_likelihood[i] >= r.log_likelihood[i - 1] - 1e-8);
    CHECK(r.log_likelihood.back() ==
          doctest::Approx(AverageLogLikelihood(x, r.model)).epsilon(1e-12));
  }
}

TEST_CASE("training is deterministic across reruns and worker counts") {
  const Matrix x = Sample(RandomModel(4, 3, 5), 9000, 6);
  TrainingOptions opts;
  opts.num_components = 16;
  opts.seed = 42;
  const GmmModel a = TrainGmm(x, opts).model;
  const GmmModel b = TrainGmm(x, opts).model;
  CHECK(SerializeGmm(a) == SerializeGmm(b));
  for (int workers : {2, 3, 8}) {
    opts.num_workers = workers;
    CHECK(SerializeGmm(TrainGmm(x, opts).model) == SerializeGmm(a));
  }
  opts.seed = 43;
  CHECK(SerializeGmm(TrainGmm(x, opts).model) != SerializeGmm(a));
}

TEST_CASE("training input validation") {
  const Matrix x = testing::RandomMatrix(10, 2, 1);
  TrainingOptions opts;
  opts.num_components = 11;
  try {
    TrainGmm(x, opts);
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.category() == ErrorCategory::kData);
    CHECK(std::string(e.what()).find("fewer components") != std::string::npos);
  }
  Matrix bad = x;
  bad(3, 1) = std::nan("");
  opts.num_components = 2;
  CHECK_THROWS_AS(TrainGmm(bad, opts), Error);
  opts.num_iterations = 0;
  CHECK_THROWS_AS(TrainGmm(x, opts), Error);
}

TEST_CASE("a starved component is reseeded and C stays fixed") {
  // Eight identical frames and one outlier: some components get no mass.
  Matrix x = Matrix::Zero(9, 1);
  x(8, 0) = 1000.0;
  TrainingOptions opts;
  opts.num_components = 3;
  opts.num_iterations = 5;
  opts.seed = 0;
  const TrainingResult r = TrainGmm(x, opts);
  CHECK(r.model.num_components() == 3);
  CHECK(std::abs(r.model.weights.sum() - 1.0) <= 1e-12);
  CHECK_NOTHROW(r.model.Validate());
}

TEST_CASE("log likelihood closed forms and oracle") {
  GmmModel m;
  m.weights = Vector::Ones(1);
  m.means = testing::RandomMatrix(1, 6, 2);
  m.variances = Matrix::Ones(1, 6);
  CHECK(AverageLogLikelihood(m.means, m) ==
        doctest::Approx(-3.0 * std::log(2 * std::numbers::pi)).epsilon(1e-14));

  const GmmModel r = RandomModel(3, 4, 10);
  GmmModel dup = r;
  dup.weights.resize(4);
  dup.means.resize(4, 4);
  dup.variances.resize(4, 4);
  dup.weights << r.weights(0) / 2, r.weights(0) / 2, r.weights(1), r.weights(2);
  dup.means << r.means.row(0), r.means.row(0), r.means.row(1), r.means.row(2);
  dup.variances << r.variances.row(0), r.variances.row(0), r.variances.row(1), r.variances.row(2);
  const Matrix x = testing::RandomMatrix(20, 4, 11, 3.0);
  CHECK(std::abs(AverageLogLikelihood(x, dup) - AverageLogLikelihood(x, r)) < 1e-12);

  const GmmModel two = RandomModel(2, 3, 12);
  const Matrix five = testing::RandomMatrix(5, 3, 13, 2.0);
  const Vector ll = FrameLogLikelihoods(five, two);
  for (int t = 0; t < 5; ++t) {
    const Vector row = five.row(t).transpose();
    CHECK(std::abs(ll(t) - static_cast<double>(testing::NaiveLogDensity(two, row))) < 1e-10);
  }
  CHECK_THROWS_AS(AverageLogLikelihood(testing::RandomMatrix(2, 5, 1), two), Error);
}

TEST_CASE("llr score identities") {
  GmmModel nat = RandomModel(3, 4, 20), syn = RandomModel(3, 4, 21);
  syn.means.array() += 8.0;
  const Matrix x = Sample(nat, 200, 22);
  CHECK(LlrScore(x, nat, nat) == 0.0);
  const double s = LlrScore(x, nat, syn);
  CHECK(s > 0.0);
  CHECK(LlrScore(x, syn, nat) == -s);

  FeatureMatrix f;
  f.values = x;
  f.config = DefaultFeatureConfig(FeatureFamily::kMfcc, Dynamics::kStatic);
  CHECK(LlrScore(f, nat, syn) == s);
  f.config = DefaultFeatureConfig(FeatureFamily::kSfcc, Dynamics::kStatic);
  CHECK_THROWS_AS(LlrScore(f, nat, syn), Error);
  GmmModel other = syn;
  other.fingerprint.family = FeatureFamily::kImfcc;
  CHECK_THROWS_AS(LlrScore(x, nat, other), Error);
}

TEST_CASE("model file round trip and corruption") {
  TrainingOptions opts;
  opts.num_components = 4;
  opts.seed = 99;
  const GmmModel m = TrainGmm(Sample(RandomModel(2, 3, 1), 400, 2), opts,
                              {FeatureFamily::kIsobt, Dynamics::kDeltasOnly})
                         .model;
  const std::string bytes = SerializeGmm(m);
  CHECK(bytes.substr(0, 4) == "GMM1");
  CHECK(bytes.size() == 4 + 4 + 4 + 1 + 1 + 8 + 8 * 4 * (1 + 2 * 3));
  const GmmModel r = ParseGmm(bytes);
  CHECK(r.weights == m.weights);
  CHECK(r.means == m.means);
  CHECK(r.variances == m.variances);
  CHECK(r.seed == 99);
  CHECK(r.fingerprint == m.fingerprint);
  CHECK_THROWS_AS(ParseGmm(bytes.substr(0, bytes.size() - 3)), Error);
  CHECK_THROWS_AS(ParseGmm("XMM1" + bytes.substr(4)), Error);
}

}  // namespace
}  // namespace antispoof
