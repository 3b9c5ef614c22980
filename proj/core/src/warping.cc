// core/src/warping.cc

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

#include "antispoof/warping.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "antispoof/error.h"
#include "binary_io.h"

namespace antispoof {

std::string_view WarpKindName(WarpKind kind) {
  switch (kind) {
    case WarpKind::kMel: return "mel";
    case WarpKind::kInvertedMel: return "inverted-mel";
    case WarpKind::kSfcc: return "sfcc";
    case WarpKind::kInvertedSfcc: return "inverted-sfcc";
  }
  return "?";
}

WarpKind InvertedKind(WarpKind kind) {
  switch (kind) {
    case WarpKind::kMel: return WarpKind::kInvertedMel;
    case WarpKind::kInvertedMel: return WarpKind::kMel;
    case WarpKind::kSfcc: return WarpKind::kInvertedSfcc;
    case WarpKind::kInvertedSfcc: return WarpKind::kSfcc;
  }
  return kind;
}

static bool IsInverted(WarpKind kind) {
  return kind == WarpKind::kInvertedMel || kind == WarpKind::kInvertedSfcc;
}

double MelFromHz(double hz) {
  if (!(hz >= 0.0))
    throw Error(ErrorCategory::kInput, "mel scale: negative frequency");
  return 2595.0 * std::log10(1.0 + hz / 700.0);
}

double HzFromMel(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

// ---------------------------------------------------------------------------
// FilterBank

FilterBank::FilterBank(Matrix weights, int fft_size, int sample_rate,
                       WarpKind kind)
    : weights_(std::move(weights)),
      fft_size_(fft_size),
      sample_rate_(sample_rate),
      kind_(kind) {
  if (weights_.cols() != fft_size / 2 + 1)
    throw Error(ErrorCategory::kConfig,
                "filter bank width does not match fft size");
  support_.resize(weights_.rows());
  for (int j = 0; j < num_filters(); ++j) {
    int first = -1, last = -1;
    for (int b = 0; b < num_bins(); ++b) {
      if (weights_(j, b) > 0.0) {
        if (first < 0) first = b;
        last = b;
      }
    }
    if (first < 0)
      throw Error(ErrorCategory::kConfig,
                  "filter " + std::to_string(j + 1) +
                      " has no bin support; too many filters for fft size " +
                      std::to_string(fft_size));
    support_[j] = {first, last};
  }
}

int FilterBank::peak_bin(int j) const {
  int best = support_[j].first;
  for (int b = support_[j].first; b <= support_[j].second; ++b)
    if (weights_(j, b) > weights_(j, best)) best = b;
  return best;
}

double FilterBank::FilterEnergy(int j, std::span<const double> power) const {
  int lo = support_[j].first;
  int hi = support_[j].second;
  double sum = 0.0;
  // Pair the outermost bins first; a + b == b + a exactly, so this is
  // unchanged when both the filter and the spectrum are reversed.
  for (; lo < hi; ++lo, --hi)
    sum += weights_(j, lo) * power[lo] + weights_(j, hi) * power[hi];
  if (lo == hi) sum += weights_(j, lo) * power[lo];
  return sum;
}

bool FilterBank::operator==(const FilterBank &other) const {
  return fft_size_ == other.fft_size_ && sample_rate_ == other.sample_rate_ &&
         kind_ == other.kind_ && weights_.rows() == other.weights_.rows() &&
         weights_.cols() == other.weights_.cols() && weights_ == other.weights_;
}

// ---------------------------------------------------------------------------
// Construction

static void ValidateWarp(const WarpingFunction &warp) {
  const auto &b = warp.boundaries;
  if (b.size() < 3)
    throw Error(ErrorCategory::kConfig, "warp needs at least 3 boundaries");
  if (warp.sample_rate <= 0)
    throw Error(ErrorCategory::kConfig, "warp sample rate must be positive");
  const double nyquist = warp.sample_rate / 2.0;
  if (b.front() != 0.0 ||
      std::fabs(b.back() - nyquist) > 1e-9 * nyquist)
    throw Error(ErrorCategory::kConfig,
                "warp boundaries must run from 0 Hz to Nyquist");
  for (std::size_t i = 1; i < b.size(); ++i)
    if (!(b[i] > b[i - 1]))
      throw Error(ErrorCategory::kConfig,
                  "warp boundaries must be strictly increasing");
}

std::vector<double> WarpingFunction::EdgeFrequencies() const {
  if (!IsInverted(kind)) return boundaries;
  const double nyquist = sample_rate / 2.0;
  std::vector<double> out;
  out.reserve(boundaries.size());
  for (auto it = boundaries.rbegin(); it != boundaries.rend(); ++it)
    out.push_back(nyquist - *it);
  if (!out.empty()) {
    out.front() = 0.0;
    out.back() = nyquist;
  }
  return out;
}

WarpingFunction InvertWarp(const WarpingFunction &warp) {
  WarpingFunction out = warp;
  out.kind = InvertedKind(warp.kind);
  return out;
}

static FilterBank BuildTriangles(const WarpingFunction &warp, int fft_size) {
  ValidateWarp(warp);
  const int n_filters = warp.num_filters();
  const int bins = fft_size / 2 + 1;
  const double bin_hz = static_cast<double>(warp.sample_rate) / fft_size;
  const auto &edge = warp.boundaries;

  Matrix weights = Matrix::Zero(n_filters, bins);
  for (int j = 0; j < n_filters; ++j) {
    const double lo = edge[j], centre = edge[j + 1], hi = edge[j + 2];
    for (int b = 0; b < bins; ++b) {
      const double f = b * bin_hz;
      if (f > lo && f <= centre)
        weights(j, b) = (f - lo) / (centre - lo);
      else if (f > centre && f < hi)
        weights(j, b) = (hi - f) / (hi - centre);
    }
  }
  return FilterBank(std::move(weights), fft_size, warp.sample_rate, warp.kind);
}

FilterBank BuildWarpedFilterBank(const WarpingFunction &warp, int fft_size) {
  if (fft_size < 2 || fft_size % 2 != 0)
    throw Error(ErrorCategory::kConfig, "fft size must be even and >= 2");
  if (IsInverted(warp.kind))
    return InvertFilterBank(BuildTriangles(InvertWarp(warp), fft_size));
  return BuildTriangles(warp, fft_size);
}

WarpingFunction MelWarp(int num_filters, int sample_rate) {
  if (num_filters < 1)
    throw Error(ErrorCategory::kConfig, "need at least one filter");
  WarpingFunction warp;
  warp.kind = WarpKind::kMel;
  warp.sample_rate = sample_rate;
  const double nyquist = sample_rate / 2.0;
  const double mel_top = MelFromHz(nyquist);
  warp.boundaries.resize(num_filters + 2);
  for (int i = 0; i <= num_filters + 1; ++i)
    warp.boundaries[i] = HzFromMel(i * mel_top / (num_filters + 1));
  warp.boundaries.front() = 0.0;
  warp.boundaries.back() = nyquist;
  return warp;
}

FilterBank BuildMelFilterBank(int num_filters, int fft_size, int sample_rate) {
  return BuildWarpedFilterBank(MelWarp(num_filters, sample_rate), fft_size);
}

FilterBank InvertFilterBank(const FilterBank &bank) {
  const int n = bank.num_filters();
  const int bins = bank.num_bins();
  Matrix flipped(n, bins);
  for (int j = 0; j < n; ++j)
    for (int b = 0; b < bins; ++b)
      flipped(j, b) = bank.weights()(n - 1 - j, bins - 1 - b);
  return FilterBank(std::move(flipped), bank.fft_size(), bank.sample_rate(),
                    InvertedKind(bank.kind()));
}

// ---------------------------------------------------------------------------
// Ensemble spectrum

EnsembleSpectrum::EnsembleSpectrum(int fft_size, int sample_rate)
    : fft_size_(fft_size), sample_rate_(sample_rate), sum_(fft_size / 2 + 1) {}

void EnsembleSpectrum::CheckCompatible(int fft_size, int sample_rate) const {
  if (fft_size != fft_size_ || sample_rate != sample_rate_)
    throw Error(ErrorCategory::kConfig,
                "ensemble spectrum mismatch: accumulator has fft size " +
                    std::to_string(fft_size_) + " at " +
                    std::to_string(sample_rate_) + " Hz, input has " +
                    std::to_string(fft_size) + " at " +
                    std::to_string(sample_rate) + " Hz");
}

void EnsembleSpectrum::Accumulate(const PowerSpectrumSequence &spectra) {
  CheckCompatible(spectra.fft_size, spectra.sample_rate);
  for (int t = 0; t < spectra.num_frames(); ++t)
    for (int b = 0; b < spectra.num_bins(); ++b)
      sum_[b].Add(spectra.spectra(t, b));
  num_frames_ += spectra.num_frames();
}

void EnsembleSpectrum::Merge(const EnsembleSpectrum &other) {
  CheckCompatible(other.fft_size_, other.sample_rate_);
  for (std::size_t b = 0; b < sum_.size(); ++b) sum_[b].Merge(other.sum_[b]);
  num_frames_ += other.num_frames_;
}

std::vector<double> EnsembleSpectrum::power_sum() const {
  std::vector<double> out(sum_.size());
  for (std::size_t b = 0; b < sum_.size(); ++b) out[b] = sum_[b].Value();
  return out;
}

std::vector<double> EnsembleSpectrum::MeanPower() const {
  if (num_frames_ <= 0)
    throw Error(ErrorCategory::kData, "ensemble spectrum is empty");
  std::vector<double> mean = power_sum();
  for (double &v : mean) v /= static_cast<double>(num_frames_);
  return mean;
}

// ---------------------------------------------------------------------------
// Equal-area warp

std::vector<double> WarpIntegrand(std::span<const double> mean_power) {
  double peak = 0.0;
  for (double p : mean_power) {
    if (!std::isfinite(p) || p < 0.0)
      throw Error(ErrorCategory::kInput,
                  "ensemble spectrum has negative or non-finite power");
    peak = std::max(peak, p);
  }
  if (!(peak > 0.0))
    throw Error(ErrorCategory::kData, "ensemble spectrum degenerate");
  // Shift by the floor level so the integrand is >= 0 and zero only on
  // floored bins.
  const double floor = kEnsembleLogFloor * peak;
  std::vector<double> g(mean_power.size());
  for (std::size_t b = 0; b < g.size(); ++b)
    g[b] = std::log(std::max(mean_power[b], floor)) - std::log(floor);
  return g;
}

// Offset x in [0, h] at which the integral of the linear ramp g0 -> g1 over
// [0, x] reaches `area`.
static double SolveRamp(double g0, double g1, double h, double area) {
  const double a = (g1 - g0) / (2.0 * h);
  const double disc = std::max(0.0, g0 * g0 + 4.0 * a * area);
  const double denom = g0 + std::sqrt(disc);
  if (denom <= 0.0) return 0.0;
  return std::clamp(2.0 * area / denom, 0.0, h);
}

WarpingFunction EstimateSfccWarp(std::span<const double> mean_power,
                                 int sample_rate, int num_filters) {
  if (num_filters < 1)
    throw Error(ErrorCategory::kConfig, "need at least one filter");
  if (mean_power.size() < 2)
    throw Error(ErrorCategory::kConfig, "ensemble spectrum too short");
  const std::vector<double> g = WarpIntegrand(mean_power);
  const int bins = static_cast<int>(g.size());
  const double nyquist = sample_rate / 2.0;
  const double bin_hz = nyquist / (bins - 1);

  // Cumulative integral of the piecewise-linear integrand at bin centres.
  std::vector<double> cum(bins, 0.0);
  for (int b = 1; b < bins; ++b)
    cum[b] = cum[b - 1] + 0.5 * (g[b - 1] + g[b]) * bin_hz;
  const double total = cum.back();
  if (!(total > 0.0))
    throw Error(ErrorCategory::kData, "ensemble spectrum degenerate");

  WarpingFunction warp;
  warp.kind = WarpKind::kSfcc;
  warp.sample_rate = sample_rate;
  warp.boundaries.assign(num_filters + 2, 0.0);
  const int intervals = num_filters + 1;
  for (int i = 1; i < intervals; ++i) {
    const double target = total * i / intervals;
    const auto it = std::lower_bound(cum.begin() + 1, cum.end(), target);
    const int b = std::min(static_cast<int>(it - cum.begin()), bins - 1);
    const double x = SolveRamp(g[b - 1], g[b], bin_hz, target - cum[b - 1]);
    warp.boundaries[i] = (b - 1) * bin_hz + x;
  }
  warp.boundaries.back() = nyquist;
  for (int i = 1; i <= intervals; ++i)
    if (!(warp.boundaries[i] > warp.boundaries[i - 1]))
      throw Error(ErrorCategory::kData,
                  "ensemble spectrum too concentrated for " +
                      std::to_string(num_filters) + " filters");
  return warp;
}

WarpingFunction EstimateSfccWarp(const EnsembleSpectrum &ensemble,
                                 int num_filters) {
  const std::vector<double> mean = ensemble.MeanPower();
  return EstimateSfccWarp(mean, ensemble.sample_rate(), num_filters);
}

// ---------------------------------------------------------------------------
// Warp file

static std::string FormatDouble(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void WriteWarpFile(const std::filesystem::path &path,
                   const WarpingFunction &warp) {
  ValidateWarp(warp);
  std::string text = "sfcc-warp v1 " + std::to_string(warp.num_filters()) +
                     " " + std::to_string(warp.sample_rate) + "\n";
  for (double b : warp.boundaries) text += FormatDouble(b) + "\n";
  internal::WriteFileAtomic(path, text);
}

WarpingFunction ReadWarpFile(const std::filesystem::path &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is)
    throw Error(ErrorCategory::kIo, "cannot open warp file " + path.string());
  std::string line;
  std::getline(is, line);
  std::istringstream header(line);
  std::string magic, version;
  int n_filters = 0, sample_rate = 0;
  if (!(header >> magic >> version >> n_filters >> sample_rate) ||
      magic != "sfcc-warp" || version != "v1" || n_filters < 1)
    throw Error(ErrorCategory::kCorruption,
                "bad warp file header in " + path.string());

  WarpingFunction warp;
  warp.kind = WarpKind::kSfcc;
  warp.sample_rate = sample_rate;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    double v = 0.0;
    const auto res = std::from_chars(line.data(), line.data() + line.size(), v);
    if (res.ec != std::errc() || res.ptr != line.data() + line.size())
      throw Error(ErrorCategory::kCorruption,
                  "bad boundary value '" + line + "' in " + path.string());
    warp.boundaries.push_back(v);
  }
  if (static_cast<int>(warp.boundaries.size()) != n_filters + 2)
    throw Error(ErrorCategory::kCorruption,
                "warp file " + path.string() + " declares " +
                    std::to_string(n_filters) + " filters but holds " +
                    std::to_string(warp.boundaries.size()) + " boundaries");
  ValidateWarp(warp);
  return warp;
}

}  // namespace antispoof
