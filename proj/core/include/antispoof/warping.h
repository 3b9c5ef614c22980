// core/include/antispoof/warping.h

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

#ifndef ANTISPOOF_WARPING_H_
#define ANTISPOOF_WARPING_H_

#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "antispoof/exact_sum.h"
#include "antispoof/frontend.h"
#include "antispoof/matrix.h"

namespace antispoof {

enum class WarpKind { kMel, kInvertedMel, kSfcc, kInvertedSfcc };

std::string_view WarpKindName(WarpKind kind);

/// The counterpart produced by flipping a bank over the frequency axis.
WarpKind InvertedKind(WarpKind kind);

double MelFromHz(double hz);
double HzFromMel(double mel);

/// Filter edge/centre frequencies in Hz. boundaries.front() is 0,
/// boundaries.back() is Nyquist, and filter j (0-based) spans
/// boundaries[j] .. boundaries[j + 2] with its peak at boundaries[j + 1].
/// Inverted kinds keep the boundaries of the warp they mirror; the bank is
/// the flip of the bank on those boundaries and EdgeFrequencies() gives the
/// mirrored edges.
struct WarpingFunction {
  WarpKind kind = WarpKind::kSfcc;
  int sample_rate = 16000;
  std::vector<double> boundaries;

  int num_filters() const { return static_cast<int>(boundaries.size()) - 2; }
  /// Edges of the filters actually built, ascending.
  std::vector<double> EdgeFrequencies() const;
};

/// Triangular filters sampled at FFT bin centres. Each filter keeps the
/// inclusive bin range of its non-zero weights so that energies can be
/// summed over the support only.
class FilterBank {
 public:
  FilterBank() = default;
  FilterBank(Matrix weights, int fft_size, int sample_rate, WarpKind kind);

  const Matrix &weights() const { return weights_; }
  int num_filters() const { return static_cast<int>(weights_.rows()); }
  int num_bins() const { return static_cast<int>(weights_.cols()); }
  int fft_size() const { return fft_size_; }
  int sample_rate() const { return sample_rate_; }
  WarpKind kind() const { return kind_; }

  int support_begin(int j) const { return support_[j].first; }
  int support_end(int j) const { return support_[j].second; }  // inclusive
  int peak_bin(int j) const;

  /// Weighted sum of `power` under filter j. The support is summed as
  /// mirrored pairs working inwards, which makes the result invariant to
  /// reversing both the filter and the spectrum.
  double FilterEnergy(int j, std::span<const double> power) const;

  bool operator==(const FilterBank &other) const;

 private:
  Matrix weights_;  // num_filters x (fft_size / 2 + 1)
  int fft_size_ = 0;
  int sample_rate_ = 0;
  WarpKind kind_ = WarpKind::kMel;
  std::vector<std::pair<int, int>> support_;
};

/// Mirror image of a warp: the kind switches to its inverted counterpart.
/// Applying it twice gives back the identical warp.
WarpingFunction InvertWarp(const WarpingFunction &warp);

/// Builds unit-peak triangles on the given boundaries. Throws kConfig when
/// any filter ends up with no positive weight at bin resolution. Inverted
/// kinds are built as the flip of the bank on their boundaries, so
/// BuildWarpedFilterBank(InvertWarp(w), K) equals
/// InvertFilterBank(BuildWarpedFilterBank(w, K)) exactly.
FilterBank BuildWarpedFilterBank(const WarpingFunction &warp, int fft_size);

/// Boundaries equally spaced on the mel scale between 0 Hz and Nyquist.
WarpingFunction MelWarp(int num_filters, int sample_rate);

FilterBank BuildMelFilterBank(int num_filters, int fft_size, int sample_rate);

/// Mirrors the bank over the frequency axis: new filter j at bin b is old
/// filter (n - 1 - j) at bin (K/2 - b). Applying it twice is the identity.
FilterBank InvertFilterBank(const FilterBank &bank);

/// Corpus-level mean periodogram. Per-bin sums are exact (see ExactSum), so
/// the mean is bit-identical for any accumulation or merge order.
class EnsembleSpectrum {
 public:
  EnsembleSpectrum() = default;
  EnsembleSpectrum(int fft_size, int sample_rate);

  void Accumulate(const PowerSpectrumSequence &spectra);
  void Merge(const EnsembleSpectrum &other);

  int fft_size() const { return fft_size_; }
  int sample_rate() const { return sample_rate_; }
  long long num_frames() const { return num_frames_; }
  std::vector<double> power_sum() const;

  /// sum / count. Throws kData when nothing has been accumulated.
  std::vector<double> MeanPower() const;

 private:
  void CheckCompatible(int fft_size, int sample_rate) const;

  int fft_size_ = 0;
  int sample_rate_ = 0;
  long long num_frames_ = 0;
  std::vector<ExactSum> sum_;
};

/// Relative floor on the mean power before taking the log.
inline constexpr double kEnsembleLogFloor = 1e-10;

/// The integrand that gets partitioned: ln(max(p, floor) / floor) with
/// floor = kEnsembleLogFloor * max(p). Non-negative, zero only on bins where
/// the floor engages, constant for a flat spectrum.
std::vector<double> WarpIntegrand(std::span<const double> mean_power);

/// Equal-area partition of the log ensemble spectrum into num_filters + 1
/// intervals over 0 .. Nyquist. Returns num_filters + 2 boundaries. The
/// integrand is taken as piecewise linear between bin centres and each
/// boundary is placed by inverting its cumulative integral exactly.
/// Throws kData ("ensemble spectrum degenerate") when the integrand has no
/// area.
WarpingFunction EstimateSfccWarp(const EnsembleSpectrum &ensemble,
                                 int num_filters);

/// Same, from an explicit mean power curve over bins 0 .. K/2.
WarpingFunction EstimateSfccWarp(std::span<const double> mean_power,
                                 int sample_rate, int num_filters);

/// Text format: header `sfcc-warp v1 <n_filters> <sample_rate>` then one
/// boundary per line. Values are written with enough digits to reload to
/// the identical double.
void WriteWarpFile(const std::filesystem::path &path,
                   const WarpingFunction &warp);
WarpingFunction ReadWarpFile(const std::filesystem::path &path);

}  // namespace antispoof

#endif  // ANTISPOOF_WARPING_H_
