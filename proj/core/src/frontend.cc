// core/src/frontend.cc

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

#include "antispoof/frontend.h"

#include <fftw3.h>

#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>

#include "antispoof/error.h"

namespace antispoof {

namespace {

// fftw planner calls are not thread-safe; execution on distinct arrays is.
std::mutex &PlannerMutex() {
  static std::mutex mu;
  return mu;
}

struct FftwFree {
  void operator()(void *p) const { fftw_free(p); }
};

template <typename T>
std::unique_ptr<T[], FftwFree> FftwAlloc(std::size_t n) {
  return std::unique_ptr<T[], FftwFree>(
      static_cast<T *>(fftw_malloc(sizeof(T) * n)));
}

std::string UttLabel(const AudioBuffer &audio) {
  return audio.utterance_id.empty() ? std::string("<unnamed>")
                                    : audio.utterance_id;
}

}  // namespace

int FrameLengthSamples(double frame_ms, int sample_rate) {
  return static_cast<int>(std::lround(frame_ms * 1e-3 * sample_rate));
}

int NextPowerOfTwo(int frame_length) {
  int k = 1;
  while (k < frame_length) k <<= 1;
  return k;
}

FrameMatrix FrameSignal(const AudioBuffer &audio, double frame_ms,
                        double overlap_fraction) {
  if (audio.sample_rate <= 0)
    throw Error(ErrorCategory::kConfig, "sample rate must be positive");
  if (!(overlap_fraction >= 0.0 && overlap_fraction < 1.0))
    throw Error(ErrorCategory::kConfig,
                "overlap fraction must lie in [0, 1)");
  const int frame_length = FrameLengthSamples(frame_ms, audio.sample_rate);
  if (frame_length < 2)
    throw Error(ErrorCategory::kConfig,
                "frame must span at least 2 samples");
  const int hop = std::max(
      1, static_cast<int>(std::lround(frame_length * (1.0 - overlap_fraction))));

  const auto len = static_cast<long long>(audio.samples.size());
  if (len < frame_length)
    throw Error(ErrorCategory::kInput,
                "utterance too short: " + UttLabel(audio) + " has " +
                    std::to_string(len) + " samples, frame needs " +
                    std::to_string(frame_length));
  const long long num_frames = (len - frame_length) / hop + 1;

  FrameMatrix out;
  out.hop = hop;
  out.frames.resize(num_frames, frame_length);
  for (long long t = 0; t < num_frames; ++t) {
    const double *src = audio.samples.data() + t * hop;
    for (int n = 0; n < frame_length; ++n) out.frames(t, n) = src[n];
  }
  return out;
}

std::vector<double> HammingWindow(int length) {
  if (length < 2)
    throw Error(ErrorCategory::kConfig, "Hamming window needs length >= 2");
  std::vector<double> w(length);
  const double denom = static_cast<double>(length - 1);
  // Fill symmetrically so w(n) == w(N-1-n) holds bit for bit.
  for (int n = 0; n <= (length - 1) / 2; ++n) {
    const double v = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * n / denom);
    w[n] = v;
    w[length - 1 - n] = v;
  }
  return w;
}

FrameMatrix ApplyHamming(const FrameMatrix &frames) {
  const std::vector<double> w = HammingWindow(frames.frame_length());
  FrameMatrix out = frames;
  const Eigen::Map<const Eigen::RowVectorXd> window(w.data(),
                                                    static_cast<int>(w.size()));
  out.frames.array().rowwise() *= window.array();
  return out;
}

PowerSpectrumSequence PowerSpectrum(const FrameMatrix &frames, int fft_size,
                                    int sample_rate) {
  const int n = frames.frame_length();
  const int t_count = frames.num_frames();
  if (fft_size < n)
    throw Error(ErrorCategory::kConfig,
                "fft size " + std::to_string(fft_size) +
                    " is smaller than the frame length " + std::to_string(n));
  const int bins = fft_size / 2 + 1;

  PowerSpectrumSequence out;
  out.fft_size = fft_size;
  out.sample_rate = sample_rate;
  out.spectra.setZero(t_count, bins);
  if (t_count == 0) return out;

  auto in = FftwAlloc<double>(static_cast<std::size_t>(t_count) * fft_size);
  auto spec =
      FftwAlloc<fftw_complex>(static_cast<std::size_t>(t_count) * bins);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    plan = fftw_plan_many_dft_r2c(1, &fft_size, t_count, in.get(), nullptr, 1,
                                  fft_size, spec.get(), nullptr, 1, bins,
                                  FFTW_ESTIMATE);
  }
  if (plan == nullptr)
    throw Error(ErrorCategory::kConfig, "fftw could not plan a transform of "
                                        "size " + std::to_string(fft_size));

  for (int t = 0; t < t_count; ++t) {
    double *row = in.get() + static_cast<std::size_t>(t) * fft_size;
    for (int i = 0; i < n; ++i) row[i] = frames.frames(t, i);
    for (int i = n; i < fft_size; ++i) row[i] = 0.0;
  }
  fftw_execute(plan);

  const double scale = 1.0 / n;
  for (int t = 0; t < t_count; ++t) {
    const fftw_complex *row = spec.get() + static_cast<std::size_t>(t) * bins;
    for (int b = 0; b < bins; ++b)
      out.spectra(t, b) = scale * (row[b][0] * row[b][0] + row[b][1] * row[b][1]);
  }

  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

AudioBuffer PreEmphasize(const AudioBuffer &audio, double coeff) {
  AudioBuffer out = audio;
  for (std::size_t i = audio.samples.size(); i-- > 1;)
    out.samples[i] = audio.samples[i] - coeff * audio.samples[i - 1];
  return out;
}

PowerSpectrumSequence ComputePowerSpectra(const AudioBuffer &audio,
                                          const FrontendOptions &opts) {
  FrameMatrix frames =
      opts.pre_emphasis
          ? FrameSignal(PreEmphasize(audio, opts.pre_emphasis_coeff),
                        opts.frame_ms, opts.overlap_fraction)
          : FrameSignal(audio, opts.frame_ms, opts.overlap_fraction);
  const int n = frames.frame_length();
  const int fft_size = opts.pad_to_power_of_two ? NextPowerOfTwo(n) : n;
  return PowerSpectrum(ApplyHamming(frames), fft_size, audio.sample_rate);
}

}  // namespace antispoof
