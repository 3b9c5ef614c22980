// core/include/antispoof/frontend.h

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

#ifndef ANTISPOOF_FRONTEND_H_
#define ANTISPOOF_FRONTEND_H_

#include <string>
#include <vector>

#include "antispoof/matrix.h"

namespace antispoof {

struct AudioBuffer {
  std::vector<double> samples;  // nominally in [-1, 1]
  int sample_rate = 16000;
  std::string utterance_id;     // used in error messages only
};

struct FrameMatrix {
  Matrix frames;  // T x frame_length
  int hop = 0;

  int frame_length() const { return static_cast<int>(frames.cols()); }
  int num_frames() const { return static_cast<int>(frames.rows()); }
};

/// One-sided periodogram per frame: spectra(t, b) for b = 0 .. K/2, where
/// bin b sits at b * sample_rate / K Hz.
struct PowerSpectrumSequence {
  Matrix spectra;  // T x (K/2 + 1)
  int fft_size = 0;
  int sample_rate = 0;

  int num_bins() const { return fft_size / 2 + 1; }
  int num_frames() const { return static_cast<int>(spectra.rows()); }
};

struct FrontendOptions {
  double frame_ms = 20.0;
  double overlap_fraction = 0.5;
  // Zero-pad each frame to the next power of two before the transform. When
  // false the transform runs at the frame length.
  bool pad_to_power_of_two = true;
  // First-order pre-emphasis coefficient applied before framing. Off unless
  // set; 0.97 is the usual value when it is wanted.
  bool pre_emphasis = false;
  double pre_emphasis_coeff = 0.97;
};

/// Number of samples in a frame of `frame_ms` at `sample_rate`, rounded to
/// the nearest sample.
int FrameLengthSamples(double frame_ms, int sample_rate);

/// Smallest power of two >= frame_length.
int NextPowerOfTwo(int frame_length);

/// Splits the signal into frames of frame_ms with the given fractional
/// overlap. The trailing partial frame is dropped. Throws kInput
/// ("utterance too short") when not even one frame fits.
FrameMatrix FrameSignal(const AudioBuffer &audio, double frame_ms,
                        double overlap_fraction);

/// Hamming weights w(n) = 0.54 - 0.46 cos(2 pi n / (N - 1)).
std::vector<double> HammingWindow(int length);

FrameMatrix ApplyHamming(const FrameMatrix &frames);

/// Periodogram (1/N) |DFT_K(frame)|^2 with N the frame length, each frame
/// zero-padded to fft_size. Requires fft_size >= frame length.
PowerSpectrumSequence PowerSpectrum(const FrameMatrix &frames, int fft_size,
                                    int sample_rate);

/// y[n] = x[n] - coeff * x[n - 1], with y[0] = x[0].
AudioBuffer PreEmphasize(const AudioBuffer &audio, double coeff);

/// Framing, Hamming window and periodogram in one go.
PowerSpectrumSequence ComputePowerSpectra(const AudioBuffer &audio,
                                          const FrontendOptions &opts);

}  // namespace antispoof

#endif  // ANTISPOOF_FRONTEND_H_
