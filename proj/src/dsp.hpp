/* Copyright (c) 2026 The scenaware Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License. */

#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "common.hpp"
#include "io.hpp"

namespace scenaware {

inline constexpr double kEnergyFloor = 1e-10;

struct MelConfig {
  int num_bands = 40;
  double fmin_hz = 60.0;
  // <= 0 selects sample_rate / 2 - 200.
  double fmax_hz = 0.0;
};

struct DspConfig {
  double frame_len_s = 0.025;
  double hop_s = 0.010;
  MelConfig mel;
  int num_ceps = 40;
  int window_frames = 96;
  int window_hop = 48;
};

struct LogMelSpectrogram {
  Matrix frames;  // num_frames x F, natural log, floored
  double frame_hop_s = 0.0;
  MelConfig mel;  // resolved (fmax filled in)
};

struct MfccMatrix {
  Matrix frames;  // num_frames x num_ceps
  double frame_hop_s = 0.0;
};

// Windows are row ranges of a shared log-mel matrix; window(i) is the
// contiguous (T x F) block starting at row i * hop, flattened row-major.
class WindowSequence {
 public:
  WindowSequence() = default;
  WindowSequence(std::shared_ptr<const Matrix> logmel, int window_frames, int hop,
                 double frame_hop_s, std::string clip_id);

  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }
  bool too_short() const { return count_ == 0; }
  int window_frames() const { return window_frames_; }
  int num_bands() const { return logmel_ ? static_cast<int>(logmel_->cols()) : 0; }
  // Length of a flattened window (T * F).
  int window_size() const { return window_frames_ * num_bands(); }
  double window_hop_s() const { return window_hop_s_; }
  const std::string& clip_id() const { return clip_id_; }
  std::size_t start_row(std::size_t i) const { return i * static_cast<std::size_t>(hop_); }

  Eigen::Map<const RowVector> window(std::size_t i) const;

 private:
  std::shared_ptr<const Matrix> logmel_;
  int window_frames_ = 0;
  int hop_ = 1;
  double window_hop_s_ = 0.0;
  std::size_t count_ = 0;
  std::string clip_id_;
};

// In-place iterative radix-2 FFT; size must be a power of two.
void Fft(std::vector<std::complex<double>>& data);

double HzToMel(double hz);
double MelToHz(double mel);

// F x (n_fft/2 + 1) triangular HTK-mel filter weights, unnormalized (peak 1).
Matrix MelFilterbank(const MelConfig& mel, int sample_rate, int n_fft);
// Center frequencies (Hz) of the F filters.
std::vector<double> MelBandCenters(const MelConfig& mel, int sample_rate);

MelConfig ResolveMelConfig(const MelConfig& mel, int sample_rate);

std::size_t FrameCount(std::size_t num_samples, std::size_t frame_len, std::size_t hop);

LogMelSpectrogram LogMel(const Waveform& wav, double frame_len_s, double hop_s,
                         const MelConfig& mel);

// Orthonormal DCT-II of each row, first num_ceps coefficients kept.
MfccMatrix Mfcc(const LogMelSpectrogram& logmel, int num_ceps);
// Orthonormal DCT-II / DCT-III pair on a single vector.
Vector DctII(const Vector& x);
Vector InverseDctII(const Vector& c);

WindowSequence ContextWindows(const LogMelSpectrogram& logmel, int window_frames,
                              int hop_windows, std::string clip_id = {});

std::size_t ContextWindowCount(std::size_t num_frames, int window_frames, int hop_windows);

}  // namespace scenaware
