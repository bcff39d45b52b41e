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

#include "dsp.hpp"

#include <cmath>
#include <numbers>

namespace scenaware {

WindowSequence::WindowSequence(std::shared_ptr<const Matrix> logmel, int window_frames,
                               int hop, double frame_hop_s, std::string clip_id)
    : logmel_(std::move(logmel)),
      window_frames_(window_frames),
      hop_(hop),
      window_hop_s_(hop * frame_hop_s),
      clip_id_(std::move(clip_id)) {
  count_ = ContextWindowCount(static_cast<std::size_t>(logmel_->rows()), window_frames, hop);
}

Eigen::Map<const RowVector> WindowSequence::window(std::size_t i) const {
  Require(i < count_, "window index out of range");
  const double* base = logmel_->data() + start_row(i) * logmel_->cols();
  return Eigen::Map<const RowVector>(base, window_size());
}

void Fft(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  Require(n > 0 && (n & (n - 1)) == 0, "FFT size must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        // Twiddles computed directly rather than by recurrence to keep error flat.
        const std::complex<double> w(std::cos(ang * k), std::sin(ang * k));
        const auto u = a[i + k];
        const auto v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
}

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double MelToHz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

MelConfig ResolveMelConfig(const MelConfig& mel, int sample_rate) {
  MelConfig out = mel;
  if (out.fmax_hz <= 0.0) out.fmax_hz = sample_rate / 2.0 - 200.0;
  Require(out.num_bands >= 1, "mel band count must be >= 1");
  Require(out.fmin_hz >= 0.0 && out.fmin_hz < out.fmax_hz, "mel fmin must be < fmax");
  Require(out.fmax_hz <= sample_rate / 2.0, "mel fmax exceeds Nyquist");
  return out;
}

std::vector<double> MelBandCenters(const MelConfig& mel_in, int sample_rate) {
  const MelConfig mel = ResolveMelConfig(mel_in, sample_rate);
  const double lo = HzToMel(mel.fmin_hz);
  const double hi = HzToMel(mel.fmax_hz);
  std::vector<double> centers(mel.num_bands);
  for (int b = 0; b < mel.num_bands; ++b)
    centers[b] = MelToHz(lo + (hi - lo) * (b + 1) / (mel.num_bands + 1));
  return centers;
}

Matrix MelFilterbank(const MelConfig& mel_in, int sample_rate, int n_fft) {
  const MelConfig mel = ResolveMelConfig(mel_in, sample_rate);
  const int bins = n_fft / 2 + 1;
  const double lo = HzToMel(mel.fmin_hz);
  const double hi = HzToMel(mel.fmax_hz);
  std::vector<double> edges(mel.num_bands + 2);
  for (int i = 0; i < mel.num_bands + 2; ++i)
    edges[i] = MelToHz(lo + (hi - lo) * i / (mel.num_bands + 1));

  Matrix fb = Matrix::Zero(mel.num_bands, bins);
  for (int b = 0; b < mel.num_bands; ++b) {
    const double left = edges[b], center = edges[b + 1], right = edges[b + 2];
    for (int k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate / n_fft;
      double w = 0.0;
      if (f > left && f <= center)
        w = (f - left) / (center - left);
      else if (f > center && f < right)
        w = (right - f) / (right - center);
      fb(b, k) = w;
    }
  }
  return fb;
}

std::size_t FrameCount(std::size_t num_samples, std::size_t frame_len, std::size_t hop) {
  if (num_samples < frame_len) return 0;
  return 1 + (num_samples - frame_len) / hop;
}

LogMelSpectrogram LogMel(const Waveform& wav, double frame_len_s, double hop_s,
                         const MelConfig& mel_in) {
  Require(wav.sample_rate == 8000 || wav.sample_rate == 16000,
          "sample rate must be 8000 or 16000");
  const auto frame_len = static_cast<std::size_t>(std::lround(frame_len_s * wav.sample_rate));
  const auto hop = static_cast<std::size_t>(std::lround(hop_s * wav.sample_rate));
  Require(frame_len >= 2, "frame length must cover at least 2 samples");
  Require(hop >= 1, "hop must cover at least 1 sample");
  const MelConfig mel = ResolveMelConfig(mel_in, wav.sample_rate);

  const std::size_t num_frames = FrameCount(wav.samples.size(), frame_len, hop);
  if (num_frames == 0)
    Fail(ErrorKind::kTooShort, "waveform shorter than one analysis frame");

  std::size_t n_fft = 1;
  while (n_fft < frame_len) n_fft <<= 1;
  const Matrix fb = MelFilterbank(mel, wav.sample_rate, static_cast<int>(n_fft));
  const std::size_t bins = n_fft / 2 + 1;

  std::vector<double> hann(frame_len);
  for (std::size_t n = 0; n < frame_len; ++n)
    hann[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / frame_len);

  LogMelSpectrogram out;
  out.frame_hop_s = static_cast<double>(hop) / wav.sample_rate;
  out.mel = mel;
  out.frames.resize(static_cast<Eigen::Index>(num_frames), mel.num_bands);

  std::vector<std::complex<double>> buf(n_fft);
  Vector power(static_cast<Eigen::Index>(bins));
  for (std::size_t t = 0; t < num_frames; ++t) {
    const double* x = wav.samples.data() + t * hop;
    for (std::size_t n = 0; n < n_fft; ++n) buf[n] = n < frame_len ? x[n] * hann[n] : 0.0;
    Fft(buf);
    for (std::size_t k = 0; k < bins; ++k) power[k] = std::norm(buf[k]);
    const Vector energy = fb * power;
    for (int b = 0; b < mel.num_bands; ++b)
      out.frames(t, b) = std::log(std::max(energy[b], kEnergyFloor));
  }
  return out;
}

namespace {

Matrix DctBasis(int n) {
  // Row k: orthonormal DCT-II basis vector.
  Matrix basis(n, n);
  for (int k = 0; k < n; ++k) {
    const double scale = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
    for (int i = 0; i < n; ++i)
      basis(k, i) = scale * std::cos(std::numbers::pi * (i + 0.5) * k / n);
  }
  return basis;
}

}  // namespace

Vector DctII(const Vector& x) { return DctBasis(static_cast<int>(x.size())) * x; }

Vector InverseDctII(const Vector& c) {
  return DctBasis(static_cast<int>(c.size())).transpose() * c;
}

MfccMatrix Mfcc(const LogMelSpectrogram& logmel, int num_ceps) {
  const auto bands = static_cast<int>(logmel.frames.cols());
  Require(num_ceps >= 1, "num_ceps must be >= 1");
  Require(num_ceps <= bands, "num_ceps (" + std::to_string(num_ceps) +
                                 ") exceeds mel band count (" + std::to_string(bands) + ")");
  const Matrix basis = DctBasis(bands).topRows(num_ceps);
  MfccMatrix out;
  out.frame_hop_s = logmel.frame_hop_s;
  out.frames = logmel.frames * basis.transpose();
  return out;
}

std::size_t ContextWindowCount(std::size_t num_frames, int window_frames, int hop_windows) {
  const auto t = static_cast<std::size_t>(window_frames);
  if (num_frames < t) return 0;
  return 1 + (num_frames - t) / static_cast<std::size_t>(hop_windows);
}

WindowSequence ContextWindows(const LogMelSpectrogram& logmel, int window_frames,
                              int hop_windows, std::string clip_id) {
  Require(window_frames >= 1, "window length must be >= 1 frame");
  Require(hop_windows >= 1, "window hop must be >= 1 frame");
  return WindowSequence(std::make_shared<const Matrix>(logmel.frames), window_frames,
                        hop_windows, logmel.frame_hop_s, std::move(clip_id));
}

}  // namespace scenaware
