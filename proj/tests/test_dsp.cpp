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

#include <cmath>
#include <complex>
#include <cstring>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "dsp.hpp"

using namespace scenaware;

namespace {

Waveform Sine(double hz, double seconds, int sr, double amp = 0.5) {
  Waveform w;
  w.sample_rate = sr;
  const auto n = static_cast<std::size_t>(seconds * sr);
  w.samples.resize(n);
  for (std::size_t k = 0; k < n; ++k)
    w.samples[k] = amp * std::sin(2 * std::numbers::pi * hz * static_cast<double>(k) / sr);
  return w;
}

LogMelSpectrogram Rows(int rows, int bands = 4) {
  LogMelSpectrogram lm;
  lm.frame_hop_s = 0.01;
  lm.frames.resize(rows, bands);
  for (int r = 0; r < rows; ++r)
    for (int b = 0; b < bands; ++b) lm.frames(r, b) = r * 100 + b;
  return lm;
}

}  // namespace

TEST_CASE("all-zero waveform floors every cell") {
  Waveform w;
  w.sample_rate = 16000;
  w.samples.assign(16000, 0.0);
  const auto lm = LogMel(w, 0.025, 0.010, MelConfig{});
  CHECK(lm.frames.rows() == 98);
  CHECK(lm.frames.cols() == 40);
  CHECK(lm.frames.maxCoeff() == std::log(1e-10));
  CHECK(lm.frames.minCoeff() == std::log(1e-10));
}

TEST_CASE("1 kHz sine peaks in the band whose center is nearest 1 kHz") {
  // Band centers from the HTK formula, evaluated here independently.
  const double lo = 2595.0 * std::log10(1.0 + 60.0 / 700.0);
  const double hi = 2595.0 * std::log10(1.0 + 7800.0 / 700.0);
  int nearest = -1;
  double best = 1e18;
  for (int b = 0; b < 40; ++b) {
    const double mel = lo + (hi - lo) * (b + 1) / 41.0;
    const double hz = 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
    if (std::abs(hz - 1000.0) < best) {
      best = std::abs(hz - 1000.0);
      nearest = b;
    }
  }
  const auto lm = LogMel(Sine(1000.0, 1.0, 16000), 0.025, 0.010, MelConfig{});
  REQUIRE(lm.frames.rows() > 0);
  for (Eigen::Index t = 0; t < lm.frames.rows(); ++t) {
    Eigen::Index arg;
    lm.frames.row(t).maxCoeff(&arg);
    CHECK(arg == nearest);
  }
  CHECK(lm.mel.fmax_hz == 7800.0);
}

TEST_CASE("white noise shape follows the frame-count formula") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int sr : {8000, 16000}) {
    for (std::size_t n : {std::size_t(400), std::size_t(1234), std::size_t(8000), std::size_t(12345)}) {
      Waveform w;
      w.sample_rate = sr;
      for (std::size_t i = 0; i < n; ++i) w.samples.push_back(u(rng));
      const std::size_t frame = sr / 40, hop = sr / 100;
      if (n < frame) continue;
      const auto lm = LogMel(w, 0.025, 0.010, MelConfig{});
      CHECK(static_cast<std::size_t>(lm.frames.rows()) == 1 + (n - frame) / hop);
      CHECK(lm.frames.cols() == 40);
      CHECK(lm.frames.minCoeff() >= std::log(1e-10));
    }
  }
}

TEST_CASE("log_mel rejects short and unsupported input") {
  Waveform w;
  w.sample_rate = 16000;
  w.samples.assign(399, 0.1);
  try {
    LogMel(w, 0.025, 0.010, MelConfig{});
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kTooShort);
  }
  w.sample_rate = 44100;
  w.samples.assign(44100, 0.0);
  CHECK_THROWS_AS(LogMel(w, 0.025, 0.010, MelConfig{}), Error);
  w.sample_rate = 8000;
  MelConfig too_high;
  too_high.fmax_hz = 4500;
  CHECK_THROWS_AS(LogMel(w, 0.025, 0.010, too_high), Error);
  CHECK_THROWS_AS(LogMel(w, 0.0001, 0.010, MelConfig{}), Error);
}

TEST_CASE("log_mel is bitwise deterministic") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g(0.0, 0.2);
  Waveform w;
  w.sample_rate = 8000;
  for (int i = 0; i < 8000; ++i) w.samples.push_back(g(rng));
  const auto a = LogMel(w, 0.025, 0.010, MelConfig{});
  const auto b = LogMel(w, 0.025, 0.010, MelConfig{});
  CHECK(a.frames.size() == b.frames.size());
  CHECK(std::memcmp(a.frames.data(), b.frames.data(), a.frames.size() * sizeof(double)) == 0);
}

TEST_CASE("Hann-windowed bin-centered sinusoid stays within one bin") {
  const std::size_t n = 512;
  for (std::size_t bin : {std::size_t(5), std::size_t(37), std::size_t(200)}) {
    std::vector<std::complex<double>> buf(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double hann = 0.5 - 0.5 * std::cos(2 * std::numbers::pi * i / n);
      buf[i] = hann * std::sin(2 * std::numbers::pi * bin * i / n);
    }
    Fft(buf);
    double total = 0, near = 0;
    for (std::size_t k = 0; k <= n / 2; ++k) {
      const double e = std::norm(buf[k]);
      total += e;
      if (k + 1 >= bin && k <= bin + 1) near += e;
    }
    CHECK(near / total >= 0.99);
  }
}

TEST_CASE("FFT matches a direct DFT") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  const std::size_t n = 64;
  std::vector<std::complex<double>> x(n);
  for (auto& v : x) v = {g(rng), g(rng)};
  auto y = x;
  Fft(y);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> s = 0;
    for (std::size_t t = 0; t < n; ++t)
      s += x[t] * std::polar(1.0, -2 * std::numbers::pi * double(k * t) / double(n));
    CHECK(std::abs(s - y[k]) < 1e-9);
  }
  std::vector<std::complex<double>> odd(6);
  CHECK_THROWS_AS(Fft(odd), Error);
}

TEST_CASE("constant log-mel row gives DC only") {
  LogMelSpectrogram lm;
  lm.frames = Matrix::Constant(2, 40, -3.25);
  const auto m = Mfcc(lm, 40);
  for (int r = 0; r < 2; ++r) {
    CHECK(std::abs(m.frames(r, 0) - (-3.25 * std::sqrt(40.0))) < 1e-9);
    for (int c = 1; c < 40; ++c) CHECK(std::abs(m.frames(r, c)) < 1e-9);
  }
}

TEST_CASE("DCT-II matches brute-force summation and inverts exactly") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 3.0);
  const int f = 40;
  LogMelSpectrogram lm;
  lm.frames.resize(5, f);
  for (Eigen::Index i = 0; i < lm.frames.size(); ++i) lm.frames.data()[i] = g(rng);
  const auto m = Mfcc(lm, f);
  for (int r = 0; r < 5; ++r) {
    for (int k = 0; k < f; ++k) {
      double s = 0;
      for (int i = 0; i < f; ++i)
        s += lm.frames(r, i) * std::cos(std::numbers::pi * (i + 0.5) * k / f);
      s *= k == 0 ? std::sqrt(1.0 / f) : std::sqrt(2.0 / f);
      CHECK(std::abs(s - m.frames(r, k)) < 1e-9);
    }
    const Vector back = InverseDctII(m.frames.row(r).transpose());
    CHECK((back - lm.frames.row(r).transpose()).cwiseAbs().maxCoeff() <= 1e-9);
  }
  const Vector x = lm.frames.row(0).transpose();
  CHECK((InverseDctII(DctII(x)) - x).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK(Mfcc(lm, 13).frames.cols() == 13);
  CHECK(Mfcc(lm, 13).frames.rows() == 5);
}

TEST_CASE("num_ceps above band count is rejected") {
  LogMelSpectrogram lm;
  lm.frames = Matrix::Zero(3, 20);
  CHECK_THROWS_AS(Mfcc(lm, 21), Error);
  CHECK_THROWS_AS(Mfcc(lm, 0), Error);
}

TEST_CASE("context window boundary cases") {
  const auto one = ContextWindows(Rows(96), 96, 48, "a");
  CHECK(one.size() == 1);
  CHECK_FALSE(one.too_short());

  const auto three = ContextWindows(Rows(192), 96, 48, "b");
  REQUIRE(three.size() == 3);
  CHECK(three.start_row(0) == 0);
  CHECK(three.start_row(1) == 48);
  CHECK(three.start_row(2) == 96);
  CHECK(three.window(1)[0] == 48 * 100);
  CHECK(three.window(2)[three.window_size() - 1] == 191 * 100 + 3);
  CHECK(three.window_size() == 96 * 4);
  CHECK(three.window_hop_s() == doctest::Approx(0.48));
  CHECK(three.clip_id() == "b");

  const auto none = ContextWindows(Rows(95), 96, 48, "c");
  CHECK(none.empty());
  CHECK(none.too_short());
  CHECK_THROWS_AS(none.window(0), Error);

  CHECK_THROWS_AS(ContextWindows(Rows(10), 0, 1), Error);
  CHECK_THROWS_AS(ContextWindows(Rows(10), 2, 0), Error);
}

TEST_CASE("context window count law over random lengths") {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> rows(0, 400), t(1, 120), hop(1, 60);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = rows(rng), tf = t(rng), h = hop(rng);
    const long expect = std::max(0L, 1L + static_cast<long>(std::floor(double(n - tf) / h)));
    const auto seq = ContextWindows(Rows(n, 2), tf, h);
    CHECK(static_cast<long>(seq.size()) == expect);
    CHECK(static_cast<long>(ContextWindowCount(n, tf, h)) == expect);
  }
}

TEST_CASE("mel helpers") {
  CHECK(HzToMel(0.0) == 0.0);
  CHECK(std::abs(MelToHz(HzToMel(1234.5)) - 1234.5) < 1e-9);
  const auto centers = MelBandCenters(MelConfig{}, 8000);
  REQUIRE(centers.size() == 40);
  for (std::size_t i = 1; i < centers.size(); ++i) CHECK(centers[i] > centers[i - 1]);
  CHECK(ResolveMelConfig(MelConfig{}, 8000).fmax_hz == 3800.0);
  const Matrix fb = MelFilterbank(MelConfig{}, 16000, 512);
  CHECK(fb.rows() == 40);
  CHECK(fb.cols() == 257);
  CHECK(fb.minCoeff() >= 0.0);
  CHECK(fb.maxCoeff() <= 1.0);
  CHECK(FrameCount(399, 400, 160) == 0);
  CHECK(FrameCount(400, 400, 160) == 1);
  CHECK(FrameCount(560, 400, 160) == 2);
}
