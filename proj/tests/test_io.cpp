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
#include <cstdint>
#include <cstring>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "io.hpp"
#include "support.hpp"

using namespace scenaware;

namespace {

struct WavSpec {
  std::uint16_t format = 1;
  std::uint16_t channels = 1;
  std::uint32_t rate = 8000;
  std::uint16_t bits = 16;
};

void Put32(std::vector<std::uint8_t>& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
void Put16(std::vector<std::uint8_t>& b, std::uint16_t v) {
  b.push_back(static_cast<std::uint8_t>(v));
  b.push_back(static_cast<std::uint8_t>(v >> 8));
}
void PutTag(std::vector<std::uint8_t>& b, const char* tag) { b.insert(b.end(), tag, tag + 4); }

// Hand-built RIFF bytes, independent of the library encoder.
std::vector<std::uint8_t> BuildWav(const WavSpec& s, const std::vector<std::int16_t>& pcm,
                                   bool extra_chunk = false) {
  std::vector<std::uint8_t> body;
  PutTag(body, "WAVE");
  if (extra_chunk) {
    PutTag(body, "LIST");
    Put32(body, 4);
    PutTag(body, "INFO");
  }
  PutTag(body, "fmt ");
  Put32(body, 16);
  Put16(body, s.format);
  Put16(body, s.channels);
  Put32(body, s.rate);
  Put32(body, s.rate * s.channels * s.bits / 8);
  Put16(body, static_cast<std::uint16_t>(s.channels * s.bits / 8));
  Put16(body, s.bits);
  PutTag(body, "data");
  Put32(body, static_cast<std::uint32_t>(pcm.size() * 2));
  for (auto v : pcm) Put16(body, static_cast<std::uint16_t>(v));
  std::vector<std::uint8_t> out;
  PutTag(out, "RIFF");
  Put32(out, static_cast<std::uint32_t>(body.size()));
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

void CheckFormatError(const std::vector<std::uint8_t>& bytes) {
  try {
    ParseWaveform(bytes);
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kFormat);
  }
}

}  // namespace

TEST_CASE("one second of 16 kHz zeros loads as 16000 zero samples") {
  const auto bytes = BuildWav({1, 1, 16000, 16}, std::vector<std::int16_t>(16000, 0));
  const Waveform w = ParseWaveform(bytes);
  CHECK(w.sample_rate == 16000);
  REQUIRE(w.samples.size() == 16000);
  for (double v : w.samples) CHECK(v == 0.0);
}

TEST_CASE("int16 -32768 maps to -1.0 and 32767 to 32767/32768") {
  const Waveform w = ParseWaveform(BuildWav({}, {-32768, 32767, 1}));
  REQUIRE(w.samples.size() == 3);
  CHECK(w.samples[0] == -1.0);
  CHECK(w.samples[1] == 32767.0 / 32768.0);
  CHECK(w.samples[2] == 1.0 / 32768.0);
}

TEST_CASE("externally generated 440 Hz sine matches the analytic signal") {
  const Waveform w = LoadWaveform(std::string(SCN_TEST_DATA) + "/sine440_8k.wav");
  CHECK(w.sample_rate == 8000);
  REQUIRE(w.samples.size() == 4000);
  double worst = 0.0;
  for (std::size_t k = 0; k < w.samples.size(); ++k) {
    const double expect = std::sin(2 * std::numbers::pi * 440.0 * static_cast<double>(k) / 8000.0);
    worst = std::max(worst, std::abs(w.samples[k] - expect));
  }
  CHECK(worst < 1e-3);
}

TEST_CASE("unknown chunks before fmt are skipped") {
  const Waveform w = ParseWaveform(BuildWav({}, {100, -100}, true));
  CHECK(w.samples.size() == 2);
}

TEST_CASE("unsupported WAV variants are rejected") {
  CheckFormatError(BuildWav({3, 1, 8000, 16}, {0, 0}));      // float format tag
  CheckFormatError(BuildWav({1, 2, 8000, 16}, {0, 0}));      // stereo
  CheckFormatError(BuildWav({1, 1, 44100, 16}, {0, 0}));     // sample rate
  CheckFormatError(BuildWav({1, 1, 8000, 8}, {0, 0}));       // 8-bit
  auto truncated = BuildWav({}, {1, 2, 3, 4});
  truncated.resize(truncated.size() - 3);
  CheckFormatError(truncated);
  CheckFormatError(std::vector<std::uint8_t>{'R', 'I', 'F', 'F'});
  auto not_wave = BuildWav({}, {1});
  std::memcpy(not_wave.data() + 8, "AVI ", 4);
  CheckFormatError(not_wave);
}

TEST_CASE("missing file is an io error") {
  try {
    LoadWaveform("/nonexistent/dir/x.wav");
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kIo);
  }
}

TEST_CASE("encode then parse reproduces the quantized samples") {
  Waveform w;
  w.sample_rate = 16000;
  w.samples = {0.0, 0.5, -0.5, 1.0, -1.0, 2.0, -3.0, 1e-6};
  const Waveform r = ParseWaveform(EncodeWaveform(w));
  CHECK(r.sample_rate == 16000);
  REQUIRE(r.samples.size() == w.samples.size());
  CHECK(r.samples[0] == 0.0);
  CHECK(r.samples[1] == 16384.0 / 32768.0);
  CHECK(r.samples[2] == -16384.0 / 32768.0);
  CHECK(r.samples[3] == 32767.0 / 32768.0);  // clipped
  CHECK(r.samples[4] == -1.0);
  CHECK(r.samples[5] == 32767.0 / 32768.0);
  CHECK(r.samples[6] == -1.0);
  CHECK(r.samples[7] == 0.0);
  // The library encoder and the hand builder agree byte for byte.
  Waveform z;
  z.sample_rate = 8000;
  z.samples = {0.0, 16384.0 / 32768.0};
  CHECK(EncodeWaveform(z) == BuildWav({}, {0, 16384}));
}

TEST_CASE("SCNM matrix round trip and header checks") {
  scntest::TempDir dir;
  Matrix m(3, 4);
  for (int i = 0; i < 12; ++i) m(i / 4, i % 4) = 0.25 * i - 1.0;
  SaveMatrix(dir / "m.scnm", m);
  const auto bytes = ReadFileBytes(dir / "m.scnm");
  REQUIRE(bytes.size() == 16 + 12 * 4);
  CHECK(std::memcmp(bytes.data(), "SCNM", 4) == 0);
  CHECK(bytes[4] == 1);
  CHECK(bytes[8] == 3);
  CHECK(bytes[12] == 4);
  float first;
  std::memcpy(&first, bytes.data() + 16, 4);
  CHECK(first == -1.0f);
  const Matrix r = LoadMatrix(dir / "m.scnm");
  CHECK(r.rows() == 3);
  CHECK(r.cols() == 4);
  CHECK((r - m).cwiseAbs().maxCoeff() == 0.0);

  auto bad = bytes;
  bad[0] = 'X';
  WriteFileBytes(dir / "bad.scnm", bad);
  CHECK_THROWS_AS(LoadMatrix(dir / "bad.scnm"), Error);
  bad = bytes;
  bad[4] = 2;
  WriteFileBytes(dir / "v2.scnm", bad);
  CHECK_THROWS_AS(LoadMatrix(dir / "v2.scnm"), Error);
  bad = bytes;
  bad.pop_back();
  WriteFileBytes(dir / "short.scnm", bad);
  CHECK_THROWS_AS(LoadMatrix(dir / "short.scnm"), Error);
}

TEST_CASE("ByteReader reports truncation") {
  ByteWriter w;
  w.U32(7);
  w.U16(3);
  w.F64(2.5);
  ByteReader r(w.buffer(), "blob");
  CHECK(r.U32() == 7);
  CHECK(r.U16() == 3);
  CHECK(r.F64() == 2.5);
  CHECK(r.remaining() == 0);
  CHECK_THROWS_AS(r.U32(), Error);
}
