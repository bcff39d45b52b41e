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

#include "io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <iterator>

namespace scenaware {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

namespace {
bool g_verbose = true;
}

void LogWarning(const std::string& msg) { std::cerr << "WARNING: " << msg << '\n'; }

void LogInfo(const std::string& msg) {
  if (g_verbose) std::cerr << msg << '\n';
}

void SetVerbose(bool verbose) { g_verbose = verbose; }

void ByteWriter::Bytes(const void* data, std::size_t n) {
  const auto* p = static_cast<const std::uint8_t*>(data);
  buf_.insert(buf_.end(), p, p + n);
}
void ByteWriter::U32(std::uint32_t v) { Bytes(&v, 4); }
void ByteWriter::U16(std::uint16_t v) { Bytes(&v, 2); }
void ByteWriter::F32(float v) { Bytes(&v, 4); }
void ByteWriter::F64(double v) { Bytes(&v, 8); }

void ByteReader::Bytes(void* out, std::size_t n) {
  if (n > remaining()) Fail(ErrorKind::kFormat, what_ + ": truncated");
  std::memcpy(out, data_.data() + pos_, n);
  pos_ += n;
}
std::uint32_t ByteReader::U32() {
  std::uint32_t v;
  Bytes(&v, 4);
  return v;
}
std::uint16_t ByteReader::U16() {
  std::uint16_t v;
  Bytes(&v, 2);
  return v;
}
float ByteReader::F32() {
  float v;
  Bytes(&v, 4);
  return v;
}
double ByteReader::F64() {
  double v;
  Bytes(&v, 8);
  return v;
}
void ByteReader::Skip(std::size_t n) {
  if (n > remaining()) Fail(ErrorKind::kFormat, what_ + ": truncated");
  pos_ += n;
}

std::vector<std::uint8_t> ReadFileBytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIo, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void WriteFileBytes(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorKind::kIo, "cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) Fail(ErrorKind::kIo, "write failed: " + path);
}

Waveform ParseWaveform(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes, "wav");
  char tag[4];
  r.Bytes(tag, 4);
  if (std::memcmp(tag, "RIFF", 4) != 0) Fail(ErrorKind::kFormat, "not a RIFF file");
  r.U32();
  r.Bytes(tag, 4);
  if (std::memcmp(tag, "WAVE", 4) != 0) Fail(ErrorKind::kFormat, "not a WAVE file");

  bool have_fmt = false;
  Waveform wav;
  while (r.remaining() >= 8) {
    r.Bytes(tag, 4);
    const std::uint32_t size = r.U32();
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      if (size < 16) Fail(ErrorKind::kFormat, "fmt chunk too small");
      const std::uint16_t format = r.U16();
      const std::uint16_t channels = r.U16();
      const std::uint32_t rate = r.U32();
      r.U32();  // byte rate
      r.U16();  // block align
      const std::uint16_t bits = r.U16();
      r.Skip(size - 16 + (size & 1));
      if (format != 1)
        Fail(ErrorKind::kFormat, "unsupported WAV format tag " + std::to_string(format) +
                                     " (only PCM=1)");
      if (channels != 1)
        Fail(ErrorKind::kFormat,
             "unsupported channel count " + std::to_string(channels) + " (mono only)");
      if (bits != 16)
        Fail(ErrorKind::kFormat,
             "unsupported bit depth " + std::to_string(bits) + " (16-bit only)");
      if (rate != 8000 && rate != 16000)
        Fail(ErrorKind::kFormat,
             "unsupported sample rate " + std::to_string(rate) + " (8000 or 16000)");
      wav.sample_rate = static_cast<int>(rate);
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      if (!have_fmt) Fail(ErrorKind::kFormat, "data chunk before fmt chunk");
      if (size > r.remaining()) Fail(ErrorKind::kFormat, "truncated data chunk");
      if (size % 2 != 0) Fail(ErrorKind::kFormat, "odd data chunk size for 16-bit audio");
      wav.samples.resize(size / 2);
      for (auto& s : wav.samples) {
        const auto v = static_cast<std::int16_t>(r.U16());
        s = static_cast<double>(v) / 32768.0;
      }
      return wav;
    } else {
      r.Skip(size + (size & 1));
    }
  }
  Fail(ErrorKind::kFormat, have_fmt ? "missing data chunk" : "missing fmt chunk");
}

Waveform LoadWaveform(const std::string& path) {
  const auto bytes = ReadFileBytes(path);
  try {
    return ParseWaveform(bytes);
  } catch (const Error& e) {
    Fail(e.kind(), path + ": " + e.what());
  }
}

std::vector<std::uint8_t> EncodeWaveform(const Waveform& wav) {
  Require(wav.sample_rate == 8000 || wav.sample_rate == 16000,
          "sample rate must be 8000 or 16000");
  const auto data_bytes = static_cast<std::uint32_t>(wav.samples.size() * 2);
  ByteWriter w;
  w.Bytes("RIFF", 4);
  w.U32(36 + data_bytes);
  w.Bytes("WAVE", 4);
  w.Bytes("fmt ", 4);
  w.U32(16);
  w.U16(1);
  w.U16(1);
  w.U32(static_cast<std::uint32_t>(wav.sample_rate));
  w.U32(static_cast<std::uint32_t>(wav.sample_rate) * 2);
  w.U16(2);
  w.U16(16);
  w.Bytes("data", 4);
  w.U32(data_bytes);
  for (double s : wav.samples) {
    const double scaled = std::round(std::clamp(s, -1.0, 1.0) * 32768.0);
    const auto q = static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
    w.U16(static_cast<std::uint16_t>(q));
  }
  return w.buffer();
}

void SaveWaveform(const std::string& path, const Waveform& wav) {
  WriteFileBytes(path, EncodeWaveform(wav));
}

void SaveMatrix(const std::string& path, const Matrix& m) {
  ByteWriter w;
  w.Bytes("SCNM", 4);
  w.U32(1);
  w.U32(static_cast<std::uint32_t>(m.rows()));
  w.U32(static_cast<std::uint32_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) w.F32(static_cast<float>(m(i, j)));
  WriteFileBytes(path, w.buffer());
}

Matrix LoadMatrix(const std::string& path) {
  const auto bytes = ReadFileBytes(path);
  ByteReader r(bytes, path);
  char magic[4];
  r.Bytes(magic, 4);
  if (std::memcmp(magic, "SCNM", 4) != 0) Fail(ErrorKind::kFormat, path + ": bad magic");
  const auto version = r.U32();
  if (version != 1)
    Fail(ErrorKind::kFormat, path + ": unsupported version " + std::to_string(version));
  const auto rows = r.U32();
  const auto cols = r.U32();
  if (static_cast<std::uint64_t>(rows) * cols * 4 != r.remaining())
    Fail(ErrorKind::kFormat, path + ": payload size does not match header");
  Matrix m(rows, cols);
  for (std::uint32_t i = 0; i < rows; ++i)
    for (std::uint32_t j = 0; j < cols; ++j) m(i, j) = r.F32();
  return m;
}

}  // namespace scenaware
