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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "common.hpp"

namespace scenaware {

struct Waveform {
  std::vector<double> samples;  // in [-1, 1]
  int sample_rate = 0;
};

// Mono 16-bit PCM RIFF/WAVE at 8 or 16 kHz. Samples are value / 32768.
Waveform LoadWaveform(const std::string& path);
Waveform ParseWaveform(std::span<const std::uint8_t> bytes);

// Samples are clipped to [-1, 1] and quantized with rounding to int16.
void SaveWaveform(const std::string& path, const Waveform& wav);
std::vector<std::uint8_t> EncodeWaveform(const Waveform& wav);

// "SCNM" binary matrix: magic, u32 version=1, u32 rows, u32 cols, then
// rows*cols little-endian float32 row-major.
void SaveMatrix(const std::string& path, const Matrix& m);
Matrix LoadMatrix(const std::string& path);

// Little-endian primitive writer/reader shared by the binary formats.
class ByteWriter {
 public:
  void Bytes(const void* data, std::size_t n);
  void U32(std::uint32_t v);
  void U16(std::uint16_t v);
  void F32(float v);
  void F64(double v);
  const std::vector<std::uint8_t>& buffer() const { return buf_; }

 private:
  std::vector<std::uint8_t> buf_;
};

class ByteReader {
 public:
  ByteReader(std::span<const std::uint8_t> data, std::string what)
      : data_(data), what_(std::move(what)) {}
  void Bytes(void* out, std::size_t n);
  std::uint32_t U32();
  std::uint16_t U16();
  float F32();
  double F64();
  void Skip(std::size_t n);
  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
  std::string what_;
};

std::vector<std::uint8_t> ReadFileBytes(const std::string& path);
void WriteFileBytes(const std::string& path, std::span<const std::uint8_t> bytes);

}  // namespace scenaware
