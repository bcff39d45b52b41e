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

#include <string>
#include <vector>

#include "corpus.hpp"
#include "dsp.hpp"

namespace scenaware {

// Front-end output for one manifest entry.
struct ClipFeatures {
  std::size_t entry = 0;  // index into the manifest
  LogMelSpectrogram logmel;
  WindowSequence windows;
};

// Runs the front end over every manifest entry. Clips too short for a
// single context window are dropped with a warning unless keep_short is set.
std::vector<ClipFeatures> ExtractClips(const Manifest& manifest, const DspConfig& dsp,
                                       int threads, bool keep_short = false);

std::vector<WindowSequence> WindowsOf(const std::vector<ClipFeatures>& clips);

// Duration of one context window in seconds: (T - 1) * hop + frame_len.
double ContextWindowSeconds(const DspConfig& dsp);

}  // namespace scenaware
