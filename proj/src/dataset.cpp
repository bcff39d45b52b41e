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

#include "dataset.hpp"

#include <optional>

#include "parallel.hpp"

namespace scenaware {

std::vector<ClipFeatures> ExtractClips(const Manifest& manifest, const DspConfig& dsp,
                                       int threads, bool keep_short) {
  std::vector<std::optional<ClipFeatures>> slots(manifest.entries.size());
  ParallelFor(manifest.entries.size(), threads, [&](std::size_t i) {
    const auto& e = manifest.entries[i];
    const Waveform wav = LoadWaveform(manifest.ResolvePath(e));
    ClipFeatures c;
    c.entry = i;
    try {
      c.logmel = LogMel(wav, dsp.frame_len_s, dsp.hop_s, dsp.mel);
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::kTooShort) throw;
      return;  // shorter than one analysis frame
    }
    c.windows = ContextWindows(c.logmel, dsp.window_frames, dsp.window_hop, e.utt_id);
    slots[i] = std::move(c);
  });

  std::vector<ClipFeatures> out;
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i] && (keep_short || !slots[i]->windows.empty())) {
      out.push_back(std::move(*slots[i]));
    } else {
      ++skipped;
      LogWarning("skipping " + manifest.entries[i].utt_id +
                 ": shorter than one context window");
    }
  }
  if (skipped > 0)
    LogWarning(std::to_string(skipped) + " of " + std::to_string(slots.size()) +
               " clips skipped as too short");
  return out;
}

std::vector<WindowSequence> WindowsOf(const std::vector<ClipFeatures>& clips) {
  std::vector<WindowSequence> out;
  out.reserve(clips.size());
  for (const auto& c : clips) out.push_back(c.windows);
  return out;
}

double ContextWindowSeconds(const DspConfig& dsp) {
  return (dsp.window_frames - 1) * dsp.hop_s + dsp.frame_len_s;
}

}  // namespace scenaware
