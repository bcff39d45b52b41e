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
#include <vector>

#include "common.hpp"
#include "dsp.hpp"
#include "rng.hpp"

namespace scenaware {

// A window addressed by (clip index into the clip list, window index).
struct WindowRef {
  std::size_t clip = 0;
  std::size_t window = 0;
  bool operator==(const WindowRef&) const = default;
};

struct Triplet {
  WindowRef anchor, positive, negative;
  bool operator==(const Triplet&) const = default;
};

// Batch-local triplet: indices into a Batch.
struct IndexTriplet {
  std::size_t anchor = 0, positive = 0, negative = 0;
  bool operator==(const IndexTriplet&) const = default;
};

enum class SamplerMode { kTemporal, kClip };

struct SamplerConfig {
  SamplerMode mode = SamplerMode::kClip;
  double tau_s = 10.0;
  int triplets_per_clip = 16;
  std::uint64_t rng_seed = 0;
};

// round-half-up(tau_s / window_hop_s), at least 1.
int TauWindows(double tau_s, double window_hop_s);

// Draws (anchor, positive, negative) triples under the temporal-proximity
// rule. Temporal mode: 0 < |i-j| <= tau_w; the negative comes from the same
// clip with |i-k| > tau_w or from another clip, each with probability 1/2
// when both are available. Clip mode: positive shares the anchor's clip,
// negative comes from a different clip.
class TripletSampler {
 public:
  TripletSampler(std::span<const WindowSequence> clips, const SamplerConfig& cfg);

  // Anchor clip chosen uniformly among clips that admit a triplet.
  Triplet Draw(Rng& rng) const;
  Triplet DrawFromClip(std::size_t clip, Rng& rng) const;
  Triplet DrawForAnchor(const WindowRef& anchor, Rng& rng) const;

  bool IsValidAnchor(const WindowRef& anchor) const;
  const std::vector<std::size_t>& anchor_clips() const { return anchor_clips_; }
  int tau_windows(std::size_t clip) const;

 private:
  bool HasSameClipNegative(const WindowRef& a) const;

  std::span<const WindowSequence> clips_;
  SamplerConfig cfg_;
  std::vector<std::size_t> nonempty_clips_;
  std::vector<std::size_t> anchor_clips_;
};

// Mode predicate for a triplet, independent of how it was drawn.
bool SatisfiesConstraint(const Triplet& t, SamplerMode mode, int tau_w);

// triplets_per_clip draws from each clip that admits a triplet, in clip order.
std::vector<Triplet> SampleTriplets(std::span<const WindowSequence> clips,
                                    const SamplerConfig& cfg);

struct Batch {
  std::vector<WindowRef> items;
  std::vector<std::size_t> labels;  // source clip index per item
};

// P distinct clips, K windows each. Clips with fewer than K windows are
// sampled with replacement, others without.
Batch AssembleBatch(std::span<const WindowSequence> clips, int clips_per_batch,
                    int windows_per_clip, Rng& rng);

// For each ordered same-label (anchor, positive) pair, picks the
// different-label negative with the smallest squared distance that still
// exceeds d(a, p); falls back to the farthest negative when none does.
// Ties resolve to the lowest batch index.
std::vector<IndexTriplet> MineSemiHard(const Matrix& embeddings,
                                       std::span<const std::size_t> labels);

}  // namespace scenaware
