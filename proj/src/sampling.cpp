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

#include "sampling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>

namespace scenaware {

int TauWindows(double tau_s, double window_hop_s) {
  Require(tau_s > 0.0, "tau must be positive");
  Require(window_hop_s > 0.0, "window hop must be positive");
  return std::max(1, static_cast<int>(std::floor(tau_s / window_hop_s + 0.5)));
}

namespace {

std::size_t AbsDiff(std::size_t a, std::size_t b) { return a > b ? a - b : b - a; }

}  // namespace

TripletSampler::TripletSampler(std::span<const WindowSequence> clips, const SamplerConfig& cfg)
    : clips_(clips), cfg_(cfg) {
  Require(cfg.tau_s > 0.0, "tau must be positive");
  for (std::size_t c = 0; c < clips.size(); ++c)
    if (!clips[c].empty()) nonempty_clips_.push_back(c);
  Require(!nonempty_clips_.empty(), "triplet sampling needs at least one clip with a window");

  if (cfg.mode == SamplerMode::kClip) {
    Require(nonempty_clips_.size() >= 2,
            "clip-mode sampling needs at least 2 clips (negatives come from a different clip)");
    for (std::size_t c : nonempty_clips_)
      if (clips[c].size() >= 2) anchor_clips_.push_back(c);
    Require(!anchor_clips_.empty(),
            "clip-mode sampling needs a clip with at least 2 windows for anchor/positive");
    return;
  }

  for (std::size_t c : nonempty_clips_) {
    if (clips[c].size() < 2) continue;
    // Some anchor must have a negative: another clip, or a same-clip window
    // beyond tau_w (exists iff the clip spans more than tau_w + 1 windows).
    const bool other = nonempty_clips_.size() >= 2;
    const bool same = clips[c].size() > static_cast<std::size_t>(tau_windows(c)) + 1;
    if (other || same) anchor_clips_.push_back(c);
  }
  if (anchor_clips_.empty())
    Fail(ErrorKind::kInvalidArgument,
         "temporal-mode sampling admits no triplet: with a single clip, the clip needs more "
         "than tau_w + 1 windows so that a negative with |i-k| > tau_w exists");
}

int TripletSampler::tau_windows(std::size_t clip) const {
  return TauWindows(cfg_.tau_s, clips_[clip].window_hop_s());
}

bool TripletSampler::HasSameClipNegative(const WindowRef& a) const {
  const auto tau = static_cast<std::size_t>(tau_windows(a.clip));
  const std::size_t n = clips_[a.clip].size();
  return a.window > tau || a.window + tau + 1 < n;
}

bool TripletSampler::IsValidAnchor(const WindowRef& a) const {
  if (a.clip >= clips_.size() || a.window >= clips_[a.clip].size()) return false;
  if (clips_[a.clip].size() < 2) return false;
  if (cfg_.mode == SamplerMode::kClip) return true;
  return nonempty_clips_.size() >= 2 || HasSameClipNegative(a);
}

Triplet TripletSampler::DrawForAnchor(const WindowRef& a, Rng& rng) const {
  Require(IsValidAnchor(a), "anchor admits no valid triplet");
  const std::size_t n = clips_[a.clip].size();
  Triplet t;
  t.anchor = a;

  auto other_clip_window = [&]() {
    // Uniform over the other non-empty clips, then uniform within the clip.
    const auto self = static_cast<std::size_t>(
        std::lower_bound(nonempty_clips_.begin(), nonempty_clips_.end(), a.clip) -
        nonempty_clips_.begin());
    std::size_t pick = rng.Index(nonempty_clips_.size() - 1);
    if (pick >= self) ++pick;
    const std::size_t clip = nonempty_clips_[pick];
    return WindowRef{clip, rng.Index(clips_[clip].size())};
  };

  if (cfg_.mode == SamplerMode::kClip) {
    std::size_t j = rng.Index(n - 1);
    if (j >= a.window) ++j;
    t.positive = {a.clip, j};
    t.negative = other_clip_window();
    return t;
  }

  const auto tau = static_cast<std::size_t>(tau_windows(a.clip));
  const std::size_t lo = a.window > tau ? a.window - tau : 0;
  const std::size_t hi = std::min(n - 1, a.window + tau);
  // Positives: [lo, hi] minus the anchor itself.
  std::size_t j = lo + rng.Index(hi - lo);
  if (j >= a.window) ++j;
  t.positive = {a.clip, j};

  const bool same_ok = HasSameClipNegative(a);
  const bool other_ok = nonempty_clips_.size() >= 2;
  const bool use_same = same_ok && (!other_ok || rng.Uniform() < 0.5);
  if (use_same) {
    // Same-clip negatives: [0, i - tau) and (i + tau, n).
    const std::size_t left = lo;
    const std::size_t right_start = a.window + tau + 1;
    const std::size_t right = right_start < n ? n - right_start : 0;
    const std::size_t pick = rng.Index(left + right);
    t.negative = {a.clip, pick < left ? pick : right_start + (pick - left)};
  } else {
    t.negative = other_clip_window();
  }
  return t;
}

Triplet TripletSampler::DrawFromClip(std::size_t clip, Rng& rng) const {
  const std::size_t n = clips_[clip].size();
  // Rejection over the clip's windows keeps anchors uniform among valid ones.
  for (;;) {
    const WindowRef a{clip, rng.Index(n)};
    if (IsValidAnchor(a)) return DrawForAnchor(a, rng);
  }
}

Triplet TripletSampler::Draw(Rng& rng) const {
  return DrawFromClip(anchor_clips_[rng.Index(anchor_clips_.size())], rng);
}

bool SatisfiesConstraint(const Triplet& t, SamplerMode mode, int tau_w) {
  if (t.anchor.clip != t.positive.clip) return false;
  if (t.anchor.window == t.positive.window) return false;
  if (mode == SamplerMode::kClip) return t.negative.clip != t.anchor.clip;
  const auto tau = static_cast<std::size_t>(tau_w);
  if (AbsDiff(t.anchor.window, t.positive.window) > tau) return false;
  if (t.negative.clip == t.anchor.clip) return AbsDiff(t.anchor.window, t.negative.window) > tau;
  return true;
}

std::vector<Triplet> SampleTriplets(std::span<const WindowSequence> clips,
                                    const SamplerConfig& cfg) {
  Require(cfg.triplets_per_clip >= 1, "triplets_per_clip must be >= 1");
  const TripletSampler sampler(clips, cfg);
  Rng rng(cfg.rng_seed);
  std::vector<Triplet> out;
  out.reserve(sampler.anchor_clips().size() * static_cast<std::size_t>(cfg.triplets_per_clip));
  for (std::size_t c : sampler.anchor_clips())
    for (int k = 0; k < cfg.triplets_per_clip; ++k) out.push_back(sampler.DrawFromClip(c, rng));
  return out;
}

Batch AssembleBatch(std::span<const WindowSequence> clips, int clips_per_batch,
                    int windows_per_clip, Rng& rng) {
  Require(clips_per_batch >= 1 && windows_per_clip >= 1, "batch dimensions must be >= 1");
  std::vector<std::size_t> eligible;
  for (std::size_t c = 0; c < clips.size(); ++c)
    if (!clips[c].empty()) eligible.push_back(c);
  const auto p = static_cast<std::size_t>(clips_per_batch);
  const auto k = static_cast<std::size_t>(windows_per_clip);
  if (eligible.size() < p)
    Fail(ErrorKind::kInvalidArgument, "batch needs " + std::to_string(p) +
                                          " clips but only " + std::to_string(eligible.size()) +
                                          " have windows");
  // Partial Fisher-Yates picks P distinct clips.
  for (std::size_t i = 0; i < p; ++i) std::swap(eligible[i], eligible[i + rng.Index(eligible.size() - i)]);

  Batch b;
  b.items.reserve(p * k);
  b.labels.reserve(p * k);
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < p; ++i) {
    const std::size_t c = eligible[i];
    const std::size_t n = clips[c].size();
    if (n >= k) {
      pool.resize(n);
      std::iota(pool.begin(), pool.end(), std::size_t{0});
      for (std::size_t m = 0; m < k; ++m) {
        std::swap(pool[m], pool[m + rng.Index(n - m)]);
        b.items.push_back({c, pool[m]});
      }
    } else {
      for (std::size_t m = 0; m < k; ++m) b.items.push_back({c, rng.Index(n)});
    }
    b.labels.insert(b.labels.end(), k, c);
  }
  return b;
}

std::vector<IndexTriplet> MineSemiHard(const Matrix& embeddings,
                                       std::span<const std::size_t> labels) {
  const auto n = static_cast<std::size_t>(embeddings.rows());
  Require(labels.size() == n, "one label per embedding required");
  bool two_labels = false;
  for (std::size_t i = 1; i < n && !two_labels; ++i) two_labels = labels[i] != labels[0];
  Require(two_labels, "semi-hard mining needs at least 2 distinct clips in the batch");

  Matrix dist(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      dist(i, j) = (embeddings.row(i) - embeddings.row(j)).squaredNorm();

  std::vector<IndexTriplet> out;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t p = 0; p < n; ++p) {
      if (p == a || labels[p] != labels[a]) continue;
      const double dap = dist(a, p);
      std::size_t semi = n, easiest = n;
      double semi_d = std::numeric_limits<double>::infinity();
      double easy_d = -std::numeric_limits<double>::infinity();
      for (std::size_t q = 0; q < n; ++q) {
        if (labels[q] == labels[a]) continue;
        const double d = dist(a, q);
        if (d > dap && d < semi_d) {
          semi_d = d;
          semi = q;
        }
        if (d > easy_d) {
          easy_d = d;
          easiest = q;
        }
      }
      out.push_back({a, p, semi < n ? semi : easiest});
    }
  }
  return out;
}

}  // namespace scenaware
