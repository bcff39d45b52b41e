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

#include "embedder.hpp"
#include "sampling.hpp"

namespace scenaware {

struct ModelConfig {
  std::vector<int> hidden_dims{256, 128};
  int output_dim = 64;
};

struct TrainConfig {
  int steps = 2000;
  int clips_per_batch = 8;    // P
  int windows_per_clip = 4;   // K
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double delta = 0.5;
  std::uint64_t seed = 7;
  int checkpoint_every = 500;  // <= 0: final checkpoint only
  int norm_sample_windows = 512;
  int log_every = 100;
};

struct AdamMoments {
  std::vector<double> m, v;
};

// Bias-corrected Adam on flat arrays, t >= 1:
//   m = b1 m + (1-b1) g;  v = b2 v + (1-b2) g^2
//   p -= lr * (m / (1-b1^t)) / (sqrt(v / (1-b2^t)) + eps)
void AdamStep(std::span<double> params, std::span<const double> grads, AdamMoments& state,
              double lr, double beta1, double beta2, double eps, std::int64_t t);

// Adam over every parameter tensor of the model, one moment buffer per tensor.
class AdamOptimizer {
 public:
  AdamOptimizer(const EmbeddingModel& model, double lr, double beta1, double beta2,
                double eps = 1e-8);
  void Step(EmbeddingModel& model, const Gradients& grads);
  std::int64_t step() const { return t_; }

 private:
  double lr_, beta1_, beta2_, eps_;
  std::int64_t t_ = 0;
  std::vector<AdamMoments> weight_state_, bias_state_;
};

struct LossPoint {
  int step = 0;
  double total_loss = 0.0;
  double active_fraction = 0.0;
  std::size_t triplets = 0;
};

struct TrainResult {
  EmbeddingModel model;
  std::vector<LossPoint> curve;
};

void ValidateTrainConfig(const TrainConfig& cfg);

// clips: front-end windows per training clip. Writes checkpoint_<step>.scne at
// the configured cadence, model.scne at the end and loss.csv into out_dir
// (skipped when out_dir is empty).
TrainResult Train(std::span<const WindowSequence> clips, const SamplerConfig& sampler,
                  const ModelConfig& model_cfg, const TrainConfig& cfg,
                  const std::string& out_dir);

std::string FormatLossCurve(std::span<const LossPoint> curve);

}  // namespace scenaware
