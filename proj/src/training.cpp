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

#include "training.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>

#include "io.hpp"
#include "rng.hpp"

namespace fs = std::filesystem;

namespace scenaware {

void AdamStep(std::span<double> params, std::span<const double> grads, AdamMoments& state,
              double lr, double beta1, double beta2, double eps, std::int64_t t) {
  Require(params.size() == grads.size(), "Adam: parameter/gradient size mismatch");
  Require(t >= 1, "Adam: step must be >= 1");
  if (state.m.empty()) {
    state.m.assign(params.size(), 0.0);
    state.v.assign(params.size(), 0.0);
  }
  Require(state.m.size() == params.size() && state.v.size() == params.size(),
          "Adam: moment state size mismatch");
  const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    state.m[i] = beta1 * state.m[i] + (1.0 - beta1) * g;
    state.v[i] = beta2 * state.v[i] + (1.0 - beta2) * g * g;
    const double m_hat = state.m[i] / c1;
    const double v_hat = state.v[i] / c2;
    params[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
  }
}

AdamOptimizer::AdamOptimizer(const EmbeddingModel& model, double lr, double beta1,
                             double beta2, double eps)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
  Require(lr > 0.0, "learning rate must be positive");
  Require(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0,
          "Adam betas must lie in [0, 1)");
  weight_state_.resize(model.layers.size());
  bias_state_.resize(model.layers.size());
}

void AdamOptimizer::Step(EmbeddingModel& model, const Gradients& grads) {
  Require(grads.weights.size() == model.layers.size(), "Adam: gradient layer count mismatch");
  ++t_;
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    auto& layer = model.layers[l];
    Require(grads.weights[l].size() == layer.weights.size() &&
                grads.biases[l].size() == layer.biases.size(),
            "Adam: gradient shape mismatch");
    AdamStep({layer.weights.data(), static_cast<std::size_t>(layer.weights.size())},
             {grads.weights[l].data(), static_cast<std::size_t>(grads.weights[l].size())},
             weight_state_[l], lr_, beta1_, beta2_, eps_, t_);
    AdamStep({layer.biases.data(), static_cast<std::size_t>(layer.biases.size())},
             {grads.biases[l].data(), static_cast<std::size_t>(grads.biases[l].size())},
             bias_state_[l], lr_, beta1_, beta2_, eps_, t_);
  }
}

void ValidateTrainConfig(const TrainConfig& cfg) {
  Require(cfg.steps >= 1, "steps must be >= 1");
  Require(cfg.clips_per_batch >= 2, "batch must hold at least 2 clips");
  Require(cfg.windows_per_clip >= 2, "batch needs at least 2 windows per clip");
  Require(cfg.learning_rate > 0.0, "learning rate must be positive");
  Require(cfg.beta1 >= 0.0 && cfg.beta1 < 1.0 && cfg.beta2 >= 0.0 && cfg.beta2 < 1.0,
          "Adam betas must lie in [0, 1)");
  Require(cfg.delta >= 0.0, "margin delta must be non-negative");
  Require(cfg.norm_sample_windows >= 1, "normalization sample must be >= 1 window");
}

std::string FormatLossCurve(std::span<const LossPoint> curve) {
  std::string out = "step,total_loss,active_fraction\n";
  char line[128];
  for (const auto& p : curve) {
    std::snprintf(line, sizeof line, "%d,%.9g,%.9g\n", p.step, p.total_loss, p.active_fraction);
    out += line;
  }
  return out;
}

namespace {

Matrix StackWindows(std::span<const WindowSequence> clips, std::span<const WindowRef> refs) {
  Matrix x(static_cast<Eigen::Index>(refs.size()), clips[refs[0].clip].window_size());
  for (std::size_t i = 0; i < refs.size(); ++i)
    x.row(static_cast<Eigen::Index>(i)) = clips[refs[i].clip].window(refs[i].window);
  return x;
}

std::string CheckpointPath(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

}  // namespace

TrainResult Train(std::span<const WindowSequence> all_clips, const SamplerConfig& sampler_cfg,
                  const ModelConfig& model_cfg, const TrainConfig& cfg,
                  const std::string& out_dir) {
  ValidateTrainConfig(cfg);
  std::vector<WindowSequence> clips;
  for (const auto& c : all_clips)
    if (!c.empty()) clips.push_back(c);
  if (clips.empty()) Fail(ErrorKind::kTooShort, "all clips are shorter than one context window");
  if (sampler_cfg.mode == SamplerMode::kClip && clips.size() < 2)
    Fail(ErrorKind::kInvalidArgument, "clip-mode training needs at least 2 usable clips");
  for (const auto& c : clips)
    Require(c.num_bands() == clips[0].num_bands() && c.window_frames() == clips[0].window_frames(),
            "all clips must share the window shape");

  if (!out_dir.empty()) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) Fail(ErrorKind::kIo, "cannot create output directory " + out_dir);
  }

  TrainResult result;
  result.model = InitModel(clips[0].num_bands(), clips[0].window_frames(),
                           model_cfg.hidden_dims, model_cfg.output_dim, cfg.seed);
  EmbeddingModel& model = result.model;

  {
    // Standardization statistics from a uniform sample over all windows.
    std::vector<std::size_t> offsets{0};
    for (const auto& c : clips) offsets.push_back(offsets.back() + c.size());
    Rng rng(SubstreamSeed(cfg.seed, 1));
    std::vector<WindowRef> refs;
    for (int i = 0; i < cfg.norm_sample_windows; ++i) {
      const std::size_t flat = rng.Index(offsets.back());
      const auto it = std::upper_bound(offsets.begin(), offsets.end(), flat) - 1;
      const auto c = static_cast<std::size_t>(it - offsets.begin());
      refs.push_back({c, flat - *it});
    }
    SetInputNormalization(model, StackWindows(clips, refs));
  }

  // Clip mode needs P distinct clips per batch; shrink P on tiny corpora.
  const int clips_per_batch =
      std::min<int>(cfg.clips_per_batch, static_cast<int>(clips.size()));
  if (clips_per_batch < cfg.clips_per_batch)
    LogWarning("only " + std::to_string(clips.size()) + " usable clips; batch uses P=" +
               std::to_string(clips_per_batch));

  Rng batch_rng(SubstreamSeed(cfg.seed, 2));
  std::optional<TripletSampler> temporal;
  if (sampler_cfg.mode == SamplerMode::kTemporal) temporal.emplace(clips, sampler_cfg);

  AdamOptimizer adam(model, cfg.learning_rate, cfg.beta1, cfg.beta2);
  Gradients grads = Gradients::ZerosLike(model);

  for (int step = 1; step <= cfg.steps; ++step) {
    Matrix x;
    std::vector<IndexTriplet> triplets;
    if (!temporal) {
      const Batch batch = AssembleBatch(clips, clips_per_batch, cfg.windows_per_clip, batch_rng);
      x = StackWindows(clips, batch.items);
      triplets = MineSemiHard(ForwardBatch(model, x), batch.labels);
    } else {
      // Temporal mode trains on sampled triplets directly.
      const std::size_t count =
          static_cast<std::size_t>(clips_per_batch) * static_cast<std::size_t>(cfg.windows_per_clip);
      std::vector<WindowRef> refs;
      for (std::size_t i = 0; i < count; ++i) {
        const Triplet t = temporal->Draw(batch_rng);
        triplets.push_back({3 * i, 3 * i + 1, 3 * i + 2});
        refs.insert(refs.end(), {t.anchor, t.positive, t.negative});
      }
      x = StackWindows(clips, refs);
    }

    for (auto& w : grads.weights) w.setZero();
    for (auto& b : grads.biases) b.setZero();
    const LossReport report = Backward(model, x, triplets, cfg.delta, grads);

    auto diverge = [&](const std::string& what) {
      std::string dump;
      if (!out_dir.empty()) {
        dump = CheckpointPath(out_dir, "diverged_step" + std::to_string(step) + ".scne");
        SaveCheckpoint(dump, model);
      }
      Fail(ErrorKind::kNumeric,
           what + " at step " + std::to_string(step) +
               (dump.empty() ? "" : "; model state dumped to " + dump));
    };
    if (!std::isfinite(report.total_loss) || !std::isfinite(grads.MaxAbs()))
      diverge("non-finite loss or gradient");
    adam.Step(model, grads);
    if (!AllFinite(model)) diverge("non-finite parameter");

    result.curve.push_back({step, report.total_loss, report.active_fraction, triplets.size()});
    if (cfg.log_every > 0 && (step % cfg.log_every == 0 || step == 1)) {
      char line[160];
      std::snprintf(line, sizeof line, "step %d loss %.6f mean %.6f active %.3f", step,
                    report.total_loss,
                    triplets.empty() ? 0.0 : report.total_loss / triplets.size(),
                    report.active_fraction);
      LogInfo(line);
    }
    if (!out_dir.empty() && cfg.checkpoint_every > 0 && step % cfg.checkpoint_every == 0 &&
        step != cfg.steps)
      SaveCheckpoint(CheckpointPath(out_dir, "checkpoint_" + std::to_string(step) + ".scne"),
                     model);
  }

  if (!out_dir.empty()) {
    SaveCheckpoint(CheckpointPath(out_dir, "model.scne"), model);
    const std::string csv = FormatLossCurve(result.curve);
    WriteFileBytes(CheckpointPath(out_dir, "loss.csv"),
                   {reinterpret_cast<const std::uint8_t*>(csv.data()), csv.size()});
  }
  return result;
}

}  // namespace scenaware
