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
#include "sampling.hpp"

namespace scenaware {

struct DenseLayer {
  Matrix weights;  // fan_in x fan_out
  Vector biases;   // fan_out
};

// MLP over a flattened (T x F) window: standardize -> [affine -> ReLU]* ->
// affine -> L2 normalize. The output always has unit norm.
struct EmbeddingModel {
  int num_bands = 0;      // F
  int window_frames = 0;  // T
  std::vector<DenseLayer> layers;
  Vector input_mean;  // per input feature
  Vector input_std;

  int input_dim() const { return num_bands * window_frames; }
  int output_dim() const {
    return layers.empty() ? 0 : static_cast<int>(layers.back().weights.cols());
  }
  std::size_t parameter_count() const;
};

// Same shapes as the model's layers.
struct Gradients {
  std::vector<Matrix> weights;
  std::vector<Vector> biases;

  static Gradients ZerosLike(const EmbeddingModel& model);
  double MaxAbs() const;
};

struct LossReport {
  double total_loss = 0.0;
  double active_fraction = 0.0;
  std::vector<double> per_triplet;
};

// Glorot-uniform weights, zero biases, identity standardization. An empty
// hidden_dims gives a single affine layer.
EmbeddingModel InitModel(int num_bands, int window_frames, std::span<const int> hidden_dims,
                         int output_dim, std::uint64_t seed);

// Stores per-feature mean/std over the given windows (rows). Features with
// std below 1e-8 get std 1.
void SetInputNormalization(EmbeddingModel& model, const Matrix& windows);

Vector Forward(const EmbeddingModel& model, const Eigen::Ref<const RowVector>& window);
// One embedding per row of `windows`.
Matrix ForwardBatch(const EmbeddingModel& model, const Matrix& windows);

// [|a-p|^2 - |a-n|^2 + delta]_+
double TripletLoss(const Vector& a, const Vector& p, const Vector& n, double delta);

// Loss over index triplets into the rows of `windows`.
LossReport EvaluateLoss(const EmbeddingModel& model, const Matrix& windows,
                        std::span<const IndexTriplet> triplets, double delta);

// Exact gradient of the summed triplet hinge loss w.r.t. all layer
// parameters, through the normalization layer. Inactive triplets (hinge
// argument <= 0) contribute nothing.
LossReport Backward(const EmbeddingModel& model, const Matrix& windows,
                    std::span<const IndexTriplet> triplets, double delta, Gradients& grads);

bool AllFinite(const EmbeddingModel& model);

// "SCNE" checkpoint, little-endian.
std::vector<std::uint8_t> EncodeCheckpoint(const EmbeddingModel& model);
EmbeddingModel DecodeCheckpoint(std::span<const std::uint8_t> bytes);
void SaveCheckpoint(const std::string& path, const EmbeddingModel& model);
EmbeddingModel LoadCheckpoint(const std::string& path);

}  // namespace scenaware
