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

// ---- Same/different-clip retrieval AUC --------------------------------------

// ROC AUC as the Mann-Whitney rank statistic; ties count 1/2.
double AucFromScores(std::span<const double> positives, std::span<const double> negatives);

// Window-level pairs: balanced same-clip and different-clip pairs, scored by
// negative squared distance. clip_embeddings[c] holds clip c's window
// embeddings as rows.
double SameDiffAuc(std::span<const Matrix> clip_embeddings, std::size_t num_pairs,
                   std::uint64_t seed);

// ---- k-means ---------------------------------------------------------------

struct KMeansOptions {
  int k = 5;
  int restarts = 10;
  int max_iterations = 300;
  double tolerance = 1e-6;  // relative inertia change
  std::uint64_t seed = 0;
};

struct KMeansResult {
  std::vector<int> assignment;
  Matrix centroids;
  double inertia = 0.0;
  int iterations = 0;
  std::vector<double> inertia_history;  // of the best restart
};

// k-means++ seeding, Lloyd iterations, best of `restarts` by inertia. Throws
// kInternal if inertia ever increases between iterations.
KMeansResult KMeans(const Matrix& points, const KMeansOptions& opts);

// (1/N) * sum over clusters of the majority label count.
double Purity(std::span<const int> assignment, std::span<const int> labels);

double KMeansPurity(const Matrix& points, std::span<const int> labels, const KMeansOptions& opts);

// ---- Linear probe ------------------------------------------------------------

struct ProbeOptions {
  double l2_weight = 1e-3;
  int iterations = 500;
  double learning_rate = 0.1;
};

struct SoftmaxModel {
  Matrix weights;  // dims x classes
  Vector biases;   // classes
};

// Mean cross-entropy plus (l2/2)*|W|^2, with its gradient.
double ProbeLoss(const SoftmaxModel& model, const Matrix& x, std::span<const int> y,
                 double l2_weight, SoftmaxModel* grad);

SoftmaxModel TrainSoftmax(const Matrix& x, std::span<const int> y, int num_classes,
                          const ProbeOptions& opts);

struct ProbeResult {
  double accuracy = 0.0;
  std::size_t evaluated = 0;
  std::size_t excluded = 0;  // test items whose class never appears in train
};

// Features are z-scored with training statistics, then a multinomial
// logistic regression is fit by full-batch gradient descent from zero.
ProbeResult LinearProbe(const Matrix& train_x, std::span<const int> train_y,
                        const Matrix& test_x, std::span<const int> test_y,
                        const ProbeOptions& opts);

// ---- 2D projection ------------------------------------------------------------

struct PcaResult {
  Matrix coords;      // N x 2
  Vector eigenvalues; // top two, descending
};

// Top-2 eigenvectors of the (1/N) covariance; each eigenvector's
// largest-magnitude component is made positive.
PcaResult ProjectPca(const Matrix& vectors);

struct TsneOptions {
  double perplexity = 30.0;
  int iterations = 500;
  double learning_rate = 200.0;
  double early_exaggeration = 12.0;
  int exaggeration_iterations = 100;
  int momentum_switch = 250;
  std::uint64_t seed = 0;
};

struct TsneResult {
  Matrix coords;            // N x 2
  std::vector<double> kl;   // kl[i]: KL(P||Q) before update i, unexaggerated P; last = final
};

inline constexpr std::size_t kTsneMaxPoints = 5000;

TsneResult ProjectTsne(const Matrix& vectors, const TsneOptions& opts);

// Per-row Gaussian conditionals with perplexity matched by binary search on
// the entropy (tolerance 1e-5). Row i of the result is p_{j|i}.
Matrix ConditionalAffinities(const Matrix& sq_distances, double perplexity);

}  // namespace scenaware
