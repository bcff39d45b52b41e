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

// Stage-level operations shared by the C API and the CLI: each one runs a
// module operation over a whole manifest and writes its artifacts.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "dataset.hpp"
#include "embedder.hpp"
#include "evaluation.hpp"

namespace scenaware {

struct UtteranceSet {
  std::vector<std::string> utt_ids;
  std::vector<int> labels;  // index into label_names
  std::vector<std::string> label_names;
  std::vector<Matrix> window_embeddings;  // per utterance
  Matrix scenario_vectors;                // one row per utterance
  Matrix mean_mfcc;                       // one row per utterance
};

// Embeds every usable utterance of the manifest (too-short clips skipped).
UtteranceSet EmbedManifest(const Manifest& manifest, const EmbeddingModel& model,
                           const DspConfig& dsp, int threads);

enum class ProjectionMethod { kPca, kTsne };

struct EvalOptions {
  std::size_t auc_pairs = 20000;
  int kmeans_k = 0;  // <= 0: number of scenario labels
  int kmeans_restarts = 10;
  ProbeOptions probe;
  ProjectionMethod projection = ProjectionMethod::kPca;
  double perplexity = 30.0;
  std::uint64_t seed = 7;
};

struct EvalReport {
  double auc = 0.0;
  double purity = 0.0;
  double probe_accuracy_base = 0.0;
  double probe_accuracy_augmented = 0.0;
  std::string projection_path;
};

std::string FormatEvalReport(const EvalReport& report);
EvalReport ParseEvalReport(const std::string& text);

// Metrics only; no files written.
EvalReport ComputeEvalMetrics(const UtteranceSet& set, const EvalOptions& opts);

// Writes eval_report.json and projection.csv into out_dir.
EvalReport Evaluate(const Manifest& manifest, const EmbeddingModel& model, const DspConfig& dsp,
                    const EvalOptions& opts, int threads, const std::string& out_dir);

Matrix Project(const Matrix& vectors, ProjectionMethod method, double perplexity,
               std::uint64_t seed);

// CSV with header utt_id,x,y,label.
std::string FormatProjectionCsv(const UtteranceSet& set, const Matrix& coords);

// Writes projection.csv into out_dir; returns its path.
std::string ProjectManifest(const Manifest& manifest, const EmbeddingModel& model,
                            const DspConfig& dsp, ProjectionMethod method, double perplexity,
                            std::uint64_t seed, int threads, const std::string& out_dir);

// <utt_id>.logmel.scnm and <utt_id>.mfcc.scnm per utterance.
std::size_t ExtractFeatures(const Manifest& manifest, const DspConfig& dsp, int threads,
                            const std::string& out_dir);

// scenario_vectors.scnm (one row per utterance) + scenario_vectors.tsv
// (row, utt_id, label).
std::size_t WriteScenarioVectors(const Manifest& manifest, const EmbeddingModel& model,
                                 const DspConfig& dsp, int threads, const std::string& out_dir);

// <utt_id>.feat.scnm per utterance. aux, when given, has one row per
// manifest entry (in manifest order) and is broadcast to every frame.
std::size_t AssembleManifest(const Manifest& manifest, const EmbeddingModel& model,
                             const DspConfig& dsp, const std::optional<Matrix>& aux, int threads,
                             const std::string& out_dir);

}  // namespace scenaware
