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

#include "scenaware/scenaware.h"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <exception>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "dataset.hpp"
#include "embedder.hpp"
#include "evaluation.hpp"
#include "io.hpp"
#include "pipeline.hpp"
#include "training.hpp"

struct scn_manifest {
  scenaware::Manifest manifest;
};

struct scn_model {
  scenaware::EmbeddingModel model;
};

namespace {

using scenaware::Error;
using scenaware::ErrorKind;

thread_local std::string g_last_error;

scn_status StatusOf(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return SCN_ERR_INVALID_ARGUMENT;
    case ErrorKind::kIo: return SCN_ERR_IO;
    case ErrorKind::kFormat: return SCN_ERR_FORMAT;
    case ErrorKind::kTooShort: return SCN_ERR_TOO_SHORT;
    case ErrorKind::kNumeric: return SCN_ERR_NUMERIC;
    case ErrorKind::kInternal: return SCN_ERR_INTERNAL;
  }
  return SCN_ERR_INTERNAL;
}

scn_status SetError(scn_status status, const std::string& msg) {
  g_last_error = msg;
  return status;
}

template <typename Fn>
scn_status Guard(Fn&& fn) {
  try {
    fn();
    return SCN_OK;
  } catch (const Error& e) {
    return SetError(StatusOf(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return SetError(SCN_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return SetError(SCN_ERR_INTERNAL, e.what());
  } catch (...) {
    return SetError(SCN_ERR_INTERNAL, "unknown error");
  }
}

void NotNull(const void* p, const char* name) {
  if (p == nullptr) scenaware::Fail(ErrorKind::kInvalidArgument, std::string(name) + " is null");
}

scenaware::DspConfig ToDsp(const scn_dsp_options* opts) {
  scenaware::DspConfig dsp;
  if (opts == nullptr) return dsp;
  dsp.frame_len_s = opts->frame_len_s;
  dsp.hop_s = opts->hop_s;
  dsp.mel.num_bands = opts->num_bands;
  dsp.mel.fmin_hz = opts->fmin_hz;
  dsp.mel.fmax_hz = opts->fmax_hz > 0.0 ? opts->fmax_hz : 0.0;
  dsp.num_ceps = opts->num_ceps;
  dsp.window_frames = opts->window_frames;
  dsp.window_hop = opts->window_hop;
  return dsp;
}

}  // namespace

extern "C" {

const char* scn_version(void) { return "1.0.0"; }

const char* scn_status_name(scn_status status) {
  switch (status) {
    case SCN_OK: return "ok";
    case SCN_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case SCN_ERR_IO: return "io_error";
    case SCN_ERR_FORMAT: return "format_error";
    case SCN_ERR_TOO_SHORT: return "too_short";
    case SCN_ERR_NUMERIC: return "numeric_error";
    case SCN_ERR_INTERNAL: return "internal_error";
  }
  return "unknown";
}

const char* scn_last_error(void) { return g_last_error.c_str(); }

void scn_set_verbose(int verbose) { scenaware::SetVerbose(verbose != 0); }

void scn_dsp_options_default(scn_dsp_options* opts) {
  if (opts == nullptr) return;
  scenaware::DspConfig d;
  opts->frame_len_s = d.frame_len_s;
  opts->hop_s = d.hop_s;
  opts->num_bands = d.mel.num_bands;
  opts->fmin_hz = d.mel.fmin_hz;
  opts->fmax_hz = 0.0;
  opts->num_ceps = d.num_ceps;
  opts->window_frames = d.window_frames;
  opts->window_hop = d.window_hop;
}

scn_status scn_extract(const scn_manifest* manifest, const scn_dsp_options* dsp, int threads,
                       const char* out_dir, size_t* num_written) {
  return Guard([&] {
    NotNull(manifest, "manifest");
    NotNull(out_dir, "out_dir");
    std::size_t n = scenaware::ExtractFeatures(manifest->manifest, ToDsp(dsp), threads, out_dir);
    if (num_written != nullptr) *num_written = n;
  });
}

void scn_corpus_options_default(scn_corpus_options* opts) {
  if (opts == nullptr) return;
  scenaware::CorpusOptions c;
  opts->num_scenarios = static_cast<int>(scenaware::DefaultScenarios().size());
  opts->utts_per_scenario = c.utts_per_scenario;
  opts->duration_s = c.duration_s;
  opts->sample_rate = c.sample_rate;
  opts->seed = c.seed;
  opts->threads = c.threads;
}

scn_status scn_corpus_generate(const scn_corpus_options* opts, const char* out_dir,
                               scn_manifest** out) {
  return Guard([&] {
    NotNull(opts, "opts");
    NotNull(out_dir, "out_dir");
    auto specs = scenaware::DefaultScenarios();
    if (opts->num_scenarios < 2 || opts->num_scenarios > static_cast<int>(specs.size())) {
      scenaware::Fail(ErrorKind::kInvalidArgument,
                      "num_scenarios must be in [2, " + std::to_string(specs.size()) + "]");
    }
    specs.resize(static_cast<std::size_t>(opts->num_scenarios));
    scenaware::CorpusOptions c;
    c.utts_per_scenario = opts->utts_per_scenario;
    c.duration_s = opts->duration_s > 0.0 ? opts->duration_s : 0.0;
    c.sample_rate = opts->sample_rate;
    c.seed = opts->seed;
    c.threads = opts->threads;
    auto m = scenaware::GenerateCorpus(specs, c, out_dir);
    if (out != nullptr) *out = new scn_manifest{std::move(m)};
  });
}

scn_status scn_manifest_load(const char* path, scn_manifest** out) {
  return Guard([&] {
    NotNull(path, "path");
    NotNull(out, "out");
    *out = new scn_manifest{scenaware::LoadManifest(path)};
  });
}

size_t scn_manifest_size(const scn_manifest* manifest) {
  return manifest == nullptr ? 0 : manifest->manifest.entries.size();
}

scn_status scn_manifest_entry(const scn_manifest* manifest, size_t index, const char** utt_id,
                              const char** path, const char** scenario_label,
                              double* duration_s) {
  return Guard([&] {
    NotNull(manifest, "manifest");
    const auto& entries = manifest->manifest.entries;
    if (index >= entries.size()) {
      scenaware::Fail(ErrorKind::kInvalidArgument, "manifest index out of range");
    }
    const auto& e = entries[index];
    if (utt_id != nullptr) *utt_id = e.utt_id.c_str();
    if (path != nullptr) *path = e.path.c_str();
    if (scenario_label != nullptr) *scenario_label = e.scenario_label.c_str();
    if (duration_s != nullptr) *duration_s = e.duration_s;
  });
}

void scn_manifest_free(scn_manifest* manifest) { delete manifest; }

void scn_train_options_default(scn_train_options* opts) {
  if (opts == nullptr) return;
  scenaware::TrainConfig t;
  scenaware::ModelConfig m;
  scenaware::SamplerConfig s;
  std::memset(opts, 0, sizeof(*opts));
  opts->steps = t.steps;
  opts->clips_per_batch = t.clips_per_batch;
  opts->windows_per_clip = t.windows_per_clip;
  opts->learning_rate = t.learning_rate;
  opts->beta1 = t.beta1;
  opts->beta2 = t.beta2;
  opts->delta = t.delta;
  opts->mode = s.mode == scenaware::SamplerMode::kClip ? SCN_MODE_CLIP : SCN_MODE_TEMPORAL;
  opts->tau_s = s.tau_s;
  opts->num_hidden = static_cast<int>(m.hidden_dims.size());
  for (std::size_t i = 0; i < m.hidden_dims.size(); ++i) opts->hidden_dims[i] = m.hidden_dims[i];
  opts->embedding_dim = m.output_dim;
  opts->seed = t.seed;
  opts->checkpoint_every = t.checkpoint_every;
  opts->threads = 1;
}

scn_status scn_train(const scn_manifest* manifest, const scn_dsp_options* dsp,
                     const scn_train_options* opts, const char* out_dir, scn_model** out) {
  return Guard([&] {
    NotNull(manifest, "manifest");
    NotNull(opts, "opts");
    if (opts->num_hidden < 0 || opts->num_hidden > SCN_MAX_HIDDEN_LAYERS) {
      scenaware::Fail(ErrorKind::kInvalidArgument, "num_hidden out of range");
    }
    if (opts->mode != SCN_MODE_CLIP && opts->mode != SCN_MODE_TEMPORAL) {
      scenaware::Fail(ErrorKind::kInvalidArgument, "unknown sampler mode");
    }
    scenaware::TrainConfig t;
    t.steps = opts->steps;
    t.clips_per_batch = opts->clips_per_batch;
    t.windows_per_clip = opts->windows_per_clip;
    t.learning_rate = opts->learning_rate;
    t.beta1 = opts->beta1;
    t.beta2 = opts->beta2;
    t.delta = opts->delta;
    t.seed = opts->seed;
    t.checkpoint_every = opts->checkpoint_every;
    scenaware::ValidateTrainConfig(t);

    scenaware::ModelConfig m;
    m.hidden_dims.assign(opts->hidden_dims, opts->hidden_dims + opts->num_hidden);
    m.output_dim = opts->embedding_dim;

    scenaware::SamplerConfig s;
    s.mode = opts->mode == SCN_MODE_CLIP ? scenaware::SamplerMode::kClip
                                         : scenaware::SamplerMode::kTemporal;
    s.tau_s = opts->tau_s;
    s.rng_seed = opts->seed;

    auto clips = scenaware::ExtractClips(manifest->manifest, ToDsp(dsp), opts->threads);
    auto windows = scenaware::WindowsOf(clips);
    auto result = scenaware::Train(windows, s, m, t, out_dir == nullptr ? "" : out_dir);
    if (out != nullptr) *out = new scn_model{std::move(result.model)};
  });
}

scn_status scn_model_init(int num_bands, int window_frames, const int* hidden_dims,
                          int num_hidden, int embedding_dim, uint64_t seed, scn_model** out) {
  return Guard([&] {
    NotNull(out, "out");
    if (num_hidden < 0) scenaware::Fail(ErrorKind::kInvalidArgument, "num_hidden < 0");
    if (num_hidden > 0) NotNull(hidden_dims, "hidden_dims");
    std::vector<int> hidden(hidden_dims, hidden_dims + num_hidden);
    *out = new scn_model{
        scenaware::InitModel(num_bands, window_frames, hidden, embedding_dim, seed)};
  });
}

scn_status scn_model_load(const char* path, scn_model** out) {
  return Guard([&] {
    NotNull(path, "path");
    NotNull(out, "out");
    *out = new scn_model{scenaware::LoadCheckpoint(path)};
  });
}

scn_status scn_model_save(const scn_model* model, const char* path) {
  return Guard([&] {
    NotNull(model, "model");
    NotNull(path, "path");
    scenaware::SaveCheckpoint(path, model->model);
  });
}

int scn_model_input_dim(const scn_model* model) {
  return model == nullptr ? 0 : model->model.input_dim();
}

int scn_model_embedding_dim(const scn_model* model) {
  return model == nullptr ? 0 : model->model.output_dim();
}

scn_status scn_model_embed_window(const scn_model* model, const double* window,
                                  size_t window_len, double* out, size_t out_len) {
  return Guard([&] {
    NotNull(model, "model");
    NotNull(window, "window");
    NotNull(out, "out");
    const auto& m = model->model;
    if (window_len != static_cast<std::size_t>(m.input_dim())) {
      scenaware::Fail(ErrorKind::kInvalidArgument,
                      "window length " + std::to_string(window_len) + " != model input " +
                          std::to_string(m.input_dim()));
    }
    if (out_len < static_cast<std::size_t>(m.output_dim())) {
      scenaware::Fail(ErrorKind::kInvalidArgument, "output buffer too small");
    }
    Eigen::Map<const scenaware::RowVector> x(window, static_cast<Eigen::Index>(window_len));
    scenaware::Vector e = scenaware::Forward(m, x);
    std::copy(e.data(), e.data() + e.size(), out);
  });
}

void scn_model_free(scn_model* model) { delete model; }

scn_status scn_triplet_loss(const double* anchor, const double* positive,
                            const double* negative, size_t dim, double delta, double* out) {
  return Guard([&] {
    NotNull(anchor, "anchor");
    NotNull(positive, "positive");
    NotNull(negative, "negative");
    NotNull(out, "out");
    const auto n = static_cast<Eigen::Index>(dim);
    scenaware::Vector a = Eigen::Map<const scenaware::Vector>(anchor, n);
    scenaware::Vector p = Eigen::Map<const scenaware::Vector>(positive, n);
    scenaware::Vector g = Eigen::Map<const scenaware::Vector>(negative, n);
    *out = scenaware::TripletLoss(a, p, g, delta);
  });
}

scn_status scn_embed(const scn_manifest* manifest, const scn_model* model,
                     const scn_dsp_options* dsp, int threads, const char* out_dir,
                     size_t* num_written) {
  return Guard([&] {
    NotNull(manifest, "manifest");
    NotNull(model, "model");
    NotNull(out_dir, "out_dir");
    std::size_t n = scenaware::WriteScenarioVectors(manifest->manifest, model->model,
                                                    ToDsp(dsp), threads, out_dir);
    if (num_written != nullptr) *num_written = n;
  });
}

scn_status scn_assemble(const scn_manifest* manifest, const scn_model* model,
                        const scn_dsp_options* dsp, const char* aux_path, int threads,
                        const char* out_dir, size_t* num_written) {
  return Guard([&] {
    NotNull(manifest, "manifest");
    NotNull(model, "model");
    NotNull(out_dir, "out_dir");
    std::optional<scenaware::Matrix> aux;
    if (aux_path != nullptr && aux_path[0] != '\0') aux = scenaware::LoadMatrix(aux_path);
    std::size_t n = scenaware::AssembleManifest(manifest->manifest, model->model, ToDsp(dsp),
                                                aux, threads, out_dir);
    if (num_written != nullptr) *num_written = n;
  });
}

void scn_eval_options_default(scn_eval_options* opts) {
  if (opts == nullptr) return;
  scenaware::EvalOptions e;
  opts->auc_pairs = e.auc_pairs;
  opts->kmeans_k = e.kmeans_k;
  opts->kmeans_restarts = e.kmeans_restarts;
  opts->probe_l2 = e.probe.l2_weight;
  opts->projection = SCN_PROJECT_PCA;
  opts->perplexity = e.perplexity;
  opts->seed = e.seed;
  opts->threads = 1;
}

scn_status scn_evaluate(const scn_manifest* manifest, const scn_model* model,
                        const scn_dsp_options* dsp, const scn_eval_options* opts,
                        const char* out_dir, scn_eval_report* report) {
  return Guard([&] {
    NotNull(manifest, "manifest");
    NotNull(model, "model");
    NotNull(opts, "opts");
    NotNull(out_dir, "out_dir");
    scenaware::EvalOptions e;
    e.auc_pairs = opts->auc_pairs;
    e.kmeans_k = opts->kmeans_k;
    e.kmeans_restarts = opts->kmeans_restarts;
    e.probe.l2_weight = opts->probe_l2;
    e.projection = opts->projection == SCN_PROJECT_TSNE ? scenaware::ProjectionMethod::kTsne
                                                        : scenaware::ProjectionMethod::kPca;
    e.perplexity = opts->perplexity;
    e.seed = opts->seed;
    auto r = scenaware::Evaluate(manifest->manifest, model->model, ToDsp(dsp), e, opts->threads,
                                 out_dir);
    if (report != nullptr) {
      report->auc = r.auc;
      report->purity = r.purity;
      report->probe_accuracy_base = r.probe_accuracy_base;
      report->probe_accuracy_augmented = r.probe_accuracy_augmented;
      std::snprintf(report->projection_path, sizeof(report->projection_path), "%s",
                    r.projection_path.c_str());
    }
  });
}

scn_status scn_project(const scn_manifest* manifest, const scn_model* model,
                       const scn_dsp_options* dsp, scn_projection method, double perplexity,
                       uint64_t seed, int threads, const char* out_dir) {
  return Guard([&] {
    NotNull(manifest, "manifest");
    NotNull(model, "model");
    NotNull(out_dir, "out_dir");
    auto m = method == SCN_PROJECT_TSNE ? scenaware::ProjectionMethod::kTsne
                                        : scenaware::ProjectionMethod::kPca;
    scenaware::ProjectManifest(manifest->manifest, model->model, ToDsp(dsp), m, perplexity,
                               seed, threads, out_dir);
  });
}

scn_status scn_auc(const double* positives, size_t num_positives, const double* negatives,
                   size_t num_negatives, double* out) {
  return Guard([&] {
    NotNull(out, "out");
    if (num_positives > 0) NotNull(positives, "positives");
    if (num_negatives > 0) NotNull(negatives, "negatives");
    *out = scenaware::AucFromScores({positives, num_positives}, {negatives, num_negatives});
  });
}

}  // extern "C"
