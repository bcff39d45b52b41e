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

/*
 * scenaware C API.
 *
 * Every fallible call returns an scn_status. On failure, scn_last_error()
 * returns a message describing the most recent error on the calling thread;
 * the pointer stays valid until the next failing call on that thread.
 * Handles are opaque and owned by the caller once returned; release them with
 * the matching *_free function (NULL is accepted).
 *
 * Option structs must be initialized with the matching *_default function
 * before fields are overridden.
 */

#ifndef SCENAWARE_SCENAWARE_H_
#define SCENAWARE_SCENAWARE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(SCN_BUILDING_LIBRARY)
#define SCN_API __attribute__((visibility("default")))
#else
#define SCN_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum scn_status {
  SCN_OK = 0,
  SCN_ERR_INVALID_ARGUMENT = 1,
  SCN_ERR_IO = 2,
  SCN_ERR_FORMAT = 3,
  SCN_ERR_TOO_SHORT = 4,
  SCN_ERR_NUMERIC = 5,
  SCN_ERR_INTERNAL = 6
} scn_status;

typedef struct scn_manifest scn_manifest;
typedef struct scn_model scn_model;

SCN_API const char* scn_version(void);
SCN_API const char* scn_status_name(scn_status status);
SCN_API const char* scn_last_error(void);
/* Progress lines on stderr (default on). Warnings are always printed. */
SCN_API void scn_set_verbose(int verbose);

/* ---- Front end ------------------------------------------------------------ */

typedef struct scn_dsp_options {
  double frame_len_s;  /* 0.025 */
  double hop_s;        /* 0.010 */
  int num_bands;       /* F = 40 */
  double fmin_hz;      /* 60 */
  double fmax_hz;      /* <= 0: sample_rate/2 - 200 */
  int num_ceps;        /* 40 */
  int window_frames;   /* T = 96 */
  int window_hop;      /* 48 */
} scn_dsp_options;

SCN_API void scn_dsp_options_default(scn_dsp_options* opts);

/* Writes <utt_id>.logmel.scnm and <utt_id>.mfcc.scnm per utterance. */
SCN_API scn_status scn_extract(const scn_manifest* manifest, const scn_dsp_options* dsp,
                               int threads, const char* out_dir, size_t* num_written);

/* ---- Corpus ----------------------------------------------------------------- */

typedef struct scn_corpus_options {
  int num_scenarios;      /* 2..5 of the default scenarios; 5 */
  int utts_per_scenario;  /* 100 */
  double duration_s;      /* > 0: fixed; otherwise uniform in [2, 10] s */
  int sample_rate;        /* 8000 or 16000; 8000 */
  uint64_t seed;          /* 7 */
  int threads;            /* 1 */
} scn_corpus_options;

SCN_API void scn_corpus_options_default(scn_corpus_options* opts);

/* Writes <out_dir>/manifest.tsv and <out_dir>/wavs/<utt_id>.wav. */
SCN_API scn_status scn_corpus_generate(const scn_corpus_options* opts, const char* out_dir,
                                       scn_manifest** out);

SCN_API scn_status scn_manifest_load(const char* path, scn_manifest** out);
SCN_API size_t scn_manifest_size(const scn_manifest* manifest);
/* Returned strings are owned by the manifest. Any out pointer may be NULL. */
SCN_API scn_status scn_manifest_entry(const scn_manifest* manifest, size_t index,
                                      const char** utt_id, const char** path,
                                      const char** scenario_label, double* duration_s);
SCN_API void scn_manifest_free(scn_manifest* manifest);

/* ---- Embedding model and training ------------------------------------------- */

typedef enum scn_sampler_mode { SCN_MODE_CLIP = 0, SCN_MODE_TEMPORAL = 1 } scn_sampler_mode;

#define SCN_MAX_HIDDEN_LAYERS 8

typedef struct scn_train_options {
  int steps;             /* 2000 */
  int clips_per_batch;   /* P = 8 */
  int windows_per_clip;  /* K = 4 */
  double learning_rate;  /* 1e-3 */
  double beta1, beta2;   /* 0.9, 0.999 */
  double delta;          /* margin, 0.5 */
  scn_sampler_mode mode; /* SCN_MODE_CLIP */
  double tau_s;          /* 10 */
  int num_hidden;        /* 2 */
  int hidden_dims[SCN_MAX_HIDDEN_LAYERS]; /* 256, 128 */
  int embedding_dim;     /* D = 64 */
  uint64_t seed;         /* 7 */
  int checkpoint_every;  /* 500; <= 0 final only */
  int threads;           /* front-end threads; 1 */
} scn_train_options;

SCN_API void scn_train_options_default(scn_train_options* opts);

/* Writes model.scne, checkpoint_<step>.scne and loss.csv into out_dir. */
SCN_API scn_status scn_train(const scn_manifest* manifest, const scn_dsp_options* dsp,
                             const scn_train_options* opts, const char* out_dir,
                             scn_model** out);

/* Randomly initialized model with identity input standardization. */
SCN_API scn_status scn_model_init(int num_bands, int window_frames, const int* hidden_dims,
                                  int num_hidden, int embedding_dim, uint64_t seed,
                                  scn_model** out);
SCN_API scn_status scn_model_load(const char* path, scn_model** out);
SCN_API scn_status scn_model_save(const scn_model* model, const char* path);
SCN_API int scn_model_input_dim(const scn_model* model);
SCN_API int scn_model_embedding_dim(const scn_model* model);
/* window: T*F values, frames-major. out: embedding_dim values, unit norm. */
SCN_API scn_status scn_model_embed_window(const scn_model* model, const double* window,
                                          size_t window_len, double* out, size_t out_len);
SCN_API void scn_model_free(scn_model* model);

/* [|a-p|^2 - |a-n|^2 + delta]_+ */
SCN_API scn_status scn_triplet_loss(const double* anchor, const double* positive,
                                    const double* negative, size_t dim, double delta,
                                    double* out);

/* ---- Scenario vectors and assembled features ---------------------------------- */

/* scenario_vectors.scnm (one row per utterance) + scenario_vectors.tsv. */
SCN_API scn_status scn_embed(const scn_manifest* manifest, const scn_model* model,
                             const scn_dsp_options* dsp, int threads, const char* out_dir,
                             size_t* num_written);

/* <utt_id>.feat.scnm per utterance: [mfcc ; aux ; scenario vector] per frame.
 * aux_path may be NULL; otherwise an SCNM matrix with one row per manifest
 * entry. */
SCN_API scn_status scn_assemble(const scn_manifest* manifest, const scn_model* model,
                                const scn_dsp_options* dsp, const char* aux_path, int threads,
                                const char* out_dir, size_t* num_written);

/* ---- Evaluation ------------------------------------------------------------- */

typedef enum scn_projection { SCN_PROJECT_PCA = 0, SCN_PROJECT_TSNE = 1 } scn_projection;

typedef struct scn_eval_options {
  size_t auc_pairs;     /* 20000 */
  int kmeans_k;         /* <= 0: number of labels */
  int kmeans_restarts;  /* 10 */
  double probe_l2;      /* 1e-3 */
  scn_projection projection; /* PCA */
  double perplexity;    /* 30 */
  uint64_t seed;        /* 7 */
  int threads;          /* 1 */
} scn_eval_options;

typedef struct scn_eval_report {
  double auc;
  double purity;
  double probe_accuracy_base;
  double probe_accuracy_augmented;
  char projection_path[512];
} scn_eval_report;

SCN_API void scn_eval_options_default(scn_eval_options* opts);

/* Writes eval_report.json and projection.csv into out_dir. */
SCN_API scn_status scn_evaluate(const scn_manifest* manifest, const scn_model* model,
                                const scn_dsp_options* dsp, const scn_eval_options* opts,
                                const char* out_dir, scn_eval_report* report);

/* Writes projection.csv (utt_id,x,y,label) into out_dir. */
SCN_API scn_status scn_project(const scn_manifest* manifest, const scn_model* model,
                               const scn_dsp_options* dsp, scn_projection method,
                               double perplexity, uint64_t seed, int threads,
                               const char* out_dir);

SCN_API scn_status scn_auc(const double* positives, size_t num_positives,
                           const double* negatives, size_t num_negatives, double* out);

#ifdef __cplusplus
}
#endif

#endif  // SCENAWARE_SCENAWARE_H_
