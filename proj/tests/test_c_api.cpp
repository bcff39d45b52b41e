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

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "scenaware/scenaware.h"
#include "support.hpp"

namespace fs = std::filesystem;

TEST_CASE("status names and version") {
  CHECK(std::string(scn_status_name(SCN_OK)) == "ok");
  CHECK(std::strlen(scn_status_name(SCN_ERR_TOO_SHORT)) > 0);
  CHECK(std::strlen(scn_version()) > 0);
}

TEST_CASE("null arguments are rejected with a message") {
  scn_set_verbose(0);
  double out = 0;
  CHECK(scn_triplet_loss(nullptr, nullptr, nullptr, 2, 0.5, &out) == SCN_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(scn_last_error()) > 0);
  scn_manifest* m = nullptr;
  CHECK(scn_manifest_load(nullptr, &m) == SCN_ERR_INVALID_ARGUMENT);
  CHECK(m == nullptr);
  CHECK(scn_manifest_load("/nonexistent/manifest.tsv", &m) == SCN_ERR_IO);
  scn_model* model = nullptr;
  CHECK(scn_model_load("/nonexistent/model.scne", &model) == SCN_ERR_IO);
  scn_manifest_free(nullptr);
  scn_model_free(nullptr);
}

TEST_CASE("triplet loss and AUC through the C boundary") {
  const double a[] = {0, 0}, p[] = {1, 0}, n[] = {0, 2};
  double out = -1;
  REQUIRE(scn_triplet_loss(a, p, n, 2, 0.5, &out) == SCN_OK);
  CHECK(out == 0.0);
  REQUIRE(scn_triplet_loss(a, n, p, 2, 0.5, &out) == SCN_OK);
  CHECK(out == doctest::Approx(3.5));
  CHECK(scn_triplet_loss(a, p, n, 2, -1.0, &out) == SCN_ERR_INVALID_ARGUMENT);

  const double pos[] = {0.9, 0.4}, neg[] = {0.5, 0.1};
  REQUIRE(scn_auc(pos, 2, neg, 2, &out) == SCN_OK);
  CHECK(out == 0.75);
  CHECK(scn_auc(pos, 0, neg, 2, &out) == SCN_ERR_INVALID_ARGUMENT);
}

TEST_CASE("model init, embed, save and load") {
  scntest::TempDir dir;
  const int hidden[] = {8};
  scn_model* model = nullptr;
  REQUIRE(scn_model_init(3, 2, hidden, 1, 4, 11, &model) == SCN_OK);
  CHECK(scn_model_input_dim(model) == 6);
  CHECK(scn_model_embedding_dim(model) == 4);
  const double window[] = {0.1, -0.2, 0.3, 0.4, 0.5, -0.6};
  double e[4];
  REQUIRE(scn_model_embed_window(model, window, 6, e, 4) == SCN_OK);
  double norm = 0;
  for (double v : e) norm += v * v;
  CHECK(std::abs(std::sqrt(norm) - 1.0) < 1e-9);
  CHECK(scn_model_embed_window(model, window, 5, e, 4) == SCN_ERR_INVALID_ARGUMENT);

  const std::string path = dir / "m.scne";
  REQUIRE(scn_model_save(model, path.c_str()) == SCN_OK);
  scn_model* loaded = nullptr;
  REQUIRE(scn_model_load(path.c_str(), &loaded) == SCN_OK);
  double e2[4];
  REQUIRE(scn_model_embed_window(loaded, window, 6, e2, 4) == SCN_OK);
  for (int i = 0; i < 4; ++i) CHECK(e[i] == e2[i]);

  CHECK(scn_model_init(3, 2, hidden, 1, 1, 11, &loaded) != SCN_OK);
  scn_model_free(model);
  scn_model_free(loaded);

  {
    std::ofstream bad(dir / "bad.scne", std::ios::binary);
    bad << "SCNX garbage";
  }
  scn_model* none = nullptr;
  CHECK(scn_model_load((dir / "bad.scne").c_str(), &none) == SCN_ERR_FORMAT);
  CHECK(none == nullptr);
}

TEST_CASE("generate, train, embed, assemble and evaluate") {
  scntest::TempDir dir;
  scn_set_verbose(0);
  scn_corpus_options copts;
  scn_corpus_options_default(&copts);
  copts.num_scenarios = 3;
  copts.utts_per_scenario = 4;
  copts.duration_s = 2.0;
  scn_manifest* manifest = nullptr;
  REQUIRE(scn_corpus_generate(&copts, (dir / "corpus").c_str(), &manifest) == SCN_OK);
  REQUIRE(scn_manifest_size(manifest) == 12);
  const char* id = nullptr;
  const char* label = nullptr;
  double dur = 0;
  REQUIRE(scn_manifest_entry(manifest, 0, &id, nullptr, &label, &dur) == SCN_OK);
  CHECK(dur == doctest::Approx(2.0));
  CHECK(std::string(id).rfind(label, 0) == 0);
  CHECK(scn_manifest_entry(manifest, 12, &id, nullptr, nullptr, nullptr) ==
        SCN_ERR_INVALID_ARGUMENT);

  scn_dsp_options dsp;
  scn_dsp_options_default(&dsp);
  size_t n = 0;
  REQUIRE(scn_extract(manifest, &dsp, 1, (dir / "feats").c_str(), &n) == SCN_OK);
  CHECK(n == 12);

  scn_train_options topts;
  scn_train_options_default(&topts);
  topts.steps = 5;
  topts.num_hidden = 1;
  topts.hidden_dims[0] = 16;
  topts.embedding_dim = 8;
  scn_model* model = nullptr;
  REQUIRE(scn_train(manifest, &dsp, &topts, (dir / "train").c_str(), &model) == SCN_OK);
  CHECK(fs::exists(dir / "train/model.scne"));
  CHECK(fs::exists(dir / "train/loss.csv"));
  CHECK(scn_model_embedding_dim(model) == 8);

  topts.steps = 0;
  scn_model* none = nullptr;
  CHECK(scn_train(manifest, &dsp, &topts, (dir / "bad").c_str(), &none) ==
        SCN_ERR_INVALID_ARGUMENT);
  CHECK(none == nullptr);

  REQUIRE(scn_embed(manifest, model, &dsp, 1, (dir / "emb").c_str(), &n) == SCN_OK);
  CHECK(n == 12);
  CHECK(fs::exists(dir / "emb/scenario_vectors.scnm"));
  REQUIRE(scn_assemble(manifest, model, &dsp, nullptr, 1, (dir / "feat").c_str(), &n) == SCN_OK);
  CHECK(n == 12);
  CHECK(scn_assemble(manifest, model, &dsp, (dir / "missing.scnm").c_str(), 1,
                     (dir / "feat2").c_str(), &n) == SCN_ERR_IO);

  scn_eval_options eopts;
  scn_eval_options_default(&eopts);
  eopts.auc_pairs = 1000;
  scn_eval_report report;
  REQUIRE(scn_evaluate(manifest, model, &dsp, &eopts, (dir / "eval").c_str(), &report) == SCN_OK);
  CHECK(report.auc >= 0.0);
  CHECK(report.auc <= 1.0);
  CHECK(report.purity > 0.0);
  CHECK(std::string(report.projection_path) == "projection.csv");
  CHECK(fs::exists(dir / "eval/eval_report.json"));

  REQUIRE(scn_project(manifest, model, &dsp, SCN_PROJECT_PCA, 30, 3, 1, (dir / "proj").c_str()) ==
          SCN_OK);
  CHECK(fs::exists(dir / "proj/projection.csv"));

  // Model trained for F=40, T=96 does not fit a T=48 front end.
  dsp.window_frames = 48;
  CHECK(scn_evaluate(manifest, model, &dsp, &eopts, (dir / "eval3").c_str(), &report) ==
        SCN_ERR_INVALID_ARGUMENT);

  scn_model_free(model);
  scn_manifest_free(manifest);
}
