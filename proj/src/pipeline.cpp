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

#include "pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>

#include <json.hpp>

#include "features.hpp"
#include "io.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace fs = std::filesystem;

namespace scenaware {

namespace {

void CheckModelMatchesDsp(const EmbeddingModel& model, const DspConfig& dsp) {
  if (model.num_bands != dsp.mel.num_bands || model.window_frames != dsp.window_frames)
    Fail(ErrorKind::kInvalidArgument,
         "model expects " + std::to_string(model.num_bands) + " bands x " +
             std::to_string(model.window_frames) + " frames but the front end produces " +
             std::to_string(dsp.mel.num_bands) + " x " + std::to_string(dsp.window_frames));
}

void EnsureDir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) Fail(ErrorKind::kIo, "cannot create output directory " + dir + ": " + ec.message());
}

void WriteText(const std::string& path, const std::string& text) {
  WriteFileBytes(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

std::string Join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

}  // namespace

UtteranceSet EmbedManifest(const Manifest& manifest, const EmbeddingModel& model,
                           const DspConfig& dsp, int threads) {
  CheckModelMatchesDsp(model, dsp);
  const auto clips = ExtractClips(manifest, dsp, threads);
  if (clips.empty()) Fail(ErrorKind::kTooShort, "no utterance is long enough to embed");

  UtteranceSet set;
  set.label_names = manifest.Labels();
  std::map<std::string, int> label_index;
  for (std::size_t i = 0; i < set.label_names.size(); ++i)
    label_index[set.label_names[i]] = static_cast<int>(i);

  const auto n = static_cast<Eigen::Index>(clips.size());
  set.window_embeddings.resize(clips.size());
  set.scenario_vectors.resize(n, model.output_dim());
  set.mean_mfcc.resize(n, dsp.num_ceps);
  ParallelFor(clips.size(), threads, [&](std::size_t i) {
    set.window_embeddings[i] = EmbedUtterance(model, clips[i].windows);
    set.scenario_vectors.row(static_cast<Eigen::Index>(i)) =
        MakeScenarioVector(set.window_embeddings[i]).values.transpose();
    set.mean_mfcc.row(static_cast<Eigen::Index>(i)) =
        Mfcc(clips[i].logmel, dsp.num_ceps).frames.colwise().mean();
  });
  for (const auto& c : clips) {
    const auto& e = manifest.entries[c.entry];
    set.utt_ids.push_back(e.utt_id);
    set.labels.push_back(label_index.at(e.scenario_label));
  }
  return set;
}

std::string FormatEvalReport(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["auc"] = r.auc;
  j["purity"] = r.purity;
  j["probe_accuracy_base"] = r.probe_accuracy_base;
  j["probe_accuracy_augmented"] = r.probe_accuracy_augmented;
  j["projection_path"] = r.projection_path;
  return j.dump(2) + "\n";
}

EvalReport ParseEvalReport(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    EvalReport r;
    r.auc = j.at("auc").get<double>();
    r.purity = j.at("purity").get<double>();
    r.probe_accuracy_base = j.at("probe_accuracy_base").get<double>();
    r.probe_accuracy_augmented = j.at("probe_accuracy_augmented").get<double>();
    r.projection_path = j.at("projection_path").get<std::string>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorKind::kFormat, std::string("malformed eval report: ") + e.what());
  }
}

EvalReport ComputeEvalMetrics(const UtteranceSet& set, const EvalOptions& opts) {
  EvalReport r;
  r.auc = SameDiffAuc(set.window_embeddings, opts.auc_pairs, SubstreamSeed(opts.seed, 11));

  KMeansOptions km;
  km.k = opts.kmeans_k > 0 ? opts.kmeans_k : static_cast<int>(set.label_names.size());
  km.restarts = opts.kmeans_restarts;
  km.seed = SubstreamSeed(opts.seed, 12);
  r.purity = KMeansPurity(set.scenario_vectors, set.labels, km);

  // Stratified half split per label for the probe.
  std::map<int, std::vector<std::size_t>> by_label;
  for (std::size_t i = 0; i < set.labels.size(); ++i) by_label[set.labels[i]].push_back(i);
  Rng rng(SubstreamSeed(opts.seed, 13));
  std::vector<std::size_t> train, test;
  for (auto& [label, idx] : by_label) {
    for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[rng.Index(i)]);
    const std::size_t n_train = (idx.size() + 1) / 2;
    train.insert(train.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    test.insert(test.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());

  const Eigen::Index base_dims = set.mean_mfcc.cols();
  const Eigen::Index aug_dims = base_dims + set.scenario_vectors.cols();
  auto gather = [&](const std::vector<std::size_t>& rows, bool augmented) {
    Matrix x(static_cast<Eigen::Index>(rows.size()), augmented ? aug_dims : base_dims);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto src = static_cast<Eigen::Index>(rows[i]);
      x.row(static_cast<Eigen::Index>(i)).head(base_dims) = set.mean_mfcc.row(src);
      if (augmented) x.row(static_cast<Eigen::Index>(i)).tail(aug_dims - base_dims) = set.scenario_vectors.row(src);
    }
    return x;
  };
  std::vector<int> y_train, y_test;
  for (auto i : train) y_train.push_back(set.labels[i]);
  for (auto i : test) y_test.push_back(set.labels[i]);
  if (test.empty()) Fail(ErrorKind::kInvalidArgument, "probe needs at least 2 utterances per label");

  r.probe_accuracy_base =
      LinearProbe(gather(train, false), y_train, gather(test, false), y_test, opts.probe).accuracy;
  r.probe_accuracy_augmented =
      LinearProbe(gather(train, true), y_train, gather(test, true), y_test, opts.probe).accuracy;
  return r;
}

Matrix Project(const Matrix& vectors, ProjectionMethod method, double perplexity,
               std::uint64_t seed) {
  if (method == ProjectionMethod::kPca) return ProjectPca(vectors).coords;
  TsneOptions t;
  t.perplexity = perplexity;
  t.seed = seed;
  return ProjectTsne(vectors, t).coords;
}

std::string FormatProjectionCsv(const UtteranceSet& set, const Matrix& coords) {
  std::string out = "utt_id,x,y,label\n";
  char buf[96];
  for (std::size_t i = 0; i < set.utt_ids.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    std::snprintf(buf, sizeof buf, ",%.9g,%.9g,", coords(r, 0), coords(r, 1));
    out += set.utt_ids[i] + buf + set.label_names[set.labels[i]] + "\n";
  }
  return out;
}

EvalReport Evaluate(const Manifest& manifest, const EmbeddingModel& model, const DspConfig& dsp,
                    const EvalOptions& opts, int threads, const std::string& out_dir) {
  const UtteranceSet set = EmbedManifest(manifest, model, dsp, threads);
  EvalReport r = ComputeEvalMetrics(set, opts);
  const Matrix coords =
      Project(set.scenario_vectors, opts.projection, opts.perplexity, SubstreamSeed(opts.seed, 14));
  EnsureDir(out_dir);
  r.projection_path = "projection.csv";
  WriteText(Join(out_dir, "projection.csv"), FormatProjectionCsv(set, coords));
  WriteText(Join(out_dir, "eval_report.json"), FormatEvalReport(r));
  return r;
}

std::string ProjectManifest(const Manifest& manifest, const EmbeddingModel& model,
                            const DspConfig& dsp, ProjectionMethod method, double perplexity,
                            std::uint64_t seed, int threads, const std::string& out_dir) {
  const UtteranceSet set = EmbedManifest(manifest, model, dsp, threads);
  const Matrix coords = Project(set.scenario_vectors, method, perplexity, seed);
  EnsureDir(out_dir);
  const std::string path = Join(out_dir, "projection.csv");
  WriteText(path, FormatProjectionCsv(set, coords));
  return path;
}

std::size_t ExtractFeatures(const Manifest& manifest, const DspConfig& dsp, int threads,
                            const std::string& out_dir) {
  const auto clips = ExtractClips(manifest, dsp, threads, /*keep_short=*/true);
  std::vector<Matrix> mfcc(clips.size());
  ParallelFor(clips.size(), threads,
              [&](std::size_t i) { mfcc[i] = Mfcc(clips[i].logmel, dsp.num_ceps).frames; });
  EnsureDir(out_dir);
  for (std::size_t i = 0; i < clips.size(); ++i) {
    const auto& id = manifest.entries[clips[i].entry].utt_id;
    SaveMatrix(Join(out_dir, id + ".logmel.scnm"), clips[i].logmel.frames);
    SaveMatrix(Join(out_dir, id + ".mfcc.scnm"), mfcc[i]);
  }
  return clips.size();
}

std::size_t WriteScenarioVectors(const Manifest& manifest, const EmbeddingModel& model,
                                 const DspConfig& dsp, int threads, const std::string& out_dir) {
  const UtteranceSet set = EmbedManifest(manifest, model, dsp, threads);
  std::string tsv;
  for (std::size_t i = 0; i < set.utt_ids.size(); ++i)
    tsv += std::to_string(i) + '\t' + set.utt_ids[i] + '\t' + set.label_names[set.labels[i]] + '\n';
  EnsureDir(out_dir);
  SaveMatrix(Join(out_dir, "scenario_vectors.scnm"), set.scenario_vectors);
  WriteText(Join(out_dir, "scenario_vectors.tsv"), tsv);
  return set.utt_ids.size();
}

std::size_t AssembleManifest(const Manifest& manifest, const EmbeddingModel& model,
                             const DspConfig& dsp, const std::optional<Matrix>& aux, int threads,
                             const std::string& out_dir) {
  CheckModelMatchesDsp(model, dsp);
  if (aux && static_cast<std::size_t>(aux->rows()) != manifest.entries.size())
    Fail(ErrorKind::kInvalidArgument,
         "aux matrix has " + std::to_string(aux->rows()) + " rows but the manifest has " +
             std::to_string(manifest.entries.size()) + " entries");
  const auto clips = ExtractClips(manifest, dsp, threads);
  std::vector<AssembledFeature> feats(clips.size());
  ParallelFor(clips.size(), threads, [&](std::size_t i) {
    const auto& e = manifest.entries[clips[i].entry];
    const ScenarioVector sv = MakeScenarioVector(EmbedUtterance(model, clips[i].windows), e.utt_id);
    std::optional<Vector> a;
    if (aux) a = aux->row(static_cast<Eigen::Index>(clips[i].entry)).transpose();
    feats[i] = AssembleFeatures(Mfcc(clips[i].logmel, dsp.num_ceps), a, sv);
  });
  EnsureDir(out_dir);
  for (std::size_t i = 0; i < clips.size(); ++i)
    SaveMatrix(Join(out_dir, manifest.entries[clips[i].entry].utt_id + ".feat.scnm"),
               feats[i].frames);
  return clips.size();
}

}  // namespace scenaware
