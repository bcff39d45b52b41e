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

// scenaware: one subcommand per pipeline stage.
//
//   gen-corpus -> extract / train -> embed / assemble / eval / project
//
// Settings come from an optional key=value file (--config) overridden by
// flags. The resolved settings are logged to stderr before the stage runs.
// stdout carries only the stage result (an output path, a count or the
// evaluation report). Exit status: 0 success, 1 input error, 2 internal error.

#include <cerrno>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli_config.hpp"
#include "scenaware/scenaware.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInternal = 2;

// Status raised by a failing library call.
struct StageError {
  scn_status status;
  std::string message;
};

void Check(scn_status status) {
  if (status != SCN_OK) throw StageError{status, scn_last_error()};
}

int ExitCodeFor(scn_status status) {
  switch (status) {
    case SCN_OK: return kExitOk;
    case SCN_ERR_NUMERIC:
    case SCN_ERR_INTERNAL: return kExitInternal;
    default: return kExitInput;
  }
}

struct FlagSpec {
  const char* key;
  const char* fallback;  // nullptr: no default
  const char* help;
};

const FlagSpec kFlags[] = {
    {"manifest", nullptr, "manifest.tsv path"},
    {"out", nullptr, "output directory"},
    {"seed", "7", "global seed"},
    {"scenarios", "5", "number of default scenarios, 2..5"},
    {"utts", "100", "utterances per scenario"},
    {"duration", "0", "fixed utterance duration in s; 0 draws from [2, 10]"},
    {"steps", "2000", "training steps"},
    {"lr", "0.001", "Adam learning rate"},
    {"delta", "0.5", "triplet margin"},
    {"tau", "10", "temporal proximity in s"},
    {"mode", "clip", "triplet sampling: clip | temporal"},
    {"batch-clips", "8", "clips per batch P"},
    {"batch-windows", "4", "windows per clip K"},
    {"dim", "64", "embedding dimension D"},
    {"method", "pca", "projection: pca | tsne"},
    {"perplexity", "30", "t-SNE perplexity"},
    {"threads", "1", "worker threads"},
    {"ckpt", nullptr, "model checkpoint (.scne)"},
    {"aux", nullptr, "auxiliary per-utterance features (.scnm, one row per utterance)"},
};

const FlagSpec& Flag(const std::string& key) {
  for (const auto& f : kFlags) {
    if (key == f.key) return f;
  }
  throw std::logic_error("unknown flag " + key);
}

class Settings {
 public:
  explicit Settings(std::map<std::string, std::string> values) : values_(std::move(values)) {}

  bool Has(const std::string& key) const { return values_.count(key) != 0; }

  std::string Str(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  std::string Required(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end() || it->second.empty()) {
      throw std::invalid_argument("--" + key + " is required");
    }
    return it->second;
  }

  long long Int(const std::string& key, long long fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    errno = 0;
    char* end = nullptr;
    long long v = std::strtoll(it->second.c_str(), &end, 10);
    if (it->second.empty() || *end != '\0' || errno == ERANGE) {
      throw std::invalid_argument(key + ": expected an integer, got '" + it->second + "'");
    }
    return v;
  }

  int Int32(const std::string& key, int fallback) const {
    long long v = Int(key, fallback);
    if (v < -2147483647LL || v > 2147483647LL) {
      throw std::invalid_argument(key + ": value out of range");
    }
    return static_cast<int>(v);
  }

  std::uint64_t U64(const std::string& key, std::uint64_t fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    errno = 0;
    char* end = nullptr;
    unsigned long long v = std::strtoull(it->second.c_str(), &end, 10);
    if (it->second.empty() || it->second[0] == '-' || *end != '\0' || errno == ERANGE) {
      throw std::invalid_argument(key + ": expected a non-negative integer, got '" +
                                  it->second + "'");
    }
    return v;
  }

  double Real(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(it->second.c_str(), &end);
    if (it->second.empty() || *end != '\0' || errno == ERANGE) {
      throw std::invalid_argument(key + ": expected a number, got '" + it->second + "'");
    }
    return v;
  }

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

struct Subcommand {
  CLI::App* app = nullptr;
  std::vector<std::string> keys;
  std::map<std::string, std::string> flags;
  std::string config_path;
  std::function<void(const Settings&)> run;
};

bool Allowed(const Subcommand& sub, const std::string& key) {
  for (const auto& k : sub.keys) {
    if (k == key) return true;
  }
  return false;
}

Settings Resolve(const Subcommand& sub) {
  std::map<std::string, std::string> merged;
  if (!sub.config_path.empty()) {
    for (auto& [key, value] : scenaware::cli::LoadConfig(sub.config_path)) {
      std::string k = key;
      for (auto& c : k) {
        if (c == '_') c = '-';
      }
      if (!Allowed(sub, k)) {
        throw std::invalid_argument(sub.config_path + ": key '" + key +
                                    "' does not apply to " + sub.app->get_name());
      }
      merged[k] = value;
    }
  }
  for (const auto& key : sub.keys) {
    if (sub.app->count("--" + key) > 0) {
      merged[key] = sub.flags.at(key);
    } else if (merged.count(key) == 0 && Flag(key).fallback != nullptr) {
      merged[key] = Flag(key).fallback;
    }
  }
  return Settings(std::move(merged));
}

void LogResolved(const std::string& name, const Settings& s, const std::vector<std::string>& keys) {
  std::cerr << "[scenaware] " << name << " config:";
  for (const auto& key : keys) {
    auto it = s.values().find(key);
    std::cerr << ' ' << key << '=' << (it == s.values().end() ? "(unset)" : it->second);
  }
  std::cerr << '\n';
}

struct ManifestHandle {
  scn_manifest* ptr = nullptr;
  ~ManifestHandle() { scn_manifest_free(ptr); }
};

struct ModelHandle {
  scn_model* ptr = nullptr;
  ~ModelHandle() { scn_model_free(ptr); }
};

int Threads(const Settings& s) {
  int t = s.Int32("threads", 1);
  if (t < 1) throw std::invalid_argument("threads must be >= 1");
  return t;
}

void LoadInputs(const Settings& s, ManifestHandle& manifest, ModelHandle* model) {
  Check(scn_manifest_load(s.Required("manifest").c_str(), &manifest.ptr));
  if (model != nullptr) Check(scn_model_load(s.Required("ckpt").c_str(), &model->ptr));
}

scn_projection Method(const Settings& s) {
  std::string m = s.Str("method", "pca");
  if (m == "pca") return SCN_PROJECT_PCA;
  if (m == "tsne") return SCN_PROJECT_TSNE;
  throw std::invalid_argument("method must be pca or tsne, got '" + m + "'");
}

void RunGenCorpus(const Settings& s) {
  scn_corpus_options opts;
  scn_corpus_options_default(&opts);
  opts.num_scenarios = s.Int32("scenarios", opts.num_scenarios);
  opts.utts_per_scenario = s.Int32("utts", opts.utts_per_scenario);
  opts.duration_s = s.Real("duration", opts.duration_s);
  opts.seed = s.U64("seed", opts.seed);
  opts.threads = Threads(s);
  std::string out = s.Required("out");
  if (opts.duration_s < 0.0) throw std::invalid_argument("duration must be >= 0");
  ManifestHandle manifest;
  Check(scn_corpus_generate(&opts, out.c_str(), &manifest.ptr));
  std::cout << out << "/manifest.tsv\n";
}

void RunExtract(const Settings& s) {
  scn_dsp_options dsp;
  scn_dsp_options_default(&dsp);
  std::string out = s.Required("out");
  int threads = Threads(s);
  ManifestHandle manifest;
  LoadInputs(s, manifest, nullptr);
  size_t n = 0;
  Check(scn_extract(manifest.ptr, &dsp, threads, out.c_str(), &n));
  std::cout << n << '\n';
}

void RunTrain(const Settings& s) {
  scn_dsp_options dsp;
  scn_dsp_options_default(&dsp);
  scn_train_options opts;
  scn_train_options_default(&opts);
  opts.steps = s.Int32("steps", opts.steps);
  opts.learning_rate = s.Real("lr", opts.learning_rate);
  opts.delta = s.Real("delta", opts.delta);
  opts.tau_s = s.Real("tau", opts.tau_s);
  opts.clips_per_batch = s.Int32("batch-clips", opts.clips_per_batch);
  opts.windows_per_clip = s.Int32("batch-windows", opts.windows_per_clip);
  opts.embedding_dim = s.Int32("dim", opts.embedding_dim);
  opts.seed = s.U64("seed", opts.seed);
  opts.threads = Threads(s);
  std::string mode = s.Str("mode", "clip");
  if (mode == "clip") {
    opts.mode = SCN_MODE_CLIP;
  } else if (mode == "temporal") {
    opts.mode = SCN_MODE_TEMPORAL;
  } else {
    throw std::invalid_argument("mode must be clip or temporal, got '" + mode + "'");
  }
  std::string out = s.Required("out");
  ManifestHandle manifest;
  LoadInputs(s, manifest, nullptr);
  ModelHandle model;
  Check(scn_train(manifest.ptr, &dsp, &opts, out.c_str(), &model.ptr));
  std::cout << out << "/model.scne\n";
}

void RunEmbed(const Settings& s) {
  scn_dsp_options dsp;
  scn_dsp_options_default(&dsp);
  std::string out = s.Required("out");
  int threads = Threads(s);
  ManifestHandle manifest;
  ModelHandle model;
  LoadInputs(s, manifest, &model);
  size_t n = 0;
  Check(scn_embed(manifest.ptr, model.ptr, &dsp, threads, out.c_str(), &n));
  std::cout << out << "/scenario_vectors.scnm\n";
}

void RunAssemble(const Settings& s) {
  scn_dsp_options dsp;
  scn_dsp_options_default(&dsp);
  std::string out = s.Required("out");
  std::string aux = s.Str("aux", "");
  int threads = Threads(s);
  ManifestHandle manifest;
  ModelHandle model;
  LoadInputs(s, manifest, &model);
  size_t n = 0;
  Check(scn_assemble(manifest.ptr, model.ptr, &dsp, aux.empty() ? nullptr : aux.c_str(), threads,
                     out.c_str(), &n));
  std::cout << n << '\n';
}

void RunEval(const Settings& s) {
  scn_dsp_options dsp;
  scn_dsp_options_default(&dsp);
  scn_eval_options opts;
  scn_eval_options_default(&opts);
  opts.projection = Method(s);
  opts.perplexity = s.Real("perplexity", opts.perplexity);
  opts.seed = s.U64("seed", opts.seed);
  opts.threads = Threads(s);
  std::string out = s.Required("out");
  ManifestHandle manifest;
  ModelHandle model;
  LoadInputs(s, manifest, &model);
  scn_eval_report report;
  Check(scn_evaluate(manifest.ptr, model.ptr, &dsp, &opts, out.c_str(), &report));
  std::printf(
      "{\"auc\": %.9g, \"purity\": %.9g, \"probe_accuracy_base\": %.9g, "
      "\"probe_accuracy_augmented\": %.9g, \"projection_path\": \"%s\"}\n",
      report.auc, report.purity, report.probe_accuracy_base, report.probe_accuracy_augmented,
      report.projection_path);
}

void RunProject(const Settings& s) {
  scn_dsp_options dsp;
  scn_dsp_options_default(&dsp);
  scn_projection method = Method(s);
  double perplexity = s.Real("perplexity", 30.0);
  std::uint64_t seed = s.U64("seed", 7);
  int threads = Threads(s);
  std::string out = s.Required("out");
  ManifestHandle manifest;
  ModelHandle model;
  LoadInputs(s, manifest, &model);
  Check(scn_project(manifest.ptr, model.ptr, &dsp, method, perplexity, seed, threads,
                    out.c_str()));
  std::cout << out << "/projection.csv\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scenario-aware speech feature pipeline"};
  app.require_subcommand(1, 1);
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "suppress progress lines");

  struct Def {
    const char* name;
    const char* help;
    std::vector<std::string> keys;
    void (*run)(const Settings&);
  };
  const std::vector<Def> defs = {
      {"gen-corpus", "synthesize the scenario corpus (WAVs + manifest.tsv)",
       {"out", "seed", "scenarios", "utts", "duration", "threads"}, RunGenCorpus},
      {"extract", "dump log-mel and MFCC matrices per utterance",
       {"manifest", "out", "threads"}, RunExtract},
      {"train", "train the triplet embedding network",
       {"manifest", "out", "seed", "steps", "lr", "delta", "tau", "mode", "batch-clips",
        "batch-windows", "dim", "threads"},
       RunTrain},
      {"embed", "write per-utterance scenario vectors",
       {"manifest", "ckpt", "out", "threads"}, RunEmbed},
      {"assemble", "write per-frame [MFCC ; aux ; scenario vector] features",
       {"manifest", "ckpt", "aux", "out", "threads"}, RunAssemble},
      {"eval", "retrieval AUC, clustering purity, linear probes and a 2D projection",
       {"manifest", "ckpt", "out", "seed", "method", "perplexity", "threads"}, RunEval},
      {"project", "2D projection of scenario vectors",
       {"manifest", "ckpt", "out", "seed", "method", "perplexity", "threads"}, RunProject},
  };

  std::vector<Subcommand> subs(defs.size());
  for (std::size_t i = 0; i < defs.size(); ++i) {
    auto& sub = subs[i];
    sub.app = app.add_subcommand(defs[i].name, defs[i].help);
    sub.keys = defs[i].keys;
    sub.app->add_option("--config", sub.config_path, "key=value settings file");
    for (const auto& key : sub.keys) {
      const FlagSpec& f = Flag(key);
      std::string help = f.help;
      if (f.fallback != nullptr) help += std::string(" (default ") + f.fallback + ")";
      sub.app->add_option("--" + key, sub.flags[key], help);
    }
    auto run = defs[i].run;
    sub.run = [run](const Settings& s) { run(s); };
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitInput;
  }

  scn_set_verbose(quiet ? 0 : 1);
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (!subs[i].app->parsed()) continue;
    try {
      Settings settings = Resolve(subs[i]);
      LogResolved(defs[i].name, settings, subs[i].keys);
      subs[i].run(settings);
      return kExitOk;
    } catch (const StageError& e) {
      std::cerr << "error (" << scn_status_name(e.status) << "): " << e.message << '\n';
      return ExitCodeFor(e.status);
    } catch (const std::invalid_argument& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitInput;
    } catch (const std::exception& e) {
      std::cerr << "internal error: " << e.what() << '\n';
      return kExitInternal;
    }
  }
  return kExitInput;
}
