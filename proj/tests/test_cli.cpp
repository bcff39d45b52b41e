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

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "cli_config.hpp"
#include "doctest.h"
#include "support.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string Slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult Run(const scntest::TempDir& dir, const std::string& args) {
  const std::string out = dir / "stdout.txt", err = dir / "stderr.txt";
  const std::string cmd =
      std::string("'") + SCN_CLI_PATH + "' " + args + " >'" + out + "' 2>'" + err + "'";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = Slurp(out);
  r.err = Slurp(err);
  return r;
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream(path) << text;
}

}  // namespace

TEST_CASE("config parser") {
  using scenaware::cli::ParseConfig;
  const auto m = ParseConfig("# comment\n\n steps = 12 \nlr=0.01\nsteps=13\n");
  CHECK(m.size() == 2);
  CHECK(m.at("steps") == "13");
  CHECK(m.at("lr") == "0.01");
  CHECK(ParseConfig("").empty());
  try {
    ParseConfig("steps=1\nno equals sign\n");
    FAIL("expected rejection");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(ParseConfig("=5\n"), std::invalid_argument);
  CHECK_THROWS_AS(scenaware::cli::LoadConfig("/nonexistent/cfg"), std::invalid_argument);
}

TEST_CASE("usage errors exit with status 1") {
  scntest::TempDir dir;
  auto r = Run(dir, "");
  CHECK(r.code == 1);
  r = Run(dir, "frobnicate");
  CHECK(r.code == 1);
  CHECK(r.err.find("gen-corpus") != std::string::npos);
  r = Run(dir, "train --steps 5");
  CHECK(r.code == 1);
  CHECK(r.err.find("is required") != std::string::npos);
  r = Run(dir, "--help");
  CHECK(r.code == 0);
  CHECK(r.out.find("eval") != std::string::npos);
}

TEST_CASE("end-to-end through the command line") {
  scntest::TempDir dir;
  const std::string corpus = dir / "corpus";
  auto r = Run(dir, "-q gen-corpus --scenarios 2 --utts 3 --duration 2 --out '" + corpus + "'");
  REQUIRE(r.code == 0);
  CHECK(r.out == corpus + "/manifest.tsv\n");
  const std::string manifest = corpus + "/manifest.tsv";
  CHECK(fs::exists(manifest));

  // Flag beats config file; config beats built-in default.
  const std::string cfg = dir / "train.cfg";
  WriteText(cfg, "steps = 9\nbatch_windows = 3\ndim=8\n");
  const std::string model_dir = dir / "model";
  r = Run(dir, "train --config '" + cfg + "' --steps 2 --manifest '" + manifest + "' --out '" +
                   model_dir + "'");
  REQUIRE(r.code == 0);
  CHECK(r.err.find("[scenaware] train config:") != std::string::npos);
  CHECK(r.err.find("steps=2 ") != std::string::npos);
  CHECK(r.err.find("batch-windows=3") != std::string::npos);
  CHECK(r.err.find("lr=0.001") != std::string::npos);
  CHECK(r.out == model_dir + "/model.scne\n");
  const std::string ckpt = model_dir + "/model.scne";
  REQUIRE(fs::exists(ckpt));

  r = Run(dir, "-q embed --manifest '" + manifest + "' --ckpt '" + ckpt + "' --out '" +
                   (dir / "emb") + "'");
  CHECK(r.code == 0);
  CHECK(r.out == (dir / "emb") + "/scenario_vectors.scnm\n");

  r = Run(dir, "-q eval --manifest '" + manifest + "' --ckpt '" + ckpt + "' --out '" +
                   (dir / "eval") + "'");
  CHECK(r.code == 0);
  CHECK(r.out.find("\"auc\"") != std::string::npos);
  CHECK(fs::exists(dir / "eval/projection.csv"));

  // t-SNE perplexity too large for 6 points: input error.
  r = Run(dir, "-q project --method tsne --manifest '" + manifest + "' --ckpt '" + ckpt +
                   "' --out '" + (dir / "proj") + "'");
  CHECK(r.code == 1);
  CHECK(r.out.empty());
}

TEST_CASE("invalid settings fail without output") {
  scntest::TempDir dir;
  const std::string corpus = dir / "corpus";
  REQUIRE(Run(dir, "-q gen-corpus --scenarios 2 --utts 2 --duration 1.5 --out '" + corpus + "'")
              .code == 0);
  const std::string manifest = corpus + "/manifest.tsv";

  auto r = Run(dir, "-q train --steps 0 --manifest '" + manifest + "' --out '" + (dir / "m") + "'");
  CHECK(r.code == 1);
  CHECK(r.out.empty());
  CHECK_FALSE(fs::exists(dir / "m/model.scne"));

  r = Run(dir, "-q train --mode sideways --manifest '" + manifest + "' --out '" + (dir / "m") + "'");
  CHECK(r.code == 1);

  r = Run(dir, "-q train --steps abc --manifest '" + manifest + "' --out '" + (dir / "m") + "'");
  CHECK(r.code == 1);

  const std::string cfg = dir / "bad.cfg";
  WriteText(cfg, "perplexity=5\n");
  r = Run(dir, "-q train --config '" + cfg + "' --manifest '" + manifest + "' --out '" +
                   (dir / "m") + "'");
  CHECK(r.code == 1);
  CHECK(r.err.find("perplexity") != std::string::npos);

  r = Run(dir, "-q extract --manifest '" + (dir / "missing.tsv") + "' --out '" + (dir / "x") + "'");
  CHECK(r.code == 1);
  CHECK(r.err.find("io_error") != std::string::npos);

  r = Run(dir, "-q gen-corpus --scenarios 1 --out '" + (dir / "c2") + "'");
  CHECK(r.code == 1);
}
