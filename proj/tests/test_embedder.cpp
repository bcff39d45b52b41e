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
#include <random>
#include <vector>

#include "doctest.h"
#include "embedder.hpp"
#include "io.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace scenaware;

namespace {

Matrix RandomWindows(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> g;
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(gen);
  return m;
}

Vector Unit(std::mt19937_64& gen, int d) {
  std::normal_distribution<double> g;
  Vector v(d);
  for (auto& x : v) x = g(gen);
  return v.normalized();
}

Vector V2(double x, double y) {
  Vector v(2);
  v << x, y;
  return v;
}

}  // namespace

TEST_CASE("init shapes, zero biases, Glorot bound and determinism") {
  const std::vector<int> hidden{256, 128};
  const auto m = InitModel(40, 96, hidden, 64, 7);
  REQUIRE(m.layers.size() == 3);
  CHECK(m.input_dim() == 3840);
  CHECK(m.layers[0].weights.rows() == 3840);
  CHECK(m.layers[0].weights.cols() == 256);
  CHECK(m.layers[1].weights.rows() == 256);
  CHECK(m.layers[1].weights.cols() == 128);
  CHECK(m.layers[2].weights.rows() == 128);
  CHECK(m.layers[2].weights.cols() == 64);
  CHECK(m.output_dim() == 64);
  for (const auto& l : m.layers) {
    CHECK(l.biases.cwiseAbs().maxCoeff() == 0.0);
    const double limit = std::sqrt(6.0 / static_cast<double>(l.weights.rows() + l.weights.cols()));
    CHECK(l.weights.cwiseAbs().maxCoeff() <= limit);
    CHECK(l.weights.cwiseAbs().maxCoeff() > 0.9 * limit);
  }
  const auto again = InitModel(40, 96, hidden, 64, 7);
  CHECK(EncodeCheckpoint(m) == EncodeCheckpoint(again));
  CHECK(EncodeCheckpoint(m) != EncodeCheckpoint(InitModel(40, 96, hidden, 64, 8)));
  CHECK(m.parameter_count() == 3840u * 256 + 256 + 256 * 128 + 128 + 128 * 64 + 64);

  CHECK_THROWS_AS(InitModel(40, 96, std::vector<int>{0}, 64, 1), Error);
  CHECK_THROWS_AS(InitModel(40, 96, hidden, 1, 1), Error);
  CHECK_THROWS_AS(InitModel(0, 96, hidden, 64, 1), Error);
}

TEST_CASE("forward output has unit norm and is pure") {
  const std::vector<int> hidden{32, 16};
  auto m = InitModel(4, 6, hidden, 8, 3);
  const Matrix w = RandomWindows(50, 24, 4);
  SetInputNormalization(m, w);
  const Matrix e = ForwardBatch(m, w);
  for (Eigen::Index i = 0; i < e.rows(); ++i) {
    CHECK(std::abs(e.row(i).norm() - 1.0) <= 1e-6);
    const Vector single = Forward(m, w.row(i));
    CHECK((single - e.row(i).transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
  const Vector a = Forward(m, w.row(0));
  const Vector b = Forward(m, w.row(0));
  CHECK(std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0);

  RowVector bad = RowVector::Zero(24);
  bad[3] = std::nan("");
  CHECK_THROWS_AS(Forward(m, bad), Error);
  CHECK_THROWS_AS(Forward(m, RowVector::Zero(23)), Error);
}

TEST_CASE("zero pre-normalization output maps to e1") {
  auto m = InitModel(2, 2, std::vector<int>{}, 3, 1);
  m.layers[0].weights.setZero();
  const Vector e = Forward(m, RowVector::Ones(4));
  CHECK(e[0] == 1.0);
  CHECK(e[1] == 0.0);
  CHECK(e[2] == 0.0);
}

TEST_CASE("triplet loss worked examples") {
  const Vector a = V2(1, 0), p = V2(0, 1);
  CHECK(TripletLoss(a, p, V2(-1, 0), 0.5) == 0.0);
  CHECK(TripletLoss(a, p, V2(0, -1), 0.5) == 0.5);
  CHECK(TripletLoss(a, a, a, 0.5) == 0.5);
  CHECK(TripletLoss(a, a, V2(-1, 0), 0.5) == 0.0);
  CHECK(TripletLoss(a, a, p, 2.0) == 0.0);  // |a-n|^2 = 2 >= delta
  CHECK_THROWS_AS(TripletLoss(a, p, a, -0.1), Error);
}

TEST_CASE("loss is non-negative, zero exactly when the inequality holds, bounded by 4 + delta") {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int i = 0; i < 20000; ++i) {
    const int d = 2 + static_cast<int>(gen() % 7);
    const Vector a = Unit(gen, d), p = Unit(gen, d), n = Unit(gen, d);
    const double delta = u(gen);
    const double loss = TripletLoss(a, p, n, delta);
    const double dap = (a - p).squaredNorm(), dan = (a - n).squaredNorm();
    CHECK(loss >= 0.0);
    CHECK((loss == 0.0) == (dap + delta <= dan));
    CHECK(dap <= 4.0 + 1e-12);
    CHECK(loss <= 4.0 + delta + 1e-12);
  }
}

TEST_CASE("single active triplet on a single linear layer matches finite differences") {
  auto m = InitModel(3, 1, std::vector<int>{}, 2, 11);
  const Matrix w = RandomWindows(3, 3, 12);
  const std::vector<IndexTriplet> t{{0, 1, 2}};
  const auto report = EvaluateLoss(m, w, t, 4.0);
  REQUIRE(report.per_triplet[0] > 0.0);
  int checked = 0;
  CHECK(scntest::GradientCheck(m, w, t, 4.0, 200, 1, &checked) <= 1e-4);
  CHECK(checked == 200);
}

TEST_CASE("random small models match finite differences") {
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 12; ++trial) {
    std::vector<int> hidden;
    const int layers = static_cast<int>(gen() % 3);
    for (int l = 0; l < layers; ++l) hidden.push_back(2 + static_cast<int>(gen() % 31));
    const int f = 2 + static_cast<int>(gen() % 4), t = 1 + static_cast<int>(gen() % 4);
    auto m = InitModel(f, t, hidden, 2 + static_cast<int>(gen() % 6), gen());
    const Matrix w = RandomWindows(8, f * t, gen());
    SetInputNormalization(m, w);
    std::vector<IndexTriplet> triplets;
    for (int k = 0; k < 6; ++k) triplets.push_back({gen() % 8, gen() % 8, gen() % 8});
    CHECK(scntest::GradientCheck(m, w, triplets, 1.0, 100, gen()) <= 1e-4);
  }
}

TEST_CASE("satisfied triplets give exactly zero gradient") {
  auto m = InitModel(2, 1, std::vector<int>{}, 2, 5);
  m.layers[0].weights = Matrix::Identity(2, 2);
  Matrix w(3, 2);
  w << 1, 0, 1, 0.01, -1, 0;
  const std::vector<IndexTriplet> t{{0, 1, 2}, {1, 0, 2}};
  Gradients g = Gradients::ZerosLike(m);
  const auto r = Backward(m, w, t, 0.5, g);
  CHECK(r.total_loss == 0.0);
  CHECK(r.active_fraction == 0.0);
  CHECK(g.MaxAbs() == 0.0);
}

TEST_CASE("doubling delta leaves gradients unchanged while the hinge stays active") {
  const std::vector<int> hidden{6};
  auto m = InitModel(3, 2, hidden, 3, 9);
  const Matrix w = RandomWindows(3, 6, 10);
  const std::vector<IndexTriplet> t{{0, 1, 2}};
  Gradients g1 = Gradients::ZerosLike(m), g2 = Gradients::ZerosLike(m);
  const auto r1 = Backward(m, w, t, 4.5, g1);
  const auto r2 = Backward(m, w, t, 9.0, g2);
  REQUIRE(r1.active_fraction == 1.0);
  CHECK(r2.total_loss == doctest::Approx(r1.total_loss + 4.5));
  for (std::size_t l = 0; l < g1.weights.size(); ++l) {
    CHECK((g1.weights[l] - g2.weights[l]).cwiseAbs().maxCoeff() == 0.0);
    CHECK((g1.biases[l] - g2.biases[l]).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("loss report bookkeeping") {
  const std::vector<int> hidden{8};
  auto m = InitModel(2, 2, hidden, 4, 2);
  const Matrix w = RandomWindows(6, 4, 3);
  std::vector<IndexTriplet> t{{0, 1, 2}, {3, 4, 5}, {0, 0, 1}, {2, 3, 2}};
  const auto r = EvaluateLoss(m, w, t, 0.5);
  double sum = 0;
  int active = 0;
  for (double v : r.per_triplet) {
    CHECK(v >= 0.0);
    sum += v;
    active += v > 0;
  }
  CHECK(r.total_loss == doctest::Approx(sum));
  CHECK(r.active_fraction == doctest::Approx(active / 4.0));
  t.push_back({0, 9, 1});
  CHECK_THROWS_AS(EvaluateLoss(m, w, t, 0.5), Error);
  Gradients g = Gradients::ZerosLike(m);
  CHECK_THROWS_AS(Backward(m, w, t, 0.5, g), Error);
}

TEST_CASE("checkpoint round trip is bitwise and corrupt input is rejected") {
  scntest::TempDir dir;
  const std::vector<int> hidden{5, 4};
  auto m = InitModel(3, 2, hidden, 3, 4);
  const Matrix w = RandomWindows(10, 6, 5);
  SetInputNormalization(m, w);
  SaveCheckpoint(dir / "m.scne", m);
  const auto loaded = LoadCheckpoint(dir / "m.scne");
  const Matrix e1 = ForwardBatch(m, w), e2 = ForwardBatch(loaded, w);
  CHECK(std::memcmp(e1.data(), e2.data(), sizeof(double) * e1.size()) == 0);
  CHECK(EncodeCheckpoint(loaded) == EncodeCheckpoint(m));

  const auto bytes = EncodeCheckpoint(m);
  CHECK(std::memcmp(bytes.data(), "SCNE", 4) == 0);
  auto expect_format = [](std::vector<std::uint8_t> b) {
    try {
      DecodeCheckpoint(b);
      FAIL("expected rejection");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kFormat);
    }
  };
  auto bad = bytes;
  bad[1] = 'X';
  expect_format(bad);
  bad = bytes;
  bad[4] = 2;
  expect_format(bad);
  bad = bytes;
  bad.resize(bytes.size() - 1);
  expect_format(bad);
  bad = bytes;
  bad.push_back(0);
  expect_format(bad);
  bad = bytes;
  const double nan = std::nan("");
  std::memcpy(bad.data() + 20, &nan, 8);  // first weight
  expect_format(bad);
  expect_format({});
}

TEST_CASE("input normalization uses per-feature statistics") {
  auto m = InitModel(2, 1, std::vector<int>{}, 2, 1);
  Matrix w(4, 2);
  w << 1, 5, 3, 5, 5, 5, 7, 5;
  SetInputNormalization(m, w);
  CHECK(m.input_mean[0] == 4.0);
  CHECK(m.input_mean[1] == 5.0);
  CHECK(m.input_std[0] == doctest::Approx(std::sqrt(5.0)));
  CHECK(m.input_std[1] == 1.0);  // constant feature
  CHECK(AllFinite(m));
}
