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

#include "embedder.hpp"

#include <cmath>
#include <cstring>

#include "io.hpp"
#include "rng.hpp"

namespace scenaware {

namespace {

constexpr double kMinStd = 1e-8;

struct ForwardCache {
  std::vector<Matrix> inputs;  // input to each layer (post-activation of previous)
  std::vector<Matrix> preact;  // affine output of each layer
  Matrix embeddings;           // L2-normalized final output
  Vector norms;                // pre-normalization row norms
};

Matrix Standardize(const EmbeddingModel& model, const Matrix& windows) {
  Require(windows.cols() == model.input_dim(),
          "window size " + std::to_string(windows.cols()) + " does not match model input " +
              std::to_string(model.input_dim()));
  if (!windows.allFinite()) Fail(ErrorKind::kNumeric, "non-finite value in input window");
  Matrix x = windows;
  x.rowwise() -= model.input_mean.transpose();
  x.array().rowwise() /= model.input_std.transpose().array();
  return x;
}

ForwardCache RunForward(const EmbeddingModel& model, const Matrix& windows) {
  Require(!model.layers.empty(), "model has no layers");
  ForwardCache c;
  Matrix h = Standardize(model, windows);
  const std::size_t last = model.layers.size() - 1;
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const auto& layer = model.layers[l];
    Matrix z = h * layer.weights;
    z.rowwise() += layer.biases.transpose();
    c.inputs.push_back(std::move(h));
    h = l == last ? z : Matrix(z.cwiseMax(0.0));
    c.preact.push_back(std::move(z));
  }
  c.norms = h.rowwise().norm();
  c.embeddings = h;
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    if (c.norms[i] > 0.0) {
      c.embeddings.row(i) /= c.norms[i];
    } else {
      // Degenerate zero output maps to e1.
      c.embeddings.row(i).setZero();
      c.embeddings(i, 0) = 1.0;
    }
  }
  return c;
}

double HingeArgument(const Matrix& e, const IndexTriplet& t, double delta) {
  return (e.row(t.anchor) - e.row(t.positive)).squaredNorm() -
         (e.row(t.anchor) - e.row(t.negative)).squaredNorm() + delta;
}

void CheckTriplets(std::span<const IndexTriplet> triplets, Eigen::Index rows) {
  const auto n = static_cast<std::size_t>(rows);
  for (const auto& t : triplets)
    if (t.anchor >= n || t.positive >= n || t.negative >= n)
      Fail(ErrorKind::kInvalidArgument, "triplet index out of range for batch of " +
                                            std::to_string(n) + " windows");
}

}  // namespace

std::size_t EmbeddingModel::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += static_cast<std::size_t>(l.weights.size() + l.biases.size());
  return n;
}

Gradients Gradients::ZerosLike(const EmbeddingModel& model) {
  Gradients g;
  for (const auto& l : model.layers) {
    g.weights.push_back(Matrix::Zero(l.weights.rows(), l.weights.cols()));
    g.biases.push_back(Vector::Zero(l.biases.size()));
  }
  return g;
}

double Gradients::MaxAbs() const {
  double m = 0.0;
  for (const auto& w : weights) m = std::max(m, w.cwiseAbs().maxCoeff());
  for (const auto& b : biases) m = std::max(m, b.cwiseAbs().maxCoeff());
  return m;
}

EmbeddingModel InitModel(int num_bands, int window_frames, std::span<const int> hidden_dims,
                         int output_dim, std::uint64_t seed) {
  Require(num_bands >= 1 && window_frames >= 1, "window shape must be positive");
  Require(output_dim >= 2, "embedding dimension must be >= 2");
  for (int h : hidden_dims) Require(h >= 1, "hidden layer sizes must be >= 1");

  EmbeddingModel m;
  m.num_bands = num_bands;
  m.window_frames = window_frames;
  m.input_mean = Vector::Zero(m.input_dim());
  m.input_std = Vector::Ones(m.input_dim());

  std::vector<int> dims{m.input_dim()};
  dims.insert(dims.end(), hidden_dims.begin(), hidden_dims.end());
  dims.push_back(output_dim);

  Rng rng(seed);
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const double limit = std::sqrt(6.0 / (dims[l] + dims[l + 1]));
    DenseLayer layer;
    layer.weights.resize(dims[l], dims[l + 1]);
    for (Eigen::Index i = 0; i < layer.weights.size(); ++i)
      layer.weights.data()[i] = rng.Uniform(-limit, limit);
    layer.biases = Vector::Zero(dims[l + 1]);
    m.layers.push_back(std::move(layer));
  }
  return m;
}

void SetInputNormalization(EmbeddingModel& model, const Matrix& windows) {
  Require(windows.rows() >= 1, "normalization needs at least one window");
  Require(windows.cols() == model.input_dim(), "window size does not match model input");
  const double n = static_cast<double>(windows.rows());
  model.input_mean = windows.colwise().sum().transpose() / n;
  Vector var = Vector::Zero(model.input_dim());
  for (Eigen::Index i = 0; i < windows.rows(); ++i)
    var += (windows.row(i).transpose() - model.input_mean).array().square().matrix();
  var /= n;
  model.input_std = var.cwiseSqrt();
  for (auto& s : model.input_std)
    if (!(s >= kMinStd)) s = 1.0;
}

Matrix ForwardBatch(const EmbeddingModel& model, const Matrix& windows) {
  return RunForward(model, windows).embeddings;
}

Vector Forward(const EmbeddingModel& model, const Eigen::Ref<const RowVector>& window) {
  Matrix one = window;
  return RunForward(model, one).embeddings.row(0).transpose();
}

double TripletLoss(const Vector& a, const Vector& p, const Vector& n, double delta) {
  Require(delta >= 0.0, "margin delta must be non-negative");
  Require(a.size() == p.size() && a.size() == n.size(), "embedding dimensions differ");
  return std::max(0.0, (a - p).squaredNorm() - (a - n).squaredNorm() + delta);
}

LossReport EvaluateLoss(const EmbeddingModel& model, const Matrix& windows,
                        std::span<const IndexTriplet> triplets, double delta) {
  Require(delta >= 0.0, "margin delta must be non-negative");
  CheckTriplets(triplets, windows.rows());
  const Matrix e = ForwardBatch(model, windows);
  LossReport r;
  std::size_t active = 0;
  for (const auto& t : triplets) {
    const double v = std::max(0.0, HingeArgument(e, t, delta));
    r.per_triplet.push_back(v);
    r.total_loss += v;
    active += v > 0.0;
  }
  r.active_fraction = triplets.empty() ? 0.0 : static_cast<double>(active) / triplets.size();
  return r;
}

LossReport Backward(const EmbeddingModel& model, const Matrix& windows,
                    std::span<const IndexTriplet> triplets, double delta, Gradients& grads) {
  Require(delta >= 0.0, "margin delta must be non-negative");
  CheckTriplets(triplets, windows.rows());
  Require(grads.weights.size() == model.layers.size(), "gradient buffer shape mismatch");

  const ForwardCache c = RunForward(model, windows);
  const Matrix& e = c.embeddings;

  LossReport r;
  Matrix d_emb = Matrix::Zero(e.rows(), e.cols());
  std::size_t active = 0;
  for (const auto& t : triplets) {
    const double arg = HingeArgument(e, t, delta);
    const double v = std::max(0.0, arg);
    r.per_triplet.push_back(v);
    r.total_loss += v;
    if (arg <= 0.0) continue;
    ++active;
    // d/da = 2(n - p), d/dp = 2(p - a), d/dn = 2(a - n)
    d_emb.row(t.anchor) += 2.0 * (e.row(t.negative) - e.row(t.positive));
    d_emb.row(t.positive) += 2.0 * (e.row(t.positive) - e.row(t.anchor));
    d_emb.row(t.negative) += 2.0 * (e.row(t.anchor) - e.row(t.negative));
  }
  r.active_fraction = triplets.empty() ? 0.0 : static_cast<double>(active) / triplets.size();
  if (active == 0) return r;

  // Through u -> u/|u|: du = (de - e <e, de>) / |u|.
  Matrix dz(e.rows(), e.cols());
  for (Eigen::Index i = 0; i < e.rows(); ++i) {
    if (c.norms[i] > 0.0) {
      const double proj = e.row(i).dot(d_emb.row(i));
      dz.row(i) = (d_emb.row(i) - proj * e.row(i)) / c.norms[i];
    } else {
      dz.row(i).setZero();
    }
  }

  for (std::size_t l = model.layers.size(); l-- > 0;) {
    grads.weights[l].noalias() += c.inputs[l].transpose() * dz;
    grads.biases[l] += dz.colwise().sum().transpose();
    if (l == 0) break;
    Matrix dh = dz * model.layers[l].weights.transpose();
    dz = dh.cwiseProduct((c.preact[l - 1].array() > 0.0).cast<double>().matrix());
  }
  return r;
}

bool AllFinite(const EmbeddingModel& model) {
  for (const auto& l : model.layers)
    if (!l.weights.allFinite() || !l.biases.allFinite()) return false;
  return model.input_mean.allFinite() && model.input_std.allFinite();
}

std::vector<std::uint8_t> EncodeCheckpoint(const EmbeddingModel& model) {
  ByteWriter w;
  w.Bytes("SCNE", 4);
  w.U32(1);
  w.U32(static_cast<std::uint32_t>(model.layers.size()));
  for (const auto& l : model.layers) {
    w.U32(static_cast<std::uint32_t>(l.weights.rows()));
    w.U32(static_cast<std::uint32_t>(l.weights.cols()));
    for (Eigen::Index i = 0; i < l.weights.size(); ++i) w.F64(l.weights.data()[i]);
    for (Eigen::Index i = 0; i < l.biases.size(); ++i) w.F64(l.biases[i]);
  }
  // Normalization block: u32 F, u32 T, then F*T means and F*T stds.
  w.U32(static_cast<std::uint32_t>(model.num_bands));
  w.U32(static_cast<std::uint32_t>(model.window_frames));
  for (double v : model.input_mean) w.F64(v);
  for (double v : model.input_std) w.F64(v);
  return w.buffer();
}

EmbeddingModel DecodeCheckpoint(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes, "checkpoint");
  char magic[4];
  r.Bytes(magic, 4);
  if (std::memcmp(magic, "SCNE", 4) != 0) Fail(ErrorKind::kFormat, "checkpoint: bad magic");
  const auto version = r.U32();
  if (version != 1)
    Fail(ErrorKind::kFormat, "checkpoint: unsupported version " + std::to_string(version));
  const auto count = r.U32();
  if (count == 0) Fail(ErrorKind::kFormat, "checkpoint: no layers");
  EmbeddingModel m;
  for (std::uint32_t l = 0; l < count; ++l) {
    const auto rows = r.U32();
    const auto cols = r.U32();
    if (rows == 0 || cols == 0) Fail(ErrorKind::kFormat, "checkpoint: zero-sized layer");
    if (static_cast<std::uint64_t>(rows) * cols * 8 > r.remaining())
      Fail(ErrorKind::kFormat, "checkpoint: truncated");
    if (!m.layers.empty() && m.layers.back().weights.cols() != rows)
      Fail(ErrorKind::kFormat, "checkpoint: layer shapes do not chain");
    DenseLayer layer;
    layer.weights.resize(rows, cols);
    for (Eigen::Index i = 0; i < layer.weights.size(); ++i) layer.weights.data()[i] = r.F64();
    layer.biases.resize(cols);
    for (auto& b : layer.biases) b = r.F64();
    m.layers.push_back(std::move(layer));
  }
  m.num_bands = static_cast<int>(r.U32());
  m.window_frames = static_cast<int>(r.U32());
  if (static_cast<Eigen::Index>(m.input_dim()) != m.layers.front().weights.rows())
    Fail(ErrorKind::kFormat, "checkpoint: normalization shape does not match first layer");
  m.input_mean.resize(m.input_dim());
  m.input_std.resize(m.input_dim());
  for (auto& v : m.input_mean) v = r.F64();
  for (auto& v : m.input_std) v = r.F64();
  if (r.remaining() != 0) Fail(ErrorKind::kFormat, "checkpoint: trailing bytes");
  if (!AllFinite(m)) Fail(ErrorKind::kFormat, "checkpoint: non-finite parameters");
  return m;
}

void SaveCheckpoint(const std::string& path, const EmbeddingModel& model) {
  WriteFileBytes(path, EncodeCheckpoint(model));
}

EmbeddingModel LoadCheckpoint(const std::string& path) {
  const auto bytes = ReadFileBytes(path);
  try {
    return DecodeCheckpoint(bytes);
  } catch (const Error& e) {
    Fail(e.kind(), path + ": " + e.what());
  }
}

}  // namespace scenaware
