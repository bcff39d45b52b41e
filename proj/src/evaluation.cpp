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

#include "evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "rng.hpp"

namespace scenaware {

double AucFromScores(std::span<const double> positives, std::span<const double> negatives) {
  Require(!positives.empty() && !negatives.empty(), "AUC needs both positive and negative scores");
  struct Item {
    double score;
    bool positive;
  };
  std::vector<Item> items;
  items.reserve(positives.size() + negatives.size());
  for (double s : positives) items.push_back({s, true});
  for (double s : negatives) items.push_back({s, false});
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.score < b.score; });

  // Midranks (1-based) so that tied pairs contribute 1/2.
  double positive_rank_sum = 0.0;
  for (std::size_t i = 0; i < items.size();) {
    std::size_t j = i;
    while (j < items.size() && items[j].score == items[i].score) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t m = i; m < j; ++m)
      if (items[m].positive) positive_rank_sum += midrank;
    i = j;
  }
  const double np = static_cast<double>(positives.size());
  const double nn = static_cast<double>(negatives.size());
  return (positive_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

double SameDiffAuc(std::span<const Matrix> clips, std::size_t num_pairs, std::uint64_t seed) {
  Require(num_pairs >= 1, "num_pairs must be >= 1");
  std::vector<std::size_t> nonempty, multi;
  for (std::size_t c = 0; c < clips.size(); ++c) {
    if (clips[c].rows() >= 1) nonempty.push_back(c);
    if (clips[c].rows() >= 2) multi.push_back(c);
  }
  Require(nonempty.size() >= 2, "same/different-clip AUC needs at least 2 clips");
  Require(!multi.empty(), "same/different-clip AUC needs a clip with at least 2 windows");

  const std::size_t n_same = std::max<std::size_t>(1, num_pairs / 2);
  const std::size_t n_diff = std::max<std::size_t>(1, num_pairs - num_pairs / 2);
  Rng rng(seed);
  auto score = [](const Matrix& a, Eigen::Index i, const Matrix& b, Eigen::Index j) {
    return -(a.row(i) - b.row(j)).squaredNorm();
  };

  std::vector<double> same, diff;
  same.reserve(n_same);
  diff.reserve(n_diff);
  for (std::size_t p = 0; p < n_same; ++p) {
    const Matrix& m = clips[multi[rng.Index(multi.size())]];
    const auto n = static_cast<std::uint64_t>(m.rows());
    const auto i = rng.Index(n);
    auto j = rng.Index(n - 1);
    if (j >= i) ++j;
    same.push_back(score(m, static_cast<Eigen::Index>(i), m, static_cast<Eigen::Index>(j)));
  }
  for (std::size_t p = 0; p < n_diff; ++p) {
    const auto a = rng.Index(nonempty.size());
    auto b = rng.Index(nonempty.size() - 1);
    if (b >= a) ++b;
    const Matrix& ma = clips[nonempty[a]];
    const Matrix& mb = clips[nonempty[b]];
    const auto i = static_cast<Eigen::Index>(rng.Index(static_cast<std::uint64_t>(ma.rows())));
    const auto j = static_cast<Eigen::Index>(rng.Index(static_cast<std::uint64_t>(mb.rows())));
    diff.push_back(score(ma, i, mb, j));
  }
  return AucFromScores(same, diff);
}

// ---------------------------------------------------------------------------

namespace {

struct Assignment {
  std::vector<int> cluster;
  std::vector<double> dist;  // squared distance to the assigned centroid
  double inertia = 0.0;
};

Assignment Assign(const Matrix& x, const Matrix& centroids) {
  Assignment a;
  a.cluster.resize(static_cast<std::size_t>(x.rows()));
  a.dist.resize(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
      const double d = (x.row(i) - centroids.row(c)).squaredNorm();
      if (d < best) {
        best = d;
        arg = static_cast<int>(c);
      }
    }
    a.cluster[i] = arg;
    a.dist[i] = best;
    a.inertia += best;
  }
  return a;
}

Matrix KMeansPlusPlus(const Matrix& x, int k, Rng& rng) {
  const auto n = static_cast<std::size_t>(x.rows());
  Matrix c(k, x.cols());
  c.row(0) = x.row(static_cast<Eigen::Index>(rng.Index(n)));
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = (x.row(i) - c.row(0)).squaredNorm();
  for (int m = 1; m < k; ++m) {
    const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    std::size_t pick = 0;
    if (total > 0.0) {
      const double r = rng.Uniform() * total;
      double acc = 0.0;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (r < acc) {
          pick = i;
          break;
        }
      }
    } else {
      pick = rng.Index(n);
    }
    c.row(m) = x.row(static_cast<Eigen::Index>(pick));
    for (std::size_t i = 0; i < n; ++i)
      d2[i] = std::min(d2[i], (x.row(i) - c.row(m)).squaredNorm());
  }
  return c;
}

KMeansResult Lloyd(const Matrix& x, Matrix centroids, const KMeansOptions& opts) {
  KMeansResult r;
  Assignment a;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    a = Assign(x, centroids);
    if (!r.inertia_history.empty()) {
      const double prev = r.inertia_history.back();
      if (a.inertia > prev * (1.0 + 1e-12) + 1e-300)
        Fail(ErrorKind::kInternal, "k-means inertia increased between iterations");
    }
    r.inertia_history.push_back(a.inertia);
    r.iterations = it;
    if (it > 1) {
      const double prev = r.inertia_history[r.inertia_history.size() - 2];
      if (prev - a.inertia <= opts.tolerance * prev) break;
    }
    if (it == opts.max_iterations) break;

    Matrix next = Matrix::Zero(centroids.rows(), centroids.cols());
    std::vector<std::size_t> counts(static_cast<std::size_t>(centroids.rows()), 0);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      next.row(a.cluster[i]) += x.row(i);
      ++counts[a.cluster[i]];
    }
    std::vector<double> dist = a.dist;
    for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
      if (counts[c] > 0) {
        next.row(c) /= static_cast<double>(counts[c]);
      } else {
        // Empty cluster: move it onto the worst-served point.
        const auto far = static_cast<Eigen::Index>(
            std::max_element(dist.begin(), dist.end()) - dist.begin());
        next.row(c) = x.row(far);
        dist[far] = 0.0;
      }
    }
    centroids = std::move(next);
  }
  r.assignment = std::move(a.cluster);
  r.centroids = std::move(centroids);
  r.inertia = a.inertia;
  return r;
}

}  // namespace

KMeansResult KMeans(const Matrix& points, const KMeansOptions& opts) {
  Require(opts.k >= 1, "k must be >= 1");
  Require(points.rows() >= opts.k, "k (" + std::to_string(opts.k) + ") exceeds the number of points (" +
                                       std::to_string(points.rows()) + ")");
  Require(opts.restarts >= 1 && opts.max_iterations >= 1, "restarts and iterations must be >= 1");
  Rng rng(opts.seed);
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < opts.restarts; ++r) {
    KMeansResult run = Lloyd(points, KMeansPlusPlus(points, opts.k, rng), opts);
    if (run.inertia < best.inertia) best = std::move(run);
  }
  return best;
}

double Purity(std::span<const int> assignment, std::span<const int> labels) {
  Require(assignment.size() == labels.size(), "one label per point required");
  Require(!assignment.empty(), "purity of an empty set is undefined");
  std::map<int, std::map<int, std::size_t>> counts;
  for (std::size_t i = 0; i < assignment.size(); ++i) ++counts[assignment[i]][labels[i]];
  std::size_t majority = 0;
  for (const auto& [cluster, by_label] : counts) {
    std::size_t m = 0;
    for (const auto& [label, n] : by_label) m = std::max(m, n);
    majority += m;
  }
  return static_cast<double>(majority) / static_cast<double>(assignment.size());
}

double KMeansPurity(const Matrix& points, std::span<const int> labels, const KMeansOptions& opts) {
  Require(static_cast<std::size_t>(points.rows()) == labels.size(), "one label per point required");
  const KMeansResult r = KMeans(points, opts);
  return Purity(r.assignment, labels);
}

// ---------------------------------------------------------------------------

double ProbeLoss(const SoftmaxModel& model, const Matrix& x, std::span<const int> y,
                 double l2_weight, SoftmaxModel* grad) {
  const auto n = x.rows();
  Require(n >= 1 && static_cast<std::size_t>(n) == y.size(), "one label per row required");
  Matrix logits = x * model.weights;
  logits.rowwise() += model.biases.transpose();
  Matrix probs(logits.rows(), logits.cols());
  double loss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double mx = logits.row(i).maxCoeff();
    const RowVector ex = (logits.row(i).array() - mx).exp().matrix();
    const double z = ex.sum();
    probs.row(i) = ex / z;
    loss -= logits(i, y[i]) - mx - std::log(z);
  }
  loss /= static_cast<double>(n);
  loss += 0.5 * l2_weight * model.weights.squaredNorm();
  if (grad) {
    Matrix delta = probs;
    for (Eigen::Index i = 0; i < n; ++i) delta(i, y[i]) -= 1.0;
    delta /= static_cast<double>(n);
    grad->weights = x.transpose() * delta + l2_weight * model.weights;
    grad->biases = delta.colwise().sum().transpose();
  }
  return loss;
}

SoftmaxModel TrainSoftmax(const Matrix& x, std::span<const int> y, int num_classes,
                          const ProbeOptions& opts) {
  Require(num_classes >= 2, "probe needs at least 2 classes");
  for (int label : y) Require(label >= 0 && label < num_classes, "label out of range");
  SoftmaxModel m{Matrix::Zero(x.cols(), num_classes), Vector::Zero(num_classes)};
  SoftmaxModel g;
  for (int it = 0; it < opts.iterations; ++it) {
    ProbeLoss(m, x, y, opts.l2_weight, &g);
    m.weights -= opts.learning_rate * g.weights;
    m.biases -= opts.learning_rate * g.biases;
  }
  return m;
}

ProbeResult LinearProbe(const Matrix& train_x, std::span<const int> train_y,
                        const Matrix& test_x, std::span<const int> test_y,
                        const ProbeOptions& opts) {
  Require(train_x.cols() == test_x.cols(), "train and test feature dimensions differ");
  Require(static_cast<std::size_t>(train_x.rows()) == train_y.size() &&
              static_cast<std::size_t>(test_x.rows()) == test_y.size(),
          "one label per row required");
  std::map<int, int> classes;
  for (int label : train_y) classes.emplace(label, 0);
  Require(classes.size() >= 2, "probe needs at least 2 classes in the training labels");
  int next = 0;
  for (auto& [label, idx] : classes) idx = next++;

  const RowVector mean = train_x.colwise().mean();
  RowVector sd = ((train_x.rowwise() - mean).array().square().colwise().sum() /
                  static_cast<double>(train_x.rows()))
                     .sqrt()
                     .matrix();
  for (auto& s : sd)
    if (!(s > 1e-12)) s = 1.0;
  auto standardize = [&](const Matrix& x) {
    Matrix z = x.rowwise() - mean;
    z.array().rowwise() /= sd.array();
    return z;
  };

  std::vector<int> y;
  for (int label : train_y) y.push_back(classes.at(label));
  const SoftmaxModel model =
      TrainSoftmax(standardize(train_x), y, static_cast<int>(classes.size()), opts);

  const Matrix z = standardize(test_x);
  ProbeResult r;
  std::size_t correct = 0;
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const auto it = classes.find(test_y[i]);
    if (it == classes.end()) {
      ++r.excluded;
      continue;
    }
    RowVector logits = z.row(i) * model.weights + model.biases.transpose();
    Eigen::Index arg;
    logits.maxCoeff(&arg);
    correct += static_cast<int>(arg) == it->second;
    ++r.evaluated;
  }
  if (r.excluded > 0)
    LogWarning(std::to_string(r.excluded) +
               " probe test items excluded: their class is absent from the training split");
  r.accuracy = r.evaluated ? static_cast<double>(correct) / r.evaluated : 0.0;
  return r;
}

// ---------------------------------------------------------------------------

PcaResult ProjectPca(const Matrix& vectors) {
  Require(vectors.rows() >= 3, "projection needs at least 3 vectors");
  const Matrix centered = vectors.rowwise() - vectors.colwise().mean();
  const Matrix cov = centered.transpose() * centered / static_cast<double>(vectors.rows());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(cov);
  if (solver.info() != Eigen::Success) Fail(ErrorKind::kNumeric, "PCA eigendecomposition failed");

  const Eigen::Index d = cov.rows();
  Matrix basis = Matrix::Zero(d, 2);
  PcaResult r;
  r.eigenvalues = Vector::Zero(2);
  for (Eigen::Index c = 0; c < std::min<Eigen::Index>(2, d); ++c) {
    // Eigen sorts eigenvalues ascending.
    Vector v = solver.eigenvectors().col(d - 1 - c);
    Eigen::Index arg;
    v.cwiseAbs().maxCoeff(&arg);
    if (v[arg] < 0) v = -v;
    basis.col(c) = v;
    r.eigenvalues[c] = std::max(0.0, solver.eigenvalues()[d - 1 - c]);
  }
  r.coords = centered * basis;
  return r;
}

Matrix ConditionalAffinities(const Matrix& d2, double perplexity) {
  const Eigen::Index n = d2.rows();
  const double target = std::log(perplexity);
  Matrix p = Matrix::Zero(n, n);
  std::vector<double> row(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    double beta = 1.0, lo = 0.0, hi = std::numeric_limits<double>::infinity();
    double min_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != i) min_d = std::min(min_d, d2(i, j));
    for (int it = 0; it < 200; ++it) {
      double sum = 0.0, weighted = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) {
          row[j] = 0.0;
          continue;
        }
        const double shifted = d2(i, j) - min_d;
        row[j] = std::exp(-beta * shifted);
        sum += row[j];
        weighted += shifted * row[j];
      }
      // Entropy of the normalized row in nats.
      const double entropy = std::log(sum) + beta * weighted / sum;
      for (Eigen::Index j = 0; j < n; ++j) p(i, j) = row[j] / sum;
      const double diff = entropy - target;
      if (std::abs(diff) < 1e-5) break;
      if (diff > 0) {
        lo = beta;
        beta = std::isinf(hi) ? beta * 2.0 : 0.5 * (beta + hi);
      } else {
        hi = beta;
        beta = 0.5 * (beta + lo);
      }
    }
  }
  return p;
}

TsneResult ProjectTsne(const Matrix& vectors, const TsneOptions& opts) {
  const auto n = vectors.rows();
  Require(n >= 3, "projection needs at least 3 vectors");
  if (static_cast<std::size_t>(n) > kTsneMaxPoints)
    Fail(ErrorKind::kInvalidArgument, "t-SNE is exact O(N^2) and capped at " +
                                          std::to_string(kTsneMaxPoints) +
                                          " points; subsample the input");
  Require(opts.perplexity > 0.0 && opts.perplexity < (n - 1) / 3.0,
          "perplexity must be positive and below (N-1)/3");
  Require(opts.iterations >= 1, "t-SNE needs at least one iteration");

  Matrix d2(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) d2(i, j) = (vectors.row(i) - vectors.row(j)).squaredNorm();
  Matrix p = ConditionalAffinities(d2, opts.perplexity);
  p = (p + p.transpose()) / (2.0 * static_cast<double>(n));
  p = p.cwiseMax(1e-12);
  p.diagonal().setZero();

  Rng rng(opts.seed);
  Matrix y(n, 2);
  for (Eigen::Index i = 0; i < y.size(); ++i) y.data()[i] = 1e-4 * rng.Normal();
  Matrix update = Matrix::Zero(n, 2);
  Matrix gains = Matrix::Ones(n, 2);
  Matrix num(n, n);

  TsneResult r;
  auto compute_q = [&]() {
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      num(i, i) = 0.0;
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double v = 1.0 / (1.0 + (y.row(i) - y.row(j)).squaredNorm());
        num(i, j) = num(j, i) = v;
        total += 2.0 * v;
      }
    }
    return total;
  };
  auto kl_of = [&](double total) {
    double kl = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (i != j) kl += p(i, j) * std::log(p(i, j) / std::max(num(i, j) / total, 1e-300));
    return kl;
  };

  for (int it = 0; it < opts.iterations; ++it) {
    const double exaggeration = it < opts.exaggeration_iterations ? opts.early_exaggeration : 1.0;
    const double momentum = it < opts.momentum_switch ? 0.5 : 0.8;
    const double total = compute_q();
    r.kl.push_back(kl_of(total));

    Matrix grad = Matrix::Zero(n, 2);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i == j) continue;
        const double mult = (exaggeration * p(i, j) - num(i, j) / total) * num(i, j);
        grad.row(i) += 4.0 * mult * (y.row(i) - y.row(j));
      }
    for (Eigen::Index i = 0; i < grad.size(); ++i) {
      double& g = gains.data()[i];
      const bool same_sign = (grad.data()[i] > 0) == (update.data()[i] > 0);
      g = same_sign ? g * 0.8 : g + 0.2;
      g = std::max(g, 0.01);
      update.data()[i] = momentum * update.data()[i] - opts.learning_rate * g * grad.data()[i];
    }
    y += update;
    y.rowwise() -= y.colwise().mean();
  }
  r.kl.push_back(kl_of(compute_q()));
  r.coords = std::move(y);
  return r;
}

}  // namespace scenaware
