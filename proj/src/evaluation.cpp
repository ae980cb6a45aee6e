/*
 * Copyright 2026 The helmrff Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */

#include "helmrff/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>

#include "helmrff/error.hpp"

namespace helmrff {

std::vector<double> squared_residuals(const VectorField& field, const Dataset& dataset) {
  dataset.validate();
  std::vector<double> out;
  out.reserve(dataset.size());
  for (Eigen::Index i = 0; i < dataset.states.rows(); ++i) {
    const Vector predicted = field(dataset.states.row(i).transpose());
    require_dim(dataset.dim(), static_cast<std::size_t>(predicted.size()), "vector_field_mse prediction");
    out.push_back((predicted - dataset.derivatives.row(i).transpose()).squaredNorm());
  }
  return out;
}

double vector_field_mse(const VectorField& field, const Dataset& dataset) {
  const auto residuals = squared_residuals(field, dataset);
  return std::accumulate(residuals.begin(), residuals.end(), 0.0) / static_cast<double>(residuals.size());
}

Dataset make_test_set(const SystemSpec& system, const Vector& x0, double h, double t_end, std::size_t substeps) {
  if (!(t_end >= h)) throw InvalidArgument("test horizon must be at least one step");
  const auto run = integrate_rk4(system.vector_field(), x0, h, t_end, substeps);
  Dataset out;
  out.states = run.states;
  out.derivatives.resize(run.states.rows(), run.states.cols());
  for (Eigen::Index i = 0; i < run.states.rows(); ++i) {
    out.derivatives.row(i) = system.field(run.states.row(i).transpose()).transpose();
  }
  out.times = run.times;
  out.trajectory.assign(run.times.size(), 0);
  return out;
}

std::vector<double> SearchSpace::log_grid(double lo_exp, double hi_exp, std::size_t points) {
  if (points < 1) throw InvalidArgument("log grid needs at least one point");
  std::vector<double> out;
  out.reserve(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double t = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
    out.push_back(std::pow(10.0, lo_exp + t * (hi_exp - lo_exp)));
  }
  return out;
}

SearchSpace SearchSpace::normalized() const {
  auto clean = [](std::vector<double> v, const char* what) {
    if (v.empty()) throw InvalidArgument(std::string("search space has an empty ") + what + " grid");
    for (double x : v) {
      if (!(x > 0.0) || !std::isfinite(x)) throw InvalidArgument(std::string(what) + " grid values must be positive");
    }
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  };
  if (folds < 2) throw InvalidArgument("cross-validation needs at least 2 folds");
  SearchSpace out;
  out.sigmas = clean(sigmas, "sigma");
  for (double s : out.sigmas) KernelWidth::from_config(s);
  out.lambdas = clean(lambdas, "lambda");
  out.folds = folds;
  return out;
}

std::vector<std::vector<std::size_t>> kfold_partition(std::size_t count, std::size_t folds, std::uint64_t seed) {
  if (folds < 2) throw InvalidArgument("cross-validation needs at least 2 folds");
  if (count < folds) {
    throw InvalidArgument("cross-validation needs N >= folds (N = " + std::to_string(count) +
                          ", folds = " + std::to_string(folds) + ")");
  }
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Engine engine(seed);
  std::shuffle(order.begin(), order.end(), engine);
  std::vector<std::vector<std::size_t>> out(folds);
  std::size_t start = 0;
  for (std::size_t f = 0; f < folds; ++f) {
    const std::size_t len = count / folds + (f < count % folds ? 1 : 0);
    out[f].assign(order.begin() + static_cast<std::ptrdiff_t>(start),
                  order.begin() + static_cast<std::ptrdiff_t>(start + len));
    start += len;
  }
  return out;
}

namespace {

using Index = Eigen::Index;

std::vector<Index> expand_rows(const std::vector<std::size_t>& points, Index n) {
  std::vector<Index> rows;
  rows.reserve(points.size() * static_cast<std::size_t>(n));
  for (auto p : points) {
    for (Index c = 0; c < n; ++c) rows.push_back(static_cast<Index>(p) * n + c);
  }
  return rows;
}

Matrix take(const Matrix& m, const std::vector<Index>& rows, const std::vector<Index>& cols) {
  Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (Index i = 0; i < out.rows(); ++i) {
    for (Index j = 0; j < out.cols(); ++j) out(i, j) = m(rows[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)]);
  }
  return out;
}

Vector take(const Vector& v, const std::vector<Index>& rows) {
  Vector out(static_cast<Index>(rows.size()));
  for (Index i = 0; i < out.size(); ++i) out(i) = v(rows[static_cast<std::size_t>(i)]);
  return out;
}

struct Fold {
  std::vector<Matrix> train_gram;  // per feature block, G[T, T]
  std::vector<Matrix> cross_gram;  // per feature block, G[V, T]
  Vector train_targets;
  Vector val_targets;
  std::size_t train_count = 0;
  std::size_t val_count = 0;
};

std::vector<Fold> build_folds(const std::vector<Matrix>& grams, const Vector& targets, Index n,
                              const std::vector<std::vector<std::size_t>>& partition, std::size_t count) {
  std::vector<Fold> folds;
  for (const auto& validation : partition) {
    std::vector<char> in_val(count, 0);
    for (auto i : validation) in_val[i] = 1;
    std::vector<std::size_t> training;
    for (std::size_t i = 0; i < count; ++i) {
      if (!in_val[i]) training.push_back(i);
    }
    const auto t_rows = expand_rows(training, n);
    const auto v_rows = expand_rows(validation, n);
    Fold f;
    for (const auto& g : grams) {
      f.train_gram.push_back(take(g, t_rows, t_rows));
      f.cross_gram.push_back(take(g, v_rows, t_rows));
    }
    f.train_targets = take(targets, t_rows);
    f.val_targets = take(targets, v_rows);
    f.train_count = training.size();
    f.val_count = validation.size();
    folds.push_back(std::move(f));
  }
  return folds;
}

// Mean validation MSE of the sample-space ridge solution for the given block weights.
double score_folds(const std::vector<Fold>& folds, const std::vector<double>& lambdas) {
  double total = 0.0;
  for (const auto& f : folds) {
    Matrix system = Matrix::Zero(f.train_gram.front().rows(), f.train_gram.front().cols());
    Matrix cross = Matrix::Zero(f.cross_gram.front().rows(), f.cross_gram.front().cols());
    for (std::size_t b = 0; b < lambdas.size(); ++b) {
      system += f.train_gram[b] / lambdas[b];
      cross += f.cross_gram[b] / lambdas[b];
    }
    system.diagonal().array() += static_cast<double>(f.train_count);
    const Vector dual = solve_spd(system, f.train_targets);
    total += (cross * dual - f.val_targets).squaredNorm() / static_cast<double>(f.val_count);
  }
  return total / static_cast<double>(folds.size());
}

struct Candidate {
  double score;
  double sigma;
  double lambda1;
  double lambda2;
};

bool better(const Candidate& a, const Candidate& b) {
  if (a.score != b.score) return a.score < b.score;
  if (a.lambda1 != b.lambda1) return a.lambda1 > b.lambda1;
  if (a.lambda2 != b.lambda2) return a.lambda2 > b.lambda2;
  return a.sigma > b.sigma;
}

struct BlockSpec {
  FeatureKind kind;
  std::uint64_t seed;
};

CvResult grid_search(const Dataset& dataset, const SearchSpace& raw_space, std::size_t features,
                     const std::vector<BlockSpec>& blocks, std::uint64_t shuffle_seed) {
  dataset.validate();
  const SearchSpace space = raw_space.normalized();
  const auto partition = kfold_partition(dataset.size(), space.folds, shuffle_seed);
  const Vector targets = dataset.stacked_targets();
  const auto n = static_cast<Index>(dataset.dim());

  std::optional<Candidate> best;
  std::size_t evaluated = 0;
  for (double sigma : space.sigmas) {
    std::vector<Matrix> grams;
    for (const auto& block : blocks) {
      const auto basis = FeatureBasis::sample(block.kind, features, dataset.dim(), KernelWidth(sigma), block.seed);
      const Matrix design = basis.design(dataset.states);
      grams.push_back(design.transpose() * design);
    }
    const auto folds = build_folds(grams, targets, n, partition, dataset.size());
    for (double l1 : space.lambdas) {
      const auto& second = blocks.size() > 1 ? space.lambdas : std::vector<double>{l1};
      for (double l2 : second) {
        std::vector<double> lambdas{l1};
        if (blocks.size() > 1) lambdas.push_back(l2);
        const Candidate c{score_folds(folds, lambdas), sigma, l1, l2};
        ++evaluated;
        if (!std::isfinite(c.score)) continue;
        if (!best || better(c, *best)) best = c;
      }
    }
  }
  if (!best) throw NumericalError("cross-validation produced no finite score");
  CvResult result;
  result.best.sigma = KernelWidth(best->sigma);
  result.best.lambda1 = best->lambda1;
  result.best.lambda2 = best->lambda2;
  result.best.features = features;
  result.best_score = best->score;
  result.evaluated = evaluated;
  return result;
}

}  // namespace

CvResult cross_validate_helmholtz(const Dataset& dataset, const SearchSpace& space, std::size_t features,
                                  std::uint64_t curl_free_seed, std::uint64_t symplectic_seed,
                                  std::uint64_t shuffle_seed) {
  return grid_search(dataset, space, features,
                     {{FeatureKind::OddCurlFree, curl_free_seed}, {FeatureKind::OddSymplectic, symplectic_seed}},
                     shuffle_seed);
}

CvResult cross_validate_baseline(const Dataset& dataset, const SearchSpace& space, std::size_t features,
                                 std::uint64_t basis_seed, std::uint64_t shuffle_seed) {
  return grid_search(dataset, space, features, {{FeatureKind::GaussianSeparable, basis_seed}}, shuffle_seed);
}

Hyperparameters cross_validate(const Dataset& dataset, const SearchSpace& space, std::uint64_t seed,
                               std::size_t features) {
  const auto seeds = SeedSet::from_master(seed);
  return cross_validate_helmholtz(dataset, space, features, seeds.basis_curl_free, seeds.basis_symplectic,
                                  seeds.cv_shuffle)
      .best;
}

Trajectory rollout_model(const VectorField& field, const Vector& x0, double h, double t_end) {
  return integrate_rk4(field, x0, h, t_end, 1);
}

namespace {

// Lower half counts up from lo, upper half down from hi, so symmetric bounds give
// exactly negated points and an exact zero in the middle.
double grid_coordinate(Index i, Index res, double lo, double hi, double step) {
  if (2 * i == res - 1) return 0.5 * (lo + hi);
  if (2 * i < res - 1) return lo + static_cast<double>(i) * step;
  return hi - static_cast<double>(res - 1 - i) * step;
}

}  // namespace

StreamGrid stream_grid(const VectorField& field, const GridBounds& bounds, std::size_t resolution) {
  if (resolution < 2) throw InvalidArgument("stream grid needs at least 2 points per axis");
  if (!(bounds.q_max > bounds.q_min) || !(bounds.p_max > bounds.p_min)) {
    throw InvalidArgument("stream grid bounds must be increasing");
  }
  const auto res = static_cast<Index>(resolution);
  StreamGrid grid;
  grid.points.resize(res * res, 2);
  grid.values.resize(res * res, 2);
  const double dq = (bounds.q_max - bounds.q_min) / static_cast<double>(res - 1);
  const double dp = (bounds.p_max - bounds.p_min) / static_cast<double>(res - 1);
  Index row = 0;
  for (Index i = 0; i < res; ++i) {
    for (Index j = 0; j < res; ++j, ++row) {
      Vector x(2);
      x(0) = grid_coordinate(i, res, bounds.q_min, bounds.q_max, dq);
      x(1) = grid_coordinate(j, res, bounds.p_min, bounds.p_max, dp);
      grid.points.row(row) = x.transpose();
      grid.values.row(row) = field(x).transpose();
    }
  }
  return grid;
}

EvalReport evaluate_field(const VectorField& field, const Dataset& training, const Dataset& test) {
  EvalReport report;
  report.training_residuals = squared_residuals(field, training);
  report.test_residuals = squared_residuals(field, test);
  auto mean = [](const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  };
  report.training_mse = mean(report.training_residuals);
  report.test_mse = mean(report.test_residuals);
  return report;
}

}  // namespace helmrff
