// Copyright 2026 The missshap Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "missshap/impute.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "missshap/error.hpp"
#include "missshap/model.hpp"
#include "missshap/rng.hpp"

namespace missshap::impute {

std::string to_string(Method m) {
  switch (m) {
    case Method::kMean: return "mean";
    case Method::kMice: return "mice";
    case Method::kDimv: return "dimv";
    case Method::kMissForest: return "missforest";
    case Method::kSoftImpute: return "softimpute";
  }
  return "?";
}

Method parse_method(const std::string& s) {
  for (auto m : {Method::kMean, Method::kMice, Method::kDimv, Method::kMissForest, Method::kSoftImpute})
    if (to_string(m) == s) return m;
  fail(ErrorKind::kInvalidArgument, "unknown imputation method '" + s + "'");
}

void ImputerSpec::validate() const {
  switch (method) {
    case Method::kMean: break;
    case Method::kMice:
      require(mice.tol > 0 && mice.max_sweeps >= 1 && mice.ridge >= 0, "mice: invalid hyperparameters");
      break;
    case Method::kDimv: require(dimv.ridge >= 0, "dimv: ridge must be non-negative"); break;
    case Method::kMissForest:
      require(missforest.n_trees >= 1 && missforest.max_depth >= 1 && missforest.max_sweeps >= 1,
              "missforest: invalid hyperparameters");
      break;
    case Method::kSoftImpute:
      require(softimpute.tol > 0 && softimpute.max_iters >= 1 && softimpute.max_rank >= 0 &&
                  softimpute.lambda_fraction >= 0,
              "softimpute: invalid hyperparameters");
      break;
  }
}

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Vector observed_means(const MaskedMatrix& train) {
  const auto obs = train.observed_values();
  Vector means(obs.cols());
  for (Eigen::Index j = 0; j < obs.cols(); ++j) {
    double sum = 0.0;
    std::size_t n = 0;
    for (Eigen::Index i = 0; i < obs.rows(); ++i) {
      if (train.mask()(i, j)) {
        sum += obs(i, j);
        ++n;
      }
    }
    if (n == 0)
      fail(ErrorKind::kInvalidArgument,
           "imputer fit: column '" + train.feature_names()[static_cast<std::size_t>(j)] +
               "' has no observed training entries");
    means[j] = sum / static_cast<double>(n);
  }
  return means;
}

Matrix mean_filled(const Matrix& observed, const Mask& mask, const Vector& means) {
  Matrix x = observed;
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      if (!mask(i, j)) x(i, j) = means[j];
  return x;
}

void check_shape(const MaskedMatrix& data, Eigen::Index p) {
  if (static_cast<Eigen::Index>(data.cols()) != p)
    fail(ErrorKind::kInvalidArgument, "imputer transform: expected " + std::to_string(p) +
                                          " columns, got " + std::to_string(data.cols()));
}

// Rows without any observed entry fall back to the training means.
void fill_empty_rows(Matrix& x, const Mask& mask, const Vector& means) {
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    if (x.cols() > 0 && !mask.row(i).any()) x.row(i) = means.transpose();
}

std::vector<std::size_t> missing_in_column(const Mask& mask, Eigen::Index j) {
  std::vector<std::size_t> out;
  for (Eigen::Index i = 0; i < mask.rows(); ++i)
    if (!mask(i, j)) out.push_back(static_cast<std::size_t>(i));
  return out;
}

std::vector<std::size_t> observed_in_column(const Mask& mask, Eigen::Index j) {
  std::vector<std::size_t> out;
  for (Eigen::Index i = 0; i < mask.rows(); ++i)
    if (mask(i, j)) out.push_back(static_cast<std::size_t>(i));
  return out;
}

// Columns ordered by ascending missing count, ties by index.
std::vector<Eigen::Index> column_order(const Mask& mask, bool only_incomplete) {
  std::vector<Eigen::Index> cols;
  std::vector<Eigen::Index> miss(static_cast<std::size_t>(mask.cols()));
  for (Eigen::Index j = 0; j < mask.cols(); ++j) {
    miss[static_cast<std::size_t>(j)] = (!mask.col(j).array()).count();
    if (!only_incomplete || miss[static_cast<std::size_t>(j)] > 0) cols.push_back(j);
  }
  std::stable_sort(cols.begin(), cols.end(), [&](Eigen::Index a, Eigen::Index b) {
    return miss[static_cast<std::size_t>(a)] < miss[static_cast<std::size_t>(b)];
  });
  return cols;
}

Matrix drop_column(const Matrix& x, const std::vector<std::size_t>& rows, Eigen::Index col) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), x.cols() - 1);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    Eigen::Index k = 0;
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      if (j != col) out(static_cast<Eigen::Index>(r), k++) = x(static_cast<Eigen::Index>(rows[r]), j);
  }
  return out;
}

Vector take(const Matrix& x, const std::vector<std::size_t>& rows, Eigen::Index col) {
  Vector out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) out[static_cast<Eigen::Index>(r)] = x(static_cast<Eigen::Index>(rows[r]), col);
  return out;
}

bool same_data(const MaskedMatrix& a, const Matrix& observed, const Mask& mask) {
  if (a.rows() != static_cast<std::size_t>(mask.rows()) || a.cols() != static_cast<std::size_t>(mask.cols()))
    return false;
  if (a.mask() != mask) return false;
  const Matrix obs = a.observed_values();
  for (Eigen::Index i = 0; i < obs.rows(); ++i)
    for (Eigen::Index j = 0; j < obs.cols(); ++j)
      if (mask(i, j) && obs(i, j) != observed(i, j)) return false;
  return true;
}

ImputedMatrix finish(Matrix values, const MaskedMatrix& data, const Vector& means, Method method,
                     Diagnostics diag) {
  const Matrix obs = data.observed_values();
  // Observed cells pass through bit-for-bit.
  for (Eigen::Index i = 0; i < values.rows(); ++i)
    for (Eigen::Index j = 0; j < values.cols(); ++j)
      if (data.mask()(i, j)) values(i, j) = obs(i, j);
  fill_empty_rows(values, data.mask(), means);
  if (!values.allFinite()) fail(ErrorKind::kNumeric, "imputer produced non-finite values");
  return ImputedMatrix{std::move(values), data.mask(), method, std::move(diag)};
}

class BaseImputer : public FittedImputer {
 public:
  BaseImputer(const MaskedMatrix& train) : means_(observed_means(train)) {}
  const Vector& column_means() const override { return means_; }
  const Diagnostics& fit_diagnostics() const override { return fit_diag_; }

 protected:
  Vector means_;
  Diagnostics fit_diag_;
};

class MeanImputer final : public BaseImputer {
 public:
  explicit MeanImputer(const MaskedMatrix& train) : BaseImputer(train) {}
  Method method() const override { return Method::kMean; }
  ImputedMatrix transform(const MaskedMatrix& data) const override {
    check_shape(data, means_.size());
    return finish(mean_filled(data.observed_values(), data.mask(), means_), data, means_,
                  Method::kMean, {});
  }
};

// Chained ridge regressions, one per column, refit each sweep on the current
// completion. New rows replay the recorded per-sweep models in order, so test
// completion follows the same trajectory as training and cannot diverge.
class MiceImputer final : public BaseImputer {
 public:
  MiceImputer(const MiceParams& params, const MaskedMatrix& train)
      : BaseImputer(train), params_(params) {
    train_observed_ = train.observed_values();
    train_mask_ = train.mask();
    Matrix x = mean_filled(train_observed_, train_mask_, means_);
    // Complete columns are fit too: they change nothing here but give test rows a model.
    const auto order = column_order(train_mask_, false);
    const bool any_missing = !train_mask_.all();
    fit_diag_.converged = !any_missing;
    for (int sweep = 0; sweep < params_.max_sweeps && any_missing; ++sweep) {
      double max_change = 0.0;
      auto& step = sweeps_.emplace_back();
      for (auto c : order) {
        const auto obs = observed_in_column(train_mask_, c);
        if (obs.empty()) continue;
        const auto miss = missing_in_column(train_mask_, c);
        auto m = model::fit_linear(drop_column(x, obs, c), take(x, obs, c), params_.ridge);
        const Matrix design = drop_column(x, miss, c);
        for (std::size_t r = 0; r < miss.size(); ++r) {
          const double v = m.intercept + design.row(static_cast<Eigen::Index>(r)).dot(m.coefficients);
          auto& cell = x(static_cast<Eigen::Index>(miss[r]), c);
          max_change = std::max(max_change, std::abs(v - cell));
          cell = v;
        }
        step.push_back({c, std::move(m)});
      }
      fit_diag_.trace.push_back(max_change);
      fit_diag_.iterations = sweep + 1;
      if (max_change < params_.tol) {
        fit_diag_.converged = true;
        break;
      }
    }
    if (!fit_diag_.converged) fit_diag_.warning = "mice: no convergence within max_sweeps";
    fill_empty_rows(x, train_mask_, means_);
    train_completed_ = std::move(x);
  }

  Method method() const override { return Method::kMice; }

  ImputedMatrix transform(const MaskedMatrix& data) const override {
    check_shape(data, means_.size());
    if (same_data(data, train_observed_, train_mask_))
      return finish(train_completed_, data, means_, Method::kMice, fit_diag_);
    const Mask& mask = data.mask();
    Matrix x = mean_filled(data.observed_values(), mask, means_);
    Diagnostics diag;
    diag.converged = true;
    for (const auto& step : sweeps_) {
      double max_change = 0.0;
      for (const auto& [c, m] : step) {
        const auto miss = missing_in_column(mask, c);
        if (miss.empty()) continue;
        const Matrix design = drop_column(x, miss, c);
        for (std::size_t r = 0; r < miss.size(); ++r) {
          const double v = m.intercept + design.row(static_cast<Eigen::Index>(r)).dot(m.coefficients);
          auto& cell = x(static_cast<Eigen::Index>(miss[r]), c);
          max_change = std::max(max_change, std::abs(v - cell));
          cell = v;
        }
      }
      diag.trace.push_back(max_change);
    }
    diag.iterations = static_cast<int>(sweeps_.size());
    return finish(std::move(x), data, means_, Method::kMice, std::move(diag));
  }

 private:
  struct Step {
    Eigen::Index column;
    model::LinearModel model;
  };
  MiceParams params_;
  Matrix train_observed_;
  Mask train_mask_;
  Matrix train_completed_;
  std::vector<std::vector<Step>> sweeps_;
};

// Gaussian conditional mean given the observed entries of each row, with the
// mean and covariance estimated from pairwise available cases.
class DimvImputer final : public BaseImputer {
 public:
  DimvImputer(const DimvParams& params, const MaskedMatrix& train)
      : BaseImputer(train), params_(params) {
    const Matrix obs = train.observed_values();
    const Mask& mask = train.mask();
    const Eigen::Index p = obs.cols();
    cov_ = Matrix::Zero(p, p);
    for (Eigen::Index a = 0; a < p; ++a) {
      for (Eigen::Index b = a; b < p; ++b) {
        double sum = 0.0;
        std::size_t n = 0;
        for (Eigen::Index i = 0; i < obs.rows(); ++i) {
          if (mask(i, a) && mask(i, b)) {
            sum += (obs(i, a) - means_[a]) * (obs(i, b) - means_[b]);
            ++n;
          }
        }
        const double c = n ? sum / static_cast<double>(n) : 0.0;
        cov_(a, b) = c;
        cov_(b, a) = c;
      }
    }
    // Pairwise estimates need not be PSD; clip negative eigenvalues.
    Eigen::SelfAdjointEigenSolver<Matrix> eig(cov_);
    if (eig.eigenvalues().size() > 0 && eig.eigenvalues().minCoeff() < 0) {
      const Vector clipped = eig.eigenvalues().cwiseMax(0.0);
      cov_ = eig.eigenvectors() * clipped.asDiagonal() * eig.eigenvectors().transpose();
      cov_ = 0.5 * (cov_ + cov_.transpose());
      fit_diag_.warning = "dimv: pairwise covariance projected onto the PSD cone";
    }
  }

  Method method() const override { return Method::kDimv; }
  const Matrix& covariance() const { return cov_; }

  ImputedMatrix transform(const MaskedMatrix& data) const override {
    check_shape(data, means_.size());
    const Matrix obs = data.observed_values();
    const Mask& mask = data.mask();
    Matrix x = mean_filled(obs, mask, means_);
    const Eigen::Index p = obs.cols();
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      std::vector<Eigen::Index> o, m;
      for (Eigen::Index j = 0; j < p; ++j) (mask(i, j) ? o : m).push_back(j);
      if (m.empty() || o.empty()) continue;
      Matrix s_oo(static_cast<Eigen::Index>(o.size()), static_cast<Eigen::Index>(o.size()));
      Matrix s_mo(static_cast<Eigen::Index>(m.size()), static_cast<Eigen::Index>(o.size()));
      Vector d(static_cast<Eigen::Index>(o.size()));
      for (std::size_t a = 0; a < o.size(); ++a) {
        d[static_cast<Eigen::Index>(a)] = obs(i, o[a]) - means_[o[a]];
        for (std::size_t b = 0; b < o.size(); ++b)
          s_oo(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = cov_(o[a], o[b]);
        for (std::size_t b = 0; b < m.size(); ++b)
          s_mo(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = cov_(m[b], o[a]);
      }
      s_oo.diagonal().array() += params_.ridge;
      // Pseudo-inverse semantics for singular blocks (ridge 0, collinear data).
      const Vector w = s_oo.completeOrthogonalDecomposition().solve(d);
      const Vector fill = s_mo * w;
      for (std::size_t b = 0; b < m.size(); ++b)
        x(i, m[b]) = means_[m[b]] + fill[static_cast<Eigen::Index>(b)];
    }
    return finish(std::move(x), data, means_, Method::kDimv, {});
  }

 private:
  DimvParams params_;
  Matrix cov_;
};

// Iterated random-forest regressions per column. Stops at the first sweep
// whose normalized squared change exceeds the previous one and keeps the
// previous completion.
class MissForestImputer final : public BaseImputer {
 public:
  MissForestImputer(const MissForestParams& params, std::uint64_t seed, const MaskedMatrix& train)
      : BaseImputer(train), params_(params), root_(Stream(seed).split("missforest")) {
    train_observed_ = train.observed_values();
    train_mask_ = train.mask();
    Matrix x = mean_filled(train_observed_, train_mask_, means_);
    const auto cols = column_order(train_mask_, true);
    double prev = std::numeric_limits<double>::infinity();
    fit_diag_.converged = cols.empty();
    for (int sweep = 0; sweep < params_.max_sweeps && !cols.empty(); ++sweep) {
      const Matrix before = x;
      for (auto c : cols) {
        const auto obs = observed_in_column(train_mask_, c);
        const auto miss = missing_in_column(train_mask_, c);
        const auto forest = fit_column(x, obs, c, root_.split("sweep").split(static_cast<std::uint64_t>(sweep)));
        predict_column(forest, x, miss, c);
      }
      const double diff = normalized_change(before, x, train_mask_);
      fit_diag_.trace.push_back(diff);
      fit_diag_.iterations = sweep + 1;
      if (diff > prev) {
        x = before;
        fit_diag_.converged = true;
        break;
      }
      prev = diff;
      if (diff == 0.0) {
        fit_diag_.converged = true;
        break;
      }
    }
    if (!fit_diag_.converged) fit_diag_.warning = "missforest: stopping rule not met within max_sweeps";
    fill_empty_rows(x, train_mask_, means_);
    train_completed_ = x;
    order_ = column_order(train_mask_, false);
    forests_.resize(static_cast<std::size_t>(x.cols()));
    for (auto c : order_)
      forests_[static_cast<std::size_t>(c)] =
          fit_column(x, observed_in_column(train_mask_, c), c, root_.split("final"));
  }

  Method method() const override { return Method::kMissForest; }

  ImputedMatrix transform(const MaskedMatrix& data) const override {
    check_shape(data, means_.size());
    if (same_data(data, train_observed_, train_mask_))
      return finish(train_completed_, data, means_, Method::kMissForest, fit_diag_);
    const Mask& mask = data.mask();
    Matrix x = mean_filled(data.observed_values(), mask, means_);
    Diagnostics diag;
    std::vector<Eigen::Index> cols;
    for (auto c : order_)
      if (!mask.col(c).all()) cols.push_back(c);
    diag.converged = cols.empty();
    double prev = std::numeric_limits<double>::infinity();
    for (int sweep = 0; sweep < params_.max_sweeps && !cols.empty(); ++sweep) {
      const Matrix before = x;
      for (auto c : cols) predict_column(forests_[static_cast<std::size_t>(c)], x, missing_in_column(mask, c), c);
      const double diff = normalized_change(before, x, mask);
      diag.trace.push_back(diff);
      diag.iterations = sweep + 1;
      if (diff > prev) {
        x = before;
        diag.converged = true;
        break;
      }
      prev = diff;
      if (diff == 0.0) {
        diag.converged = true;
        break;
      }
    }
    return finish(std::move(x), data, means_, Method::kMissForest, std::move(diag));
  }

 private:
  model::RandomForest fit_column(const Matrix& x, const std::vector<std::size_t>& obs, Eigen::Index c,
                                 const Stream& stream) const {
    model::ForestParams fp;
    fp.n_trees = params_.n_trees;
    fp.max_depth = params_.max_depth;
    fp.seed = stream.split(static_cast<std::uint64_t>(c)).key();
    return model::fit_forest(drop_column(x, obs, c), take(x, obs, c), fp);
  }

  static void predict_column(const model::RandomForest& forest, Matrix& x,
                             const std::vector<std::size_t>& miss, Eigen::Index c) {
    if (miss.empty()) return;
    const RowMatrix design = drop_column(x, miss, c);
    const auto q = static_cast<std::size_t>(design.cols());
    for (std::size_t r = 0; r < miss.size(); ++r)
      x(static_cast<Eigen::Index>(miss[r]), c) = forest.predict({design.data() + r * q, q});
  }

  static double normalized_change(const Matrix& before, const Matrix& after, const Mask& mask) {
    double num = 0.0, den = 0.0;
    for (Eigen::Index i = 0; i < mask.rows(); ++i)
      for (Eigen::Index j = 0; j < mask.cols(); ++j)
        if (!mask(i, j)) {
          const double d = after(i, j) - before(i, j);
          num += d * d;
          den += after(i, j) * after(i, j);
        }
    return den > 0 ? num / den : num;
  }

  MissForestParams params_;
  Stream root_;
  Matrix train_observed_;
  Mask train_mask_;
  Matrix train_completed_;
  std::vector<Eigen::Index> order_;
  std::vector<model::RandomForest> forests_;
};

struct SoftResult {
  Matrix z;
  Diagnostics diag;
};

// Z <- S_lambda(P_obs(X) + P_miss(Z)) until the relative Frobenius change of Z
// drops below tol.
SoftResult soft_iterate(const Matrix& observed, const Mask& mask, Matrix z, double lambda,
                        const SoftImputeParams& params) {
  SoftResult res;
  res.diag.converged = false;
  res.diag.objective.push_back(softimpute_objective(observed, mask, z, lambda));
  for (int it = 0; it < params.max_iters; ++it) {
    Matrix a = z;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j)
        if (mask(i, j)) a(i, j) = observed(i, j);
    Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Vector s = (svd.singularValues().array() - lambda).cwiseMax(0.0);
    if (params.max_rank > 0)
      for (Eigen::Index k = params.max_rank; k < s.size(); ++k) s[k] = 0.0;
    const Matrix z_new = svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
    const double old_norm = z.norm();
    const double change = (z_new - z).norm() / std::max(old_norm, std::numeric_limits<double>::min());
    z = z_new;
    res.diag.objective.push_back(softimpute_objective(observed, mask, z, lambda));
    res.diag.trace.push_back(change);
    res.diag.iterations = it + 1;
    if (change < params.tol) {
      res.diag.converged = true;
      break;
    }
  }
  if (!res.diag.converged) res.diag.warning = "softimpute: no convergence within max_iters";
  res.z = std::move(z);
  return res;
}

class SoftImputer final : public BaseImputer {
 public:
  SoftImputer(const SoftImputeParams& params, const MaskedMatrix& train)
      : BaseImputer(train), params_(params) {
    train_observed_ = train.observed_values();
    train_mask_ = train.mask();
    const Matrix z0 = mean_filled(train_observed_, train_mask_, means_);
    if (params_.shrinkage >= 0) {
      lambda_ = params_.shrinkage;
    } else {
      Eigen::BDCSVD<Matrix> svd(z0);
      lambda_ = svd.singularValues().size() ? params_.lambda_fraction * svd.singularValues()[0] : 0.0;
    }
    auto res = soft_iterate(train_observed_, train_mask_, z0, lambda_, params_);
    fit_diag_ = std::move(res.diag);
    z_ = std::move(res.z);
  }

  Method method() const override { return Method::kSoftImpute; }
  double lambda() const { return lambda_; }

  ImputedMatrix transform(const MaskedMatrix& data) const override {
    check_shape(data, means_.size());
    if (same_data(data, train_observed_, train_mask_))
      return finish(z_, data, means_, Method::kSoftImpute, fit_diag_);
    const auto n_train = train_observed_.rows();
    const auto n = static_cast<Eigen::Index>(data.rows());
    const auto p = train_observed_.cols();
    Matrix observed(n_train + n, p);
    Mask mask(n_train + n, p);
    Matrix z(n_train + n, p);
    observed.topRows(n_train) = train_observed_;
    observed.bottomRows(n) = data.observed_values();
    mask.topRows(n_train) = train_mask_;
    mask.bottomRows(n) = data.mask();
    z.topRows(n_train) = z_;
    z.bottomRows(n) = mean_filled(data.observed_values(), data.mask(), means_);
    auto res = soft_iterate(observed, mask, std::move(z), lambda_, params_);
    return finish(res.z.bottomRows(n), data, means_, Method::kSoftImpute, std::move(res.diag));
  }

 private:
  SoftImputeParams params_;
  Matrix train_observed_;
  Mask train_mask_;
  Matrix z_;
  double lambda_ = 0.0;
};

}  // namespace

double softimpute_objective(const Matrix& observed, const Mask& mask, const Matrix& z,
                            double lambda) {
  double fit = 0.0;
  for (Eigen::Index i = 0; i < z.rows(); ++i)
    for (Eigen::Index j = 0; j < z.cols(); ++j)
      if (mask(i, j)) {
        const double d = observed(i, j) - z(i, j);
        fit += d * d;
      }
  double nuclear = 0.0;
  if (lambda != 0.0 && z.size() > 0) nuclear = Eigen::BDCSVD<Matrix>(z).singularValues().sum();
  return 0.5 * fit + lambda * nuclear;
}

std::shared_ptr<const FittedImputer> fit(const ImputerSpec& spec, const MaskedMatrix& train) {
  spec.validate();
  require(train.rows() > 0, "imputer fit: empty training data");
  switch (spec.method) {
    case Method::kMean: return std::make_shared<MeanImputer>(train);
    case Method::kMice: return std::make_shared<MiceImputer>(spec.mice, train);
    case Method::kDimv: return std::make_shared<DimvImputer>(spec.dimv, train);
    case Method::kMissForest: return std::make_shared<MissForestImputer>(spec.missforest, spec.seed, train);
    case Method::kSoftImpute: return std::make_shared<SoftImputer>(spec.softimpute, train);
  }
  fail(ErrorKind::kInvalidArgument, "unknown imputation method");
}

}  // namespace missshap::impute
