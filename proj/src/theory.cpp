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

#include "missshap/theory.hpp"

#include <cmath>
#include <sstream>

#include "missshap/error.hpp"
#include "missshap/metrics.hpp"
#include "missshap/rng.hpp"
#include "missshap/shapley.hpp"
#include "missshap/synthetic.hpp"

namespace missshap::theory {

namespace {

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double population_var(std::span<const double> v) { return population_cov(v, v); }

std::span<const double> col_span(const Matrix& m, Eigen::Index j) {
  return {m.col(j).data(), static_cast<std::size_t>(m.rows())};
}

}  // namespace

MeanZeroReport check_mean_zero(const MaskedMatrix& train, const MaskedMatrix& test) {
  if (train.cols() != 1 || test.cols() != 1)
    fail(ErrorKind::kInvalidArgument, "check_mean_zero: univariate data required");
  impute::ImputerSpec spec;
  spec.method = impute::Method::kMean;
  const auto imputer = impute::fit(spec, train);
  const auto x_imp = imputer->transform(train);
  const auto z_imp = imputer->transform(test);
  const auto lm = model::fit_linear(x_imp.values, train.target(), 0.0);

  MeanZeroReport r;
  r.n_test = test.rows();
  r.coefficient = lm.coefficients[0];
  double full = 0.0, observed = 0.0;
  for (std::size_t j = 0; j < test.rows(); ++j) {
    const double z = z_imp.values(static_cast<Eigen::Index>(j), 0);
    const double phi = shapley::linear_shapley(lm, std::span<const double>(&z, 1))[0];
    full += std::abs(phi);
    if (test.is_observed(j, 0)) {
      observed += std::abs(phi);
      ++r.n_obs_test;
    } else {
      r.max_abs_shap_on_imputed = std::max(r.max_abs_shap_on_imputed, std::abs(phi));
    }
  }
  const double m = static_cast<double>(test.rows());
  r.importance_full = full / m;
  r.importance_observed_only = observed / m;
  r.pass = r.max_abs_shap_on_imputed < kShapTolerance &&
           std::abs(r.importance_full - r.importance_observed_only) < kImportanceTolerance;
  return r;
}

double population_cov(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size() && !x.empty(), "population_cov: bad lengths");
  const double mx = mean_of(x), my = mean_of(y);
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += (x[k] - mx) * (y[k] - my);
  return s / static_cast<double>(x.size());
}

double cov_delta_formula(std::span<const double> x, std::span<const double> y, std::size_t i) {
  const auto n = static_cast<double>(x.size());
  double rest = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k)
    if (k != i) rest += x[k];
  const double mean_rest = rest / (n - 1.0);
  return (y[i] - mean_of(y)) * (mean_rest - x[i]) / n;
}

CovDeltaReport cov_delta(std::span<const double> x, std::span<const double> y, std::size_t i,
                         const CovDeltaFormula& formula) {
  require(x.size() == y.size(), "cov_delta: length mismatch");
  require(x.size() >= 2, "cov_delta: need N >= 2");
  if (i >= x.size()) fail(ErrorKind::kInvalidArgument, "cov_delta: index out of range");
  CovDeltaReport r;
  r.n = x.size();
  r.index = i;
  r.mean_x = mean_of(x);
  r.mean_y = mean_of(y);
  double rest = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k)
    if (k != i) rest += x[k];
  r.mean_x_imputed = rest / static_cast<double>(x.size() - 1);
  std::vector<double> x_imp(x.begin(), x.end());
  x_imp[i] = r.mean_x_imputed;
  r.direct_delta = population_cov(x_imp, y) - population_cov(x, y);
  r.formula_delta = formula(x, y, i);
  r.pass = std::abs(r.direct_delta - r.formula_delta) < kCovDeltaTolerance;
  return r;
}

VarianceShrinkReport check_variance_shrink(const MaskedMatrix& masked,
                                           const impute::ImputedMatrix& imputed,
                                           std::size_t column) {
  if (imputed.method != impute::Method::kMean)
    fail(ErrorKind::kInvalidArgument, "check_variance_shrink: mean imputation required");
  require(column < masked.cols(), "check_variance_shrink: column out of range");
  require(static_cast<std::size_t>(imputed.values.rows()) == masked.rows(),
          "check_variance_shrink: row mismatch");
  const auto j = static_cast<Eigen::Index>(column);
  std::vector<double> observed;
  for (std::size_t i = 0; i < masked.rows(); ++i)
    if (const auto v = masked.value(i, column)) observed.push_back(*v);
  require(!observed.empty(), "check_variance_shrink: column has no observed entries");
  const Matrix& truth = metrics::GroundTruth::of(masked).values();
  VarianceShrinkReport r;
  r.var_imputed = population_var(col_span(imputed.values, j));
  r.var_observed = population_var(observed);
  r.var_ground_truth = population_var(col_span(truth, j));
  // Var(x') = (n_obs / n) Var(observed) exactly; allow rounding slack only.
  const double slack = 1e-12 * std::max(1.0, r.var_observed);
  r.pass = r.var_imputed <= r.var_observed + slack && r.var_imputed <= r.var_ground_truth + slack;
  return r;
}

ShapMeanReport shap_mean_identity(const model::LinearModel& model, const Matrix& rows) {
  require(rows.rows() >= 1, "shap_mean_identity: no rows");
  require(rows.cols() == model.coefficients.size(), "shap_mean_identity: width mismatch");
  ShapMeanReport r;
  const auto p = rows.cols();
  r.mean_phi = Vector::Zero(p);
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    const Vector row = rows.row(i).transpose();
    r.mean_phi += shapley::linear_shapley(model, {row.data(), static_cast<std::size_t>(p)});
  }
  r.mean_phi /= static_cast<double>(rows.rows());
  const Vector z_mean = rows.colwise().mean().transpose();
  r.predicted = (z_mean - model.feature_means).cwiseProduct(model.coefficients);
  r.residual = r.mean_phi - r.predicted;
  return r;
}

SuiteResult run_suite(const SuiteOptions& options) {
  SuiteResult out;
  std::ostringstream trend;
  trend << "train_rate,test_rate,seed,importance_complete,importance_imputed,slope_complete,slope_imputed\n";
  const Stream root(options.base_seed);
  auto fmt = [](double v) { return format_double(v); };
  for (double r_train : options.rates) {
    for (double r_test : options.rates) {
      for (std::size_t s = 0; s < options.seeds; ++s) {
        const Stream cell = root.split("mean_zero").split(s);
        const auto data = synthetic::univariate_linear(options.n, cell.split("data").key());
        const auto [train, test] = split(data, SplitSpec{0.2, cell.split("split").key()});
        const auto train_m = apply_mcar(train, r_train, cell.split("mask-train").split(fnv1a64(fmt(r_train))).key());
        const auto test_m = apply_mcar(test, r_test, cell.split("mask-test").split(fnv1a64(fmt(r_test))).key());
        const std::string params = "train_rate=" + fmt(r_train) + ";test_rate=" + fmt(r_test) +
                                   ";seed=" + std::to_string(s);
        const auto rep = check_mean_zero(train_m, test_m);
        out.mean_zero_reports.push_back(rep);
        out.rows.push_back({"mean_zero_imputed_shap", params, rep.max_abs_shap_on_imputed, kShapTolerance,
                            rep.max_abs_shap_on_imputed < kShapTolerance});
        const double imp_gap = std::abs(rep.importance_full - rep.importance_observed_only);
        out.rows.push_back({"mean_zero_importance", params, imp_gap, kImportanceTolerance,
                            imp_gap < kImportanceTolerance});

        impute::ImputerSpec spec;
        spec.method = impute::Method::kMean;
        const auto imputer = impute::fit(spec, train_m);
        const auto x_imp = imputer->transform(train_m);
        const auto shrink = check_variance_shrink(train_m, x_imp, 0);
        out.rows.push_back({"variance_shrink", params, shrink.var_imputed - shrink.var_ground_truth, 0.0,
                            shrink.pass});

        const auto lm_imp = model::fit_linear(x_imp.values, train.target(), 0.0);
        const auto z_imp = imputer->transform(test_m);
        const auto mean_id = shap_mean_identity(lm_imp, z_imp.values);
        const double res = mean_id.residual.cwiseAbs().maxCoeff();
        out.rows.push_back({"shap_mean_identity", params, res, kImportanceTolerance, res < kImportanceTolerance});

        const auto lm_full = model::fit_linear(train.values(), train.target(), 0.0);
        double imp_full = 0.0;
        for (Eigen::Index j = 0; j < test.values().rows(); ++j)
          imp_full += std::abs((test.values()(j, 0) - lm_full.feature_means[0]) * lm_full.coefficients[0]);
        imp_full /= static_cast<double>(test.rows());
        trend << fmt(r_train) << "," << fmt(r_test) << "," << s << "," << fmt(imp_full) << ","
              << fmt(rep.importance_full) << "," << fmt(lm_full.coefficients[0]) << ","
              << fmt(rep.coefficient) << "\n";
      }
    }
  }

  Stream rng = root.split("cov-delta");
  for (std::size_t t = 0; t < options.cov_delta_trials; ++t) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.below(options.cov_delta_max_n - 1));
    std::vector<double> x(n), y(n);
    for (auto& v : x) v = rng.normal();
    for (auto& v : y) v = rng.normal();
    const auto i = static_cast<std::size_t>(rng.below(n));
    const auto rep = cov_delta(x, y, i, options.cov_formula);
    out.rows.push_back({"cov_delta", "trial=" + std::to_string(t) + ";n=" + std::to_string(n) +
                                         ";i=" + std::to_string(i),
                        std::abs(rep.direct_delta - rep.formula_delta), kCovDeltaTolerance, rep.pass});
  }
  out.trend_csv = trend.str();
  out.all_passed = std::all_of(out.rows.begin(), out.rows.end(), [](const CheckRow& r) { return r.pass; });
  return out;
}

std::string to_csv(const std::vector<CheckRow>& rows) {
  std::string out = "check,parameters,residual,tolerance,pass\n";
  for (const auto& r : rows)
    out += r.check + "," + r.parameters + "," + format_double(r.residual) + "," +
           format_double(r.tolerance) + "," + (r.pass ? "true" : "false") + "\n";
  return out;
}

}  // namespace missshap::theory
