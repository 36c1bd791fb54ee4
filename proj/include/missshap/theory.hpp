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

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "missshap/data.hpp"
#include "missshap/impute.hpp"
#include "missshap/model.hpp"

// Executable checks of the mean-imputation results for univariate linear
// regression. Variances and covariances here use the population (1/N)
// convention.
namespace missshap::theory {

inline constexpr double kShapTolerance = 1e-10;
inline constexpr double kImportanceTolerance = 1e-12;
inline constexpr double kCovDeltaTolerance = 1e-12;

struct MeanZeroReport {
  double max_abs_shap_on_imputed = 0.0;
  double importance_full = 0.0;           // (1/m) sum_j |phi'(z'_j)|
  double importance_observed_only = 0.0;  // (1/m) sum_{j in Obs(z*)} |phi'(z'_j)|
  std::size_t n_obs_test = 0;
  std::size_t n_test = 0;
  double coefficient = 0.0;               // slope of the model fit on mean-imputed data
  bool pass = false;
};

// Mean imputer + least squares + closed-form attribution on univariate data;
// imputed test points should receive zero attribution and global importance
// should reduce to the observed test points.
MeanZeroReport check_mean_zero(const MaskedMatrix& train, const MaskedMatrix& test);

struct CovDeltaReport {
  double direct_delta = 0.0;   // Cov(x', y) - Cov(x, y), both evaluated from scratch
  double formula_delta = 0.0;  // (1/N) (y_i - mean y) (mean x' - x_i)
  std::size_t n = 0;
  std::size_t index = 0;
  double mean_x = 0.0;
  double mean_x_imputed = 0.0;  // mean of the other N-1 entries
  double mean_y = 0.0;
  bool pass = false;
};

using CovDeltaFormula = std::function<double(std::span<const double> x, std::span<const double> y,
                                             std::size_t i)>;

double cov_delta_formula(std::span<const double> x, std::span<const double> y, std::size_t i);
double population_cov(std::span<const double> x, std::span<const double> y);

// x_i is replaced by the mean of the remaining entries.
CovDeltaReport cov_delta(std::span<const double> x, std::span<const double> y, std::size_t i,
                         const CovDeltaFormula& formula = cov_delta_formula);

struct VarianceShrinkReport {
  double var_imputed = 0.0;
  double var_observed = 0.0;      // over observed entries only
  double var_ground_truth = 0.0;  // over the complete column
  bool pass = false;
};

// Requires a mean-imputed matrix.
VarianceShrinkReport check_variance_shrink(const MaskedMatrix& masked,
                                           const impute::ImputedMatrix& imputed,
                                           std::size_t column);

struct ShapMeanReport {
  Vector mean_phi;   // per feature mean of phi over explained rows
  Vector predicted;  // (mean(z) - E[x]) * beta
  Vector residual;   // mean_phi - predicted
};

ShapMeanReport shap_mean_identity(const model::LinearModel& model, const Matrix& rows);

struct CheckRow {
  std::string check;
  std::string parameters;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct SuiteOptions {
  std::size_t n = 200;
  std::vector<double> rates{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
  std::size_t seeds = 5;
  std::uint64_t base_seed = 2024;
  std::size_t cov_delta_trials = 1000;
  std::size_t cov_delta_max_n = 100;
  // Replaceable for negative-control tests.
  CovDeltaFormula cov_formula = cov_delta_formula;
};

struct SuiteResult {
  std::vector<CheckRow> rows;
  std::vector<MeanZeroReport> mean_zero_reports;
  // Descriptive sweep (not asserted): train rate, test rate, seed,
  // importance on complete data vs after mean imputation.
  std::string trend_csv;
  bool all_passed = false;
};

SuiteResult run_suite(const SuiteOptions& options);
std::string to_csv(const std::vector<CheckRow>& rows);

}  // namespace missshap::theory
