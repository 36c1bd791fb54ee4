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

#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "missshap/error.hpp"
#include "missshap/metrics.hpp"
#include "test_util.hpp"

using namespace missshap;
using namespace missshap::metrics;

namespace {

shapley::ShapleyMatrix shap(std::vector<Matrix> stacks, std::vector<std::size_t> ids) {
  shapley::ShapleyMatrix s;
  const auto m = stacks[0].rows(), q = stacks[0].cols();
  s.stacks = std::move(stacks);
  s.sample_ids = std::move(ids);
  s.feature_names = testing::names(static_cast<std::size_t>(q));
  s.feature_values = Matrix::Zero(m, q);
  s.missing_flags = Mask::Constant(m, q, false);
  return s;
}

std::vector<std::size_t> iota_ids(std::size_t m) {
  std::vector<std::size_t> ids(m);
  for (std::size_t i = 0; i < m; ++i) ids[i] = i;
  return ids;
}

}  // namespace

TEST_CASE("prediction_mse examples") {
  const std::vector<double> a{1, 2, 3};
  CHECK(prediction_mse(a, a) == 0.0);
  const std::vector<double> z{0, 0}, o{1, 1};
  CHECK(prediction_mse(z, o) == 1.0);
  CHECK_THROWS_AS(prediction_mse(a, o), Error);

  Stream rng(1);
  std::vector<double> p(37), t(37);
  for (std::size_t i = 0; i < 37; ++i) {
    p[i] = rng.normal();
    t[i] = rng.normal();
  }
  double s = 0.0;
  for (std::size_t i = 0; i < 37; ++i) s += (p[i] - t[i]) * (p[i] - t[i]);
  CHECK(std::abs(prediction_mse(p, t) - s / 37.0) < 1e-15);
}

TEST_CASE("imputation_mse covers simulated-missing cells only") {
  Matrix x(2, 2);
  x << 3, 1, 5, 7;
  Mask m(2, 2);
  m << false, true, true, true;
  const MaskedMatrix mm(testing::regression_data(x, Vector::Zero(2)), m);
  impute::ImputedMatrix imp;
  imp.values = x;
  imp.source_mask = m;
  CHECK(*imputation_mse(imp, mm) == 0.0);
  imp.values(0, 0) = 1.0;
  imp.values(1, 1) = 100.0;  // observed cell, ignored
  CHECK(*imputation_mse(imp, mm) == 4.0);

  const MaskedMatrix full(testing::regression_data(x, Vector::Zero(2)));
  impute::ImputedMatrix same;
  same.values = x;
  same.source_mask = full.mask();
  CHECK_FALSE(imputation_mse(same, full).has_value());
}

TEST_CASE("mean imputation error equals spread of missing entries around the observed mean") {
  Stream rng(2);
  const Matrix x = testing::random_matrix(rng, 30, 1);
  const auto mm = apply_mcar(testing::regression_data(x, Vector::Zero(30)), 0.4, 3);
  const auto imp = impute::fit({impute::Method::kMean}, mm)->transform(mm);
  double obs_sum = 0.0;
  int obs_n = 0;
  for (int i = 0; i < 30; ++i)
    if (mm.is_observed(i, 0)) {
      obs_sum += x(i, 0);
      ++obs_n;
    }
  const double mean = obs_sum / obs_n;
  double s = 0.0;
  int k = 0;
  for (int i = 0; i < 30; ++i)
    if (!mm.is_observed(i, 0)) {
      s += (x(i, 0) - mean) * (x(i, 0) - mean);
      ++k;
    }
  CHECK(*imputation_mse(imp, mm) == doctest::Approx(s / k).epsilon(1e-12));
}

TEST_CASE("mse_shap examples and guards") {
  Matrix one(1, 1), three(1, 1);
  one << 1;
  three << 3;
  CHECK(mse_shap(shap({one}, {0}), shap({one}, {0})) == 0.0);
  CHECK(mse_shap(shap({one}, {0}), shap({three}, {0})) == 4.0);
  CHECK_THROWS_AS(mse_shap(shap({one}, {0}), shap({three}, {1})), Error);
  CHECK_THROWS_AS(mse_shap(shap({Matrix::Zero(1, 2)}, {0}), shap({one}, {0})), Error);

  Stream rng(4);
  const Matrix a = testing::random_matrix(rng, 5, 3), b = testing::random_matrix(rng, 5, 3);
  const auto sa = shap({a}, iota_ids(5)), sb = shap({b}, iota_ids(5));
  CHECK(mse_shap(sa, sb) == mse_shap(sb, sa));
  CHECK(mse_shap(sa, sb) > 0.0);
}

TEST_CASE("mse_shap averages class stacks by default") {
  Matrix a0(1, 1), a1(1, 1), b0(1, 1), b1(1, 1);
  a0 << 0;
  a1 << 0;
  b0 << 1;
  b1 << 3;
  const auto a = shap({a0, a1}, {0}), b = shap({b0, b1}, {0});
  CHECK(mse_shap(a, b) == 5.0);
  CHECK(mse_shap(a, b, 0) == 1.0);
  CHECK(mse_shap(a, b, 1) == 9.0);
}

TEST_CASE("mse_shap for a mean-imputed pipeline counts imputed entries as zero attribution") {
  // Oracle: loop over entries, using phi' = 0 wherever the test entry was imputed.
  Stream rng(5);
  const Matrix phi_ref = testing::random_matrix(rng, 6, 2);
  Matrix phi_imp = testing::random_matrix(rng, 6, 2);
  Mask missing = Mask::Constant(6, 2, false);
  missing(1, 0) = missing(4, 1) = missing(5, 0) = true;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 2; ++j)
      if (missing(i, j)) phi_imp(i, j) = 0.0;
  double s = 0.0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 2; ++j) {
      const double pm = missing(i, j) ? 0.0 : phi_imp(i, j);
      s += (pm - phi_ref(i, j)) * (pm - phi_ref(i, j));
    }
  CHECK(mse_shap(shap({phi_imp}, iota_ids(6)), shap({phi_ref}, iota_ids(6))) ==
        doctest::Approx(s / 12.0).epsilon(1e-15));
}

TEST_CASE("aggregate") {
  auto c = aggregate({1.0, 3.0});
  CHECK(*c.value == 2.0);
  CHECK(c.min == 1.0);
  CHECK(c.max == 3.0);
  CHECK(c.std == 1.0);
  CHECK(c.n_repetitions == 2);
  CHECK(*aggregate({4.5}).value == 4.5);

  Stream rng(6);
  std::vector<std::optional<double>> v;
  double s = 0.0;
  for (int i = 0; i < 10; ++i) {
    v.push_back(rng.uniform());
    s += *v.back();
  }
  const auto a = aggregate(v);
  CHECK(std::abs(*a.value - s / 10.0) < 1e-15);
  std::reverse(v.begin(), v.end());
  CHECK(*aggregate(v).value == *a.value);
  std::rotate(v.begin(), v.begin() + 3, v.end());
  CHECK(*aggregate(v).value == *a.value);

  v[2] = std::nullopt;
  CHECK_FALSE(aggregate(v).value.has_value());
}

TEST_CASE("criteria names") {
  CHECK(to_string(Criteria::kMse) == "mse");
  CHECK(to_string(Criteria::kMseShap) == "mse_shap");
  CHECK(to_string(Criteria::kImputationMse) == "imputation_mse");
}
