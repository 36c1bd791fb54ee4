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

#include <cmath>
#include <bit>
#include <limits>
#include <numeric>

#include "doctest.h"
#include "missshap/error.hpp"
#include "missshap/impute.hpp"
#include "missshap/shapley.hpp"
#include "test_util.hpp"

using namespace missshap;
using namespace missshap::shapley;
using model::GbtModel;
using model::LinearModel;
using model::Predictor;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::span<const double> span_of(const Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

// Two-level tree computing x0 * x1 on {0, 1} inputs.
GbtModel product_model() {
  GbtModel g;
  g.learning_rate = 1.0;
  g.base_scores = {0.0};
  RegressionTree t;
  t.nodes.resize(5);
  t.nodes[0].feature = 0;
  t.nodes[0].threshold = 0.5;
  t.nodes[0].left = 1;
  t.nodes[0].right = 2;
  t.nodes[1].value = 0.0;
  t.nodes[2].feature = 1;
  t.nodes[2].threshold = 0.5;
  t.nodes[2].left = 3;
  t.nodes[2].right = 4;
  t.nodes[3].value = 0.0;
  t.nodes[4].value = 1.0;
  g.trees = {{t}};
  return g;
}

double binom(int n, int k) { return std::round(std::exp(std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1))); }

double mean_prediction(const Predictor& p, const Matrix& rows, std::size_t out = 0) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    const Vector r = rows.row(i).transpose();
    s += p.predict(span_of(r))[out];
  }
  return s / static_cast<double>(rows.rows());
}

LinearModel random_linear(Stream& rng, int p) {
  LinearModel m;
  m.intercept = rng.normal();
  m.coefficients = testing::random_vector(rng, p);
  m.feature_means = testing::random_vector(rng, p);
  return m;
}

}  // namespace

TEST_CASE("coalition weights are normalized") {
  for (int p = 1; p <= 16; ++p) {
    const CoalitionWeights w(static_cast<std::size_t>(p));
    double s = 0.0;
    for (int k = 0; k < p; ++k) s += binom(p - 1, k) * w(static_cast<std::size_t>(k));
    CHECK(std::abs(s - 1.0) < 1e-12);
    CHECK(std::abs(w.total() - 1.0) < 1e-12);
  }
}

TEST_CASE("product game splits credit equally") {
  // Oracle: v(empty)=v({1})=v({2})=0, v({1,2})=1, so each player gets 1/2.
  const Predictor p(product_model());
  const auto vf = ValueFunction::marginal(Matrix::Zero(1, 2));
  const Vector row = Vector::Ones(2);
  const Matrix phi = exact_shapley(vf, p, span_of(row));
  CHECK(phi(0, 0) == doctest::Approx(0.5));
  CHECK(phi(0, 1) == doctest::Approx(0.5));
}

TEST_CASE("row equal to the background gets zero attribution") {
  Stream rng(1);
  const Matrix x = testing::random_matrix(rng, 60, 4);
  const Vector y = x.col(0).array().square() + x.col(1).array() * x.col(2).array();
  const Predictor g(model::fit_gbt(x, y, Task::kRegression, 0, {20, 3, 0.2, 3, 0}));
  const Vector bg = x.row(5).transpose();
  const Matrix phi = exact_shapley(ValueFunction::marginal(bg.transpose()), g, span_of(bg));
  CHECK(phi.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("linear closed form") {
  const LinearModel m{0.0, Vector::Constant(1, 2.0), Vector::Constant(1, 1.0)};
  const Vector row = Vector::Constant(1, 3.0);
  CHECK(linear_shapley(m, span_of(row))[0] == 4.0);
  CHECK(linear_shapley(m, span_of(m.feature_means))[0] == 0.0);
  const Vector missing = Vector::Constant(1, kNaN);
  CHECK_THROWS_AS(linear_shapley(m, span_of(missing)), Error);
}

TEST_CASE("closed form matches enumeration with a mean background") {
  Stream rng(2);
  for (int rep = 0; rep < 10; ++rep) {
    const auto m = random_linear(rng, 6);
    const Vector row = testing::random_vector(rng, 6);
    const Matrix phi = exact_shapley(ValueFunction::marginal(m.feature_means.transpose()),
                                     Predictor(m), span_of(row));
    const Vector closed = linear_shapley(m, span_of(row));
    CHECK((phi.row(0).transpose() - closed).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("closed form with any single reference row matches enumeration") {
  Stream rng(14);
  const auto m = random_linear(rng, 5);
  const Vector ref = testing::random_vector(rng, 5);
  const Vector row = testing::random_vector(rng, 5);
  const Matrix phi = exact_shapley(ValueFunction::marginal(ref.transpose()), Predictor(m), span_of(row));
  CHECK((phi.row(0).transpose() - linear_shapley(m, span_of(row), span_of(ref))).cwiseAbs().maxCoeff() <
        1e-10);
}

TEST_CASE("efficiency in marginal mode with several background rows") {
  Stream rng(3);
  const Matrix x = testing::random_matrix(rng, 50, 5);
  const Vector y = x.col(0).array().sin() + x.col(3).array() * x.col(4).array();
  const Predictor g(model::fit_gbt(x, y, Task::kRegression, 0, {15, 3, 0.2, 3, 0}));
  const Matrix bg = x.topRows(7);
  for (int i = 10; i < 15; ++i) {
    const Vector row = x.row(i).transpose();
    const Matrix phi = exact_shapley(ValueFunction::marginal(bg), g, span_of(row));
    CHECK(std::abs(phi.sum() - (g.predict(span_of(row))[0] - mean_prediction(g, bg))) < 1e-8);
  }
}

TEST_CASE("efficiency per class stack for classification") {
  Stream rng(4);
  const Matrix x = testing::random_matrix(rng, 90, 3);
  Vector y(90);
  for (int i = 0; i < 90; ++i) y[i] = x(i, 0) + x(i, 1) < -0.5 ? 0 : (x(i, 2) < 0 ? 1 : 2);
  const Predictor g(model::fit_gbt(x, y, Task::kClassification, 3, {10, 2, 0.3, 3, 0}));
  const Matrix bg = x.colwise().mean();
  const Vector row = x.row(0).transpose();
  const Matrix phi = exact_shapley(ValueFunction::marginal(bg), g, span_of(row));
  REQUIRE(phi.rows() == 3);
  const auto full = g.predict(span_of(row));
  double total = 0.0;
  for (std::size_t c = 0; c < 3; ++c) {
    CHECK(std::abs(phi.row(c).sum() - (full[c] - mean_prediction(g, bg, c))) < 1e-8);
    total += phi.row(c).sum();
  }
  CHECK(std::abs(total) < 1e-12);  // probabilities sum to one on both ends
}

TEST_CASE("efficiency in retrain mode") {
  Stream rng(5);
  const Matrix x = testing::random_matrix(rng, 40, 4);
  const Vector y = x * Vector::LinSpaced(4, 1.0, 2.5) + 0.3 * testing::random_vector(rng, 40);
  const auto full = model::fit_linear(x, y);
  const Vector row = testing::random_vector(rng, 4);
  const Matrix phi = exact_shapley(ValueFunction::retrain(x, y), Predictor(full), span_of(row));
  CHECK(std::abs(phi.sum() - (full.predict(span_of(row)) - y.mean())) < 1e-8);
}

TEST_CASE("retrain on uncorrelated design matches a hand enumeration") {
  // Oracle: enumerate all coalitions of 3 players, refitting OLS on each.
  Stream rng(6);
  const Matrix x = testing::random_matrix(rng, 30, 3);
  const Vector y = x.col(0) - x.col(1) + x.col(0).cwiseProduct(x.col(2));
  const Vector row = testing::random_vector(rng, 3);
  auto v = [&](unsigned s) {
    std::vector<int> cols;
    for (int j = 0; j < 3; ++j)
      if (s >> j & 1u) cols.push_back(j);
    Matrix xs(30, static_cast<Eigen::Index>(cols.size()));
    Vector rs(static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) {
      xs.col(static_cast<Eigen::Index>(k)) = x.col(cols[k]);
      rs[static_cast<Eigen::Index>(k)] = row[cols[k]];
    }
    return model::fit_linear(xs, y).predict(span_of(rs));
  };
  const double w[3] = {1.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0};
  Vector expected = Vector::Zero(3);
  for (int i = 0; i < 3; ++i)
    for (unsigned s = 0; s < 8; ++s) {
      if (s >> i & 1u) continue;
      expected[i] += w[std::popcount(s)] * (v(s | 1u << i) - v(s));
    }
  const Matrix phi = exact_shapley(ValueFunction::retrain(x, y), Predictor(model::fit_linear(x, y)),
                                   span_of(row));
  CHECK((phi.row(0).transpose() - expected).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("dummy features get zero") {
  Stream rng(7);
  auto m = random_linear(rng, 5);
  m.coefficients[2] = 0.0;
  const Vector row = testing::random_vector(rng, 5);
  CHECK(linear_shapley(m, span_of(row))[2] == 0.0);
  const Matrix phi = exact_shapley(ValueFunction::marginal(testing::random_matrix(rng, 4, 5)),
                                   Predictor(m), span_of(row));
  CHECK(std::abs(phi(0, 2)) < 1e-12);

  Matrix x = testing::random_matrix(rng, 50, 3);
  x.col(1).setConstant(2.0);
  const Predictor g(model::fit_gbt(x, x.col(0) + x.col(2), Task::kRegression, 0, {10, 3, 0.3, 2, 0}));
  const Vector r2 = testing::random_vector(rng, 3);
  CHECK(exact_shapley(ValueFunction::marginal(x.topRows(5)), g, span_of(r2))(0, 1) == 0.0);
}

TEST_CASE("symmetric features get equal attribution") {
  Stream rng(8);
  auto m = random_linear(rng, 4);
  m.coefficients[3] = m.coefficients[1];
  Vector row = testing::random_vector(rng, 4);
  row[3] = row[1];
  Matrix bg = testing::random_matrix(rng, 3, 4);
  bg.col(3) = bg.col(1);
  const Matrix phi = exact_shapley(ValueFunction::marginal(bg), Predictor(m), span_of(row));
  CHECK(std::abs(phi(0, 1) - phi(0, 3)) < 1e-10);

  // A GBT made symmetric in features 0 and 1 by adding the mirrored trees.
  const Matrix x = testing::random_matrix(rng, 60, 3);
  auto g = model::fit_gbt(x, x.col(0) - 2.0 * x.col(1) * x.col(2), Task::kRegression, 0,
                          {8, 3, 0.2, 3, 0});
  const auto original = g.trees[0];
  for (auto t : original) {
    for (auto& nd : t.nodes)
      if (nd.feature == 0 || nd.feature == 1) nd.feature = 1 - nd.feature;
    g.trees[0].push_back(t);
  }
  Vector r2 = testing::random_vector(rng, 3);
  r2[1] = r2[0];
  Matrix bg2 = testing::random_matrix(rng, 4, 3);
  bg2.col(1) = bg2.col(0);
  const Matrix phi2 = exact_shapley(ValueFunction::marginal(bg2), Predictor(g), span_of(r2));
  CHECK(std::abs(phi2(0, 0) - phi2(0, 1)) < 1e-10);
}

TEST_CASE("feature groups act as players") {
  Stream rng(9);
  const auto m = random_linear(rng, 6);
  const Vector row = testing::random_vector(rng, 6);
  const auto vf = ValueFunction::marginal(m.feature_means.transpose());
  const Groups groups = {{0, 1}, {2}, {3, 4, 5}};
  const Matrix phi = exact_shapley(vf, Predictor(m), span_of(row), &groups);
  REQUIRE(phi.cols() == 3);
  const Vector closed = linear_shapley(m, span_of(row));
  CHECK(std::abs(phi(0, 0) - closed[0] - closed[1]) < 1e-10);
  CHECK(std::abs(phi(0, 2) - closed.tail(3).sum()) < 1e-10);
  const Groups singles = {{0}, {1}, {2}, {3}, {4}, {5}};
  CHECK((exact_shapley(vf, Predictor(m), span_of(row), &singles) -
         exact_shapley(vf, Predictor(m), span_of(row)))
            .cwiseAbs()
            .maxCoeff() < 1e-14);
  const Groups overlapping = {{0, 1}, {1, 2, 3, 4, 5}};
  CHECK_THROWS_AS(exact_shapley(vf, Predictor(m), span_of(row), &overlapping), Error);
}

TEST_CASE("enumeration guards") {
  Stream rng(10);
  const auto big = random_linear(rng, 17);
  const Vector row17 = testing::random_vector(rng, 17);
  CHECK_THROWS_AS(exact_shapley(ValueFunction::marginal(big.feature_means.transpose()),
                                Predictor(big), span_of(row17)),
                  Error);
  const Matrix x = testing::random_matrix(rng, 30, 11);
  const Vector y = testing::random_vector(rng, 30);
  const Vector row11 = testing::random_vector(rng, 11);
  CHECK_THROWS_AS(exact_shapley(ValueFunction::retrain(x, y), Predictor(model::fit_linear(x, y)),
                                span_of(row11)),
                  Error);
  const Matrix x3 = x.leftCols(3);
  const Predictor g(model::fit_gbt(x3, y, Task::kRegression, 0, {2, 2, 0.1, 2, 0}));
  const Vector row3 = testing::random_vector(rng, 3);
  CHECK_THROWS_AS(exact_shapley(ValueFunction::retrain(x3, y), g, span_of(row3)), Error);
  const Vector missing = Vector::Constant(3, kNaN);
  CHECK_THROWS_AS(exact_shapley(ValueFunction::marginal(x3.topRows(1)),
                                Predictor(model::fit_linear(x3, y)), span_of(missing)),
                  Error);
  CHECK_NOTHROW(exact_shapley(ValueFunction::marginal(x3.topRows(1)), g, span_of(missing)));
}

TEST_CASE("global importance") {
  Matrix a(2, 1);
  a << 1, -1;
  CHECK(global_importance(a).values[0] == 1.0);
  CHECK(global_importance(Matrix::Zero(3, 2)).values == Vector::Zero(2));
  Matrix b(2, 3);
  b << 1, -3, 1, -1, 3, 1;
  const auto gi = global_importance(b);
  CHECK(gi.order == std::vector<std::size_t>{1, 0, 2});
}

TEST_CASE("explain agrees between closed form, enumeration and thread counts") {
  Stream rng(11);
  const Matrix x = testing::random_matrix(rng, 40, 4);
  const Vector y = x * Vector::LinSpaced(4, -1.0, 1.0);
  const auto m = model::fit_linear(x, y);
  const auto vf = ValueFunction::marginal(m.feature_means.transpose());
  const Matrix rows = testing::random_matrix(rng, 9, 4);
  std::vector<std::size_t> ids(9);
  std::iota(ids.begin(), ids.end(), 100);
  const Mask flags = Mask::Constant(9, 4, false);
  const auto closed = explain(Predictor(m), vf, rows, ids, flags, testing::names(4));
  const auto enumd =
      explain(Predictor(m), vf, rows, ids, flags, testing::names(4), nullptr, {false, 3});
  REQUIRE(closed.classes() == 1);
  CHECK((closed.stacks[0] - enumd.stacks[0]).cwiseAbs().maxCoeff() < 1e-10);
  const Predictor g(model::fit_gbt(x, y, Task::kRegression, 0, {10, 3, 0.2, 2, 0}));
  const auto one = explain(g, vf, rows, ids, flags, testing::names(4), nullptr, {true, 1});
  const auto four = explain(g, vf, rows, ids, flags, testing::names(4), nullptr, {true, 4});
  CHECK(one.stacks[0] == four.stacks[0]);
  CHECK(one.sample_ids == ids);
}

TEST_CASE("mean of linear attributions equals the shifted-mean identity") {
  Stream rng(12);
  const auto m = random_linear(rng, 3);
  const Matrix rows = testing::random_matrix(rng, 25, 3);
  Matrix phi(25, 3);
  for (int i = 0; i < 25; ++i) {
    const Vector r = rows.row(i).transpose();
    phi.row(i) = linear_shapley(m, span_of(r)).transpose();
  }
  const Vector lhs = phi.colwise().mean().transpose();
  const Vector rhs = (rows.colwise().mean().transpose() - m.feature_means).cwiseProduct(m.coefficients);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("mean-imputed test entries get zero attribution and drop out of importance") {
  Stream rng(13);
  const Matrix x = testing::random_matrix(rng, 40, 2);
  const Vector y = 2.0 * x.col(0) - x.col(1);
  const auto train = apply_mcar(testing::regression_data(x, y), 0.3, 1);
  const Matrix z = testing::random_matrix(rng, 12, 2);
  const auto test = apply_mcar(testing::regression_data(z, Vector::Zero(12)), 0.4, 2);
  const auto imp = impute::fit({impute::Method::kMean}, train);
  const Matrix xt = imp->transform(train).values;
  const Matrix zt = imp->transform(test).values;
  const auto m = model::fit_linear(xt, y);
  std::vector<std::size_t> ids(12);
  std::iota(ids.begin(), ids.end(), 0);
  Mask flags = test.mask();
  for (Eigen::Index i = 0; i < flags.size(); ++i) flags(i) = !flags(i);
  // Background is the imputer's fill row, so imputed entries match it bit for bit.
  const auto phi = explain(Predictor(m), ValueFunction::marginal(imp->column_means().transpose()),
                           zt, ids, flags, testing::names(2));
  const auto gi = global_importance(phi);
  for (std::size_t j = 0; j < 2; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < 12; ++i) {
      if (!test.is_observed(i, j)) CHECK(phi.stacks[0](i, j) == 0.0);
      else s += std::abs(phi.stacks[0](i, j));
    }
    CHECK(std::abs(gi.values[j] - s / 12.0) < 1e-12);
  }
  std::size_t gray = 0;
  for (const auto& r : beeswarm_export(phi)) {
    if (r.was_missing) {
      ++gray;
      CHECK(r.shap_value == 0.0);
    }
  }
  CHECK(gray == test.missing_count());
}

TEST_CASE("beeswarm export shape and colouring") {
  ShapleyMatrix phi;
  phi.stacks = {Matrix(2, 1)};
  phi.stacks[0] << 0.5, -0.5;
  phi.sample_ids = {3, 4};
  phi.feature_names = {"a"};
  phi.feature_values = Matrix(2, 1);
  phi.feature_values << 1.0, 3.0;
  phi.missing_flags = Mask::Constant(2, 1, false);
  const auto recs = beeswarm_export(phi);
  REQUIRE(recs.size() == 2);
  for (const auto& r : recs) {
    CHECK_FALSE(r.was_missing);
    CHECK(r.color >= 0.0);
    CHECK(r.color <= 1.0);
  }
  CHECK(recs[0].color == 0.0);
  CHECK(recs[1].color == 1.0);
  const auto csv = to_csv(phi);
  CHECK(csv.rfind("sample_id,feature,shap_value,feature_value,was_missing,class\n", 0) == 0);
  CHECK(csv.find("3,a,0.5,1,0,0\n") != std::string::npos);
}
