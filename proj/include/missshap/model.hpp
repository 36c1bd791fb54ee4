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
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "missshap/data.hpp"
#include "missshap/tree.hpp"

namespace missshap::model {

// y = intercept + coefficients . x. feature_means holds E[x] over the
// training inputs; the closed-form Shapley values are taken around it.
struct LinearModel {
  double intercept = 0.0;
  Vector coefficients;
  Vector feature_means;

  double predict(std::span<const double> row) const;
};

// Least squares with intercept; ridge penalizes the slopes only. With
// ridge == 0 a singular design is an error.
LinearModel fit_linear(const Matrix& x, const Vector& y, double ridge = 0.0);

// One linear model per class on 0/1 indicator targets; outputs are the raw
// per-class scores.
struct LinearOvrModel {
  std::vector<LinearModel> classes;
};

LinearOvrModel fit_linear_ovr(const Matrix& x, const Vector& labels, int num_classes,
                              double ridge = 0.0);

struct GbtParams {
  int n_trees = 100;
  int max_depth = 3;
  double learning_rate = 0.1;
  std::size_t min_samples_leaf = 5;
  std::uint64_t seed = 0;
};

// Gradient-boosted regression trees. Regression uses squared loss with
// base_score = mean(y). Classification boosts one logistic one-vs-rest
// sequence per class and turns the per-class margins into probabilities
// with a softmax.
struct GbtModel {
  Task task = Task::kRegression;
  double learning_rate = 0.1;
  std::vector<double> base_scores;               // one per output sequence
  std::vector<std::vector<RegressionTree>> trees;  // [sequence][tree]

  std::size_t num_outputs() const { return base_scores.size(); }
  // Raw additive score per sequence.
  void margins(std::span<const double> row, std::span<double> out) const;
  void predict(std::span<const double> row, std::span<double> out) const;
};

// x may contain NaN for missing entries. Features that are entirely missing
// are never chosen as splits.
GbtModel fit_gbt(const Matrix& x, const Vector& y, Task task, int num_classes,
                 const GbtParams& params);

// Training-set mean squared error of a regression GBT after the first k trees.
double gbt_training_mse(const GbtModel& model, const Matrix& x, const Vector& y, int k);

struct ForestParams {
  int n_trees = 50;
  int max_depth = 8;
  std::size_t min_samples_leaf = 1;
  std::size_t max_features = 0;  // 0 means max(1, p / 3)
  std::uint64_t seed = 0;
};

// Bagged regression trees with per-node feature subsampling.
struct RandomForest {
  std::vector<RegressionTree> trees;

  double predict(std::span<const double> row) const;
};

RandomForest fit_forest(const Matrix& x, const Vector& y, const ForestParams& params);

// Uniform prediction surface over the downstream model families.
class Predictor {
 public:
  using Variant = std::variant<LinearModel, LinearOvrModel, GbtModel>;

  Predictor(LinearModel m) : model_(std::move(m)) {}
  Predictor(LinearOvrModel m) : model_(std::move(m)) {}
  Predictor(GbtModel m) : model_(std::move(m)) {}

  std::size_t num_outputs() const;
  bool accepts_missing() const { return std::holds_alternative<GbtModel>(model_); }
  bool is_linear() const { return !accepts_missing(); }
  Task task() const;

  // Throws when a linear model sees a missing (NaN) entry.
  void predict(std::span<const double> row, std::span<double> out) const;
  std::vector<double> predict(std::span<const double> row) const;
  // Unchecked variant used in Shapley inner loops (no NaN scan).
  void predict_unchecked(std::span<const double> row, std::span<double> out) const;

  const Variant& variant() const { return model_; }

 private:
  Variant model_;
};

// JSON text schema; see README for the field layout.
std::string to_json(const Predictor& model, const std::vector<std::string>& feature_names,
                    const Matrix* background = nullptr);

struct LoadedModel {
  Predictor predictor;
  std::vector<std::string> feature_names;
  Matrix background;  // empty when the file carries none
};

LoadedModel from_json(const std::string& text);

}  // namespace missshap::model
