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

#include <optional>
#include <string>
#include <vector>

#include "missshap/data.hpp"
#include "missshap/model.hpp"

namespace missshap::shapley {

inline constexpr std::size_t kMaxPlayers = 16;
inline constexpr std::size_t kMaxRetrainPlayers = 10;

// w(s) = s! (p - s - 1)! / p! for coalition sizes s = 0 .. p-1, evaluated in
// log-factorial space.
class CoalitionWeights {
 public:
  explicit CoalitionWeights(std::size_t p);
  std::size_t players() const { return p_; }
  double operator()(std::size_t s) const { return w_[s]; }
  // sum_s C(p-1, s) w(s); equals 1 up to rounding.
  double total() const;

 private:
  std::size_t p_;
  std::vector<double> w_;
};

enum class Mode { kMarginal, kRetrain };

// How v(S) is realized.
//  - marginal: out-of-coalition features take background values; v(S) is the
//    mean model output over the background rows.
//  - retrain: the linear family is refit on the coalition's columns of the
//    training data and evaluated on the explained row's restriction.
struct ValueFunction {
  Mode mode = Mode::kMarginal;
  Matrix background;     // marginal: one or more complete rows
  Matrix train_x;        // retrain
  Vector train_y;        // retrain
  double retrain_ridge = 0.0;

  static ValueFunction marginal(Matrix background);
  static ValueFunction retrain(Matrix x, Vector y, double ridge = 0.0);
};

// Features explained jointly; each group acts as one player.
using Groups = std::vector<std::vector<std::size_t>>;

// phi(k, i): Shapley value of player i for model output k (one output for
// regression, one per class for classification). Exact 2^q enumeration.
// Rows with NaN entries are only accepted when the model routes missing
// values itself; NaN then stays in the coalition row as-is.
Matrix exact_shapley(const ValueFunction& vf, const model::Predictor& model,
                     std::span<const double> row, const Groups* groups = nullptr);

// phi_i = (row_i - feature_mean_i) * beta_i.
Vector linear_shapley(const model::LinearModel& model, std::span<const double> row);

// Closed form against an arbitrary single reference row: phi_j = (x_j - r_j) beta_j.
// Equals marginal enumeration with that row as the only background row.
Vector linear_shapley(const model::LinearModel& model, std::span<const double> row,
                      std::span<const double> reference);

// m x q attribution matrices, one per model output ("class stack").
struct ShapleyMatrix {
  std::vector<Matrix> stacks;
  std::vector<std::size_t> sample_ids;
  std::vector<std::string> feature_names;  // one per player
  Matrix feature_values;                   // m x q, value shown for colouring
  Mask missing_flags;                      // m x q, true = missing pre-imputation

  std::size_t rows() const { return sample_ids.size(); }
  std::size_t players() const { return feature_names.size(); }
  std::size_t classes() const { return stacks.size(); }
};

struct ExplainOptions {
  bool prefer_closed_form = true;  // linear models with one background row
  std::size_t threads = 1;
};

// Explains each row of `rows`; `missing_flags` marks cells that were missing
// before imputation. With groups, feature_values holds the group mean and a
// player is flagged missing when any member was.
ShapleyMatrix explain(const model::Predictor& model, const ValueFunction& vf, const Matrix& rows,
                      const std::vector<std::size_t>& sample_ids, const Mask& missing_flags,
                      const std::vector<std::string>& feature_names,
                      const Groups* groups = nullptr, const ExplainOptions& options = {});

struct GlobalImportance {
  Vector values;                    // mean |phi| per player
  std::vector<std::size_t> order;   // descending importance, ties by index
};

GlobalImportance global_importance(const ShapleyMatrix& phi, std::size_t class_index = 0);
GlobalImportance global_importance(const Matrix& phi);

struct BeeswarmRecord {
  std::size_t sample_id;
  std::size_t feature;
  std::size_t rank;      // position of the feature in importance order
  double shap_value;
  double color;          // feature value scaled to [0, 1] over observed entries
  bool was_missing;
};

// Records grouped by feature in importance order, samples in row order.
std::vector<BeeswarmRecord> beeswarm_export(const ShapleyMatrix& phi, std::size_t class_index = 0);

// Columns: sample_id,feature,shap_value,feature_value,was_missing,class
std::string to_csv(const ShapleyMatrix& phi);

}  // namespace missshap::shapley
