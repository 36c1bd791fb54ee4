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

#include "missshap/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "missshap/error.hpp"

namespace missshap::metrics {

std::string to_string(Criteria c) {
  switch (c) {
    case Criteria::kMse: return "mse";
    case Criteria::kMseShap: return "mse_shap";
    case Criteria::kImputationMse: return "imputation_mse";
  }
  return "?";
}

double prediction_mse(std::span<const double> pred, std::span<const double> truth) {
  require(pred.size() == truth.size(), "prediction_mse: length mismatch");
  require(!pred.empty(), "prediction_mse: empty input");
  double total = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) total += (pred[i] - truth[i]) * (pred[i] - truth[i]);
  return total / static_cast<double>(pred.size());
}

std::optional<double> imputation_mse(const impute::ImputedMatrix& imputed, const MaskedMatrix& masked) {
  require(static_cast<std::size_t>(imputed.values.rows()) == masked.rows() &&
              static_cast<std::size_t>(imputed.values.cols()) == masked.cols(),
          "imputation_mse: shape mismatch");
  const Matrix& truth = GroundTruth::of(masked).values();
  double total = 0.0;
  std::size_t n = 0;
  for (Eigen::Index i = 0; i < truth.rows(); ++i)
    for (Eigen::Index j = 0; j < truth.cols(); ++j)
      if (!masked.mask()(i, j)) {
        const double d = imputed.values(i, j) - truth(i, j);
        total += d * d;
        ++n;
      }
  if (n == 0) return std::nullopt;
  return total / static_cast<double>(n);
}

double mse_shap(const shapley::ShapleyMatrix& method, const shapley::ShapleyMatrix& reference,
                std::optional<std::size_t> class_index) {
  require(method.classes() == reference.classes(), "mse_shap: class count mismatch");
  require(method.rows() == reference.rows() && method.players() == reference.players(),
          "mse_shap: shape mismatch");
  require(method.sample_ids == reference.sample_ids, "mse_shap: sample ids are not aligned");
  require(method.feature_names == reference.feature_names, "mse_shap: feature order differs");
  require(method.rows() > 0 && method.players() > 0 && method.classes() > 0, "mse_shap: empty matrices");
  std::size_t first = 0, last = method.classes();
  if (class_index) {
    require(*class_index < method.classes(), "mse_shap: class index out of range");
    first = *class_index;
    last = first + 1;
  }
  double total = 0.0;
  for (std::size_t k = first; k < last; ++k)
    total += (method.stacks[k] - reference.stacks[k]).squaredNorm();
  return total / static_cast<double>((last - first) * method.rows() * method.players());
}

MetricCell aggregate(std::vector<std::optional<double>> values) {
  require(!values.empty(), "aggregate: need at least one repetition");
  MetricCell cell;
  cell.n_repetitions = values.size();
  cell.per_repetition = values;
  const bool all = std::all_of(values.begin(), values.end(), [](const auto& v) { return v.has_value(); });
  if (!all) return cell;
  // Sorted summation makes the mean independent of repetition order.
  std::vector<double> v;
  for (const auto& x : values) v.push_back(*x);
  std::sort(v.begin(), v.end());
  double sum = 0.0;
  for (double x : v) sum += x;
  const double mean = sum / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  cell.value = mean;
  cell.min = v.front();
  cell.max = v.back();
  cell.std = std::sqrt(ss / static_cast<double>(v.size()));
  return cell;
}

}  // namespace missshap::metrics
