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
#include "missshap/impute.hpp"
#include "missshap/shapley.hpp"

namespace missshap::metrics {

// The only way to read the true values behind unobserved cells.
class GroundTruth {
 public:
  static const DataMatrix& of(const MaskedMatrix& masked) { return masked.base_; }
};

enum class Criteria { kMse, kMseShap, kImputationMse };

std::string to_string(Criteria c);

double prediction_mse(std::span<const double> pred, std::span<const double> truth);

// Mean squared error over the cells that are unobserved in `masked`;
// nullopt when there are none.
std::optional<double> imputation_mse(const impute::ImputedMatrix& imputed, const MaskedMatrix& masked);

// Mean over all m * q entries (and over class stacks unless `class_index` is
// given). Refuses differing shapes or sample-id sequences.
double mse_shap(const shapley::ShapleyMatrix& method, const shapley::ShapleyMatrix& reference,
                std::optional<std::size_t> class_index = std::nullopt);

struct MetricCell {
  std::string dataset;
  double rate = 0.0;
  std::string method;
  Criteria criteria = Criteria::kMse;
  // Mean over available repetitions; nullopt marks an unavailable cell.
  std::optional<double> value;
  std::size_t n_repetitions = 0;
  double min = 0.0;
  double max = 0.0;
  double std = 0.0;  // population standard deviation over repetitions
  std::vector<std::optional<double>> per_repetition;
};

// Any unavailable repetition makes the whole cell unavailable.
MetricCell aggregate(std::vector<std::optional<double>> values);

}  // namespace missshap::metrics
