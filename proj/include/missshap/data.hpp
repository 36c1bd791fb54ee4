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

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace missshap {

namespace metrics {
class GroundTruth;
}

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Mask = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

enum class Task { kRegression, kClassification };

std::string to_string(Task task);
Task parse_task(const std::string& s);

// Complete numeric table plus target. Invariants are checked on construction:
// all values finite, distinct feature names, integer class codes in [0, C)
// for classification.
class DataMatrix {
 public:
  DataMatrix(Matrix values, Vector target, std::vector<std::string> feature_names,
             Task task);

  const Matrix& values() const { return values_; }
  const Vector& target() const { return target_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  Task task() const { return task_; }
  std::size_t rows() const { return static_cast<std::size_t>(values_.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(values_.cols()); }
  // Number of classes (max code + 1); 0 for regression.
  int num_classes() const { return num_classes_; }

  DataMatrix select_rows(const std::vector<std::size_t>& rows) const;
  DataMatrix with_values(Matrix values) const;
  DataMatrix with_target(Vector target) const;

 private:
  Matrix values_;
  Vector target_;
  std::vector<std::string> feature_names_;
  Task task_;
  int num_classes_ = 0;
};

// DataMatrix with a missingness mask (true = observed). The values behind
// unobserved cells are kept for evaluation but only metrics::GroundTruth can
// read them.
class MaskedMatrix {
 public:
  MaskedMatrix(DataMatrix base, Mask mask);
  // Fully observed view.
  explicit MaskedMatrix(DataMatrix base);

  std::size_t rows() const { return base_.rows(); }
  std::size_t cols() const { return base_.cols(); }
  const Mask& mask() const { return mask_; }
  bool is_observed(std::size_t row, std::size_t col) const { return mask_(row, col); }
  // nullopt for unobserved cells.
  std::optional<double> value(std::size_t row, std::size_t col) const;
  // Values with NaN in unobserved cells.
  Matrix observed_values() const;
  const Vector& target() const { return base_.target(); }
  const std::vector<std::string>& feature_names() const { return base_.feature_names(); }
  Task task() const { return base_.task(); }
  int num_classes() const { return base_.num_classes(); }
  std::size_t missing_count() const { return missing_; }
  // missing_count / (rows * cols).
  double rate() const;
  std::vector<std::size_t> fully_missing_rows() const;

 private:
  friend class metrics::GroundTruth;

  DataMatrix base_;
  Mask mask_;
  std::size_t missing_ = 0;
};

struct Standardizer {
  Vector mean;
  Vector scale;
  std::vector<bool> zero_variance;

  Matrix apply(const Matrix& x) const;
  Matrix inverse(const Matrix& x) const;
};

// Population (divide-by-n) standard deviation. Zero-variance columns get
// scale 1 and are flagged.
Standardizer fit_standardizer(const Matrix& train);
Standardizer fit_standardizer(const DataMatrix& train);
DataMatrix apply_standardizer(const Standardizer& s, const DataMatrix& data);

struct SplitSpec {
  double test_fraction = 0.2;
  std::uint64_t seed = 0;
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// test size = round(test_fraction * n); both index lists ascending.
SplitIndices split_indices(std::size_t n, const SplitSpec& spec);
std::pair<DataMatrix, DataMatrix> split(const DataMatrix& data, const SplitSpec& spec);

// Exact-count MCAR: floor(rate * n * p) cells chosen uniformly without
// replacement become unobserved.
std::size_t mcar_missing_count(std::size_t n, std::size_t p, double rate);
MaskedMatrix apply_mcar(const DataMatrix& data, double rate, std::uint64_t seed);

// Obs set per column.
std::vector<std::vector<std::size_t>> observed_rows(const MaskedMatrix& masked);

DataMatrix load_csv(const std::string& path, const std::string& target_column, Task task);
DataMatrix parse_csv(const std::string& text, const std::string& target_column, Task task);
void write_csv(const std::string& path, const Matrix& values,
               const std::vector<std::string>& feature_names,
               const std::optional<Vector>& target = std::nullopt,
               const std::string& target_name = "target");

std::string mask_to_csv(const Mask& mask);
Mask mask_from_csv(const std::string& text);

// Shortest round-trip decimal representation.
std::string format_double(double v);

}  // namespace missshap
