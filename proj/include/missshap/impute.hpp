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
#include <memory>
#include <string>
#include <vector>

#include "missshap/data.hpp"

namespace missshap::impute {

enum class Method { kMean, kMice, kDimv, kMissForest, kSoftImpute };

std::string to_string(Method m);
Method parse_method(const std::string& s);

struct MiceParams {
  double tol = 1e-4;
  int max_sweeps = 20;
  double ridge = 1e-3;
};

struct DimvParams {
  double ridge = 0.1;
};

struct MissForestParams {
  int n_trees = 50;
  int max_depth = 8;
  int max_sweeps = 10;
};

struct SoftImputeParams {
  // Shrinkage applied to every singular value. Negative means "derive from
  // data": lambda_fraction * (largest singular value of the mean-filled
  // training matrix).
  double shrinkage = -1.0;
  double lambda_fraction = 0.1;
  double tol = 1e-5;
  int max_iters = 200;
  // Keep at most this many singular values (0 = no cap). With shrinkage 0 and
  // a cap this is hard-impute.
  int max_rank = 0;
};

struct ImputerSpec {
  Method method = Method::kMean;
  MiceParams mice;
  DimvParams dimv;
  MissForestParams missforest;
  SoftImputeParams softimpute;
  std::uint64_t seed = 0;

  // Throws on out-of-range hyperparameters of the selected method.
  void validate() const;
};

struct Diagnostics {
  int iterations = 0;
  bool converged = true;
  // Per-iteration convergence quantity (max change for MICE, normalized
  // squared difference for missForest, relative Frobenius change for
  // SOFT-IMPUTE).
  std::vector<double> trace;
  // SOFT-IMPUTE only: 0.5 * ||P_obs(X - Z)||_F^2 + lambda * ||Z||_*, one entry
  // for the starting point and one per iteration.
  std::vector<double> objective;
  std::string warning;
};

struct ImputedMatrix {
  Matrix values;
  Mask source_mask;
  Method method = Method::kMean;
  Diagnostics diagnostics;
};

class FittedImputer {
 public:
  virtual ~FittedImputer() = default;
  virtual Method method() const = 0;
  // Column fill statistics learned on the training data.
  virtual const Vector& column_means() const = 0;
  // Training-time diagnostics.
  virtual const Diagnostics& fit_diagnostics() const = 0;
  virtual ImputedMatrix transform(const MaskedMatrix& data) const = 0;
};

// Every column needs at least one observed training entry.
std::shared_ptr<const FittedImputer> fit(const ImputerSpec& spec, const MaskedMatrix& train);

inline ImputedMatrix transform(const FittedImputer& f, const MaskedMatrix& data) {
  return f.transform(data);
}

// 0.5 * ||P_obs(X - Z)||_F^2 + lambda * ||Z||_*.
double softimpute_objective(const Matrix& observed, const Mask& mask, const Matrix& z,
                            double lambda);

}  // namespace missshap::impute
