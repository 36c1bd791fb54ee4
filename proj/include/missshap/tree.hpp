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
#include <optional>
#include <span>
#include <vector>

#include "missshap/data.hpp"
#include "missshap/rng.hpp"

namespace missshap {

// One node of a binary regression tree. Rows with the split feature missing
// (NaN) follow `default_left`.
struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;  // x < threshold goes left
  bool default_left = true;
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf output (also kept on internal nodes)
  std::size_t n_samples = 0;
  // Training-time split gains with missing rows sent left / right.
  double gain_missing_left = 0.0;
  double gain_missing_right = 0.0;
  std::size_t n_missing = 0;

  bool is_leaf() const { return feature < 0; }
};

struct RegressionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double predict(std::span<const double> row) const;
  std::size_t leaf_index(std::span<const double> row) const;
  int depth() const;
};

struct TreeParams {
  int max_depth = 3;
  std::size_t min_samples_leaf = 1;
  // Features considered per node; 0 means all.
  std::size_t max_features = 0;
};

// Greedy least-squares tree on `targets` over `rows` of `x`. NaN entries of
// `x` are missing: split candidates ignore them and each split stores the
// direction for missing rows that gives the larger variance reduction. Gain
// ties between features go to the lowest feature index. `rng` is required
// when max_features restricts the candidate set.
RegressionTree build_tree(const Matrix& x, std::span<const double> targets,
                          std::span<const std::size_t> rows, const TreeParams& params,
                          Stream* rng = nullptr);

}  // namespace missshap
