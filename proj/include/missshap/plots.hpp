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
#include <string>
#include <vector>

#include "missshap/shapley.hpp"

namespace missshap::plots {

// Horizontal bars in descending importance; ties keep feature-index order.
std::string importance_bar_svg(const shapley::GlobalImportance& importance,
                               const std::vector<std::string>& feature_names,
                               const std::string& title);

// One band per feature ordered by importance. Dot x is the Shapley value on a
// scale symmetric about zero; missing entries are drawn gray. Vertical jitter
// is a pure function of (jitter_seed, sample id, feature).
std::string beeswarm_svg(const shapley::ShapleyMatrix& phi, std::size_t class_index,
                         const std::string& title, std::uint64_t jitter_seed);

struct Series {
  std::string label;
  shapley::GlobalImportance importance;
};

// Grouped bars: one group per feature (ordered by the first series), one bar
// per series.
std::string comparison_svg(const std::vector<Series>& series,
                           const std::vector<std::string>& feature_names,
                           const std::string& title);

// Bar label: up to three decimals, trailing zeros trimmed, at least one decimal.
std::string label(double v);

}  // namespace missshap::plots
