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

#include "missshap/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "missshap/error.hpp"

namespace missshap {

double RegressionTree::predict(std::span<const double> row) const {
  return nodes[leaf_index(row)].value;
}

std::size_t RegressionTree::leaf_index(std::span<const double> row) const {
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const auto& n = nodes[i];
    const double v = row[static_cast<std::size_t>(n.feature)];
    const bool go_left = std::isnan(v) ? n.default_left : v < n.threshold;
    i = static_cast<std::size_t>(go_left ? n.left : n.right);
  }
  return i;
}

int RegressionTree::depth() const {
  std::vector<int> d(nodes.size(), 0);
  int best = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].is_leaf()) continue;
    d[static_cast<std::size_t>(nodes[i].left)] = d[i] + 1;
    d[static_cast<std::size_t>(nodes[i].right)] = d[i] + 1;
    best = std::max(best, d[i] + 1);
  }
  return best;
}

namespace {

struct SplitChoice {
  int feature = -1;
  double threshold = 0.0;
  bool default_left = true;
  double gain = 0.0;
  double gain_missing_left = 0.0;
  double gain_missing_right = 0.0;
  std::size_t n_missing = 0;
};

class Builder {
 public:
  Builder(const Matrix& x, std::span<const double> targets, const TreeParams& params, Stream* rng)
      : x_(x), y_(targets), params_(params), rng_(rng) {}

  RegressionTree build(std::vector<std::size_t> rows) {
    tree_.nodes.clear();
    grow(std::move(rows), 0);
    return std::move(tree_);
  }

 private:
  int grow(std::vector<std::size_t> rows, int depth) {
    const int id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    double sum = 0.0;
    for (auto r : rows) sum += y_[r];
    {
      auto& node = tree_.nodes.back();
      node.n_samples = rows.size();
      node.value = rows.empty() ? 0.0 : sum / static_cast<double>(rows.size());
    }
    if (depth >= params_.max_depth || rows.size() < 2 * std::max<std::size_t>(1, params_.min_samples_leaf))
      return id;
    const SplitChoice best = find_split(rows, sum);
    if (best.feature < 0) return id;

    std::vector<std::size_t> left, right;
    for (auto r : rows) {
      const double v = x_(static_cast<Eigen::Index>(r), best.feature);
      const bool go_left = std::isnan(v) ? best.default_left : v < best.threshold;
      (go_left ? left : right).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    {
      auto& node = tree_.nodes[static_cast<std::size_t>(id)];
      node.feature = best.feature;
      node.threshold = best.threshold;
      node.default_left = best.default_left;
      node.gain_missing_left = best.gain_missing_left;
      node.gain_missing_right = best.gain_missing_right;
      node.n_missing = best.n_missing;
    }
    const int l = grow(std::move(left), depth + 1);
    const int r = grow(std::move(right), depth + 1);
    tree_.nodes[static_cast<std::size_t>(id)].left = l;
    tree_.nodes[static_cast<std::size_t>(id)].right = r;
    return id;
  }

  std::vector<int> candidate_features() {
    const auto p = static_cast<std::size_t>(x_.cols());
    std::vector<int> feats(p);
    std::iota(feats.begin(), feats.end(), 0);
    if (params_.max_features == 0 || params_.max_features >= p) return feats;
    require(rng_ != nullptr, "build_tree: max_features requires an rng");
    auto picked = rng_->sample_without_replacement(p, params_.max_features);
    std::sort(picked.begin(), picked.end());
    feats.assign(picked.begin(), picked.end());
    return feats;
  }

  SplitChoice find_split(const std::vector<std::size_t>& rows, double total_sum) {
    const auto n_total = static_cast<double>(rows.size());
    const double parent_score = total_sum * total_sum / n_total;
    const std::size_t min_leaf = std::max<std::size_t>(1, params_.min_samples_leaf);
    SplitChoice best;
    std::vector<std::pair<double, double>> present;
    present.reserve(rows.size());
    for (int f : candidate_features()) {
      present.clear();
      double miss_sum = 0.0;
      std::size_t miss_n = 0;
      for (auto r : rows) {
        const double v = x_(static_cast<Eigen::Index>(r), f);
        if (std::isnan(v)) {
          miss_sum += y_[r];
          ++miss_n;
        } else {
          present.emplace_back(v, y_[r]);
        }
      }
      if (present.size() < 2) continue;
      std::sort(present.begin(), present.end());
      const double present_sum = total_sum - miss_sum;
      double prefix = 0.0;
      for (std::size_t k = 0; k + 1 < present.size(); ++k) {
        prefix += present[k].second;
        if (present[k].first == present[k + 1].first) continue;
        const std::size_t nl = k + 1;
        const std::size_t nr = present.size() - nl;
        const double suffix = present_sum - prefix;
        auto score = [&](double sl, std::size_t cl, double sr, std::size_t cr) {
          if (cl < min_leaf || cr < min_leaf) return -1.0;
          return sl * sl / static_cast<double>(cl) + sr * sr / static_cast<double>(cr) - parent_score;
        };
        const double g_left = score(prefix + miss_sum, nl + miss_n, suffix, nr);
        const double g_right = score(prefix, nl, suffix + miss_sum, nr + miss_n);
        bool default_left;
        if (miss_n == 0) {
          default_left = nl >= nr;
        } else {
          default_left = g_left >= g_right;
        }
        const double gain = std::max(g_left, g_right);
        if (gain > best.gain + 1e-12 * std::max(1.0, std::abs(parent_score))) {
          best.feature = f;
          // Midpoint; fall back to the upper value if the midpoint rounds down.
          double t = 0.5 * (present[k].first + present[k + 1].first);
          if (!(t > present[k].first)) t = present[k + 1].first;
          best.threshold = t;
          best.default_left = default_left;
          best.gain = gain;
          best.gain_missing_left = g_left;
          best.gain_missing_right = g_right;
          best.n_missing = miss_n;
        }
      }
    }
    return best;
  }

  const Matrix& x_;
  std::span<const double> y_;
  TreeParams params_;
  Stream* rng_;
  RegressionTree tree_;
};

}  // namespace

RegressionTree build_tree(const Matrix& x, std::span<const double> targets,
                          std::span<const std::size_t> rows, const TreeParams& params,
                          Stream* rng) {
  require(targets.size() == static_cast<std::size_t>(x.rows()), "build_tree: target length mismatch");
  Builder b(x, targets, params, rng);
  return b.build(std::vector<std::size_t>(rows.begin(), rows.end()));
}

}  // namespace missshap
