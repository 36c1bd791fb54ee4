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

#include "missshap/shapley.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <thread>

#include "missshap/error.hpp"

namespace missshap::shapley {

CoalitionWeights::CoalitionWeights(std::size_t p) : p_(p) {
  require(p >= 1, "CoalitionWeights: p must be at least 1");
  w_.resize(p);
  const double log_p_fact = std::lgamma(static_cast<double>(p) + 1.0);
  for (std::size_t s = 0; s < p; ++s)
    w_[s] = std::exp(std::lgamma(static_cast<double>(s) + 1.0) +
                     std::lgamma(static_cast<double>(p - s)) - log_p_fact);
}

double CoalitionWeights::total() const {
  double total = 0.0;
  double binom = 1.0;  // C(p-1, s)
  for (std::size_t s = 0; s < p_; ++s) {
    total += binom * w_[s];
    binom = binom * static_cast<double>(p_ - 1 - s) / static_cast<double>(s + 1);
  }
  return total;
}

ValueFunction ValueFunction::marginal(Matrix background) {
  ValueFunction vf;
  vf.mode = Mode::kMarginal;
  vf.background = std::move(background);
  return vf;
}

ValueFunction ValueFunction::retrain(Matrix x, Vector y, double ridge) {
  ValueFunction vf;
  vf.mode = Mode::kRetrain;
  vf.train_x = std::move(x);
  vf.train_y = std::move(y);
  vf.retrain_ridge = ridge;
  return vf;
}

namespace {

Groups singleton_groups(std::size_t p) {
  Groups g(p);
  for (std::size_t j = 0; j < p; ++j) g[j] = {j};
  return g;
}

void check_groups(const Groups& groups, std::size_t p) {
  std::vector<int> seen(p, 0);
  for (const auto& g : groups) {
    require(!g.empty(), "shapley: empty feature group");
    for (auto j : g) {
      require(j < p, "shapley: group member out of range");
      require(seen[j]++ == 0, "shapley: feature appears in two groups");
    }
  }
}

// phi from the table of coalition values v[S * k_out + k].
Matrix combine(const std::vector<double>& v, std::size_t q, std::size_t k_out) {
  const CoalitionWeights w(q);
  Matrix phi = Matrix::Zero(static_cast<Eigen::Index>(k_out), static_cast<Eigen::Index>(q));
  const std::size_t n_sets = std::size_t{1} << q;
  for (std::size_t i = 0; i < q; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    for (std::size_t s = 0; s < n_sets; ++s) {
      if (s & bit) continue;
      const double weight = w(static_cast<std::size_t>(std::popcount(s)));
      for (std::size_t k = 0; k < k_out; ++k)
        phi(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) +=
            weight * (v[(s | bit) * k_out + k] - v[s * k_out + k]);
    }
  }
  return phi;
}

Matrix marginal_shapley(const ValueFunction& vf, const model::Predictor& model,
                        std::span<const double> row, const Groups& groups) {
  const std::size_t p = row.size();
  const std::size_t q = groups.size();
  const std::size_t k_out = model.num_outputs();
  require(vf.background.rows() >= 1, "shapley: marginal mode needs at least one background row");
  require(static_cast<std::size_t>(vf.background.cols()) == p, "shapley: background width mismatch");
  if (!model.accepts_missing())
    require(vf.background.allFinite(), "shapley: background must be complete for this model");
  const std::size_t n_sets = std::size_t{1} << q;
  std::vector<double> v(n_sets * k_out, 0.0);
  std::vector<double> hybrid(p), out(k_out);
  const double inv_b = 1.0 / static_cast<double>(vf.background.rows());
  for (Eigen::Index b = 0; b < vf.background.rows(); ++b) {
    for (std::size_t s = 0; s < n_sets; ++s) {
      for (std::size_t j = 0; j < p; ++j) hybrid[j] = vf.background(b, static_cast<Eigen::Index>(j));
      for (std::size_t g = 0; g < q; ++g)
        if (s & (std::size_t{1} << g))
          for (auto j : groups[g]) hybrid[j] = row[j];
      model.predict_unchecked(hybrid, out);
      for (std::size_t k = 0; k < k_out; ++k) v[s * k_out + k] += inv_b * out[k];
    }
  }
  return combine(v, q, k_out);
}

Matrix retrain_shapley(const ValueFunction& vf, const model::Predictor& model,
                       std::span<const double> row, const Groups& groups) {
  const auto& var = model.variant();
  const bool linear = std::holds_alternative<model::LinearModel>(var);
  const bool ovr = std::holds_alternative<model::LinearOvrModel>(var);
  if (!linear && !ovr) fail(ErrorKind::kInvalidArgument, "shapley: retrain mode needs a linear model family");
  const std::size_t q = groups.size();
  require(q <= kMaxRetrainPlayers, "shapley: retrain mode supports at most 10 players");
  require(static_cast<std::size_t>(vf.train_x.cols()) == row.size(), "shapley: training width mismatch");
  require(vf.train_x.rows() == vf.train_y.size() && vf.train_x.rows() > 0, "shapley: bad training data");
  const std::size_t k_out = model.num_outputs();
  std::vector<Vector> targets;
  if (linear) {
    targets.push_back(vf.train_y);
  } else {
    for (std::size_t c = 0; c < k_out; ++c)
      targets.push_back((vf.train_y.array() == static_cast<double>(c)).cast<double>());
  }
  const std::size_t n_sets = std::size_t{1} << q;
  std::vector<double> v(n_sets * k_out, 0.0);
  for (std::size_t s = 0; s < n_sets; ++s) {
    std::vector<std::size_t> cols;
    for (std::size_t g = 0; g < q; ++g)
      if (s & (std::size_t{1} << g)) cols.insert(cols.end(), groups[g].begin(), groups[g].end());
    std::sort(cols.begin(), cols.end());
    Matrix xs(vf.train_x.rows(), static_cast<Eigen::Index>(cols.size()));
    std::vector<double> rs(cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
      xs.col(static_cast<Eigen::Index>(c)) = vf.train_x.col(static_cast<Eigen::Index>(cols[c]));
      rs[c] = row[cols[c]];
    }
    for (std::size_t k = 0; k < k_out; ++k)
      v[s * k_out + k] = model::fit_linear(xs, targets[k], vf.retrain_ridge).predict(rs);
  }
  return combine(v, q, k_out);
}

bool closed_form_applies(const model::Predictor& model, const ValueFunction& vf, const Groups* groups) {
  if (groups || vf.mode != Mode::kMarginal || vf.background.rows() != 1) return false;
  const model::LinearModel* first = nullptr;
  if (auto* m = std::get_if<model::LinearModel>(&model.variant())) first = m;
  if (auto* m = std::get_if<model::LinearOvrModel>(&model.variant()))
    first = m->classes.empty() ? nullptr : &m->classes.front();
  return first != nullptr;
}

}  // namespace

Matrix exact_shapley(const ValueFunction& vf, const model::Predictor& model,
                     std::span<const double> row, const Groups* groups) {
  const std::size_t p = row.size();
  const Groups g = groups ? *groups : singleton_groups(p);
  check_groups(g, p);
  require(!g.empty(), "shapley: nothing to explain");
  require(g.size() <= kMaxPlayers, "shapley: exact enumeration supports at most 16 players");
  const bool has_missing = std::any_of(row.begin(), row.end(), [](double v) { return std::isnan(v); });
  if (has_missing && !model.accepts_missing())
    fail(ErrorKind::kInvalidArgument, "shapley: row has missing entries and the model cannot route them");
  Matrix phi = vf.mode == Mode::kMarginal ? marginal_shapley(vf, model, row, g)
                                          : retrain_shapley(vf, model, row, g);
  if (!phi.allFinite()) fail(ErrorKind::kNumeric, "shapley: non-finite attribution");
  return phi;
}

Vector linear_shapley(const model::LinearModel& model, std::span<const double> row) {
  return linear_shapley(model, row,
                        {model.feature_means.data(), static_cast<std::size_t>(model.feature_means.size())});
}

Vector linear_shapley(const model::LinearModel& model, std::span<const double> row,
                      std::span<const double> reference) {
  require(row.size() == static_cast<std::size_t>(model.coefficients.size()) &&
              reference.size() == row.size(),
          "linear_shapley: row length mismatch");
  Vector phi(model.coefficients.size());
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (std::isnan(row[j])) fail(ErrorKind::kInvalidArgument, "linear_shapley: row has a missing entry");
    const auto jj = static_cast<Eigen::Index>(j);
    phi[jj] = (row[j] - reference[j]) * model.coefficients[jj];
  }
  return phi;
}

ShapleyMatrix explain(const model::Predictor& model, const ValueFunction& vf, const Matrix& rows,
                      const std::vector<std::size_t>& sample_ids, const Mask& missing_flags,
                      const std::vector<std::string>& feature_names, const Groups* groups,
                      const ExplainOptions& options) {
  const auto m = static_cast<std::size_t>(rows.rows());
  const auto p = static_cast<std::size_t>(rows.cols());
  require(sample_ids.size() == m, "explain: sample_ids length mismatch");
  require(missing_flags.rows() == rows.rows() && missing_flags.cols() == rows.cols(),
          "explain: missing_flags shape mismatch");
  require(feature_names.size() == p, "explain: feature_names length mismatch");
  const Groups g = groups ? *groups : singleton_groups(p);
  check_groups(g, p);
  const std::size_t q = g.size();
  const std::size_t k_out = model.num_outputs();

  ShapleyMatrix out;
  out.sample_ids = sample_ids;
  out.stacks.assign(k_out, Matrix::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(q)));
  out.feature_values.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(q));
  out.missing_flags.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(q));
  for (std::size_t gi = 0; gi < q; ++gi) {
    if (groups) {
      std::string name;
      for (auto j : g[gi]) name += (name.empty() ? "" : "+") + feature_names[j];
      out.feature_names.push_back(name);
    } else {
      out.feature_names.push_back(feature_names[g[gi][0]]);
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t gi = 0; gi < q; ++gi) {
      double sum = 0.0;
      std::size_t n = 0;
      bool miss = false;
      for (auto j : g[gi]) {
        const double v = rows(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        miss = miss || missing_flags(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (!std::isnan(v)) {
          sum += v;
          ++n;
        }
      }
      out.feature_values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(gi)) =
          n ? sum / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN();
      out.missing_flags(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(gi)) = miss;
    }
  }

  const bool closed = options.prefer_closed_form && closed_form_applies(model, vf, groups);
  using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const RowMatrix rr = rows;
  const Vector reference = closed ? Vector(vf.background.row(0).transpose()) : Vector();
  const std::span<const double> ref(reference.data(), static_cast<std::size_t>(reference.size()));
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const std::span<const double> row(rr.data() + i * p, p);
      if (closed) {
        const auto& var = model.variant();
        if (auto* lm = std::get_if<model::LinearModel>(&var)) {
          out.stacks[0].row(static_cast<Eigen::Index>(i)) = linear_shapley(*lm, row, ref).transpose();
        } else {
          const auto& ovr = std::get<model::LinearOvrModel>(var);
          for (std::size_t k = 0; k < k_out; ++k)
            out.stacks[k].row(static_cast<Eigen::Index>(i)) = linear_shapley(ovr.classes[k], row, ref).transpose();
        }
      } else {
        const Matrix phi = exact_shapley(vf, model, row, groups ? &g : nullptr);
        for (std::size_t k = 0; k < k_out; ++k)
          out.stacks[k].row(static_cast<Eigen::Index>(i)) = phi.row(static_cast<Eigen::Index>(k));
      }
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(options.threads, m));
  if (threads == 1) {
    work(0, m);
  } else {
    // Disjoint row slices; results do not depend on the schedule.
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    const std::size_t chunk = (m + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          work(t * chunk, std::min(m, (t + 1) * chunk));
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  return out;
}

GlobalImportance global_importance(const Matrix& phi) {
  require(phi.rows() >= 1, "global_importance: no explained rows");
  GlobalImportance gi;
  gi.values = phi.cwiseAbs().colwise().sum().transpose() / static_cast<double>(phi.rows());
  gi.order.resize(static_cast<std::size_t>(phi.cols()));
  std::iota(gi.order.begin(), gi.order.end(), std::size_t{0});
  std::stable_sort(gi.order.begin(), gi.order.end(), [&](std::size_t a, std::size_t b) {
    return gi.values[static_cast<Eigen::Index>(a)] > gi.values[static_cast<Eigen::Index>(b)];
  });
  return gi;
}

GlobalImportance global_importance(const ShapleyMatrix& phi, std::size_t class_index) {
  require(class_index < phi.classes(), "global_importance: class index out of range");
  return global_importance(phi.stacks[class_index]);
}

std::vector<BeeswarmRecord> beeswarm_export(const ShapleyMatrix& phi, std::size_t class_index) {
  const auto gi = global_importance(phi, class_index);
  const Matrix& s = phi.stacks[class_index];
  std::vector<BeeswarmRecord> out;
  out.reserve(phi.rows() * phi.players());
  for (std::size_t rank = 0; rank < gi.order.size(); ++rank) {
    const auto j = static_cast<Eigen::Index>(gi.order[rank]);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
      const double v = phi.feature_values(i, j);
      if (phi.missing_flags(i, j) || std::isnan(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
      const double v = phi.feature_values(i, j);
      const bool miss = phi.missing_flags(i, j);
      double color = 0.5;
      if (!miss && !std::isnan(v) && hi > lo) color = (v - lo) / (hi - lo);
      out.push_back({phi.sample_ids[static_cast<std::size_t>(i)], gi.order[rank], rank, s(i, j), color, miss});
    }
  }
  return out;
}

std::string to_csv(const ShapleyMatrix& phi) {
  std::string out = "sample_id,feature,shap_value,feature_value,was_missing,class\n";
  for (std::size_t k = 0; k < phi.classes(); ++k)
    for (std::size_t i = 0; i < phi.rows(); ++i)
      for (std::size_t j = 0; j < phi.players(); ++j) {
        const auto ii = static_cast<Eigen::Index>(i);
        const auto jj = static_cast<Eigen::Index>(j);
        out += std::to_string(phi.sample_ids[i]) + "," + phi.feature_names[j] + "," +
               format_double(phi.stacks[k](ii, jj)) + "," + format_double(phi.feature_values(ii, jj)) +
               "," + (phi.missing_flags(ii, jj) ? "1" : "0") + "," + std::to_string(k) + "\n";
      }
  return out;
}

}  // namespace missshap::shapley
