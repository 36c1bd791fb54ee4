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

#include "missshap/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"
#include "missshap/error.hpp"

namespace missshap::model {

using Json = nlohmann::json;

double LinearModel::predict(std::span<const double> row) const {
  require(row.size() == static_cast<std::size_t>(coefficients.size()),
          "LinearModel::predict: row length mismatch");
  double y = intercept;
  for (std::size_t j = 0; j < row.size(); ++j) y += coefficients[static_cast<Eigen::Index>(j)] * row[j];
  return y;
}

LinearModel fit_linear(const Matrix& x, const Vector& y, double ridge) {
  require(x.rows() == y.size(), "fit_linear: length mismatch");
  require(x.rows() > 0, "fit_linear: empty input");
  require(ridge >= 0, "fit_linear: ridge must be non-negative");
  require(x.allFinite() && y.allFinite(), "fit_linear: inputs must be complete and finite");
  const double n = static_cast<double>(x.rows());
  LinearModel m;
  m.feature_means = x.colwise().sum().transpose() / n;
  const double y_mean = y.sum() / n;
  if (x.cols() == 0) {
    m.coefficients = Vector(0);
    m.intercept = y_mean;
    return m;
  }
  const Matrix xc = x.rowwise() - m.feature_means.transpose();
  const Vector yc = y.array() - y_mean;
  if (ridge == 0.0) {
    Eigen::ColPivHouseholderQR<Matrix> qr(xc);
    qr.setThreshold(1e-12);
    if (x.rows() <= x.cols() || qr.rank() < x.cols())
      fail(ErrorKind::kNumeric, "fit_linear: singular normal equations (use ridge > 0)");
    m.coefficients = qr.solve(yc);
  } else {
    Matrix a = xc.transpose() * xc;
    a.diagonal().array() += ridge;
    m.coefficients = a.ldlt().solve(xc.transpose() * yc);
  }
  m.intercept = y_mean - m.coefficients.dot(m.feature_means);
  if (!m.coefficients.allFinite() || !std::isfinite(m.intercept))
    fail(ErrorKind::kNumeric, "fit_linear: non-finite coefficients");
  return m;
}

LinearOvrModel fit_linear_ovr(const Matrix& x, const Vector& labels, int num_classes,
                              double ridge) {
  require(num_classes >= 2, "fit_linear_ovr: need at least two classes");
  LinearOvrModel m;
  for (int c = 0; c < num_classes; ++c) {
    const Vector indicator = (labels.array() == static_cast<double>(c)).cast<double>();
    m.classes.push_back(fit_linear(x, indicator, ridge));
  }
  return m;
}

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::span<const double> row_of(const RowMatrix& m, std::size_t i) {
  return {m.data() + i * static_cast<std::size_t>(m.cols()), static_cast<std::size_t>(m.cols())};
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void softmax_inplace(std::span<double> v) {
  const double mx = *std::max_element(v.begin(), v.end());
  double total = 0.0;
  for (auto& e : v) {
    e = std::exp(e - mx);
    total += e;
  }
  for (auto& e : v) e /= total;
}

}  // namespace

void GbtModel::margins(std::span<const double> row, std::span<double> out) const {
  for (std::size_t s = 0; s < base_scores.size(); ++s) {
    double f = base_scores[s];
    for (const auto& t : trees[s]) f += learning_rate * t.predict(row);
    out[s] = f;
  }
}

void GbtModel::predict(std::span<const double> row, std::span<double> out) const {
  margins(row, out);
  if (task == Task::kClassification) softmax_inplace(out.first(base_scores.size()));
}

GbtModel fit_gbt(const Matrix& x, const Vector& y, Task task, int num_classes,
                 const GbtParams& params) {
  require(x.rows() == y.size(), "fit_gbt: length mismatch");
  require(x.rows() > 0, "fit_gbt: empty input");
  require(params.n_trees >= 0 && params.max_depth >= 0 && params.learning_rate > 0,
          "fit_gbt: invalid parameters");
  require(y.allFinite(), "fit_gbt: targets must be finite");
  const auto n = static_cast<std::size_t>(x.rows());
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  const TreeParams tp{params.max_depth, params.min_samples_leaf, 0};

  GbtModel m;
  m.task = task;
  m.learning_rate = params.learning_rate;

  std::vector<Vector> targets;
  if (task == Task::kRegression) {
    targets.push_back(y);
  } else {
    require(num_classes >= 2, "fit_gbt: classification needs at least two classes");
    for (int c = 0; c < num_classes; ++c)
      targets.push_back((y.array() == static_cast<double>(c)).cast<double>());
  }
  std::vector<double> residual(n);
  const RowMatrix xr = x;
  for (const auto& t : targets) {
    double base;
    if (task == Task::kRegression) {
      base = t.mean();
    } else {
      const double prior = std::clamp(t.mean(), 1e-6, 1.0 - 1e-6);
      base = std::log(prior / (1.0 - prior));
    }
    std::vector<double> f(n, base);
    std::vector<RegressionTree> seq;
    seq.reserve(static_cast<std::size_t>(params.n_trees));
    for (int k = 0; k < params.n_trees; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        const double pred = task == Task::kRegression ? f[i] : sigmoid(f[i]);
        residual[i] = t[static_cast<Eigen::Index>(i)] - pred;
      }
      RegressionTree tree = build_tree(x, residual, rows, tp);
      for (std::size_t i = 0; i < n; ++i)
        f[i] += params.learning_rate * tree.predict(row_of(xr, i));
      seq.push_back(std::move(tree));
    }
    m.base_scores.push_back(base);
    m.trees.push_back(std::move(seq));
  }
  return m;
}

double gbt_training_mse(const GbtModel& model, const Matrix& x, const Vector& y, int k) {
  require(model.task == Task::kRegression, "gbt_training_mse: regression only");
  std::vector<double> buf(static_cast<std::size_t>(x.cols()));
  double total = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) buf[static_cast<std::size_t>(j)] = x(i, j);
    double f = model.base_scores[0];
    const auto limit = std::min<std::size_t>(static_cast<std::size_t>(k), model.trees[0].size());
    for (std::size_t t = 0; t < limit; ++t) f += model.learning_rate * model.trees[0][t].predict(buf);
    total += (y[i] - f) * (y[i] - f);
  }
  return total / static_cast<double>(x.rows());
}

double RandomForest::predict(std::span<const double> row) const {
  double total = 0.0;
  for (const auto& t : trees) total += t.predict(row);
  return trees.empty() ? 0.0 : total / static_cast<double>(trees.size());
}

RandomForest fit_forest(const Matrix& x, const Vector& y, const ForestParams& params) {
  require(x.rows() == y.size() && x.rows() > 0, "fit_forest: bad input shape");
  const auto n = static_cast<std::size_t>(x.rows());
  const auto p = static_cast<std::size_t>(x.cols());
  TreeParams tp;
  tp.max_depth = params.max_depth;
  tp.min_samples_leaf = params.min_samples_leaf;
  tp.max_features = params.max_features ? params.max_features : std::max<std::size_t>(1, p / 3);
  const std::vector<double> targets(y.data(), y.data() + y.size());
  const Stream root(params.seed);
  RandomForest forest;
  forest.trees.reserve(static_cast<std::size_t>(params.n_trees));
  std::vector<std::size_t> rows(n);
  for (int t = 0; t < params.n_trees; ++t) {
    Stream rng = root.split(static_cast<std::uint64_t>(t));
    for (auto& r : rows) r = static_cast<std::size_t>(rng.below(n));
    std::sort(rows.begin(), rows.end());
    forest.trees.push_back(build_tree(x, targets, rows, tp, &rng));
  }
  return forest;
}

std::size_t Predictor::num_outputs() const {
  return std::visit(
      [](const auto& m) -> std::size_t {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LinearModel>) {
          return 1;
        } else if constexpr (std::is_same_v<T, LinearOvrModel>) {
          return m.classes.size();
        } else {
          return m.num_outputs();
        }
      },
      model_);
}

Task Predictor::task() const {
  if (std::holds_alternative<LinearModel>(model_)) return Task::kRegression;
  if (std::holds_alternative<LinearOvrModel>(model_)) return Task::kClassification;
  return std::get<GbtModel>(model_).task;
}

void Predictor::predict_unchecked(std::span<const double> row, std::span<double> out) const {
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LinearModel>) {
          out[0] = m.predict(row);
        } else if constexpr (std::is_same_v<T, LinearOvrModel>) {
          for (std::size_t c = 0; c < m.classes.size(); ++c) out[c] = m.classes[c].predict(row);
        } else {
          m.predict(row, out);
        }
      },
      model_);
}

void Predictor::predict(std::span<const double> row, std::span<double> out) const {
  require(out.size() >= num_outputs(), "predict: output buffer too small");
  if (!accepts_missing()) {
    for (double v : row)
      if (std::isnan(v)) fail(ErrorKind::kInvalidArgument, "predict: linear models require complete rows");
  }
  predict_unchecked(row, out);
}

std::vector<double> Predictor::predict(std::span<const double> row) const {
  std::vector<double> out(num_outputs());
  predict(row, out);
  return out;
}

namespace {

Json vec_json(const Vector& v) { return Json(std::vector<double>(v.data(), v.data() + v.size())); }

Vector json_vec(const Json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Json linear_json(const LinearModel& m) {
  return Json{{"intercept", m.intercept},
              {"coefficients", vec_json(m.coefficients)},
              {"feature_means", vec_json(m.feature_means)}};
}

LinearModel json_linear(const Json& j) {
  LinearModel m;
  m.intercept = j.at("intercept").get<double>();
  m.coefficients = json_vec(j.at("coefficients"));
  m.feature_means = json_vec(j.at("feature_means"));
  require(m.coefficients.size() == m.feature_means.size(), "model json: coefficient/mean length mismatch");
  return m;
}

Json node_json(const RegressionTree& t, std::size_t i) {
  const auto& n = t.nodes[i];
  if (n.is_leaf()) return Json{{"leaf", n.value}};
  return Json{{"feature", n.feature},
              {"threshold", n.threshold},
              {"default", n.default_left ? "left" : "right"},
              {"left", node_json(t, static_cast<std::size_t>(n.left))},
              {"right", node_json(t, static_cast<std::size_t>(n.right))}};
}

int json_node(const Json& j, RegressionTree& t) {
  const int id = static_cast<int>(t.nodes.size());
  t.nodes.emplace_back();
  if (j.contains("leaf")) {
    t.nodes.back().value = j.at("leaf").get<double>();
    return id;
  }
  TreeNode n;
  n.feature = j.at("feature").get<int>();
  n.threshold = j.at("threshold").get<double>();
  const auto dir = j.at("default").get<std::string>();
  require(dir == "left" || dir == "right", "model json: default must be left or right");
  n.default_left = dir == "left";
  t.nodes[static_cast<std::size_t>(id)] = n;
  const int l = json_node(j.at("left"), t);
  const int r = json_node(j.at("right"), t);
  t.nodes[static_cast<std::size_t>(id)].left = l;
  t.nodes[static_cast<std::size_t>(id)].right = r;
  return id;
}

}  // namespace

std::string to_json(const Predictor& model, const std::vector<std::string>& feature_names,
                    const Matrix* background) {
  Json j;
  j["format"] = "missshap-model-v1";
  j["feature_names"] = feature_names;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LinearModel>) {
          j["type"] = "linear";
          j["model"] = linear_json(m);
        } else if constexpr (std::is_same_v<T, LinearOvrModel>) {
          j["type"] = "linear_ovr";
          Json classes = Json::array();
          for (const auto& c : m.classes) classes.push_back(linear_json(c));
          j["classes"] = classes;
        } else {
          j["type"] = "gbt";
          j["task"] = to_string(m.task);
          j["learning_rate"] = m.learning_rate;
          j["base_scores"] = m.base_scores;
          Json seqs = Json::array();
          for (const auto& seq : m.trees) {
            Json trees = Json::array();
            for (const auto& t : seq) trees.push_back(node_json(t, 0));
            seqs.push_back(trees);
          }
          j["trees"] = seqs;
        }
      },
      model.variant());
  if (background && background->size() > 0) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < background->rows(); ++i) rows.push_back(vec_json(background->row(i).transpose()));
    j["background"] = rows;
  }
  return j.dump(1);
}

LoadedModel from_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception& e) {
    fail(ErrorKind::kParse, std::string("model json: ") + e.what());
  }
  try {
    const auto type = j.at("type").get<std::string>();
    auto names = j.at("feature_names").get<std::vector<std::string>>();
    Matrix background;
    if (j.contains("background")) {
      const auto& rows = j.at("background");
      background.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(names.size()));
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const Vector r = json_vec(rows[i]);
        require(r.size() == background.cols(), "model json: background row length mismatch");
        background.row(static_cast<Eigen::Index>(i)) = r.transpose();
      }
    }
    if (type == "linear") {
      return {Predictor(json_linear(j.at("model"))), std::move(names), std::move(background)};
    }
    if (type == "linear_ovr") {
      LinearOvrModel m;
      for (const auto& c : j.at("classes")) m.classes.push_back(json_linear(c));
      return {Predictor(std::move(m)), std::move(names), std::move(background)};
    }
    if (type == "gbt") {
      GbtModel m;
      m.task = parse_task(j.at("task").get<std::string>());
      m.learning_rate = j.at("learning_rate").get<double>();
      m.base_scores = j.at("base_scores").get<std::vector<double>>();
      for (const auto& seq : j.at("trees")) {
        std::vector<RegressionTree> trees;
        for (const auto& t : seq) {
          RegressionTree tree;
          json_node(t, tree);
          for (const auto& n : tree.nodes)
            require(n.is_leaf() || (n.feature >= 0 && static_cast<std::size_t>(n.feature) < names.size()),
                    "model json: split feature out of range");
          trees.push_back(std::move(tree));
        }
        m.trees.push_back(std::move(trees));
      }
      require(m.trees.size() == m.base_scores.size(), "model json: trees/base_scores mismatch");
      return {Predictor(std::move(m)), std::move(names), std::move(background)};
    }
    fail(ErrorKind::kParse, "model json: unknown type '" + type + "'");
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kParse, std::string("model json: ") + e.what());
  }
}

}  // namespace missshap::model
