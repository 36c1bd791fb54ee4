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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only when
// every gated criterion passes. Values are recomputed here from first
// principles where possible instead of trusting the library's own reports.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "missshap/data.hpp"
#include "missshap/experiment.hpp"
#include "missshap/impute.hpp"
#include "missshap/model.hpp"
#include "missshap/rng.hpp"
#include "missshap/shapley.hpp"
#include "missshap/synthetic.hpp"
#include "missshap/theory.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using namespace missshap;
using model::Predictor;
using shapley::ValueFunction;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      details.push_back("violated: " + what);
    }
  }
  void note(const std::string& what) { details.push_back(what); }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::span<const double> span_of(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

// Runs one criterion, enforces its time budget and prints its line.
bool report(int id, const std::string& title, double budget_s, bool gated, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.note(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0 && secs > budget_s) {
    o.pass = false;
    o.note("runtime " + fmt("%.2f", secs) + " s exceeds the " + fmt("%.0f", budget_s) + " s budget");
  }
  std::printf("%s criterion %d: %s (%.2f s%s)\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), secs,
              gated ? "" : ", reported, not gated");
  for (const auto& d : o.details) std::printf("    %s\n", d.c_str());
  std::fflush(stdout);
  return o.pass || !gated;
}

double population_cov(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double c = 0;
  for (std::size_t k = 0; k < x.size(); ++k) c += (x[k] - mx) * (y[k] - my);
  return c / n;
}

model::LinearModel random_linear(Stream& rng, std::size_t p) {
  model::LinearModel m;
  m.coefficients = testing::random_vector(rng, static_cast<Eigen::Index>(p));
  m.feature_means = testing::random_vector(rng, static_cast<Eigen::Index>(p));
  m.intercept = rng.normal();
  return m;
}

// v(S) for the marginal game, computed directly: out-of-coalition features
// take each background row's values, outputs averaged over background rows.
double marginal_value(const Predictor& f, const Matrix& bg, const Vector& row, std::uint32_t coalition,
                      std::size_t output) {
  double s = 0.0;
  for (Eigen::Index b = 0; b < bg.rows(); ++b) {
    Vector z = bg.row(b).transpose();
    for (Eigen::Index j = 0; j < row.size(); ++j)
      if (coalition >> j & 1u) z[j] = row[j];
    s += f.predict(span_of(z))[output];
  }
  return s / static_cast<double>(bg.rows());
}

// Criterion 1: imputed test points get exactly zero attribution under mean
// imputation with a univariate linear model.
Outcome mean_zero_exactness() {
  Outcome o;
  const std::vector<double> rates{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
  double worst_shap = 0.0, worst_importance = 0.0;
  std::size_t points = 0, imputed_entries = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto data = synthetic::univariate_linear(200, 1000 + seed);
    const auto [train, test] = split(data, {0.2, seed});
    for (double rtr : rates)
      for (double rte : rates) {
        const Stream s = Stream(seed).split("acceptance").split(static_cast<std::uint64_t>(rtr * 10 + 0.5));
        const auto train_m = apply_mcar(train, rtr, s.key());
        const auto test_m = apply_mcar(test, rte, s.split(static_cast<std::uint64_t>(rte * 10 + 0.5)).key());
        impute::ImputerSpec spec;
        spec.method = impute::Method::kMean;
        const auto imp = impute::fit(spec, train_m);
        const Matrix xf = imp->transform(train_m).values;
        const Matrix zf = imp->transform(test_m).values;
        const auto lm = model::fit_linear(xf, train.target(), 0.0);
        const Vector reference = imp->column_means();
        double full = 0.0, observed_only = 0.0;
        for (Eigen::Index i = 0; i < zf.rows(); ++i) {
          const Vector row = zf.row(i).transpose();
          const double phi = shapley::linear_shapley(lm, span_of(row), span_of(reference))[0];
          full += std::abs(phi);
          if (test_m.is_observed(static_cast<std::size_t>(i), 0)) {
            observed_only += std::abs(phi);
          } else {
            worst_shap = std::max(worst_shap, std::abs(phi));
            ++imputed_entries;
          }
        }
        const double m = static_cast<double>(zf.rows());
        worst_importance = std::max(worst_importance, std::abs(full / m - observed_only / m));
        // The library's own check must agree.
        const auto lib = theory::check_mean_zero(train_m, test_m);
        o.require(lib.pass, "library mean-zero check failed at train rate " + fmt("%.1f", rtr) + ", test rate " +
                                fmt("%.1f", rte));
        ++points;
      }
  }
  o.require(points == 320, "expected 320 grid points");
  o.require(imputed_entries > 0, "no imputed test entries were produced");
  o.require(worst_shap < 1e-10, "max |phi| on imputed entries " + fmt("%.3g", worst_shap) + " >= 1e-10");
  o.require(worst_importance < 1e-12, "importance gap " + fmt("%.3g", worst_importance) + " >= 1e-12");
  o.note(std::to_string(points) + " grid points, " + std::to_string(imputed_entries) +
         " imputed entries; max |phi| " + fmt("%.3g", worst_shap) + ", max importance gap " +
         fmt("%.3g", worst_importance));
  return o;
}

// Criterion 2: replacing x_i by the mean of the other entries shifts the
// covariance with y by (1/N)(y_i - mean y)(mean x' - x_i).
Outcome covariance_identity() {
  Outcome o;
  Stream rng(77);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 2 + rng.below(99);
    std::vector<double> x(n), y(n);
    for (std::size_t k = 0; k < n; ++k) {
      x[k] = rng.normal() * 3.0 + 1.0;
      y[k] = rng.normal() * 2.0 - 0.5;
    }
    const std::size_t i = rng.below(n);
    double rest = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      if (k != i) rest += x[k];
    std::vector<double> xi = x;
    xi[i] = rest / static_cast<double>(n - 1);
    const double direct = population_cov(xi, y) - population_cov(x, y);
    const double formula = theory::cov_delta_formula(x, y, i);
    worst = std::max(worst, std::abs(direct - formula));
  }
  o.require(worst < 1e-12, "max |direct - formula| " + fmt("%.3g", worst) + " >= 1e-12");
  o.note("1000 triples, max |direct - formula| " + fmt("%.3g", worst));
  return o;
}

// Criterion 3: efficiency, dummy and symmetry for random linear and GBT models.
Outcome shapley_axioms() {
  Outcome o;
  Stream rng(2025);
  double eff = 0.0, dummy = 0.0, sym = 0.0;
  double eff_marginal = 0.0, eff_retrain = 0.0, eff_gbt = 0.0;

  for (int t = 0; t < 100; ++t) {
    const std::size_t p = 2 + rng.below(7);
    const auto pi = static_cast<Eigen::Index>(p);
    // Marginal mode.
    auto m = random_linear(rng, p);
    const std::size_t d = rng.below(p);
    m.coefficients[static_cast<Eigen::Index>(d)] = 0.0;
    std::size_t a = rng.below(p), b = rng.below(p);
    while (p > 2 && (b == a || b == d || a == d)) {
      a = rng.below(p);
      b = rng.below(p);
    }
    const bool have_pair = a != b && a != d && b != d;
    Matrix bg = testing::random_matrix(rng, 1 + static_cast<Eigen::Index>(rng.below(4)), pi);
    Vector row = testing::random_vector(rng, pi);
    if (have_pair) {
      m.coefficients[static_cast<Eigen::Index>(b)] = m.coefficients[static_cast<Eigen::Index>(a)];
      row[static_cast<Eigen::Index>(b)] = row[static_cast<Eigen::Index>(a)];
      bg.col(static_cast<Eigen::Index>(b)) = bg.col(static_cast<Eigen::Index>(a));
    }
    const Predictor f(m);
    const Matrix phi = shapley::exact_shapley(ValueFunction::marginal(bg), f, span_of(row));
    const std::uint32_t all = (1u << p) - 1;
    eff_marginal = std::max(eff_marginal, std::abs(phi.row(0).sum() - (marginal_value(f, bg, row, all, 0) -
                                                                       marginal_value(f, bg, row, 0, 0))));
    dummy = std::max(dummy, std::abs(phi(0, static_cast<Eigen::Index>(d))));
    if (have_pair)
      sym = std::max(sym, std::abs(phi(0, static_cast<Eigen::Index>(a)) - phi(0, static_cast<Eigen::Index>(b))));

    // Retrain mode: refits on coalition columns. Column d is constant (a
    // dummy) and columns a, b are identical (symmetric); the ridge keeps those
    // designs solvable and well enough conditioned for an independent solve.
    const Eigen::Index n = 40;
    Matrix x = testing::random_matrix(rng, n, pi);
    x.col(static_cast<Eigen::Index>(d)).setConstant(0.7);
    if (have_pair) x.col(static_cast<Eigen::Index>(b)) = x.col(static_cast<Eigen::Index>(a));
    const Vector y = x * testing::random_vector(rng, pi) + 0.1 * testing::random_vector(rng, n);
    const double ridge = 1e-3;
    const auto fitted = model::fit_linear(x, y, ridge);
    Vector r2 = testing::random_vector(rng, pi);
    if (have_pair) r2[static_cast<Eigen::Index>(b)] = r2[static_cast<Eigen::Index>(a)];
    const Matrix phr = shapley::exact_shapley(ValueFunction::retrain(x, y, ridge), Predictor(fitted), span_of(r2));
    // v(P): ridge refit on every column, solved independently; v(empty) = mean y.
    const Matrix xc = x.rowwise() - x.colwise().mean();
    Matrix gram = xc.transpose() * xc;
    gram.diagonal().array() += ridge;
    const Vector beta = gram.colPivHouseholderQr().solve(xc.transpose() * (y.array() - y.mean()).matrix());
    const double v_full = y.mean() + (r2 - x.colwise().mean().transpose()).dot(beta);
    eff_retrain = std::max(eff_retrain, std::abs(phr.row(0).sum() - (v_full - y.mean())));
    dummy = std::max(dummy, std::abs(phr(0, static_cast<Eigen::Index>(d))));
    if (have_pair)
      sym = std::max(sym, std::abs(phr(0, static_cast<Eigen::Index>(a)) - phr(0, static_cast<Eigen::Index>(b))));
  }

  for (int t = 0; t < 20; ++t) {
    const std::size_t p = 3 + rng.below(6);
    const auto pi = static_cast<Eigen::Index>(p);
    const bool classification = t % 2 == 1;
    Matrix x = testing::random_matrix(rng, 80, pi);
    x.col(pi - 1).setConstant(0.3);  // constant in training, so never split on: a dummy
    Vector y(80);
    for (Eigen::Index i = 0; i < 80; ++i) {
      const double s = x(i, 0) - x(i, 1) * x(i, 2) + 0.2 * rng.normal();
      y[i] = classification ? (s < -0.5 ? 0.0 : s < 0.5 ? 1.0 : 2.0) : s;
    }
    auto g = model::fit_gbt(x, y, classification ? Task::kClassification : Task::kRegression,
                            classification ? 3 : 0, {6, 3, 0.3, 3, static_cast<std::uint64_t>(t)});
    // Mirror every tree in features 0 and 1 so the model is symmetric in them.
    for (auto& seq : g.trees) {
      const auto original = seq;
      for (auto tree : original) {
        for (auto& nd : tree.nodes)
          if (nd.feature == 0 || nd.feature == 1) nd.feature = 1 - nd.feature;
        seq.push_back(tree);
      }
    }
    const Predictor f(g);
    Matrix bg = testing::random_matrix(rng, 3, pi);
    bg.col(1) = bg.col(0);
    Vector row = testing::random_vector(rng, pi);
    row[1] = row[0];
    row[pi - 1] = -2.0;
    const Matrix phi = shapley::exact_shapley(ValueFunction::marginal(bg), f, span_of(row));
    const std::uint32_t all = (1u << p) - 1;
    for (Eigen::Index k = 0; k < phi.rows(); ++k) {
      const auto out = static_cast<std::size_t>(k);
      eff_gbt = std::max(eff_gbt, std::abs(phi.row(k).sum() - (marginal_value(f, bg, row, all, out) -
                                                              marginal_value(f, bg, row, 0, out))));
      dummy = std::max(dummy, std::abs(phi(k, pi - 1)));
      sym = std::max(sym, std::abs(phi(k, 0) - phi(k, 1)));
    }
  }
  eff = std::max({eff_marginal, eff_retrain, eff_gbt});
  o.require(eff < 1e-8, "efficiency gap " + fmt("%.3g", eff));
  o.require(dummy < 1e-8, "dummy attribution " + fmt("%.3g", dummy));
  o.require(sym < 1e-8, "symmetry gap " + fmt("%.3g", sym));
  o.note("100 linear (marginal and retrain) + 20 GBT (10 regression, 10 three-class)");
  o.note("max efficiency gap: linear marginal " + fmt("%.3g", eff_marginal) + ", linear retrain " +
         fmt("%.3g", eff_retrain) + ", GBT " + fmt("%.3g", eff_gbt));
  o.note("max dummy attribution " + fmt("%.3g", dummy) + ", max symmetry gap " + fmt("%.3g", sym));
  return o;
}

// Criterion 4: the closed form matches enumeration against the mean row.
Outcome closed_form_equivalence() {
  Outcome o;
  Stream rng(4242);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t p = 1 + rng.below(8);
    const auto m = random_linear(rng, p);
    const Vector row = testing::random_vector(rng, static_cast<Eigen::Index>(p));
    const Vector closed = shapley::linear_shapley(m, span_of(row));
    const Matrix exact =
        shapley::exact_shapley(ValueFunction::marginal(m.feature_means.transpose()), Predictor(m), span_of(row));
    worst = std::max(worst, (exact.row(0).transpose() - closed).cwiseAbs().maxCoeff());
  }
  o.require(worst < 1e-10, "max |closed - exact| " + fmt("%.3g", worst));
  o.note("100 models, p in [1, 8]; max |closed - exact| " + fmt("%.3g", worst));
  return o;
}

Matrix correlated(Stream& rng, Eigen::Index n, Eigen::Index p) {
  const Matrix z = testing::random_matrix(rng, n, p);
  Matrix mix = testing::random_matrix(rng, p, p);
  mix.diagonal().array() += 2.0;
  return z * mix;
}

// Criterion 5: imputer contracts.
Outcome imputer_properties() {
  Outcome o;
  Stream rng(55);
  const auto data = testing::regression_data(correlated(rng, 120, 6), Vector::Zero(120));
  const auto [train, test] = split(data, {0.25, 3});
  using impute::Method;
  const Method methods[] = {Method::kMean, Method::kMice, Method::kDimv, Method::kMissForest, Method::kSoftImpute};

  // Pass-through: observed cells are returned bit for bit, on train and test.
  for (double rate : {0.2, 0.5}) {
    const auto tr = apply_mcar(train, rate, 11);
    const auto te = apply_mcar(test, rate, 12);
    for (auto m : methods) {
      impute::ImputerSpec spec;
      spec.method = m;
      spec.seed = 5;
      const auto imp = impute::fit(spec, tr);
      for (const auto* mm : {&tr, &te}) {
        const auto out = imp->transform(*mm);
        const Matrix obs = mm->observed_values();
        bool exact = out.values.allFinite();
        for (Eigen::Index i = 0; i < obs.rows(); ++i)
          for (Eigen::Index j = 0; j < obs.cols(); ++j)
            if (mm->mask()(i, j) && std::memcmp(&obs(i, j), &out.values(i, j), sizeof(double)) != 0) exact = false;
        o.require(exact, impute::to_string(m) + " altered an observed cell at rate " + fmt("%.1f", rate));
      }
    }
  }

  // Mean imputation keeps each column's observed mean and cannot raise its variance.
  double mean_gap = 0.0;
  for (double rate : {0.1, 0.4, 0.8}) {
    const auto tr = apply_mcar(train, rate, 21);
    impute::ImputerSpec spec;
    const auto out = impute::fit(spec, tr)->transform(tr);
    for (Eigen::Index j = 0; j < out.values.cols(); ++j) {
      std::vector<double> observed;
      for (Eigen::Index i = 0; i < out.values.rows(); ++i)
        if (tr.mask()(i, j)) observed.push_back(out.values(i, j));
      if (observed.empty()) continue;
      double mo = 0.0;
      for (double v : observed) mo += v;
      mo /= static_cast<double>(observed.size());
      double vo = 0.0;
      for (double v : observed) vo += (v - mo) * (v - mo);
      vo /= static_cast<double>(observed.size());
      const double mi = out.values.col(j).mean();
      const double vi = (out.values.col(j).array() - mi).square().mean();
      mean_gap = std::max(mean_gap, std::abs(mi - mo));
      o.require(vi <= vo * (1 + 1e-12), "mean imputation raised a column variance");
    }
  }
  o.require(mean_gap < 1e-12, "mean imputation moved a column mean by " + fmt("%.3g", mean_gap));

  // SOFT-IMPUTE objective never increases.
  double worst_rise = 0.0;
  std::size_t iterations = 0;
  for (double rate : {0.2, 0.5, 0.7}) {
    impute::ImputerSpec spec;
    spec.method = Method::kSoftImpute;
    const auto imp = impute::fit(spec, apply_mcar(train, rate, 31));
    const auto& obj = imp->fit_diagnostics().objective;
    o.require(obj.size() >= 2, "no objective trace");
    for (std::size_t k = 1; k < obj.size(); ++k) {
      worst_rise = std::max(worst_rise, (obj[k] - obj[k - 1]) / std::max(1.0, std::abs(obj[k - 1])));
      ++iterations;
    }
  }
  o.require(worst_rise <= 1e-12, "objective rose by " + fmt("%.3g", worst_rise) + " (relative)");

  // Rank-1 recovery without shrinkage.
  Vector u = testing::random_vector(rng, 30), v = testing::random_vector(rng, 8);
  const Matrix low_rank = u * v.transpose();
  const auto rank1 = apply_mcar(testing::regression_data(low_rank, Vector::Zero(30)), 0.2, 41);
  impute::ImputerSpec spec;
  spec.method = Method::kSoftImpute;
  spec.softimpute.shrinkage = 0.0;
  spec.softimpute.max_rank = 1;
  spec.softimpute.max_iters = 5000;
  spec.softimpute.tol = 1e-14;
  const auto rec = impute::fit(spec, rank1)->transform(rank1);
  const double rank1_err = (rec.values - low_rank).cwiseAbs().maxCoeff();
  o.require(rank1_err < 1e-6, "rank-1 recovery error " + fmt("%.3g", rank1_err));

  // Complete data passes through MICE and missForest unchanged.
  const MaskedMatrix complete(train);
  for (auto m : {Method::kMice, Method::kMissForest}) {
    impute::ImputerSpec s;
    s.method = m;
    const auto out = impute::fit(s, complete)->transform(complete);
    o.require(out.values == train.values(), impute::to_string(m) + " changed complete data");
  }
  o.note("pass-through for 5 methods at 2 rates; mean gap " + fmt("%.3g", mean_gap) +
         "; SOFT-IMPUTE max relative rise " + fmt("%.3g", worst_rise) + " over " + std::to_string(iterations) +
         " iterations; rank-1 error " + fmt("%.3g", rank1_err));
  return o;
}

experiment::Config dataset_config(const std::string& name, const std::string& target, const std::string& task,
                                  const std::string& rates, const std::string& methods) {
  return experiment::parse_config("dataset." + name + ".path = " + name + ".csv\n" + "dataset." + name +
                                      ".target = " + target + "\n" + "dataset." + name + ".task = " + task +
                                      "\n" + "rates = " + rates + "\n" + "methods = " + methods + "\n" +
                                      "repetitions = 10\n",
                                  MISSSHAP_DATA_DIR);
}

// Criterion 6: under mean imputation both errors grow with the missing rate.
// Rate 0 (complete data) anchors the first of four steps.
Outcome trend() {
  Outcome o;
  const auto c = dataset_config("diabetes", "target", "regression", "0, 0.2, 0.4, 0.6, 0.8", "mean");
  const auto r = experiment::run(c, 1);
  std::map<metrics::Criteria, std::vector<double>> series;
  for (const auto& cell : r.cells) {
    o.require(cell.value.has_value(), "unavailable cell");
    series[cell.criteria].push_back(cell.value.value_or(NAN));
  }
  for (const auto& [criteria, v] : series) {
    std::size_t up = 0, up_without_baseline = 0;
    std::string text;
    for (std::size_t k = 0; k < v.size(); ++k) text += (k ? " -> " : "") + fmt("%.4f", v[k]);
    for (std::size_t k = 1; k < v.size(); ++k)
      if (v[k] >= v[k - 1]) {
        ++up;
        if (k >= 2) ++up_without_baseline;
      }
    o.require(v.size() == 5 && up >= 3, metrics::to_string(criteria) + " non-decreasing in only " +
                                            std::to_string(up) + " of 4 steps");
    o.note(metrics::to_string(criteria) + ": " + text + " (" + std::to_string(up) + "/4 steps up; " +
           std::to_string(up_without_baseline) + "/3 from 0.2)");
  }
  return o;
}

// Criterion 7: the native-missing GBT's explanations drift furthest from the
// reference, per seed, at each of three rates.
Outcome native_divergence(const std::string& extra_key, const std::string& extra_value, Outcome& side) {
  Outcome o;
  auto c = dataset_config("glass", "Type", "classification", "0.2, 0.4, 0.6",
                          "gbt_native, mean, mice, dimv, missforest, softimpute");
  if (!extra_key.empty()) c.set(extra_key, extra_value);
  const auto r = experiment::run(c, 1);
  std::map<double, std::map<std::string, std::vector<std::optional<double>>>> shap;
  for (const auto& cell : r.cells)
    if (cell.criteria == metrics::Criteria::kMseShap) shap[cell.rate][cell.method] = cell.per_repetition;
  for (const auto& [rate, by_method] : shap) {
    const auto& native = by_method.at(experiment::kNativeMethod);
    std::size_t wins = 0;
    for (std::size_t k = 0; k < native.size(); ++k) {
      bool win = native[k].has_value();
      for (const auto& [method, values] : by_method)
        if (method != experiment::kNativeMethod && values[k] && native[k] && !(*native[k] > *values[k])) win = false;
      wins += win ? 1 : 0;
    }
    const bool majority = 2 * wins > native.size();
    o.require(majority, "r=" + fmt("%.1f", rate) + ": native highest in " + std::to_string(wins) + "/" +
                            std::to_string(native.size()) + " seeds");
    side.note((extra_key.empty() ? std::string("defaults") : extra_key + " = " + extra_value) + ", r=" +
              fmt("%.1f", rate) + ": native highest in " + std::to_string(wins) + "/" +
              std::to_string(native.size()) + " seeds");
  }
  return o;
}

Outcome native_divergence_report() {
  Outcome o;
  const auto defaults = native_divergence("", "", o);
  o.pass = defaults.pass;
  Outcome ridge_side;
  native_divergence("linear.ridge", "1", ridge_side);
  for (const auto& d : ridge_side.details) o.note(d);
  return o;
}

std::map<std::string, std::string> tree_contents(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) {
      std::ifstream in(e.path(), std::ios::binary);
      std::ostringstream ss;
      ss << in.rdbuf();
      out[fs::relative(e.path(), dir).generic_string()] = ss.str();
    }
  return out;
}

// Criterion 8: two invocations of the `run` verb give identical bytes.
Outcome determinism() {
  Outcome o;
  const fs::path work = fs::temp_directory_path() / "missshap_acceptance_determinism";
  fs::remove_all(work);
  const std::string cfg = std::string(MISSSHAP_CONFIG_DIR) + "/determinism.cfg";
  for (const char* leg : {"first", "second"}) {
    const std::string cmd = std::string("\"") + MISSSHAP_CLI + "\" run \"" + cfg + "\" --output-dir \"" +
                            (work / leg).string() + "\" --jobs " + (leg[0] == 'f' ? "1" : "3") + " > /dev/null 2>&1";
    o.require(std::system(cmd.c_str()) == 0, std::string("run exited nonzero: ") + cmd);
  }
  const auto a = tree_contents(work / "first"), b = tree_contents(work / "second");
  std::size_t tables = 0, exports = 0;
  for (const auto& [name, bytes] : a) {
    tables += name.rfind("tables/", 0) == 0;
    exports += name.rfind("shap/", 0) == 0;
    const auto it = b.find(name);
    o.require(it != b.end() && it->second == bytes, name + " differs between runs");
  }
  o.require(a.size() == b.size(), "runs wrote different file sets");
  o.require(tables >= 2 && exports > 0, "expected table CSVs and Shapley exports");
  o.note(std::to_string(a.size()) + " files compared (" + std::to_string(tables) + " tables, " +
         std::to_string(exports) + " Shapley exports), --jobs 1 vs --jobs 3");
  fs::remove_all(work);
  return o;
}

}  // namespace

// With arguments, runs only the listed criterion numbers.
int main(int argc, char** argv) {
  std::vector<int> only;
  for (int k = 1; k < argc; ++k) only.push_back(std::atoi(argv[k]));
  const auto selected = [&](int id) { return only.empty() || std::find(only.begin(), only.end(), id) != only.end(); };
  bool ok = true;
  if (selected(1)) ok &= report(1, "mean-imputed test entries get zero attribution", 10, true, mean_zero_exactness);
  if (selected(2)) ok &= report(2, "covariance shift identity", 1, true, covariance_identity);
  if (selected(3)) ok &= report(3, "Shapley efficiency, dummy and symmetry", 30, true, shapley_axioms);
  if (selected(4)) ok &= report(4, "closed form equals enumeration", 10, true, closed_form_equivalence);
  if (selected(5)) ok &= report(5, "imputer properties", 60, true, imputer_properties);
  if (selected(6)) ok &= report(6, "errors grow with the missing rate under mean imputation", 300, true, trend);
  if (selected(7)) ok &= report(7, "native-missing GBT explanations diverge most", 0, false, native_divergence_report);
  if (selected(8)) ok &= report(8, "identical runs give identical bytes", 0, true, determinism);
  std::printf("%s\n", ok ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED");
  return ok ? 0 : 1;
}
