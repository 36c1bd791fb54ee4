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

#include "missshap/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "missshap/error.hpp"
#include "missshap/plots.hpp"
#include "missshap/rng.hpp"

namespace missshap::experiment {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "1.0.0";

// Runs fn(0..n-1) on up to `jobs` threads. Each index writes only its own
// slot, so results do not depend on scheduling.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  const std::size_t t = std::max<std::size_t>(1, std::min(jobs, n));
  if (t == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t k = 0; k < t; ++k)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  for (auto& th : pool) th.join();
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) fail(ErrorKind::kIo, "cannot write " + p.string());
  out << text;
  if (!out) fail(ErrorKind::kIo, "write failed for " + p.string());
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::size_t feature_index(const std::vector<std::string>& names, const std::string& name,
                          const std::string& dataset) {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end())
    fail(ErrorKind::kConfig, "dataset '" + dataset + "' groups: unknown feature '" + name + "'");
  return static_cast<std::size_t>(it - names.begin());
}

std::size_t parse_dim(const std::string& s, const std::string& spec) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v == 0)
    fail(ErrorKind::kConfig, "bad groups spec '" + spec + "'");
  return v;
}

std::pair<std::size_t, std::size_t> parse_dims(const std::string& s, const std::string& spec) {
  const auto x = s.find('x');
  if (x == std::string::npos) fail(ErrorKind::kConfig, "bad groups spec '" + spec + "'");
  return {parse_dim(s.substr(0, x), spec), parse_dim(s.substr(x + 1), spec)};
}

// Returns an empty list when the dataset has no grouping.
shapley::Groups parse_groups(const DatasetConfig& d, const std::vector<std::string>& names) {
  shapley::Groups g;
  if (d.groups.empty()) return g;
  if (d.groups.rfind("blocks:", 0) == 0) {
    const std::string rest = d.groups.substr(7);
    const auto colon = rest.find(':');
    if (colon == std::string::npos) fail(ErrorKind::kConfig, "bad groups spec '" + d.groups + "'");
    const auto [rows, cols] = parse_dims(rest.substr(0, colon), d.groups);
    const auto [bh, bw] = parse_dims(rest.substr(colon + 1), d.groups);
    if (rows * cols != names.size() || rows % bh || cols % bw)
      fail(ErrorKind::kConfig, "dataset '" + d.name + "': blocks spec does not tile the features");
    for (std::size_t br = 0; br < rows / bh; ++br)
      for (std::size_t bc = 0; bc < cols / bw; ++bc) {
        std::vector<std::size_t> block;
        for (std::size_t r = 0; r < bh; ++r)
          for (std::size_t c = 0; c < bw; ++c) block.push_back((br * bh + r) * cols + bc * bw + c);
        g.push_back(block);
      }
  } else {
    std::istringstream ss(d.groups);
    std::string item;
    while (std::getline(ss, item, ',')) {
      std::vector<std::size_t> grp;
      std::istringstream is(item);
      std::string name;
      while (std::getline(is, name, '+')) {
        const auto b = name.find_first_not_of(' '), e = name.find_last_not_of(' ');
        if (b == std::string::npos) continue;
        grp.push_back(feature_index(names, name.substr(b, e - b + 1), d.name));
      }
      if (!grp.empty()) g.push_back(grp);
    }
  }
  std::vector<int> seen(names.size(), 0);
  for (const auto& grp : g)
    for (auto j : grp) ++seen[j];
  for (std::size_t j = 0; j < names.size(); ++j)
    if (seen[j] != 1)
      fail(ErrorKind::kConfig, "dataset '" + d.name + "': groups must partition the features (feature '" +
                                   names[j] + "')");
  return g;
}

struct Prepared {
  DataMatrix data;
  shapley::Groups groups;
  std::uint64_t file_hash = 0;
  std::size_t players = 0;
  std::size_t plot_class = 0;
};

struct Context {
  bool ok = false;
  std::string error;
  std::optional<DataMatrix> train;
  std::optional<DataMatrix> test;
  std::vector<std::size_t> test_ids;        // original row index per test row
  std::vector<std::size_t> explain;         // positions in test
  std::vector<std::size_t> background_rows; // positions in train, sample mode only
  shapley::ShapleyMatrix reference;
  std::string reference_json;
  std::vector<std::string> warnings;
};

struct Outcome {
  std::optional<double> mse, mse_shap, imputation_mse;
  std::vector<std::string> warnings;
  std::optional<Export> exported;
};

Matrix rows_of(const Matrix& x, const std::vector<std::size_t>& idx) {
  Matrix out(static_cast<Eigen::Index>(idx.size()), x.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(idx[i]));
  return out;
}

std::vector<std::size_t> ids_of(const std::vector<std::size_t>& ids, const std::vector<std::size_t>& pos) {
  std::vector<std::size_t> out;
  for (auto p : pos) out.push_back(ids[p]);
  return out;
}

// Column means over non-missing entries.
Matrix nan_mean_row(const Matrix& x) {
  Matrix out(1, x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    double s = 0.0;
    std::size_t n = 0;
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      if (!std::isnan(x(i, j))) {
        s += x(i, j);
        ++n;
      }
    out(0, j) = n ? s / static_cast<double>(n) : 0.0;
  }
  return out;
}

class Runner {
 public:
  using Predictor = model::Predictor;

  explicit Runner(const Config& c) : c_(c) {}

  Report run(std::size_t jobs) {
    c_.validate();
    Report report;
    report.canonical_config = c_.canonical();
    report.config_hash = fnv1a64(report.canonical_config);
    prepare(report);

    const Stream root(c_.base_seed);
    for (std::size_t k = 0; k < c_.repetitions; ++k) report.repetition_seeds.push_back(root.split("rep").split(k).key());

    const std::size_t nd = c_.datasets.size(), nr = c_.repetitions;
    contexts_.assign(nd * nr, Context{});
    parallel_for(nd * nr, jobs, [&](std::size_t i) { contexts_[i] = make_context(i / nr, i % nr); });

    const std::size_t nrate = c_.rates.size(), nm = c_.methods.size();
    const std::size_t per_ds = nr * nrate * nm;
    std::vector<Outcome> outcomes(nd * per_ds);
    parallel_for(outcomes.size(), jobs, [&](std::size_t i) {
      const std::size_t d = i / per_ds, rem = i % per_ds;
      const std::size_t rep = rem / (nrate * nm), rate = rem / nm % nrate, m = rem % nm;
      outcomes[i] = run_cell(d, rep, rate, m);
    });

    std::set<std::string> warnings;
    for (const auto& ctx : contexts_) {
      warnings.insert(ctx.warnings.begin(), ctx.warnings.end());
      if (!ctx.ok) warnings.insert(ctx.error);
    }
    for (auto& o : outcomes) warnings.insert(o.warnings.begin(), o.warnings.end());

    for (std::size_t d = 0; d < nd; ++d) {
      const auto& ds = c_.datasets[d];
      const bool regression = ds.task == Task::kRegression;
      const std::vector<metrics::Criteria> crit =
          regression ? std::vector{metrics::Criteria::kMse, metrics::Criteria::kMseShap}
                     : std::vector{metrics::Criteria::kImputationMse, metrics::Criteria::kMseShap};
      for (std::size_t ri = 0; ri < nrate; ++ri)
        for (std::size_t m = 0; m < nm; ++m)
          for (auto cr : crit) {
            std::vector<std::optional<double>> values;
            for (std::size_t rep = 0; rep < nr; ++rep) {
              const auto& o = outcomes[d * per_ds + rep * nrate * nm + ri * nm + m];
              values.push_back(cr == metrics::Criteria::kMse        ? o.mse
                               : cr == metrics::Criteria::kMseShap ? o.mse_shap
                                                                   : o.imputation_mse);
            }
            auto cell = metrics::aggregate(values);
            cell.dataset = ds.name;
            cell.rate = c_.rates[ri];
            cell.method = c_.methods[m];
            cell.criteria = cr;
            report.cells.push_back(std::move(cell));
          }
      const auto& ctx0 = contexts_[d * nr];
      if (ctx0.ok) {
        Export e;
        e.id = ds.name + "_reference";
        e.dataset = ds.name;
        e.label = "reference";
        e.phi = ctx0.reference;
        e.model_json = ctx0.reference_json;
        report.exports.push_back(std::move(e));
      }
      for (std::size_t ri = 0; ri < nrate; ++ri)
        for (std::size_t m = 0; m < nm; ++m) {
          auto& o = outcomes[d * per_ds + ri * nm + m];
          if (o.exported) report.exports.push_back(std::move(*o.exported));
        }
      report.plot_class[ds.name] = prepared_[d].plot_class;
      report.test_rows[ds.name] = ctx0.test->rows();
      report.explained_rows[ds.name] = ctx0.explain.size();
      if (ctx0.ok && ctx0.explain.size() < ctx0.test->rows()) report.row_cap_bound = true;
    }
    report.warnings.assign(warnings.begin(), warnings.end());
    report.dataset_hashes.clear();
    for (std::size_t d = 0; d < nd; ++d) report.dataset_hashes[c_.datasets[d].name] = prepared_[d].file_hash;
    return report;
  }

 private:
  void prepare(Report&) {
    for (const auto& ds : c_.datasets) {
      const std::string text = read_file(ds.path);
      Prepared p{parse_csv(text, ds.target, ds.task), {}, fnv1a64(text), 0, 0};
      p.groups = parse_groups(ds, p.data.feature_names());
      p.players = p.groups.empty() ? p.data.cols() : p.groups.size();
      if (p.players > c_.shapley.max_players)
        fail(ErrorKind::kConfig, "dataset '" + ds.name + "' has " + std::to_string(p.players) +
                                     " players; shapley.max_p is " + std::to_string(c_.shapley.max_players) +
                                     " (add dataset." + ds.name + ".groups)");
      if (c_.shapley.mode == shapley::Mode::kRetrain && p.players > shapley::kMaxRetrainPlayers)
        fail(ErrorKind::kConfig, "dataset '" + ds.name + "': retrain mode supports at most 10 players");
      const std::size_t outputs = ds.task == Task::kRegression ? 1 : static_cast<std::size_t>(p.data.num_classes());
      p.plot_class = c_.shapley.plot_class ? *c_.shapley.plot_class : (outputs == 2 ? 1 : 0);
      if (p.plot_class >= outputs)
        fail(ErrorKind::kConfig, "shapley.plot_class out of range for dataset '" + ds.name + "'");
      if (c_.shapley.mse_class && *c_.shapley.mse_class >= outputs)
        fail(ErrorKind::kConfig, "shapley.mse_class out of range for dataset '" + ds.name + "'");
      prepared_.push_back(std::move(p));
    }
  }

  Stream rep_stream(std::size_t rep) const { return Stream(c_.base_seed).split("rep").split(rep); }

  const shapley::Groups* groups(std::size_t d) const {
    return prepared_[d].groups.empty() ? nullptr : &prepared_[d].groups;
  }

  model::Predictor fit_downstream(const Matrix& x, const Vector& y, const DataMatrix& like,
                                  std::uint64_t seed, std::vector<std::string>& warnings,
                                  const std::string& where) const {
    if (c_.downstream == Downstream::kGbt) {
      auto params = c_.gbt;
      params.seed = seed;
      return model::fit_gbt(x, y, like.task(), like.num_classes(), params);
    }
    auto fit = [&](double ridge) -> model::Predictor {
      if (like.task() == Task::kRegression) return model::fit_linear(x, y, ridge);
      return model::fit_linear_ovr(x, y, like.num_classes(), ridge);
    };
    try {
      return fit(c_.linear_ridge);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kNumeric || c_.linear_ridge > 0) throw;
      warnings.push_back(where + ": singular least-squares design; refit with ridge 1e-6");
      return fit(1e-6);
    }
  }

  shapley::ValueFunction value_function(const Matrix& bg, const Matrix& x, const Vector& y) const {
    if (c_.shapley.mode == shapley::Mode::kRetrain)
      return shapley::ValueFunction::retrain(x, y, c_.linear_ridge > 0 ? c_.linear_ridge : 0.0);
    return shapley::ValueFunction::marginal(bg);
  }

  std::string model_json(const model::Predictor& p, std::size_t d, const Matrix& bg) const {
    auto j = json::parse(model::to_json(p, prepared_[d].data.feature_names(), &bg));
    if (!prepared_[d].groups.empty()) j["groups"] = prepared_[d].groups;
    return j.dump(1) + "\n";
  }

  Context make_context(std::size_t d, std::size_t rep) const {
    Context ctx;
    const auto& ds = c_.datasets[d];
    const auto& data = prepared_[d].data;
    const std::string where = ds.name + " rep " + std::to_string(rep);
    try {
      const Stream rs = rep_stream(rep);
      const auto idx = split_indices(data.rows(), {c_.test_fraction, rs.split("split").key()});
      ctx.train = data.select_rows(idx.train);
      ctx.test = data.select_rows(idx.test);
      ctx.test_ids = idx.test;
      if (c_.standardize) {
        const auto s = fit_standardizer(*ctx.train);
        ctx.train = apply_standardizer(s, *ctx.train);
        ctx.test = apply_standardizer(s, *ctx.test);
        if (ds.task == Task::kRegression) {
          const Matrix yt = ctx.train->target();
          const auto ys = fit_standardizer(yt);
          ctx.train = ctx.train->with_target(ys.apply(yt).col(0));
          ctx.test = ctx.test->with_target(ys.apply(Matrix(ctx.test->target())).col(0));
        }
      }
      const std::size_t m = c_.shapley.max_rows ? std::min(c_.shapley.max_rows, ctx.test->rows()) : ctx.test->rows();
      for (std::size_t i = 0; i < m; ++i) ctx.explain.push_back(i);
      if (c_.shapley.background_samples) {
        const std::size_t k = std::min(c_.shapley.background_samples, ctx.train->rows());
        Stream bs = rs.split("background");
        ctx.background_rows = bs.sample_without_replacement(ctx.train->rows(), k);
        std::sort(ctx.background_rows.begin(), ctx.background_rows.end());
      }

      const Matrix& x = ctx.train->values();
      const Predictor ref = fit_downstream(x, ctx.train->target(), *ctx.train, rs.split("reference").key(),
                                           ctx.warnings, where + " reference");
      const Matrix bg = c_.shapley.background_samples ? rows_of(x, ctx.background_rows) : Matrix(x.colwise().mean());
      const Matrix rows = rows_of(ctx.test->values(), ctx.explain);
      const Mask none = Mask::Constant(rows.rows(), rows.cols(), false);
      ctx.reference = shapley::explain(ref, value_function(bg, x, ctx.train->target()), rows,
                                       ids_of(ctx.test_ids, ctx.explain), none, data.feature_names(),
                                       groups(d));
      if (rep == 0) ctx.reference_json = model_json(ref, d, bg);
      ctx.ok = true;
    } catch (const std::exception& e) {
      ctx.ok = false;
      ctx.error = where + ": " + e.what();
    }
    return ctx;
  }


  Outcome run_cell(std::size_t d, std::size_t rep, std::size_t ri, std::size_t mi) const {
    Outcome o;
    const auto& ctx = contexts_[d * c_.repetitions + rep];
    if (!ctx.ok) return o;
    const auto& ds = c_.datasets[d];
    const double rate = c_.rates[ri];
    const std::string& method = c_.methods[mi];
    const std::string id = cell_id(ds.name, rate, method);
    const std::string where = id + " rep " + std::to_string(rep);
    try {
      const Stream rs = rep_stream(rep);
      const Stream ms = rs.split("mask").split(static_cast<std::uint64_t>(std::llround(rate * 1e6)));
      const auto train_m = apply_mcar(*ctx.train, rate, ms.split("train").key());
      const auto test_m = apply_mcar(*ctx.test, rate, ms.split("test").key());
      const std::uint64_t seed = rs.split("method").split(method).key();
      const Vector& y = ctx.train->target();
      const bool native = method == kNativeMethod;

      Matrix x_fit, z_use, bg;
      std::optional<Predictor> model;
      if (native) {
        x_fit = train_m.observed_values();
        z_use = test_m.observed_values();
        auto params = c_.gbt;
        params.seed = seed;
        model.emplace(model::fit_gbt(x_fit, y, ctx.train->task(), ctx.train->num_classes(), params));
        bg = c_.shapley.background_samples ? rows_of(x_fit, ctx.background_rows) : nan_mean_row(x_fit);
      } else {
        if (c_.strict_all_missing_rows &&
            (!train_m.fully_missing_rows().empty() || !test_m.fully_missing_rows().empty())) {
          o.warnings.push_back(where + ": unavailable (strict mode: rows with every feature missing)");
          return o;
        }
        impute::ImputerSpec spec = c_.imputer;
        spec.method = impute::parse_method(method);
        spec.seed = seed;
        const auto imp = impute::fit(spec, train_m);
        if (!imp->fit_diagnostics().warning.empty())
          o.warnings.push_back(where + ": " + imp->fit_diagnostics().warning);
        x_fit = imp->transform(train_m).values;
        const auto z_imp = imp->transform(test_m);
        z_use = z_imp.values;
        model.emplace(fit_downstream(x_fit, y, *ctx.train, seed, o.warnings, where));
        if (ds.task == Task::kClassification) o.imputation_mse = metrics::imputation_mse(z_imp, test_m);
        if (c_.shapley.background_samples) {
          bg = rows_of(x_fit, ctx.background_rows);
        } else if (spec.method == impute::Method::kMean) {
          // The fill row itself, so imputed test entries coincide with the background exactly.
          bg = imp->column_means().transpose();
        } else {
          bg = x_fit.colwise().mean();
        }
      }

      if (ds.task == Task::kRegression) {
        std::vector<double> pred(ctx.test->rows()), truth(ctx.test->rows());
        for (std::size_t i = 0; i < ctx.test->rows(); ++i) {
          const Vector r = z_use.row(static_cast<Eigen::Index>(i)).transpose();
          pred[i] = model->predict(std::span<const double>(r.data(), static_cast<std::size_t>(r.size())))[0];
          truth[i] = ctx.test->target()[static_cast<Eigen::Index>(i)];
        }
        o.mse = metrics::prediction_mse(pred, truth);
      }

      const Matrix rows = rows_of(z_use, ctx.explain);
      Mask flags(rows.rows(), rows.cols());
      for (Eigen::Index i = 0; i < rows.rows(); ++i)
        for (Eigen::Index j = 0; j < rows.cols(); ++j)
          flags(i, j) = !test_m.is_observed(ctx.explain[static_cast<std::size_t>(i)], static_cast<std::size_t>(j));
      auto phi = shapley::explain(*model, value_function(bg, x_fit, y), rows, ids_of(ctx.test_ids, ctx.explain),
                                  flags, prepared_[d].data.feature_names(), groups(d));
      o.mse_shap = metrics::mse_shap(phi, ctx.reference, c_.shapley.mse_class);
      if (rep == 0) {
        Export e;
        e.id = id;
        e.dataset = ds.name;
        e.label = method;
        e.rate = rate;
        e.phi = std::move(phi);
        e.model_json = model_json(*model, d, bg);
        o.exported = std::move(e);
      }
    } catch (const std::exception& e) {
      o = Outcome{};
      o.warnings.push_back(where + ": unavailable (" + e.what() + ")");
    }
    return o;
  }

  const Config& c_;
  std::vector<Prepared> prepared_;
  std::vector<Context> contexts_;
};

std::string value_text(const std::optional<double>& v) { return v ? format_double(*v) : "NA"; }

}  // namespace

std::string cell_id(const std::string& dataset, double rate, const std::string& method) {
  return dataset + "_r" + format_double(rate) + "_" + method;
}

Report run(const Config& config, std::size_t jobs) {
  return Runner(config).run(jobs);
}

std::vector<std::string> write_report(const Report& report, const Config& config,
                                      const std::filesystem::path& dir) {
  std::vector<std::string> files;
  auto emit = [&](const std::string& rel, const std::string& text) {
    write_file(dir / rel, text);
    files.push_back(rel);
  };

  {
    std::ostringstream os;
    os << "dataset,rate,criteria";
    for (const auto& m : config.methods) os << ',' << m;
    os << '\n';
    const std::size_t nm = config.methods.size();
    // Cells are ordered (dataset, rate, method, criteria); regroup per criteria.
    for (std::size_t base = 0; base < report.cells.size();) {
      const auto& first = report.cells[base];
      std::size_t ncrit = 0;
      while (base + ncrit < report.cells.size() && report.cells[base + ncrit].method == first.method &&
             report.cells[base + ncrit].dataset == first.dataset && report.cells[base + ncrit].rate == first.rate)
        ++ncrit;
      for (std::size_t c = 0; c < ncrit; ++c) {
        os << first.dataset << ',' << format_double(first.rate) << ','
           << metrics::to_string(report.cells[base + c].criteria);
        for (std::size_t m = 0; m < nm; ++m) os << ',' << value_text(report.cells[base + m * ncrit + c].value);
        os << '\n';
      }
      base += ncrit * nm;
    }
    emit("tables/mse.csv", os.str());
  }
  {
    std::ostringstream os;
    os << "dataset,rate,method,criteria,repetition,value\n";
    for (const auto& c : report.cells)
      for (std::size_t k = 0; k < c.per_repetition.size(); ++k)
        os << c.dataset << ',' << format_double(c.rate) << ',' << c.method << ',' << metrics::to_string(c.criteria)
           << ',' << k << ',' << value_text(c.per_repetition[k]) << '\n';
    emit("tables/long.csv", os.str());
  }
  {
    std::ostringstream os;
    os << "dataset,rate,method,criteria,mean,min,max,std,n_repetitions\n";
    for (const auto& c : report.cells) {
      os << c.dataset << ',' << format_double(c.rate) << ',' << c.method << ',' << metrics::to_string(c.criteria)
         << ',' << value_text(c.value);
      if (c.value)
        os << ',' << format_double(c.min) << ',' << format_double(c.max) << ',' << format_double(c.std);
      else
        os << ",NA,NA,NA";
      os << ',' << c.n_repetitions << '\n';
    }
    emit("tables/summary.csv", os.str());
  }

  const Stream jitter = Stream(config.base_seed).split("jitter");
  std::map<std::string, const Export*> reference;
  for (const auto& e : report.exports)
    if (!e.rate) reference[e.dataset] = &e;
  for (const auto& e : report.exports) {
    emit("shap/" + e.id + ".csv", shapley::to_csv(e.phi));
    emit("models/" + e.id + ".json", e.model_json);
    if (!e.rate) continue;
    const std::size_t cls = report.plot_class.at(e.dataset);
    const std::string title = e.dataset + ", r = " + format_double(*e.rate) + ", " + e.label;
    emit("plots/" + e.id + "_bar.svg",
         plots::importance_bar_svg(shapley::global_importance(e.phi, cls), e.phi.feature_names,
                                   title + ": mean |Shapley value|"));
    emit("plots/" + e.id + "_beeswarm.svg",
         plots::beeswarm_svg(e.phi, cls, title, jitter.split(e.id).key()));
  }
  for (const auto& ds : config.datasets) {
    const auto ref = reference.find(ds.name);
    if (ref == reference.end()) continue;
    const std::size_t cls = report.plot_class.at(ds.name);
    for (double rate : config.rates) {
      std::vector<plots::Series> series{{"reference", shapley::global_importance(ref->second->phi, cls)}};
      for (const auto& e : report.exports)
        if (e.dataset == ds.name && e.rate && *e.rate == rate)
          series.push_back({e.label, shapley::global_importance(e.phi, cls)});
      if (series.size() == 1) continue;
      emit("plots/" + ds.name + "_r" + format_double(rate) + "_comparison.svg",
           plots::comparison_svg(series, ref->second->phi.feature_names,
                                 ds.name + ", r = " + format_double(rate) + ": mean |Shapley value|"));
    }
  }

  std::sort(files.begin(), files.end());
  json prov;
  prov["tool"] = "missshap";
  prov["version"] = kVersion;
  prov["rng"] = Stream::kAlgorithm;
  prov["config_hash"] = "fnv1a64:" + hex64(report.config_hash);
  std::vector<std::string> lines;
  std::istringstream cs(report.canonical_config);
  for (std::string l; std::getline(cs, l);) lines.push_back(l);
  prov["config"] = lines;
  prov["repetition_seeds"] = report.repetition_seeds;
  json datasets = json::object();
  for (const auto& ds : config.datasets) {
    json d;
    d["file"] = ds.path.filename().string();
    d["file_hash"] = "fnv1a64:" + hex64(report.dataset_hashes.at(ds.name));
    d["test_rows"] = report.test_rows.at(ds.name);
    d["explained_rows"] = report.explained_rows.at(ds.name);
    d["plot_class"] = report.plot_class.at(ds.name);
    datasets[ds.name] = d;
  }
  prov["datasets"] = datasets;
  prov["row_cap_bound"] = report.row_cap_bound;
  prov["exports_repetition"] = 0;
  prov["warnings"] = report.warnings;
  prov["files"] = files;
  write_file(dir / "provenance.json", prov.dump(2) + "\n");
  files.push_back("provenance.json");
  std::sort(files.begin(), files.end());
  return files;
}

CheckOutcome run_check(const Config& config) {
  theory::SuiteOptions o;
  o.n = config.check.n;
  o.rates = config.check.rates;
  o.seeds = config.check.seeds;
  o.base_seed = config.check.base_seed;
  o.cov_delta_trials = config.check.cov_delta_trials;
  if (o.n < 10 || o.rates.empty() || o.seeds == 0)
    fail(ErrorKind::kConfig, "config: check.n must be at least 10, check.rates and check.seeds non-empty");
  for (double r : o.rates)
    if (!(r >= 0.0 && r < 1.0)) fail(ErrorKind::kConfig, "config: check.rates must lie in [0, 1)");
  if (config.check.inject_fault == "cov_delta") {
    // Negative control: sample (N - 1) normalization instead of population.
    o.cov_formula = [](std::span<const double> x, std::span<const double> y, std::size_t i) {
      const double n = static_cast<double>(x.size());
      return theory::cov_delta_formula(x, y, i) * n / (n - 1.0);
    };
  }
  CheckOutcome out;
  out.suite = theory::run_suite(o);
  out.n_checks = out.suite.rows.size();
  return out;
}

void write_check(const CheckOutcome& outcome, const std::filesystem::path& dir) {
  write_file(dir / "checks.csv", theory::to_csv(outcome.suite.rows));
  write_file(dir / "theory_trend.csv", outcome.suite.trend_csv);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string explain_csv(const std::string& model_text, const std::string& rows_csv) {
  const auto loaded = model::from_json(model_text);
  shapley::Groups groups;
  try {
    const auto j = json::parse(model_text);
    if (j.contains("groups")) groups = j.at("groups").get<shapley::Groups>();
  } catch (const json::exception& e) {
    fail(ErrorKind::kParse, std::string("model file: bad groups: ") + e.what());
  }
  const auto& names = loaded.feature_names;
  const std::size_t p = names.size();

  std::istringstream in(rows_csv);
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::kParse, "row csv: empty input");
  const auto header = split_csv_line(line);
  std::vector<std::size_t> col(p);
  for (std::size_t j = 0; j < p; ++j) {
    const auto it = std::find(header.begin(), header.end(), names[j]);
    if (it == header.end()) fail(ErrorKind::kParse, "row csv: missing column '" + names[j] + "'");
    col[j] = static_cast<std::size_t>(it - header.begin());
  }
  std::vector<std::vector<double>> rows;
  for (std::size_t r = 1; std::getline(in, line);) {
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      fail(ErrorKind::kParse, "row csv: row " + std::to_string(r) + " has " + std::to_string(cells.size()) +
                                  " cells, expected " + std::to_string(header.size()));
    std::vector<double> v(p);
    for (std::size_t j = 0; j < p; ++j) {
      const auto& s = cells[col[j]];
      if (s.empty() || s == "NA" || s == "nan" || s == "NaN") {
        v[j] = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v[j]);
      if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v[j]))
        fail(ErrorKind::kParse, "row csv: row " + std::to_string(r) + ", column '" + names[j] +
                                    "': not a number: '" + s + "'");
    }
    rows.push_back(std::move(v));
    ++r;
  }
  if (rows.empty()) fail(ErrorKind::kParse, "row csv: no data rows");

  Matrix x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(p));
  Mask flags(x.rows(), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < p; ++j) {
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
      flags(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = std::isnan(rows[i][j]);
    }
  // Only trees route missing cells; a linear model would turn them into NaN attributions.
  if (flags.any() && !loaded.predictor.accepts_missing())
    fail(ErrorKind::kParse, "row csv: missing cells need a tree model; impute the rows first");
  Matrix bg = loaded.background;
  if (bg.size() == 0) {
    const auto* lm = std::get_if<model::LinearModel>(&loaded.predictor.variant());
    if (!lm) fail(ErrorKind::kParse, "model file carries no background row");
    bg = lm->feature_means.transpose();
  }
  std::vector<std::size_t> ids(rows.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
  const auto phi = shapley::explain(loaded.predictor, shapley::ValueFunction::marginal(bg), x, ids, flags, names,
                                    groups.empty() ? nullptr : &groups);
  return shapley::to_csv(phi);
}

}  // namespace missshap::experiment
