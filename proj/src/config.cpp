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

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "missshap/error.hpp"
#include "missshap/experiment.hpp"

namespace missshap::experiment {

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  fail(ErrorKind::kConfig, "config key '" + key + "': " + why);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(s);
  while (std::getline(ss, cur, sep)) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

double to_real(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out))
    bad(key, "expected a number, got '" + v + "'");
  return out;
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    bad(key, "expected a non-negative integer, got '" + v + "'");
  return out;
}

int to_int(const std::string& key, const std::string& v) {
  const auto u = to_uint(key, v);
  if (u > 1'000'000'000) bad(key, "value too large");
  return static_cast<int>(u);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad(key, "expected true or false, got '" + v + "'");
}

std::optional<std::size_t> class_choice(const std::string& key, const std::string& v,
                                        const char* unset_word) {
  if (v == unset_word) return std::nullopt;
  return to_uint(key, v);
}

const std::set<std::string>& known_methods() {
  static const std::set<std::string> m{kNativeMethod, "mean", "mice", "dimv", "missforest", "softimpute"};
  return m;
}

DatasetConfig& dataset_entry(std::vector<DatasetConfig>& ds, const std::string& name) {
  for (auto& d : ds)
    if (d.name == name) return d;
  ds.push_back({});
  ds.back().name = name;
  return ds.back();
}

std::string join(const std::vector<std::string>& v, const char* sep = ",") {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

std::string join_rates(const std::vector<double>& v) {
  std::vector<std::string> s;
  for (double r : v) s.push_back(format_double(r));
  return join(s);
}

}  // namespace

void Config::set(const std::string& key, const std::string& raw, const std::filesystem::path& base_dir) {
  const std::string value = trim(raw);
  if (key.rfind("dataset.", 0) == 0) {
    const auto dot = key.rfind('.');
    const std::string name = key.substr(8, dot - 8);
    const std::string field = key.substr(dot + 1);
    if (name.empty() || dot <= 8 || name.find_first_of("/\\ ") != std::string::npos)
      bad(key, "expected dataset.<name>.<field> with a plain name");
    auto& d = dataset_entry(datasets, name);
    if (field == "path") {
      const std::filesystem::path p(value);
      d.path = p.is_absolute() || base_dir.empty() ? p : base_dir / p;
    } else if (field == "target") {
      d.target = value;
    } else if (field == "task") {
      try {
        d.task = parse_task(value);
      } catch (const Error&) {
        bad(key, "expected regression or classification");
      }
    } else if (field == "groups") {
      d.groups = value;
    } else {
      bad(key, "unknown dataset field '" + field + "'");
    }
    return;
  }
  if (key == "rates") {
    rates.clear();
    for (const auto& r : split_list(value, ',')) rates.push_back(to_real(key, r));
  } else if (key == "methods") {
    methods = split_list(value, ',');
    for (const auto& m : methods)
      if (!known_methods().count(m)) bad(key, "unknown method '" + m + "'");
  } else if (key == "downstream") {
    if (value == "linear") downstream = Downstream::kLinear;
    else if (value == "gbt") downstream = Downstream::kGbt;
    else bad(key, "expected linear or gbt");
  } else if (key == "repetitions") {
    repetitions = to_uint(key, value);
  } else if (key == "base_seed") {
    base_seed = to_uint(key, value);
  } else if (key == "test_fraction") {
    test_fraction = to_real(key, value);
  } else if (key == "standardize") {
    standardize = to_bool(key, value);
  } else if (key == "shapley.mode") {
    if (value == "marginal") shapley.mode = shapley::Mode::kMarginal;
    else if (value == "retrain") shapley.mode = shapley::Mode::kRetrain;
    else bad(key, "expected marginal or retrain");
  } else if (key == "shapley.background") {
    if (value == "mean") {
      shapley.background_samples = 0;
    } else if (value.rfind("sample:", 0) == 0) {
      shapley.background_samples = to_uint(key, value.substr(7));
      if (shapley.background_samples == 0) bad(key, "sample count must be positive");
    } else {
      bad(key, "expected mean or sample:<k>");
    }
  } else if (key == "shapley.max_p") {
    shapley.max_players = to_uint(key, value);
  } else if (key == "shapley.max_rows") {
    shapley.max_rows = to_uint(key, value);
  } else if (key == "shapley.mse_class") {
    shapley.mse_class = class_choice(key, value, "all");
  } else if (key == "shapley.plot_class") {
    shapley.plot_class = class_choice(key, value, "auto");
  } else if (key == "strict_all_missing_rows") {
    strict_all_missing_rows = to_bool(key, value);
  } else if (key == "output_dir") {
    const std::filesystem::path p(value);
    output_dir = p.is_absolute() || base_dir.empty() ? p : base_dir / p;
  } else if (key == "jobs") {
    jobs = to_uint(key, value);
  } else if (key == "linear.ridge") {
    linear_ridge = to_real(key, value);
  } else if (key == "gbt.n_trees") {
    gbt.n_trees = to_int(key, value);
  } else if (key == "gbt.max_depth") {
    gbt.max_depth = to_int(key, value);
  } else if (key == "gbt.learning_rate") {
    gbt.learning_rate = to_real(key, value);
  } else if (key == "gbt.min_samples_leaf") {
    gbt.min_samples_leaf = to_uint(key, value);
  } else if (key == "mice.tol") {
    imputer.mice.tol = to_real(key, value);
  } else if (key == "mice.max_sweeps") {
    imputer.mice.max_sweeps = to_int(key, value);
  } else if (key == "mice.ridge") {
    imputer.mice.ridge = to_real(key, value);
  } else if (key == "dimv.ridge") {
    imputer.dimv.ridge = to_real(key, value);
  } else if (key == "missforest.n_trees") {
    imputer.missforest.n_trees = to_int(key, value);
  } else if (key == "missforest.max_depth") {
    imputer.missforest.max_depth = to_int(key, value);
  } else if (key == "missforest.max_sweeps") {
    imputer.missforest.max_sweeps = to_int(key, value);
  } else if (key == "softimpute.lambda_fraction") {
    imputer.softimpute.lambda_fraction = to_real(key, value);
  } else if (key == "softimpute.shrinkage") {
    imputer.softimpute.shrinkage = value == "auto" ? -1.0 : to_real(key, value);
  } else if (key == "softimpute.max_rank") {
    imputer.softimpute.max_rank = to_int(key, value);
  } else if (key == "softimpute.max_iters") {
    imputer.softimpute.max_iters = to_int(key, value);
  } else if (key == "softimpute.tol") {
    imputer.softimpute.tol = to_real(key, value);
  } else if (key == "check.n") {
    check.n = to_uint(key, value);
  } else if (key == "check.rates") {
    check.rates.clear();
    for (const auto& r : split_list(value, ',')) check.rates.push_back(to_real(key, r));
  } else if (key == "check.seeds") {
    check.seeds = to_uint(key, value);
  } else if (key == "check.base_seed") {
    check.base_seed = to_uint(key, value);
  } else if (key == "check.cov_delta_trials") {
    check.cov_delta_trials = to_uint(key, value);
  } else if (key == "check.inject_fault") {
    if (value != "none" && value != "cov_delta") bad(key, "expected none or cov_delta");
    check.inject_fault = value;
  } else {
    bad(key, "unknown key");
  }
}

void Config::validate() const {
  auto must = [](bool ok, const std::string& msg) {
    if (!ok) fail(ErrorKind::kConfig, "config: " + msg);
  };
  must(!datasets.empty(), "at least one dataset.<name>.path is required");
  for (const auto& d : datasets) {
    must(!d.path.empty(), "dataset '" + d.name + "' has no path");
    must(!d.target.empty(), "dataset '" + d.name + "' has no target");
  }
  must(!rates.empty(), "rates must be non-empty");
  for (double r : rates) must(r >= 0.0 && r < 1.0, "rates must lie in [0, 1)");
  must(std::set<double>(rates.begin(), rates.end()).size() == rates.size(), "rates must be distinct");
  must(!methods.empty(), "methods must be non-empty");
  must(std::set<std::string>(methods.begin(), methods.end()).size() == methods.size(),
       "methods must be distinct");
  must(repetitions >= 1, "repetitions must be at least 1");
  must(test_fraction > 0.0 && test_fraction < 1.0, "test_fraction must lie in (0, 1)");
  must(shapley.max_players >= 1 && shapley.max_players <= shapley::kMaxPlayers,
       "shapley.max_p must lie in [1, 16]");
  must(linear_ridge >= 0.0, "linear.ridge must be non-negative");
  must(gbt.n_trees >= 0 && gbt.max_depth >= 1 && gbt.learning_rate > 0.0 && gbt.min_samples_leaf >= 1,
       "invalid gbt hyperparameters");
  if (shapley.mode == shapley::Mode::kRetrain) {
    must(downstream == Downstream::kLinear, "shapley.mode = retrain requires downstream = linear");
    for (const auto& m : methods)
      must(m != kNativeMethod, "shapley.mode = retrain cannot explain gbt_native");
  }
  for (const auto& m : methods) {
    if (m == kNativeMethod) continue;
    impute::ImputerSpec s = imputer;
    s.method = impute::parse_method(m);
    try {
      s.validate();
    } catch (const Error& e) {
      fail(ErrorKind::kConfig, std::string("config: ") + e.what());
    }
  }
}

std::string Config::canonical() const {
  std::ostringstream os;
  for (const auto& d : datasets) {
    os << "dataset." << d.name << ".path = " << d.path.filename().string() << '\n';
    os << "dataset." << d.name << ".target = " << d.target << '\n';
    os << "dataset." << d.name << ".task = " << to_string(d.task) << '\n';
    if (!d.groups.empty()) os << "dataset." << d.name << ".groups = " << d.groups << '\n';
  }
  os << "rates = " << join_rates(rates) << '\n';
  os << "methods = " << join(methods) << '\n';
  os << "downstream = " << (downstream == Downstream::kLinear ? "linear" : "gbt") << '\n';
  os << "repetitions = " << repetitions << '\n';
  os << "base_seed = " << base_seed << '\n';
  os << "test_fraction = " << format_double(test_fraction) << '\n';
  os << "standardize = " << (standardize ? "true" : "false") << '\n';
  os << "shapley.mode = " << (shapley.mode == shapley::Mode::kMarginal ? "marginal" : "retrain") << '\n';
  os << "shapley.background = "
     << (shapley.background_samples ? "sample:" + std::to_string(shapley.background_samples) : "mean") << '\n';
  os << "shapley.max_p = " << shapley.max_players << '\n';
  os << "shapley.max_rows = " << shapley.max_rows << '\n';
  os << "shapley.mse_class = " << (shapley.mse_class ? std::to_string(*shapley.mse_class) : "all") << '\n';
  os << "shapley.plot_class = " << (shapley.plot_class ? std::to_string(*shapley.plot_class) : "auto") << '\n';
  os << "strict_all_missing_rows = " << (strict_all_missing_rows ? "true" : "false") << '\n';
  os << "linear.ridge = " << format_double(linear_ridge) << '\n';
  os << "gbt.n_trees = " << gbt.n_trees << '\n';
  os << "gbt.max_depth = " << gbt.max_depth << '\n';
  os << "gbt.learning_rate = " << format_double(gbt.learning_rate) << '\n';
  os << "gbt.min_samples_leaf = " << gbt.min_samples_leaf << '\n';
  os << "mice.tol = " << format_double(imputer.mice.tol) << '\n';
  os << "mice.max_sweeps = " << imputer.mice.max_sweeps << '\n';
  os << "mice.ridge = " << format_double(imputer.mice.ridge) << '\n';
  os << "dimv.ridge = " << format_double(imputer.dimv.ridge) << '\n';
  os << "missforest.n_trees = " << imputer.missforest.n_trees << '\n';
  os << "missforest.max_depth = " << imputer.missforest.max_depth << '\n';
  os << "missforest.max_sweeps = " << imputer.missforest.max_sweeps << '\n';
  os << "softimpute.lambda_fraction = " << format_double(imputer.softimpute.lambda_fraction) << '\n';
  os << "softimpute.shrinkage = "
     << (imputer.softimpute.shrinkage < 0 ? "auto" : format_double(imputer.softimpute.shrinkage)) << '\n';
  os << "softimpute.max_rank = " << imputer.softimpute.max_rank << '\n';
  os << "softimpute.max_iters = " << imputer.softimpute.max_iters << '\n';
  os << "softimpute.tol = " << format_double(imputer.softimpute.tol) << '\n';
  return os.str();
}

Config parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  Config c;
  std::istringstream in(text);
  std::string line;
  std::set<std::string> seen;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "config line " + std::to_string(lineno) + ": ";
    if (eq == std::string::npos) fail(ErrorKind::kConfig, where + "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (!seen.insert(key).second) fail(ErrorKind::kConfig, where + "duplicate key '" + key + "'");
    try {
      c.set(key, line.substr(eq + 1), base_dir);
    } catch (const Error& e) {
      fail(ErrorKind::kConfig, where + e.what());
    }
  }
  return c;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kConfig, "cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

}  // namespace missshap::experiment
