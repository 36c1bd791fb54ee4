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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "missshap/impute.hpp"
#include "missshap/metrics.hpp"
#include "missshap/model.hpp"
#include "missshap/shapley.hpp"
#include "missshap/theory.hpp"

namespace missshap::experiment {

enum class Downstream { kLinear, kGbt };

struct DatasetConfig {
  std::string name;
  std::filesystem::path path;  // resolved against the config file's directory
  std::string target;
  Task task = Task::kRegression;
  std::string groups;  // empty, "blocks:RxC:HxW", or "a+b,c,d+e"
};

struct ShapleyConfig {
  shapley::Mode mode = shapley::Mode::kMarginal;
  std::size_t background_samples = 0;  // 0 means the training mean row
  std::size_t max_players = shapley::kMaxPlayers;
  std::size_t max_rows = 0;  // 0 explains every test row
  std::optional<std::size_t> mse_class;   // unset averages all class stacks
  std::optional<std::size_t> plot_class;  // unset: class 1 for binary, else 0
};

struct CheckConfig {
  std::size_t n = 200;
  std::vector<double> rates{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
  std::size_t seeds = 5;
  std::uint64_t base_seed = 2024;
  std::size_t cov_delta_trials = 1000;
  std::string inject_fault = "none";  // none | cov_delta
};

// The gbt_native arm fits boosted trees directly on data with missing cells.
inline constexpr const char* kNativeMethod = "gbt_native";

struct Config {
  std::vector<DatasetConfig> datasets;
  std::vector<double> rates{0.2, 0.4, 0.6, 0.8};
  std::vector<std::string> methods{kNativeMethod, "mean", "mice", "dimv", "missforest", "softimpute"};
  Downstream downstream = Downstream::kLinear;
  std::size_t repetitions = 10;
  std::uint64_t base_seed = 2024;
  double test_fraction = 0.2;
  bool standardize = true;
  ShapleyConfig shapley;
  bool strict_all_missing_rows = false;
  std::filesystem::path output_dir = "out";
  std::size_t jobs = 1;
  double linear_ridge = 0.0;
  model::GbtParams gbt;
  impute::ImputerSpec imputer;  // hyperparameters; method and seed are set per cell
  CheckConfig check;

  // Applies one key = value setting; throws Error(kConfig) on unknown keys or
  // malformed values.
  void set(const std::string& key, const std::string& value,
           const std::filesystem::path& base_dir = {});
  // Validation for `run`; `check` needs no datasets.
  void validate() const;
  // Every result-affecting setting in a fixed order. Excludes output_dir and jobs.
  std::string canonical() const;
};

Config parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
Config load_config(const std::filesystem::path& path);

struct Export {
  std::string id;  // "<dataset>_r<rate>_<method>" or "<dataset>_reference"
  std::string dataset;
  std::string label;  // method name or "reference"
  std::optional<double> rate;
  shapley::ShapleyMatrix phi;
  std::string model_json;
};

struct Report {
  std::string canonical_config;
  std::uint64_t config_hash = 0;
  std::vector<metrics::MetricCell> cells;  // dataset, rate, method, criteria order of the config
  std::vector<Export> exports;             // repetition 0 only
  std::vector<std::string> warnings;       // sorted, deduplicated
  std::vector<std::uint64_t> repetition_seeds;
  std::map<std::string, std::size_t> plot_class;  // per dataset
  std::map<std::string, std::size_t> explained_rows;
  std::map<std::string, std::size_t> test_rows;
  std::map<std::string, std::uint64_t> dataset_hashes;  // FNV-1a 64 of the file bytes
  bool row_cap_bound = false;
};

Report run(const Config& config, std::size_t jobs);

// Writes tables/, shap/, plots/, models/ and provenance.json under dir.
// Returns the relative paths written, sorted.
std::vector<std::string> write_report(const Report& report, const Config& config,
                                      const std::filesystem::path& dir);

std::string cell_id(const std::string& dataset, double rate, const std::string& method);

struct CheckOutcome {
  theory::SuiteResult suite;
  std::size_t n_checks = 0;
};

CheckOutcome run_check(const Config& config);
// Writes checks.csv and theory_trend.csv under dir.
void write_check(const CheckOutcome& outcome, const std::filesystem::path& dir);

// Explains each row of a CSV (header = feature names; extra columns ignored;
// empty, "NA" or "nan" cells are missing) with the model file's background.
std::string explain_csv(const std::string& model_json, const std::string& rows_csv);

}  // namespace missshap::experiment
