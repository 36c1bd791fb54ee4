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

// Command-line front end. Links only the C API.
//
// Exit codes: 0 success, 1 a theory check failed, 2 any configuration, input
// or runtime error (the message goes to stderr).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "missshap/missshap.h"

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kError = 2;

struct ConfigDeleter {
  void operator()(msh_config* c) const { msh_config_free(c); }
};
struct ReportDeleter {
  void operator()(msh_report* r) const { msh_report_free(r); }
};
struct StringDeleter {
  void operator()(char* s) const { msh_string_free(s); }
};
using ConfigPtr = std::unique_ptr<msh_config, ConfigDeleter>;
using ReportPtr = std::unique_ptr<msh_report, ReportDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

int report_error(const std::string& context) {
  std::cerr << "missshap: " << context << ": " << msh_last_error() << '\n';
  return kError;
}

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "missshap: cannot read " << path << '\n';
    return false;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

struct Options {
  std::string config;
  std::string output_dir;
  bool strict = false;
  std::size_t jobs = 0;
  std::string model;
  std::string rows;
};

// Loads the config and applies command-line overrides. Returns null on error.
ConfigPtr load(const Options& o) {
  msh_config* raw = nullptr;
  if (msh_config_load(o.config.c_str(), &raw) != MSH_OK) {
    report_error(o.config);
    return nullptr;
  }
  ConfigPtr config(raw);
  if (o.strict && msh_config_set(config.get(), "strict_all_missing_rows", "true") != MSH_OK) {
    report_error("--strict");
    return nullptr;
  }
  return config;
}

std::string output_dir(const Options& o, const msh_config* config) {
  if (!o.output_dir.empty()) return o.output_dir;
  char* raw = nullptr;
  if (msh_config_output_dir(config, &raw) != MSH_OK) return "out";
  StringPtr dir(raw);
  return dir.get();
}

int cmd_run(const Options& o) {
  const auto config = load(o);
  if (!config) return kError;
  msh_report* raw = nullptr;
  if (msh_run(config.get(), o.jobs, &raw) != MSH_OK) return report_error("run");
  const ReportPtr report(raw);
  const std::string dir = output_dir(o, config.get());
  if (msh_report_write(report.get(), config.get(), dir.c_str()) != MSH_OK) return report_error("write");

  const std::size_t n = msh_report_cell_count(report.get());
  std::size_t unavailable = 0;
  for (std::size_t i = 0; i < n; ++i) {
    msh_cell cell{};
    if (msh_report_cell(report.get(), i, &cell) == MSH_OK && !cell.available) ++unavailable;
  }
  if (const std::size_t w = msh_report_warning_count(report.get()))
    std::cerr << w << " warnings (first: " << msh_report_warning(report.get(), 0) << "); all are listed in "
              << dir << "/provenance.json\n";
  std::cout << n << " cells (" << unavailable << " unavailable) written to " << dir << '\n';
  return kOk;
}

int cmd_check(const Options& o) {
  const auto config = load(o);
  if (!config) return kError;
  const std::string dir = output_dir(o, config.get());
  std::size_t n = 0, failed = 0;
  const msh_status s = msh_check(config.get(), dir.c_str(), &n, &failed);
  if (s != MSH_OK && s != MSH_CHECK_FAILED) return report_error("check");
  std::cout << (n - failed) << " of " << n << " checks passed; results in " << dir << '\n';
  if (s == MSH_CHECK_FAILED) {
    std::cerr << "missshap: " << msh_last_error() << '\n';
    return kCheckFailed;
  }
  return kOk;
}

int cmd_explain(const Options& o) {
  std::string model, rows;
  if (!read_file(o.model, model) || !read_file(o.rows, rows)) return kError;
  char* raw = nullptr;
  if (msh_explain(model.c_str(), rows.c_str(), &raw) != MSH_OK) return report_error("explain");
  const StringPtr csv(raw);
  if (o.output_dir.empty()) {
    std::cout << csv.get();
    return kOk;
  }
  std::error_code ec;
  std::filesystem::create_directories(o.output_dir, ec);
  const std::string path = (std::filesystem::path(o.output_dir) / "explain.csv").string();
  std::ofstream out(path, std::ios::binary);
  if (!(out << csv.get())) {
    std::cerr << "missshap: cannot write " << path << '\n';
    return kError;
  }
  std::cout << "wrote " << path << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Measure how missing-data handling changes Shapley explanations"};
  app.set_version_flag("--version", std::string(msh_version()));
  app.require_subcommand(1);
  Options o;

  auto* run = app.add_subcommand("run", "Run the experiment grid and write tables, exports and plots");
  run->add_option("config", o.config, "Config file")->required();
  run->add_flag("--strict", o.strict, "Mark imputer cells unavailable when a row has every feature missing");
  run->add_option("--output-dir", o.output_dir, "Output directory (overrides the config)");
  run->add_option("--jobs", o.jobs, "Worker threads; 0 uses the config (results do not depend on it)")
      ->check(CLI::NonNegativeNumber);

  auto* check = app.add_subcommand("check", "Run the theory checks on synthetic data");
  check->add_option("config", o.config, "Config file")->required();
  check->add_option("--output-dir", o.output_dir, "Output directory (overrides the config)");

  auto* explain = app.add_subcommand("explain", "Explain rows with an exported model file");
  explain->add_option("model", o.model, "Model file from models/")->required();
  explain->add_option("rows", o.rows, "CSV of rows to explain")->required();
  explain->add_option("--output-dir", o.output_dir, "Write explain.csv here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kError;
  }
  if (run->parsed()) return cmd_run(o);
  if (check->parsed()) return cmd_check(o);
  return cmd_explain(o);
}
