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

#include "missshap/missshap.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <limits>
#include <new>
#include <string>

#include "missshap/error.hpp"
#include "missshap/experiment.hpp"

struct msh_config {
  missshap::experiment::Config config;
};

struct msh_report {
  missshap::experiment::Report report;
};

namespace {

thread_local std::string g_last_error;

msh_status status_of(missshap::ErrorKind kind) {
  switch (kind) {
    case missshap::ErrorKind::kConfig: return MSH_CONFIG;
    case missshap::ErrorKind::kIo: return MSH_IO;
    case missshap::ErrorKind::kParse:
    case missshap::ErrorKind::kInvalidArgument: return MSH_INVALID_ARGUMENT;
    case missshap::ErrorKind::kNumeric: return MSH_INTERNAL;
  }
  return MSH_INTERNAL;
}

// Runs fn, translating exceptions into a status and the thread's last error.
template <class F>
msh_status guard(F&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const missshap::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown error";
  }
  return MSH_INTERNAL;
}

msh_status null_argument(const char* name) {
  g_last_error = std::string("null argument: ") + name;
  return MSH_INVALID_ARGUMENT;
}

char* copy_out(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

}  // namespace

extern "C" {

const char* msh_version(void) { return "1.0.0"; }

const char* msh_last_error(void) { return g_last_error.c_str(); }

void msh_string_free(char* s) { std::free(s); }

msh_status msh_config_load(const char* path, msh_config** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guard([&] {
    *out = new msh_config{missshap::experiment::load_config(path)};
    return MSH_OK;
  });
}

msh_status msh_config_parse(const char* text, const char* base_dir, msh_config** out) {
  if (!text) return null_argument("text");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guard([&] {
    *out = new msh_config{missshap::experiment::parse_config(text, base_dir ? base_dir : "")};
    return MSH_OK;
  });
}

msh_status msh_config_set(msh_config* config, const char* key, const char* value) {
  if (!config) return null_argument("config");
  if (!key) return null_argument("key");
  if (!value) return null_argument("value");
  return guard([&] {
    // Applied to a copy so a rejected value leaves the config untouched.
    auto updated = config->config;
    updated.set(key, value, std::filesystem::current_path());
    config->config = std::move(updated);
    return MSH_OK;
  });
}

msh_status msh_config_output_dir(const msh_config* config, char** out) {
  if (!config) return null_argument("config");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guard([&] {
    *out = copy_out(config->config.output_dir.string());
    return MSH_OK;
  });
}

void msh_config_free(msh_config* config) { delete config; }

msh_status msh_run(const msh_config* config, size_t jobs, msh_report** out) {
  if (!config) return null_argument("config");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guard([&] {
    const std::size_t j = jobs ? jobs : config->config.jobs;
    *out = new msh_report{missshap::experiment::run(config->config, j)};
    return MSH_OK;
  });
}

msh_status msh_report_write(const msh_report* report, const msh_config* config, const char* dir) {
  if (!report) return null_argument("report");
  if (!config) return null_argument("config");
  if (!dir) return null_argument("dir");
  return guard([&] {
    missshap::experiment::write_report(report->report, config->config, dir);
    return MSH_OK;
  });
}

size_t msh_report_cell_count(const msh_report* report) { return report ? report->report.cells.size() : 0; }

msh_status msh_report_cell(const msh_report* report, size_t index, msh_cell* out) {
  if (!report) return null_argument("report");
  if (!out) return null_argument("out");
  if (index >= report->report.cells.size()) {
    g_last_error = "cell index out of range";
    return MSH_INVALID_ARGUMENT;
  }
  const auto& c = report->report.cells[index];
  out->dataset = c.dataset.c_str();
  out->method = c.method.c_str();
  out->rate = c.rate;
  out->criteria = static_cast<msh_criteria>(c.criteria);
  out->available = c.value.has_value() ? 1 : 0;
  out->value = c.value.value_or(std::numeric_limits<double>::quiet_NaN());
  out->n_repetitions = c.n_repetitions;
  return MSH_OK;
}

size_t msh_report_warning_count(const msh_report* report) { return report ? report->report.warnings.size() : 0; }

const char* msh_report_warning(const msh_report* report, size_t index) {
  if (!report || index >= report->report.warnings.size()) return nullptr;
  return report->report.warnings[index].c_str();
}

void msh_report_free(msh_report* report) { delete report; }

msh_status msh_check(const msh_config* config, const char* dir, size_t* n_checks, size_t* n_failed) {
  if (!config) return null_argument("config");
  return guard([&] {
    const auto outcome = missshap::experiment::run_check(config->config);
    std::size_t failed = 0;
    for (const auto& row : outcome.suite.rows) failed += row.pass ? 0 : 1;
    if (n_checks) *n_checks = outcome.n_checks;
    if (n_failed) *n_failed = failed;
    if (dir) missshap::experiment::write_check(outcome, dir);
    if (outcome.suite.all_passed) return MSH_OK;
    g_last_error = std::to_string(failed) + " of " + std::to_string(outcome.n_checks) + " checks failed";
    return MSH_CHECK_FAILED;
  });
}

msh_status msh_explain(const char* model_json, const char* rows_csv, char** out) {
  if (!model_json) return null_argument("model_json");
  if (!rows_csv) return null_argument("rows_csv");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guard([&] {
    *out = copy_out(missshap::experiment::explain_csv(model_json, rows_csv));
    return MSH_OK;
  });
}

}  // extern "C"
