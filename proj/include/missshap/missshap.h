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

/* C interface to the missshap library.
 *
 * Every function returns an msh_status. On failure, msh_last_error() returns a
 * message for the calling thread that stays valid until that thread's next
 * call into the library. Strings handed out through `char**` parameters are
 * owned by the caller and released with msh_string_free. Handles are opaque
 * and released with their matching *_free function; passing NULL to a free
 * function is a no-op.
 */
#ifndef MISSSHAP_MISSSHAP_H_
#define MISSSHAP_MISSSHAP_H_

#include <stddef.h>

#if defined(_WIN32)
#if defined(MISSSHAP_BUILDING)
#define MSH_API __declspec(dllexport)
#else
#define MSH_API __declspec(dllimport)
#endif
#else
#define MSH_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum msh_status {
  MSH_OK = 0,
  MSH_CHECK_FAILED = 1, /* a theory check did not hold */
  MSH_CONFIG = 2,       /* malformed or invalid configuration */
  MSH_IO = 3,
  MSH_INVALID_ARGUMENT = 4,
  MSH_INTERNAL = 5
} msh_status;

typedef struct msh_config msh_config;
typedef struct msh_report msh_report;

/* Criteria codes reported by msh_report_cell. */
typedef enum msh_criteria { MSH_MSE = 0, MSH_MSE_SHAP = 1, MSH_IMPUTATION_MSE = 2 } msh_criteria;

typedef struct msh_cell {
  const char* dataset; /* borrowed from the report */
  const char* method;  /* borrowed from the report */
  double rate;
  msh_criteria criteria;
  int available; /* 0 when the cell is unavailable; value is then NaN */
  double value;
  size_t n_repetitions;
} msh_cell;

MSH_API const char* msh_version(void);
MSH_API const char* msh_last_error(void);
MSH_API void msh_string_free(char* s);

/* Relative dataset paths resolve against the file's directory. An unreadable
 * file is reported as MSH_CONFIG. */
MSH_API msh_status msh_config_load(const char* path, msh_config** out);
/* Relative dataset paths resolve against base_dir, which may be NULL. */
MSH_API msh_status msh_config_parse(const char* text, const char* base_dir, msh_config** out);
/* Overrides one key; same syntax and validation as a config line. Relative
 * paths in values resolve against the working directory. */
MSH_API msh_status msh_config_set(msh_config* config, const char* key, const char* value);
/* Output directory from the config; caller frees. */
MSH_API msh_status msh_config_output_dir(const msh_config* config, char** out);
MSH_API void msh_config_free(msh_config* config);

/* jobs = 0 uses the config's setting. Results do not depend on jobs. */
MSH_API msh_status msh_run(const msh_config* config, size_t jobs, msh_report** out);
/* Writes tables, Shapley exports, plots and provenance under dir. */
MSH_API msh_status msh_report_write(const msh_report* report, const msh_config* config, const char* dir);
MSH_API size_t msh_report_cell_count(const msh_report* report);
MSH_API msh_status msh_report_cell(const msh_report* report, size_t index, msh_cell* out);
MSH_API size_t msh_report_warning_count(const msh_report* report);
MSH_API const char* msh_report_warning(const msh_report* report, size_t index);
MSH_API void msh_report_free(msh_report* report);

/* Runs the theory checks and writes their tables under dir (skipped when dir
 * is NULL). Returns MSH_CHECK_FAILED when any check fails; *n_checks and
 * *n_failed are set whenever the suite ran. */
MSH_API msh_status msh_check(const msh_config* config, const char* dir, size_t* n_checks, size_t* n_failed);

/* Explains rows (CSV with a header naming the model's features; empty, NA or
 * nan mark missing cells) with a model file written by msh_report_write.
 * *out receives the Shapley CSV. */
MSH_API msh_status msh_explain(const char* model_json, const char* rows_csv, char** out);

#ifdef __cplusplus
}
#endif

#endif /* MISSSHAP_MISSSHAP_H_ */
