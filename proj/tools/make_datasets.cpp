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

// Writes the bundled synthetic stand-in datasets as CSV files.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>

#include "missshap/data.hpp"
#include "missshap/synthetic.hpp"

namespace {

void emit(const std::filesystem::path& dir, const char* file, const missshap::DataMatrix& d,
          const char* target) {
  const auto path = (dir / file).string();
  missshap::write_csv(path, d.values(), d.feature_names(), d.target(), target);
  std::printf("%s: %zu rows, %zu features\n", path.c_str(), d.rows(), d.cols());
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: make_datasets <output-dir>\n");
    return 2;
  }
  try {
    const std::filesystem::path dir(argv[1]);
    std::filesystem::create_directories(dir);
    emit(dir, "diabetes.csv", missshap::synthetic::diabetes_like(), "target");
    emit(dir, "glass.csv", missshap::synthetic::glass_like(), "Type");
    emit(dir, "california.csv", missshap::synthetic::california_like(), "MedHouseVal");
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
