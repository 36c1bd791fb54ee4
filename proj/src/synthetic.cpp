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

#include "missshap/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "missshap/rng.hpp"

namespace missshap::synthetic {

namespace {

double round4(double v) { return std::round(v * 1e4) / 1e4; }

}  // namespace

DataMatrix univariate_linear(std::size_t n, std::uint64_t seed, double noise_sd) {
  Stream rng(seed);
  Matrix x(static_cast<Eigen::Index>(n), 1);
  Vector y(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    x(i, 0) = rng.normal();
    y[i] = 2.0 * x(i, 0) + noise_sd * rng.normal();
  }
  return DataMatrix(std::move(x), std::move(y), {"x"}, Task::kRegression);
}

DataMatrix diabetes_like(std::size_t n, std::uint64_t seed) {
  Stream rng(seed);
  // loading on factor 1, loading on factor 2, location, scale, log-normal?
  struct Column {
    const char* name;
    double a, b, loc, scale;
    bool skewed;
    double weight;
  };
  static constexpr std::array<Column, 8> kColumns{{
      {"Pregnancies", 0.2, 0.7, 3.8, 3.0, false, 0.25},
      {"Glucose", 0.8, 0.1, 121.0, 30.0, false, 0.9},
      {"BloodPressure", 0.3, 0.4, 69.0, 12.0, false, 0.1},
      {"SkinThickness", 0.6, -0.2, 20.0, 10.0, false, 0.15},
      {"Insulin", 0.7, -0.1, 4.0, 0.6, true, 0.2},
      {"BMI", 0.7, 0.0, 32.0, 7.0, false, 0.6},
      {"DiabetesPedigreeFunction", 0.1, 0.1, -0.9, 0.6, true, 0.3},
      {"Age", 0.2, 0.8, 33.0, 11.0, false, 0.35},
  }};
  Matrix x(static_cast<Eigen::Index>(n), 8);
  Vector y(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double u1 = rng.normal();
    const double u2 = rng.normal();
    double signal = 0.0;
    for (Eigen::Index j = 0; j < 8; ++j) {
      const auto& c = kColumns[static_cast<std::size_t>(j)];
      const double e = std::sqrt(std::max(0.05, 1.0 - c.a * c.a - c.b * c.b)) * rng.normal();
      const double z = c.a * u1 + c.b * u2 + e;
      signal += c.weight * z;
      const double v = c.skewed ? std::exp(c.loc + c.scale * z) : c.loc + c.scale * z;
      x(i, j) = round4(v);
    }
    y[i] = round4(signal + 0.25 * std::tanh(u1) + 0.6 * rng.normal());
  }
  std::vector<std::string> names;
  for (const auto& c : kColumns) names.emplace_back(c.name);
  return DataMatrix(std::move(x), std::move(y), std::move(names), Task::kRegression);
}

DataMatrix glass_like(std::uint64_t seed) {
  Stream rng(seed);
  static constexpr std::array<int, 6> kCounts{70, 76, 17, 13, 9, 29};
  static constexpr std::array<const char*, 9> kNames{"RI", "Na", "Mg", "Al", "Si",
                                                     "K",  "Ca", "Ba", "Fe"};
  static constexpr std::array<double, 9> kLoc{1.518, 13.4, 2.68, 1.44, 72.65,
                                              0.50,  8.96, 0.17, 0.057};
  static constexpr std::array<double, 9> kScale{0.003, 0.8, 1.4, 0.5, 0.77,
                                                0.65,  1.4, 0.5, 0.097};
  // Class means in standardized units.
  static constexpr std::array<std::array<double, 9>, 6> kMeans{{
      {0.2, -0.3, 0.6, -0.6, -0.2, -0.1, 0.0, -0.35, 0.1},
      {0.0, -0.2, 0.4, 0.0, 0.1, 0.1, -0.1, -0.3, 0.2},
      {0.1, 0.0, 0.5, -0.4, -0.2, -0.1, 0.0, -0.3, 0.1},
      {-0.2, -0.6, -1.6, 1.4, 0.3, 1.4, 0.7, -0.2, 0.0},
      {-0.1, 0.6, -1.2, 0.0, 0.8, -0.8, 0.8, -0.35, -0.5},
      {-0.3, 1.3, -1.8, 1.4, 0.3, -0.4, -0.3, 1.8, -0.5},
  }};
  std::size_t n = 0;
  for (int c : kCounts) n += static_cast<std::size_t>(c);
  Matrix x(static_cast<Eigen::Index>(n), 9);
  Vector y(static_cast<Eigen::Index>(n));
  // Classes are interleaved deterministically so that any prefix is mixed.
  std::vector<int> labels;
  for (int c = 0; c < 6; ++c) labels.insert(labels.end(), static_cast<std::size_t>(kCounts[static_cast<std::size_t>(c)]), c);
  for (std::size_t i = labels.size(); i > 1; --i)
    std::swap(labels[i - 1], labels[static_cast<std::size_t>(rng.below(i))]);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const int c = labels[static_cast<std::size_t>(i)];
    const double shared = rng.normal();
    for (Eigen::Index j = 0; j < 9; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      // RI and Ca share a common component, as do Na and Si.
      const double corr = (j == 0 || j == 6) ? 0.7 * shared : (j == 1 || j == 4) ? -0.4 * shared : 0.0;
      const double z = kMeans[static_cast<std::size_t>(c)][ju] + corr + 0.7 * rng.normal();
      x(i, j) = round4(kLoc[ju] + kScale[ju] * z);
    }
    y[i] = c;
  }
  std::vector<std::string> names(kNames.begin(), kNames.end());
  return DataMatrix(std::move(x), std::move(y), std::move(names), Task::kClassification);
}

DataMatrix california_like(std::size_t n, std::uint64_t seed) {
  Stream rng(seed);
  Matrix x(static_cast<Eigen::Index>(n), 8);
  Vector y(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double income = std::exp(1.25 + 0.45 * rng.normal());
    const double age = std::clamp(28.0 + 12.0 * rng.normal(), 1.0, 52.0);
    const double rooms = std::max(1.0, 4.0 + 0.35 * income + 0.8 * rng.normal());
    const double bedrooms = std::max(0.5, 0.2 * rooms + 0.1 * rng.normal());
    const double population = std::exp(7.0 + 0.7 * rng.normal());
    const double occupancy = std::max(0.8, 2.9 + 0.6 * rng.normal());
    const bool south = rng.uniform() < 0.55;
    const double lat = south ? 34.0 + 0.6 * rng.normal() : 37.8 + 0.9 * rng.normal();
    const double lon = -121.6 + 0.9 * (37.5 - lat) * 0.8 + 0.5 * rng.normal();
    const double coast = std::exp(-std::abs(lon + 118.3 - 0.9 * (lat - 34.0)));
    x(i, 0) = round4(income);
    x(i, 1) = round4(age);
    x(i, 2) = round4(rooms);
    x(i, 3) = round4(bedrooms);
    x(i, 4) = std::round(population);
    x(i, 5) = round4(occupancy);
    x(i, 6) = round4(lat);
    x(i, 7) = round4(lon);
    y[i] = round4(0.45 * income + 0.008 * age + 1.1 * coast - 0.05 * (lat - 36.0) -
                  0.08 * occupancy + 0.35 * rng.normal() + 0.4);
  }
  return DataMatrix(std::move(x), std::move(y),
                    {"MedInc", "HouseAge", "AveRooms", "AveBedrms", "Population", "AveOccup",
                     "Latitude", "Longitude"},
                    Task::kRegression);
}

}  // namespace missshap::synthetic
