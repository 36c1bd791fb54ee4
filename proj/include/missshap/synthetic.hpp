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

#include "missshap/data.hpp"

namespace missshap::synthetic {

// y = 2x + noise, x ~ N(0, 1), noise ~ N(0, noise_sd^2). One feature "x".
DataMatrix univariate_linear(std::size_t n, std::uint64_t seed, double noise_sd = 0.5);

// Stand-in for the 8-feature diabetes regression table: two latent factors
// drive correlated, partly skewed columns; the target is mostly linear in the
// columns plus noise.
DataMatrix diabetes_like(std::size_t n = 768, std::uint64_t seed = 20240768);

// Stand-in for the 9-feature glass identification table: six imbalanced
// classes with correlated class-conditional Gaussians.
DataMatrix glass_like(std::uint64_t seed = 20240214);

// Stand-in for the California housing table (8 features, smooth non-linear
// target in income and location).
DataMatrix california_like(std::size_t n = 2000, std::uint64_t seed = 20240640);

}  // namespace missshap::synthetic
