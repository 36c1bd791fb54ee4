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
#include <string_view>
#include <vector>

namespace missshap {

// Counter-based, splittable generator "smx64-v1".
//
//   output(key, i)  = mix64(key + (i + 1) * 0x9E3779B97F4A7C15), i = 0, 1, ...
//   split(key, tag) = mix64(key ^ (mix64(tag) + 0x632BE59BD9B4E019))
//   split(key, str) = split(key, fnv1a64(str))
//
// mix64 is the SplitMix64 finalizer (Stafford variant 13). A stream with key k
// therefore reproduces SplitMix64 seeded with k. Derived quantities:
//
//   uniform()   = (output >> 11) * 2^-53                       in [0, 1)
//   below(n)    = output % n after rejecting output < (2^64 - n) % n
//   normal()    = sqrt(-2 ln(1 - u1)) * cos(2 pi u2), two uniforms per draw
//
// Every stream position is a pure function of (key, counter), so any
// implementation of the three formulas above reproduces masks and splits.
class Stream {
 public:
  static constexpr std::string_view kAlgorithm = "smx64-v1";

  explicit Stream(std::uint64_t key) : key_(key) {}

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

  Stream split(std::uint64_t tag) const;
  Stream split(std::string_view tag) const;

  std::uint64_t next();
  double uniform();
  std::uint64_t below(std::uint64_t n);
  double normal();

  // k distinct indices from [0, n) via partial Fisher-Yates, in draw order.
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t z);
std::uint64_t fnv1a64(std::string_view s);

}  // namespace missshap
