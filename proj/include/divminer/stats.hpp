// Copyright 2026 The divminer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef DIVMINER_STATS_HPP_
#define DIVMINER_STATS_HPP_

#include <cstdint>
#include <optional>

namespace divminer {

// Count, sum and sum of squares of a sample. Values are usually shifted by a
// common reference before being added; the mean difference and variances
// are shift-invariant.
struct Moments {
  uint64_t count = 0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double x) {
    ++count;
    sum += x;
    sum_sq += x * x;
  }
  Moments& operator+=(const Moments& other) {
    count += other.count;
    sum += other.sum;
    sum_sq += other.sum_sq;
    return *this;
  }
  friend Moments operator-(Moments a, const Moments& b) {
    a.count -= b.count;
    a.sum -= b.sum;
    a.sum_sq -= b.sum_sq;
    return a;
  }

  // NaN when count == 0.
  double mean() const;
  // Unbiased sample variance, clamped at 0; NaN when count < 2.
  double variance() const;
};

// Welch's two-sample statistic |mean_a - mean_b| / sqrt(v_a/n_a + v_b/n_b).
// nullopt (undefined) when either sample has fewer than two values, or when
// both variances are zero and the means agree. Zero pooled variance with
// different means yields +infinity.
std::optional<double> welch_t(const Moments& a, const Moments& b);

}  // namespace divminer

#endif  // DIVMINER_STATS_HPP_
