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

#include "divminer/stats.hpp"

#include <cmath>
#include <limits>

namespace divminer {

double Moments::mean() const {
  if (count == 0) return std::numeric_limits<double>::quiet_NaN();
  return sum / static_cast<double>(count);
}

double Moments::variance() const {
  if (count < 2) return std::numeric_limits<double>::quiet_NaN();
  const double n = static_cast<double>(count);
  const double centered = sum_sq - sum * sum / n;
  return centered > 0.0 ? centered / (n - 1.0) : 0.0;
}

std::optional<double> welch_t(const Moments& a, const Moments& b) {
  if (a.count < 2 || b.count < 2) return std::nullopt;
  const double diff = std::abs(a.mean() - b.mean());
  const double pooled = a.variance() / static_cast<double>(a.count) +
                        b.variance() / static_cast<double>(b.count);
  if (pooled == 0.0) {
    if (diff == 0.0) return std::nullopt;
    return std::numeric_limits<double>::infinity();
  }
  return diff / std::sqrt(pooled);
}

}  // namespace divminer
