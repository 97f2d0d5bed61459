// gopaf/src/log_math.h

// Copyright 2026 The gopaf Authors
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

#ifndef GOPAF_SRC_LOG_MATH_H_
#define GOPAF_SRC_LOG_MATH_H_

#include <algorithm>
#include <cmath>
#include <limits>

#include "gopaf/types.h"

namespace gopaf {

inline double clamped_log(double log_p) {
  return log_p < kLogUnderflow ? -std::numeric_limits<double>::infinity()
                               : log_p;
}

inline double clamped_exp(double log_p) {
  return log_p < kLogUnderflow ? 0.0 : std::exp(log_p);
}

inline double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a + std::log1p(std::exp(b - a));
}

}  // namespace gopaf

#endif  // GOPAF_SRC_LOG_MATH_H_
