// gopaf/include/gopaf/evaluation.h

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

#ifndef GOPAF_EVALUATION_H_
#define GOPAF_EVALUATION_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gopaf/types.h"

namespace gopaf {

struct ScoredPhone {
  std::string utterance_id;
  int phone_index = 0;
  double score = 0.0;
  int label = 0;
};

// kLowerIsPositive ranks by the negated score: a low GOP signals the
// positive (mispronounced) class. This is the default for GOP values.
enum class Orientation { kHigherIsPositive, kLowerIsPositive };

std::string_view orientation_name(Orientation o);  // "raw" / "negated"
Orientation parse_orientation(std::string_view name);

struct AucResult {
  double auc = 0.0;
  double ci95_halfwidth = 0.0;
  int n_pos = 0;
  int n_neg = 0;
  Orientation orientation = Orientation::kLowerIsPositive;
};

// Mann-Whitney AUC with ties counted one half, plus the Hanley-McNeil 95%
// half-width. Throws Error unless both classes are present.
AucResult auc_roc(std::span<const ScoredPhone> scores, int positive_label,
                  Orientation orientation = Orientation::kLowerIsPositive);
AucResult auc_roc(std::span<const double> scores, const std::vector<bool>& positive,
                  Orientation orientation = Orientation::kHigherIsPositive);

// 1.96 * sqrt((A(1-A) + (n_pos-1)(Q1-A^2) + (n_neg-1)(Q2-A^2)) / (n_pos n_neg))
// with Q1 = A/(2-A), Q2 = 2A^2/(1+A).
double hanley_mcneil_halfwidth(double auc, int n_pos, int n_neg);

// Pearson correlation. Throws for unequal or short inputs and zero variance.
double pcc(std::span<const double> x, std::span<const double> y);

/// Least-squares polynomial of degree two, y ~ c0 + c1 x + c2 x^2.
struct Poly2Fit {
  std::array<double, 3> coef{};

  double predict(double x) const { return coef[0] + x * (coef[1] + x * coef[2]); }
  std::vector<double> predict(std::span<const double> x) const;
};

// Solved by column-pivoted Householder QR. Throws Error with fewer than three
// points or fewer than three distinct inputs.
Poly2Fit poly2_regression(std::span<const double> x, std::span<const double> y);

enum class SubstitutionKind { kCyclic, kSeeded };

struct SubstitutionStrategy {
  SubstitutionKind kind = SubstitutionKind::kCyclic;
  std::uint64_t seed = 0;
};

// One corrupted copy per position i: phone i replaced, labels one-hot at i,
// id suffixed with "#sim<i>". kCyclic takes the next phoneme id after the
// original (wrapping, skipping blank). kSeeded draws from a std::mt19937_64
// seeded with `seed`, one draw per position in order: index = draw mod
// (|Q| - 1) into the other phonemes in inventory order.
std::vector<CanonicalUtterance> simulate_errors(
    const CanonicalUtterance& utt, const PhoneInventory& inventory,
    SubstitutionStrategy strategy);

struct CroppedUtterance {
  Posteriorgram post;
  CanonicalUtterance utt;   // alignment shifted into the cropped frames
  int target_index = 0;     // position of the original phone i
  FrameSpan frames;         // cropped range in the original frames
};

// Keeps phones i-k .. i+k and the frames they span. When the window is
// clipped at an utterance edge the crop extends to that edge, so any
// k >= |phones| (or no k) returns the input unchanged.
CroppedUtterance crop_context(const Posteriorgram& post,
                              const CanonicalUtterance& utt, int i,
                              std::optional<int> k);

}  // namespace gopaf

#endif  // GOPAF_EVALUATION_H_
