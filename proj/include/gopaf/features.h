// gopaf/include/gopaf/features.h

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

#ifndef GOPAF_FEATURES_H_
#define GOPAF_FEATURES_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gopaf/types.h"

namespace gopaf {

// Log-ratio entries are clamped to [-kLprCap, kLprCap]; a candidate with zero
// probability gets +kLprCap.
inline constexpr double kLprCap = 1e4;

/// Alignment-free feature vector of one canonical phone.
///
/// lpp is log p(L_C | O). lpr has one entry per phoneme in inventory order
/// (blank skipped) followed by a deletion entry:
///   lpr[q]   = log p(L_C | O) - log p(L_L + [q] + L_R | O)
///   lpr[del] = log p(L_C | O) - log p(L_L + L_R | O)
/// The entry of the canonical phoneme itself is exactly 0.
struct FgopVector {
  std::string utterance_id;
  int phone_index = 0;
  double lpp = 0.0;
  std::vector<double> lpr;
  std::optional<double> occ;  // Occ(i) from the SD graph, floored at 1

  // [lpp, lpr..., occ?]
  std::vector<double> flatten() const;
};

// 1 + (|Q| + 1) + (with_occ ? 1 : 0).
int fgop_dimension(const PhoneInventory& inventory, bool with_occ);

// Column names matching flatten(): "lpp", "lpr:<phone>"..., "lpr:<del>", "occ".
std::vector<std::string> fgop_columns(const PhoneInventory& inventory,
                                      bool with_occ);

FgopVector fgop(const Posteriorgram& post, const CanonicalUtterance& utt, int i,
                const PhoneInventory& inventory, bool with_occ);

// All phones of one utterance. The canonical forward pass is shared.
std::vector<FgopVector> fgop_utterance(const Posteriorgram& post,
                                       const CanonicalUtterance& utt,
                                       const PhoneInventory& inventory,
                                       bool with_occ);

struct CorpusItem {
  Posteriorgram post;
  CanonicalUtterance utt;
};

struct BatchError {
  std::string utterance_id;
  std::string message;
};

struct FgopBatch {
  std::vector<FgopVector> vectors;  // manifest order, then phone index
  std::vector<BatchError> errors;
};

// Scores utterances on up to `jobs` threads. A failing utterance yields one
// error record and no vectors; the rest of the batch is unaffected.
FgopBatch fgop_batch(std::span<const CorpusItem> corpus,
                     const PhoneInventory& inventory, bool with_occ,
                     int jobs = 1);

}  // namespace gopaf

#endif  // GOPAF_FEATURES_H_
