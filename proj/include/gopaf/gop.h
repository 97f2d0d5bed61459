// gopaf/include/gopaf/gop.h

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

#ifndef GOPAF_GOP_H_
#define GOPAF_GOP_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "gopaf/lattice.h"
#include "gopaf/types.h"

/**
   Scalar goodness-of-pronunciation scores for phone i of a canonical
   sequence L_C = L_L + [l_i] + L_R, all in natural-log units:

     Avg-EA   mean of log p(l_i | o_t) over an externally supplied span.
     SA       the same mean over the span found by Viterbi-aligning L_C on
              the posteriorgram being scored.
     AF-X     log p(L_C | O) - log p(L_X | O), where L_X replaces l_i by
              one phoneme (S), at most one (SD) or any sequence (SDI).
              This equals log p(l_i | O, L_L, L_R) under a uniform prior
              over the target's segmentation, and is always <= 0.
     AF-X-Norm  AF-X divided by Occ(i), the summed normalised forward
              variables of the central nodes of the L_X graph, floored at 1.
 */

namespace gopaf {

enum class GopMethod {
  kAvgEa,
  kSa,
  kAfS,
  kAfSD,
  kAfSDI,
  kAfSNorm,
  kAfSDNorm,
  kAfSDINorm,
};

std::string_view method_name(GopMethod m);  // "Avg-EA", "AF-SD-Norm", ...
GopMethod parse_method(std::string_view name);  // case-insensitive
GopMethod af_method(Variant variant, bool normalized);
bool is_alignment_free(GopMethod m);
bool is_normalized(GopMethod m);
// Hypothesis set of an AF method; throws for Avg-EA and SA.
Variant method_variant(GopMethod m);

struct GopScore {
  std::string utterance_id;
  int phone_index = 0;
  GopMethod method = GopMethod::kAfSD;
  double value = 0.0;
  std::optional<double> occupancy;
  std::optional<FrameSpan> span;
};

// kForward sums normalised forward variables over the central nodes.
// kForwardBackward sums forward-backward state posteriors instead; it is
// offered for comparison only and is not the default.
enum class OccupancyMode { kForward, kForwardBackward };

// Mean log posterior of `phone` over the inclusive span.
double gop_avg(const Posteriorgram& post, PhoneId phone, FrameSpan span);

GopScore gop_avg_ea(const Posteriorgram& post, const CanonicalUtterance& utt,
                    int i);
GopScore gop_sa(const Posteriorgram& post, const CanonicalUtterance& utt, int i,
                const PhoneInventory& inventory);
GopScore gop_af(const Posteriorgram& post, const CanonicalUtterance& utt, int i,
                Variant variant, const PhoneInventory& inventory);
double occupancy(const Posteriorgram& post, const CanonicalUtterance& utt,
                 int i, Variant variant, const PhoneInventory& inventory,
                 OccupancyMode mode = OccupancyMode::kForward);
GopScore gop_af_norm(const Posteriorgram& post, const CanonicalUtterance& utt,
                     int i, Variant variant, const PhoneInventory& inventory,
                     OccupancyMode mode = OccupancyMode::kForward);

// Unfloored central-node occupancy of a finished forward pass.
double central_occupancy(const DecodingGraph& graph, const ForwardResult& fwd,
                         OccupancyMode mode = OccupancyMode::kForward);

/// Scores every phone of one utterance, sharing the canonical forward pass
/// and the self-alignment between phones. Holds references to its inputs.
class UtteranceScorer {
 public:
  UtteranceScorer(const Posteriorgram& post, const CanonicalUtterance& utt,
                  const PhoneInventory& inventory,
                  OccupancyMode occupancy_mode = OccupancyMode::kForward);

  GopScore score(int i, GopMethod method);

  // log p(L_C | O).
  double canonical_log_prob();
  const Alignment& self_alignment();

  struct AfTerms {
    double log_posterior;  // AF-X value
    double raw_occupancy;
    double occupancy;  // max(1, raw_occupancy)
  };
  // Both terms come from the same forward pass over the L_X graph; results
  // are cached per (i, variant).
  AfTerms af_terms(int i, Variant variant);

 private:
  void check_index(int i) const;

  const Posteriorgram& post_;
  const CanonicalUtterance& utt_;
  const PhoneInventory& inventory_;
  OccupancyMode occupancy_mode_;
  std::optional<double> canonical_;
  std::optional<Alignment> alignment_;
  std::map<std::pair<int, Variant>, AfTerms> af_cache_;
};

}  // namespace gopaf

#endif  // GOPAF_GOP_H_
