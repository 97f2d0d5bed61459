// gopaf/include/gopaf/peakiness.h

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

#ifndef GOPAF_PEAKINESS_H_
#define GOPAF_PEAKINESS_H_

#include <span>
#include <string>
#include <vector>

#include "gopaf/features.h"
#include "gopaf/types.h"

namespace gopaf {

// Mean blank posterior over the frames of one utterance.
double utterance_blank_coverage(const Posteriorgram& post, PhoneId blank);

// Mean over utterances of the per-utterance blank coverage.
double blank_coverage(std::span<const Posteriorgram> corpus, PhoneId blank);

// Entropy in nats of p(path | L_C, O) over the CTC paths of the canonical
// sequence, from a forward pass in the expectation semiring.
double conditional_entropy(const Posteriorgram& post,
                           const CanonicalUtterance& utt,
                           const PhoneInventory& inventory);

struct UtterancePeakiness {
  std::string utterance_id;
  double blank_coverage;
  double cond_entropy;
};

struct PeakinessReport {
  double blank_coverage = 0.0;  // in [0, 1]
  double cond_entropy = 0.0;    // nats, not length-normalised
  int n_utterances = 0;
  std::vector<UtterancePeakiness> per_utterance;
  std::vector<BatchError> errors;
};

// Utterances that fail (e.g. infeasible) are reported in `errors` and left
// out of both averages.
PeakinessReport peakiness_report(std::span<const CorpusItem> corpus,
                                 const PhoneInventory& inventory, int jobs = 1);

}  // namespace gopaf

#endif  // GOPAF_PEAKINESS_H_
