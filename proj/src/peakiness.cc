// gopaf/src/peakiness.cc

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

#include "gopaf/peakiness.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "gopaf/lattice.h"
#include "log_math.h"
#include "parallel.h"

namespace gopaf {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double mixture_entropy(const std::vector<int>& members, const std::vector<double>& log_p,
                       const std::vector<double>& h, double log_total) {
  double out = 0.0;
  for (int q : members) {
    if (log_p[q] == kNegInf) continue;
    const double log_w = log_p[q] - log_total;
    out += std::exp(log_w) * (h[q] - log_w);
  }
  return out;
}

}  // namespace

double utterance_blank_coverage(const Posteriorgram& post, PhoneId blank) {
  if (blank < 0 || blank >= post.symbols()) throw Error("blank id out of range");
  double sum = 0.0;
  for (int t = 0; t < post.frames(); ++t) sum += clamped_exp(post.log_prob(t, blank));
  return sum / post.frames();
}

double blank_coverage(std::span<const Posteriorgram> corpus, PhoneId blank) {
  if (corpus.empty()) throw Error("blank coverage of an empty corpus");
  double sum = 0.0;
  for (const Posteriorgram& p : corpus) sum += utterance_blank_coverage(p, blank);
  return sum / static_cast<double>(corpus.size());
}

// Each node carries log P, the summed probability of the path prefixes ending
// there, and H, the entropy of those prefixes given that they end there.
// Prefix sets from different predecessors are disjoint, so the merged entropy
// is H(w) + sum_q w_q H_q with w_q the predecessor weights.
double conditional_entropy(const Posteriorgram& post,
                           const CanonicalUtterance& utt,
                           const PhoneInventory& inventory) {
  utt.validate(inventory, post.frames());
  DecodingGraph graph = build_canonical_graph(utt.phones, inventory);
  if (post.symbols() != graph.num_symbols())
    throw Error("posteriorgram symbol count does not match the inventory");
  const int frames = post.frames();
  if (frames < graph.min_frames())
    throw InfeasibleError("utterance '" + utt.id + "' is too short for its transcription");
  const int n = graph.num_nodes();

  std::vector<double> lp_prev(n, kNegInf), h_prev(n, 0.0), lp_cur(n), h_cur(n);
  std::vector<int> sources;
  for (int t = 0; t < frames; ++t) {
    for (int s = 0; s < n; ++s) {
      lp_cur[s] = kNegInf;
      h_cur[s] = 0.0;
      if (graph.steps_to_end(s) > frames - 1 - t) continue;
      const double logy = clamped_log(post.log_prob(t, graph.node(s).symbol));
      if (std::isinf(logy)) continue;
      if (t == 0) {
        if (graph.is_start(s)) lp_cur[s] = logy;
        continue;
      }
      sources.assign(1, s);
      sources.insert(sources.end(), graph.predecessors(s).begin(), graph.predecessors(s).end());
      if (graph.in_clique(s))
        for (int c : graph.clique())
          if (c != s) sources.push_back(c);
      double in_lp = kNegInf;
      for (int q : sources) in_lp = log_add(in_lp, lp_prev[q]);
      if (in_lp == kNegInf) continue;
      lp_cur[s] = in_lp + logy;
      h_cur[s] = mixture_entropy(sources, lp_prev, h_prev, in_lp);
    }
    if (std::all_of(lp_cur.begin(), lp_cur.end(), [](double v) { return v == kNegInf; }))
      throw Error("utterance '" + utt.id + "': transcription has zero probability");
    std::swap(lp_prev, lp_cur);
    std::swap(h_prev, h_cur);
  }
  // Only end nodes survive the last frame.
  std::vector<int> ends;
  double log_z = kNegInf;
  for (int s = 0; s < n; ++s) {
    if (lp_prev[s] == kNegInf) continue;
    ends.push_back(s);
    log_z = log_add(log_z, lp_prev[s]);
  }
  return std::max(0.0, mixture_entropy(ends, lp_prev, h_prev, log_z));
}

PeakinessReport peakiness_report(std::span<const CorpusItem> corpus,
                                 const PhoneInventory& inventory, int jobs) {
  if (corpus.empty()) throw Error("peakiness of an empty corpus");
  std::vector<std::optional<UtterancePeakiness>> rows(corpus.size());
  std::vector<std::string> failures(corpus.size());
  parallel_for(corpus.size(), jobs, [&](std::size_t u) {
    try {
      const CorpusItem& item = corpus[u];
      rows[u] = UtterancePeakiness{
          item.utt.id, utterance_blank_coverage(item.post, inventory.blank()),
          conditional_entropy(item.post, item.utt, inventory)};
    } catch (const std::exception& e) {
      failures[u] = e.what();
    }
  });
  PeakinessReport report;
  for (std::size_t u = 0; u < corpus.size(); ++u) {
    if (!rows[u]) {
      report.errors.push_back({corpus[u].utt.id, failures[u]});
      continue;
    }
    report.per_utterance.push_back(*rows[u]);
  }
  report.n_utterances = static_cast<int>(report.per_utterance.size());
  if (report.n_utterances == 0) return report;
  for (const auto& r : report.per_utterance) {
    report.blank_coverage += r.blank_coverage;
    report.cond_entropy += r.cond_entropy;
  }
  report.blank_coverage /= report.n_utterances;
  report.cond_entropy /= report.n_utterances;
  return report;
}

}  // namespace gopaf
