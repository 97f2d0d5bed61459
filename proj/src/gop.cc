// gopaf/src/gop.cc

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

#include "gopaf/gop.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <limits>

namespace gopaf {

namespace {

constexpr std::array<std::pair<GopMethod, std::string_view>, 8> kMethodNames{{
    {GopMethod::kAvgEa, "Avg-EA"},
    {GopMethod::kSa, "SA"},
    {GopMethod::kAfS, "AF-S"},
    {GopMethod::kAfSD, "AF-SD"},
    {GopMethod::kAfSDI, "AF-SDI"},
    {GopMethod::kAfSNorm, "AF-S-Norm"},
    {GopMethod::kAfSDNorm, "AF-SD-Norm"},
    {GopMethod::kAfSDINorm, "AF-SDI-Norm"},
}};

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

}  // namespace

std::string_view method_name(GopMethod m) {
  for (auto [method, name] : kMethodNames)
    if (method == m) return name;
  return "?";
}

GopMethod parse_method(std::string_view name) {
  for (auto [method, n] : kMethodNames)
    if (iequals(n, name)) return method;
  throw Error("unknown GOP method '" + std::string(name) + "'");
}

GopMethod af_method(Variant variant, bool normalized) {
  switch (variant) {
    case Variant::kS: return normalized ? GopMethod::kAfSNorm : GopMethod::kAfS;
    case Variant::kSD: return normalized ? GopMethod::kAfSDNorm : GopMethod::kAfSD;
    case Variant::kSDI: return normalized ? GopMethod::kAfSDINorm : GopMethod::kAfSDI;
  }
  throw Error("invalid variant");
}

bool is_alignment_free(GopMethod m) {
  return m != GopMethod::kAvgEa && m != GopMethod::kSa;
}

bool is_normalized(GopMethod m) {
  return m == GopMethod::kAfSNorm || m == GopMethod::kAfSDNorm ||
         m == GopMethod::kAfSDINorm;
}

Variant method_variant(GopMethod m) {
  switch (m) {
    case GopMethod::kAfS:
    case GopMethod::kAfSNorm: return Variant::kS;
    case GopMethod::kAfSD:
    case GopMethod::kAfSDNorm: return Variant::kSD;
    case GopMethod::kAfSDI:
    case GopMethod::kAfSDINorm: return Variant::kSDI;
    default: throw Error("method " + std::string(method_name(m)) + " has no variant");
  }
}

double gop_avg(const Posteriorgram& post, PhoneId phone, FrameSpan span) {
  if (span.first < 0 || span.first > span.last || span.last >= post.frames())
    throw Error("invalid span [" + std::to_string(span.first) + ", " +
                std::to_string(span.last) + "] for " +
                std::to_string(post.frames()) + " frames");
  if (phone < 0 || phone >= post.symbols()) throw Error("phone id out of range");
  double sum = 0.0;
  for (int t = span.first; t <= span.last; ++t) sum += post.log_prob(t, phone);
  return sum / span.length();
}

double central_occupancy(const DecodingGraph& graph, const ForwardResult& fwd,
                         OccupancyMode mode) {
  const auto central = graph.central_nodes();
  double occ = 0.0;
  if (mode == OccupancyMode::kForward) {
    for (int t = 0; t < fwd.frames; ++t)
      for (int s : central) occ += fwd.alpha(t, s);
    return occ;
  }
  if (fwd.normalized_beta.empty())
    throw Error("forward-backward occupancy needs backward variables");
  for (int t = 0; t < fwd.frames; ++t) {
    double norm = 0.0, part = 0.0;
    for (int s = 0; s < fwd.nodes; ++s) norm += fwd.alpha(t, s) * fwd.beta(t, s);
    if (norm <= 0.0) continue;
    for (int s : central) part += fwd.alpha(t, s) * fwd.beta(t, s);
    occ += part / norm;
  }
  return occ;
}

UtteranceScorer::UtteranceScorer(const Posteriorgram& post,
                                 const CanonicalUtterance& utt,
                                 const PhoneInventory& inventory,
                                 OccupancyMode occupancy_mode)
    : post_(post),
      utt_(utt),
      inventory_(inventory),
      occupancy_mode_(occupancy_mode) {
  utt_.validate(inventory_, post_.frames());
  if (post_.symbols() != inventory_.size())
    throw Error("posteriorgram has " + std::to_string(post_.symbols()) +
                " symbols, inventory has " + std::to_string(inventory_.size()));
}

void UtteranceScorer::check_index(int i) const {
  if (i < 0 || i >= static_cast<int>(utt_.phones.size()))
    throw Error("phone index " + std::to_string(i) + " out of range for '" +
                utt_.id + "'");
}

double UtteranceScorer::canonical_log_prob() {
  if (!canonical_) {
    DecodingGraph g = build_canonical_graph(utt_.phones, inventory_);
    canonical_ = forward(g, post_).log_total;
  }
  return *canonical_;
}

const Alignment& UtteranceScorer::self_alignment() {
  if (!alignment_) {
    DecodingGraph g = build_canonical_graph(utt_.phones, inventory_);
    alignment_ = viterbi_align(g, post_);
  }
  return *alignment_;
}

UtteranceScorer::AfTerms UtteranceScorer::af_terms(int i, Variant variant) {
  check_index(i);
  const auto key = std::make_pair(i, variant);
  if (auto it = af_cache_.find(key); it != af_cache_.end()) return it->second;
  const std::span<const PhoneId> phones(utt_.phones);
  DecodingGraph g = build_af_graph(phones.first(i), phones.subspan(i + 1),
                                   variant, inventory_);
  ForwardOptions opts;
  opts.with_beta = occupancy_mode_ == OccupancyMode::kForwardBackward;
  ForwardResult fwd = forward(g, post_, opts);
  const double numerator = canonical_log_prob();
  if (fwd.log_total == -std::numeric_limits<double>::infinity())
    throw Error("utterance '" + utt_.id +
                "': hypothesis set has zero probability");

  AfTerms terms;
  // The canonical sequence belongs to every relaxed set, so the difference
  // is non-positive up to rounding.
  terms.log_posterior = std::min(0.0, numerator - fwd.log_total);
  terms.raw_occupancy = central_occupancy(g, fwd, occupancy_mode_);
  terms.occupancy = std::max(1.0, terms.raw_occupancy);
  af_cache_.emplace(key, terms);
  return terms;
}

GopScore UtteranceScorer::score(int i, GopMethod method) {
  check_index(i);
  GopScore out;
  out.utterance_id = utt_.id;
  out.phone_index = i;
  out.method = method;
  const PhoneId phone = utt_.phones[i];
  switch (method) {
    case GopMethod::kAvgEa: {
      if (!utt_.alignment)
        throw Error("utterance '" + utt_.id + "' has no external alignment");
      out.span = (*utt_.alignment)[i];
      out.value = gop_avg(post_, phone, *out.span);
      break;
    }
    case GopMethod::kSa: {
      const Alignment& a = self_alignment();
      out.span = a.label_spans.at(i);
      out.value = gop_avg(post_, phone, *out.span);
      break;
    }
    default: {
      AfTerms terms = af_terms(i, method_variant(method));
      out.occupancy = terms.occupancy;
      out.value = is_normalized(method) ? terms.log_posterior / terms.occupancy
                                        : terms.log_posterior;
      break;
    }
  }
  return out;
}

GopScore gop_avg_ea(const Posteriorgram& post, const CanonicalUtterance& utt,
                    int i) {
  if (!utt.alignment)
    throw Error("utterance '" + utt.id + "' has no external alignment");
  if (i < 0 || i >= static_cast<int>(utt.phones.size()))
    throw Error("phone index out of range");
  GopScore out;
  out.utterance_id = utt.id;
  out.phone_index = i;
  out.method = GopMethod::kAvgEa;
  out.span = (*utt.alignment)[i];
  out.value = gop_avg(post, utt.phones[i], *out.span);
  return out;
}

GopScore gop_sa(const Posteriorgram& post, const CanonicalUtterance& utt, int i,
                const PhoneInventory& inventory) {
  return UtteranceScorer(post, utt, inventory).score(i, GopMethod::kSa);
}

GopScore gop_af(const Posteriorgram& post, const CanonicalUtterance& utt, int i,
                Variant variant, const PhoneInventory& inventory) {
  return UtteranceScorer(post, utt, inventory).score(i, af_method(variant, false));
}

double occupancy(const Posteriorgram& post, const CanonicalUtterance& utt,
                 int i, Variant variant, const PhoneInventory& inventory,
                 OccupancyMode mode) {
  return UtteranceScorer(post, utt, inventory, mode).af_terms(i, variant).occupancy;
}

GopScore gop_af_norm(const Posteriorgram& post, const CanonicalUtterance& utt,
                     int i, Variant variant, const PhoneInventory& inventory,
                     OccupancyMode mode) {
  return UtteranceScorer(post, utt, inventory, mode).score(i, af_method(variant, true));
}

}  // namespace gopaf
