// gopaf/src/features.cc

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

#include "gopaf/features.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gopaf/gop.h"
#include "gopaf/lattice.h"
#include "log_math.h"
#include "parallel.h"

namespace gopaf {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double clamp_ratio(double log_canonical, double log_candidate) {
  if (log_candidate == kNegInf) return log_canonical == kNegInf ? 0.0 : kLprCap;
  if (log_canonical == kNegInf) return -kLprCap;
  return std::clamp(log_canonical - log_candidate, -kLprCap, kLprCap);
}

// Log-domain forward and backward variables over the CTC chain
// b0 l1 b1 ... ln bn of the whole canonical sequence (node 2j-1 is phone j,
// 1-based). Because a prefix of the chain never depends on later nodes, the
// forward variables of nodes 0..2i are those of the left context of phone i;
// symmetrically the backward variables of nodes 2i+2..2n belong to its right
// context. Every substitution or deletion candidate for phone i is then a
// single O(T) sum that bridges the two.
class ChainLattice {
 public:
  ChainLattice(const Posteriorgram& post, std::span<const PhoneId> phones,
               PhoneId blank)
      : post_(post),
        phones_(phones),
        blank_(blank),
        frames_(post.frames()),
        width_(2 * static_cast<int>(phones.size()) + 1),
        alpha_(static_cast<std::size_t>(frames_) * width_, kNegInf),
        beta_(static_cast<std::size_t>(frames_) * width_, kNegInf) {
    run_forward();
    run_backward();
  }

  // log p(L_L + [q] + L_R | O) for phone i.
  double substitution(int i, PhoneId q) const {
    const int k = i;                                       // |L_L|
    const int m = static_cast<int>(phones_.size()) - i - 1;  // |L_R|
    const int left_blank = 2 * i;
    const int right_blank = 2 * i + 2;
    const bool can_skip_in = k > 0 && phones_[i - 1] != q;
    const bool can_skip_out = m > 0 && phones_[i + 1] != q;

    double inside = kNegInf;  // paths currently in the q node
    double total = kNegInf;
    for (int t = 0; t < frames_; ++t) {
      double enter;
      if (t == 0) {
        enter = k == 0 ? 0.0 : kNegInf;
      } else {
        enter = alpha(t - 1, left_blank);
        if (can_skip_in) enter = log_add(enter, alpha(t - 1, left_blank - 1));
      }
      inside = log_add(inside, enter) + logy(t, q);
      double leave;
      if (t + 1 < frames_) {
        leave = beta(t + 1, right_blank);
        if (can_skip_out) leave = log_add(leave, beta(t + 1, right_blank + 1));
      } else {
        leave = m == 0 ? 0.0 : kNegInf;
      }
      total = log_add(total, inside + leave);
    }
    return total;
  }

  // log p(L_L + L_R | O) for phone i. The blank run between the contexts is
  // carried by the left chain's trailing blank.
  double deletion(int i) const {
    const int k = i;
    const int m = static_cast<int>(phones_.size()) - i - 1;
    const int left_blank = 2 * i;
    if (m == 0) {
      double total = alpha(frames_ - 1, left_blank);
      if (k > 0) total = log_add(total, alpha(frames_ - 1, left_blank - 1));
      return total;
    }
    const int first_right = 2 * i + 3;
    const bool can_skip = k > 0 && phones_[i - 1] != phones_[i + 1];
    double total = k == 0 ? beta(0, first_right) : kNegInf;
    for (int t = 0; t + 1 < frames_; ++t) {
      double enter = alpha(t, left_blank);
      if (can_skip) enter = log_add(enter, alpha(t, left_blank - 1));
      total = log_add(total, enter + beta(t + 1, first_right));
    }
    return total;
  }

 private:
  PhoneId symbol(int s) const { return s % 2 == 0 ? blank_ : phones_[s / 2]; }
  bool can_skip_to(int s) const {  // label s reachable from label s - 2
    return s % 2 == 1 && s >= 3 && phones_[s / 2] != phones_[s / 2 - 1];
  }
  double logy(int t, PhoneId v) const { return clamped_log(post_.log_prob(t, v)); }
  double& alpha(int t, int s) { return alpha_[static_cast<std::size_t>(t) * width_ + s]; }
  double alpha(int t, int s) const { return alpha_[static_cast<std::size_t>(t) * width_ + s]; }
  double& beta(int t, int s) { return beta_[static_cast<std::size_t>(t) * width_ + s]; }
  double beta(int t, int s) const { return beta_[static_cast<std::size_t>(t) * width_ + s]; }

  void run_forward() {
    alpha(0, 0) = logy(0, blank_);
    alpha(0, 1) = logy(0, symbol(1));
    for (int t = 1; t < frames_; ++t) {
      for (int s = 0; s < width_; ++s) {
        double in = alpha(t - 1, s);
        if (s >= 1) in = log_add(in, alpha(t - 1, s - 1));
        if (can_skip_to(s)) in = log_add(in, alpha(t - 1, s - 2));
        alpha(t, s) = in + logy(t, symbol(s));
      }
    }
  }

  // beta(t, s): log probability of frames t..T-1 given node s at frame t,
  // including its own emission, ending in one of the last two nodes.
  void run_backward() {
    const int last = width_ - 1;
    beta(frames_ - 1, last) = logy(frames_ - 1, blank_);
    beta(frames_ - 1, last - 1) = logy(frames_ - 1, symbol(last - 1));
    for (int t = frames_ - 2; t >= 0; --t) {
      for (int s = 0; s < width_; ++s) {
        double out = beta(t + 1, s);
        if (s + 1 < width_) out = log_add(out, beta(t + 1, s + 1));
        if (s + 2 < width_ && can_skip_to(s + 2)) out = log_add(out, beta(t + 1, s + 2));
        beta(t, s) = out + logy(t, symbol(s));
      }
    }
  }

  const Posteriorgram& post_;
  std::span<const PhoneId> phones_;
  PhoneId blank_;
  int frames_;
  int width_;
  std::vector<double> alpha_;
  std::vector<double> beta_;
};

FgopVector score_phone(const Posteriorgram& post, const CanonicalUtterance& utt,
                       int i, const PhoneInventory& inventory, bool with_occ,
                       double lpp, const ChainLattice& chain) {
  FgopVector v;
  v.utterance_id = utt.id;
  v.phone_index = i;
  v.lpp = lpp;
  const PhoneId target = utt.phones[i];
  for (PhoneId q : inventory.phones())
    v.lpr.push_back(q == target ? 0.0 : clamp_ratio(lpp, chain.substitution(i, q)));
  v.lpr.push_back(clamp_ratio(lpp, chain.deletion(i)));
  if (with_occ) {
    const std::span<const PhoneId> phones(utt.phones);
    DecodingGraph g = build_af_graph(phones.first(i), phones.subspan(i + 1),
                                     Variant::kSD, inventory);
    v.occ = std::max(1.0, central_occupancy(g, forward(g, post)));
  }
  return v;
}

void check_inputs(const Posteriorgram& post, const CanonicalUtterance& utt,
                  const PhoneInventory& inventory) {
  utt.validate(inventory, post.frames());
  if (post.symbols() != inventory.size())
    throw Error("posteriorgram has " + std::to_string(post.symbols()) +
                " symbols, inventory has " + std::to_string(inventory.size()));
}

double canonical_lpp(const Posteriorgram& post, const CanonicalUtterance& utt,
                     const PhoneInventory& inventory) {
  return forward(build_canonical_graph(utt.phones, inventory), post).log_total;
}

}  // namespace

std::vector<double> FgopVector::flatten() const {
  std::vector<double> out;
  out.reserve(lpr.size() + 2);
  out.push_back(lpp);
  out.insert(out.end(), lpr.begin(), lpr.end());
  if (occ) out.push_back(*occ);
  return out;
}

int fgop_dimension(const PhoneInventory& inventory, bool with_occ) {
  return 1 + inventory.size() + (with_occ ? 1 : 0);
}

std::vector<std::string> fgop_columns(const PhoneInventory& inventory,
                                      bool with_occ) {
  std::vector<std::string> cols{"lpp"};
  for (PhoneId q : inventory.phones()) cols.push_back("lpr:" + inventory.name(q));
  cols.push_back("lpr:<del>");
  if (with_occ) cols.push_back("occ");
  return cols;
}

FgopVector fgop(const Posteriorgram& post, const CanonicalUtterance& utt, int i,
                const PhoneInventory& inventory, bool with_occ) {
  check_inputs(post, utt, inventory);
  if (i < 0 || i >= static_cast<int>(utt.phones.size()))
    throw Error("phone index out of range");
  const double lpp = canonical_lpp(post, utt, inventory);
  ChainLattice chain(post, utt.phones, inventory.blank());
  return score_phone(post, utt, i, inventory, with_occ, lpp, chain);
}

std::vector<FgopVector> fgop_utterance(const Posteriorgram& post,
                                       const CanonicalUtterance& utt,
                                       const PhoneInventory& inventory,
                                       bool with_occ) {
  check_inputs(post, utt, inventory);
  const double lpp = canonical_lpp(post, utt, inventory);
  ChainLattice chain(post, utt.phones, inventory.blank());
  std::vector<FgopVector> out;
  out.reserve(utt.phones.size());
  for (int i = 0; i < static_cast<int>(utt.phones.size()); ++i)
    out.push_back(score_phone(post, utt, i, inventory, with_occ, lpp, chain));
  return out;
}

FgopBatch fgop_batch(std::span<const CorpusItem> corpus,
                     const PhoneInventory& inventory, bool with_occ, int jobs) {
  std::vector<std::vector<FgopVector>> per_utt(corpus.size());
  std::vector<std::optional<std::string>> failures(corpus.size());
  parallel_for(corpus.size(), jobs, [&](std::size_t u) {
    try {
      per_utt[u] = fgop_utterance(corpus[u].post, corpus[u].utt, inventory, with_occ);
    } catch (const std::exception& e) {
      failures[u] = e.what();
    }
  });
  FgopBatch batch;
  for (std::size_t u = 0; u < corpus.size(); ++u) {
    if (failures[u]) {
      batch.errors.push_back({corpus[u].utt.id, *failures[u]});
      continue;
    }
    for (auto& v : per_utt[u]) batch.vectors.push_back(std::move(v));
  }
  return batch;
}

}  // namespace gopaf
