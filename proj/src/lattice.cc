// gopaf/src/lattice.cc

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

#include "gopaf/lattice.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <limits>
#include <set>
#include <string>

#include "log_math.h"

namespace gopaf {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}  // namespace

std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::kS: return "S";
    case Variant::kSD: return "SD";
    case Variant::kSDI: return "SDI";
  }
  return "?";
}

Variant parse_variant(std::string_view name) {
  std::string lower(name);
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "s") return Variant::kS;
  if (lower == "sd") return Variant::kSD;
  if (lower == "sdi") return Variant::kSDI;
  throw Error("invalid variant '" + std::string(name) + "' (expected s, sd or sdi)");
}

// Assembles a graph from token-level transitions. A token is a non-blank
// node; link(prev, next, gap) allows `next` to follow `prev` either directly
// (when their symbols differ) or through one or more frames of the blank
// node `gap`. kBos / kEos stand for the utterance boundaries.
class GraphBuilder {
 public:
  static constexpr int kBos = -1;
  static constexpr int kEos = -2;

  explicit GraphBuilder(const PhoneInventory& inventory)
      : blank_(inventory.blank()) {
    g_.num_symbols_ = inventory.size();
    g_.blank_ = inventory.blank();
  }

  int add(PhoneId symbol, NodeKind kind) {
    g_.nodes_.push_back({symbol, kind});
    g_.is_start_.push_back(0);
    g_.is_end_.push_back(0);
    g_.in_clique_.push_back(0);
    return g_.num_nodes() - 1;
  }
  int add_blank(NodeKind kind = NodeKind::kBlank) { return add(blank_, kind); }

  void set_clique(std::vector<int> members) {
    for (int s : members) g_.in_clique_[s] = 1;
    g_.clique_ = std::move(members);
  }
  void mark_central(int s) { g_.central_.push_back(s); }
  void mark_label(int s) { g_.labels_.push_back(s); }

  void link(int prev, int next, int gap) {
    if (prev == kBos) {
      g_.is_start_[gap] = 1;
    } else {
      arc(prev, gap);
    }
    if (next == kEos) {
      g_.is_end_[gap] = 1;
    } else {
      arc(gap, next);
    }
    if (prev == kBos && next == kEos) return;
    if (prev == kBos) {
      g_.is_start_[next] = 1;
    } else if (next == kEos) {
      g_.is_end_[prev] = 1;
    } else if (g_.nodes_[prev].symbol != g_.nodes_[next].symbol) {
      arc(prev, next);
    }
  }

  DecodingGraph finish();

 private:
  void arc(int from, int to) {
    if (from == to) return;
    if (g_.in_clique_[from] && g_.in_clique_[to]) return;  // implicit
    arcs_.emplace(from, to);
  }

  PhoneId blank_;
  DecodingGraph g_;
  std::set<std::pair<int, int>> arcs_;
};

DecodingGraph GraphBuilder::finish() {
  const int n = g_.num_nodes();
  g_.preds_.assign(n, {});
  g_.succs_.assign(n, {});
  for (auto [from, to] : arcs_) {
    g_.preds_[to].push_back(from);
    g_.succs_[from].push_back(to);
  }

  // Backward BFS for the fewest transitions to an end node.
  g_.steps_to_end_.assign(n, -1);
  std::deque<int> queue;
  for (int s = 0; s < n; ++s) {
    if (g_.is_end_[s]) {
      g_.steps_to_end_[s] = 0;
      queue.push_back(s);
    }
  }
  bool clique_done = false;
  auto relax_back = [&](int p, int d) {
    if (g_.steps_to_end_[p] < 0) {
      g_.steps_to_end_[p] = d;
      queue.push_back(p);
    }
  };
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    const int d = g_.steps_to_end_[u] + 1;
    for (int p : g_.preds_[u]) relax_back(p, d);
    if (g_.in_clique_[u] && !clique_done) {
      clique_done = true;
      for (int c : g_.clique_) relax_back(c, d);
    }
  }

  // Forward reachability, used only to check the topology.
  std::vector<char> reached(n, 0);
  for (int s = 0; s < n; ++s) {
    if (g_.is_start_[s]) {
      reached[s] = 1;
      queue.push_back(s);
    }
  }
  clique_done = false;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    auto visit = [&](int v) {
      if (!reached[v]) {
        reached[v] = 1;
        queue.push_back(v);
      }
    };
    for (int v : g_.succs_[u]) visit(v);
    if (g_.in_clique_[u] && !clique_done) {
      clique_done = true;
      for (int c : g_.clique_) visit(c);
    }
  }

  g_.min_frames_ = std::numeric_limits<int>::max();
  for (int s = 0; s < n; ++s) {
    if (!reached[s] || g_.steps_to_end_[s] < 0)
      throw Error("internal: decoding graph node " + std::to_string(s) +
                  " is not on any start-to-end path");
    if (g_.is_start_[s])
      g_.min_frames_ = std::min(g_.min_frames_, g_.steps_to_end_[s] + 1);
  }
  return std::move(g_);
}

bool DecodingGraph::has_arc(int from, int to) const {
  if (from == to) return false;
  if (in_clique_[from] && in_clique_[to]) return true;
  const auto& p = preds_[to];
  return std::find(p.begin(), p.end(), from) != p.end();
}

std::vector<std::pair<int, int>> DecodingGraph::arcs() const {
  std::vector<std::pair<int, int>> out;
  for (int to = 0; to < num_nodes(); ++to)
    for (int from : preds_[to]) out.emplace_back(from, to);
  for (int a : clique_)
    for (int b : clique_)
      if (a != b) out.emplace_back(a, b);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> DecodingGraph::start_nodes() const {
  std::vector<int> out;
  for (int s = 0; s < num_nodes(); ++s)
    if (is_start_[s]) out.push_back(s);
  return out;
}

std::vector<int> DecodingGraph::end_nodes() const {
  std::vector<int> out;
  for (int s = 0; s < num_nodes(); ++s)
    if (is_end_[s]) out.push_back(s);
  return out;
}

namespace {

void check_phones(std::span<const PhoneId> phones,
                  const PhoneInventory& inventory) {
  for (PhoneId p : phones) {
    if (!inventory.is_valid(p))
      throw Error("phone id " + std::to_string(p) + " out of range");
    if (p == inventory.blank()) throw Error("blank id in phone sequence");
  }
}

// b0 l1 b1 ... ln bn with consecutive labels linked through b_j.
struct Chain {
  std::vector<int> labels;
  std::vector<int> blanks;  // labels.size() + 1 entries
};

Chain add_chain(GraphBuilder& b, std::span<const PhoneId> phones) {
  Chain c;
  c.blanks.push_back(b.add_blank());
  for (PhoneId p : phones) {
    c.labels.push_back(b.add(p, NodeKind::kContext));
    b.mark_label(c.labels.back());
    c.blanks.push_back(b.add_blank());
  }
  for (std::size_t j = 1; j < c.labels.size(); ++j)
    b.link(c.labels[j - 1], c.labels[j], c.blanks[j]);
  return c;
}

}  // namespace

DecodingGraph build_canonical_graph(std::span<const PhoneId> phones,
                                    const PhoneInventory& inventory) {
  if (phones.empty()) throw Error("canonical graph needs at least one phone");
  check_phones(phones, inventory);
  GraphBuilder b(inventory);
  Chain c = add_chain(b, phones);
  b.link(GraphBuilder::kBos, c.labels.front(), c.blanks.front());
  b.link(c.labels.back(), GraphBuilder::kEos, c.blanks.back());
  return b.finish();
}

DecodingGraph build_af_graph(std::span<const PhoneId> left,
                             std::span<const PhoneId> right, Variant variant,
                             const PhoneInventory& inventory) {
  check_phones(left, inventory);
  check_phones(right, inventory);
  if (variant != Variant::kS && variant != Variant::kSD &&
      variant != Variant::kSDI)
    throw Error("invalid variant");

  GraphBuilder b(inventory);
  Chain lc = add_chain(b, left);

  std::vector<int> central;
  for (PhoneId q : inventory.phones()) {
    central.push_back(b.add(q, NodeKind::kCentral));
    b.mark_central(central.back());
  }
  int central_blank = -1;
  if (variant == Variant::kSDI) {
    central_blank = b.add_blank(NodeKind::kCentral);
    b.mark_central(central_blank);
    b.set_clique(central);
  }

  Chain rc = add_chain(b, right);

  const int last_left = lc.labels.empty() ? GraphBuilder::kBos : lc.labels.back();
  const int left_gap = lc.blanks.back();
  const int first_right = rc.labels.empty() ? GraphBuilder::kEos : rc.labels.front();
  const int right_gap = rc.blanks.front();

  if (!lc.labels.empty())
    b.link(GraphBuilder::kBos, lc.labels.front(), lc.blanks.front());
  if (!rc.labels.empty())
    b.link(rc.labels.back(), GraphBuilder::kEos, rc.blanks.back());

  for (int c : central) {
    b.link(last_left, c, left_gap);
    b.link(c, first_right, right_gap);
  }
  if (variant != Variant::kS) b.link(last_left, first_right, left_gap);
  if (variant == Variant::kSDI) {
    for (int c1 : central)
      for (int c2 : central) b.link(c1, c2, central_blank);
  }
  return b.finish();
}

namespace {

void check_compatible(const DecodingGraph& graph, const Posteriorgram& post) {
  if (post.symbols() != graph.num_symbols())
    throw Error("posteriorgram has " + std::to_string(post.symbols()) +
                " symbols but the graph expects " +
                std::to_string(graph.num_symbols()));
  if (post.frames() < graph.min_frames())
    throw InfeasibleError("utterance has " + std::to_string(post.frames()) +
                          " frames but the graph needs at least " +
                          std::to_string(graph.min_frames()));
}

// Node s may hold forward mass at frame t only if it can still reach an end
// node in the remaining frames.
inline bool can_finish(const DecodingGraph& g, int s, int t, int frames) {
  return g.steps_to_end(s) <= frames - 1 - t;
}

void emission_probs(const Posteriorgram& post, int t, std::vector<double>& y) {
  auto row = post.row(t);
  for (std::size_t v = 0; v < row.size(); ++v) y[v] = clamped_exp(row[v]);
}

// Live values smaller than this fraction of their row sum risk underflow in
// the scaled recursions.
constexpr double kSafeFraction = 1e-280;

// For each clique member, the sum of a per-node quantity over the other
// members, from prefix and suffix sums.
template <bool kLog>
class CliqueSums {
 public:
  explicit CliqueSums(const DecodingGraph& graph)
      : members_(graph.clique().begin(), graph.clique().end()),
        position_(graph.num_nodes(), -1),
        prefix_(members_.size() + 1),
        suffix_(members_.size() + 1) {
    for (std::size_t i = 0; i < members_.size(); ++i) position_[members_[i]] = static_cast<int>(i);
  }

  void others(const double* values) {
    const std::size_t k = members_.size();
    prefix_[0] = kZero;
    for (std::size_t i = 0; i < k; ++i) prefix_[i + 1] = add(prefix_[i], values[members_[i]]);
    suffix_[k] = kZero;
    for (std::size_t i = k; i-- > 0;) suffix_[i] = add(suffix_[i + 1], values[members_[i]]);
  }

  double other_sum(int s) const {
    const auto i = static_cast<std::size_t>(position_[s]);
    return add(prefix_[i], suffix_[i + 1]);
  }

 private:
  static constexpr double kZero = kLog ? kNegInf : 0.0;
  static double add(double a, double b) { return kLog ? log_add(a, b) : a + b; }

  std::vector<int> members_;
  std::vector<int> position_;
  std::vector<double> prefix_;
  std::vector<double> suffix_;
};

// Returns false if some live forward value fell below kSafeFraction of its
// row; the result is then unreliable.
bool scaled_alpha(const DecodingGraph& graph, const Posteriorgram& post, ForwardResult& r) {
  const int frames = post.frames();
  const int n = graph.num_nodes();
  std::vector<double> y(post.symbols());
  CliqueSums<false> clique(graph);
  double log_total = 0.0;
  for (int t = 0; t < frames; ++t) {
    emission_probs(post, t, y);
    double* cur = r.normalized_alpha.data() + static_cast<std::size_t>(t) * n;
    double smallest = std::numeric_limits<double>::infinity();
    if (t == 0) {
      for (int s = 0; s < n; ++s)
        if (graph.is_start(s) && can_finish(graph, s, 0, frames))
          cur[s] = y[graph.node(s).symbol];
    } else {
      const double* prev = cur - n;
      clique.others(prev);
      for (int s = 0; s < n; ++s) {
        if (!can_finish(graph, s, t, frames)) continue;
        double in = prev[s];
        for (int p : graph.predecessors(s)) in += prev[p];
        if (graph.in_clique(s)) in += clique.other_sum(s);
        const double ys = y[graph.node(s).symbol];
        cur[s] = in * ys;
        if (in > 0.0 && ys > 0.0) smallest = std::min(smallest, cur[s]);
      }
    }
    double scale = 0.0;
    for (int s = 0; s < n; ++s) scale += cur[s];
    if (scale <= 0.0) {
      std::fill(cur, cur + n, 0.0);
      log_total = kNegInf;
      break;
    }
    if (smallest < kSafeFraction * scale) return false;
    const double inv = 1.0 / scale;
    for (int s = 0; s < n; ++s) cur[s] *= inv;
    r.log_scale[t] = std::log(scale);
    log_total += r.log_scale[t];
  }
  r.log_total = log_total;
  return true;
}

// Stores exp(row - logsumexp(row)) into out; returns the log-sum-exp.
double normalize_log_row(const std::vector<double>& row, double* out) {
  double lse = kNegInf;
  for (double v : row) lse = log_add(lse, v);
  for (std::size_t s = 0; s < row.size(); ++s)
    out[s] = lse == kNegInf ? 0.0 : clamped_exp(row[s] - lse);
  return lse;
}

void log_alpha(const DecodingGraph& graph, const Posteriorgram& post, ForwardResult& r) {
  const int frames = post.frames();
  const int n = graph.num_nodes();
  std::fill(r.normalized_alpha.begin(), r.normalized_alpha.end(), 0.0);
  std::fill(r.log_scale.begin(), r.log_scale.end(), kNegInf);
  auto logy = [&](int t, int s) { return clamped_log(post.log_prob(t, graph.node(s).symbol)); };
  CliqueSums<true> clique(graph);
  std::vector<double> prev(n, kNegInf), cur(n, kNegInf);
  double prev_lse = 0.0;
  for (int t = 0; t < frames; ++t) {
    if (t > 0) clique.others(prev.data());
    for (int s = 0; s < n; ++s) {
      cur[s] = kNegInf;
      if (!can_finish(graph, s, t, frames)) continue;
      double in;
      if (t == 0) {
        in = graph.is_start(s) ? 0.0 : kNegInf;
      } else {
        in = prev[s];
        for (int p : graph.predecessors(s)) in = log_add(in, prev[p]);
        if (graph.in_clique(s)) in = log_add(in, clique.other_sum(s));
      }
      cur[s] = in + logy(t, s);
    }
    const double lse = normalize_log_row(cur, r.normalized_alpha.data() + static_cast<std::size_t>(t) * n);
    if (lse == kNegInf) {
      r.log_total = kNegInf;
      return;
    }
    r.log_scale[t] = lse - prev_lse;
    prev_lse = lse;
    std::swap(prev, cur);
  }
  r.log_total = prev_lse;
}

bool scaled_beta(const DecodingGraph& graph, const Posteriorgram& post, ForwardResult& r) {
  const int frames = post.frames();
  const int n = graph.num_nodes();
  std::vector<double> y(post.symbols());
  CliqueSums<false> clique(graph);
  double* last = r.normalized_beta.data() + static_cast<std::size_t>(frames - 1) * n;
  double sum = 0.0;
  for (int s = 0; s < n; ++s)
    if (graph.is_end(s)) sum += last[s] = 1.0;
  for (int s = 0; s < n; ++s) last[s] /= sum;
  std::vector<double> w(n);
  for (int t = frames - 2; t >= 0; --t) {
    emission_probs(post, t + 1, y);
    const double* next = r.normalized_beta.data() + static_cast<std::size_t>(t + 1) * n;
    double* cur = r.normalized_beta.data() + static_cast<std::size_t>(t) * n;
    double smallest = std::numeric_limits<double>::infinity();
    for (int s = 0; s < n; ++s) {
      const double ys = y[graph.node(s).symbol];
      w[s] = ys * next[s];
      if (ys > 0.0 && next[s] > 0.0) smallest = std::min(smallest, w[s]);
    }
    clique.others(w.data());
    double norm = 0.0;
    for (int s = 0; s < n; ++s) {
      double out = w[s];
      for (int q : graph.successors(s)) out += w[q];
      if (graph.in_clique(s)) out += clique.other_sum(s);
      cur[s] = out;
      norm += out;
    }
    if (norm <= 0.0) {
      std::fill(cur, cur + n, 0.0);
      continue;
    }
    if (smallest < kSafeFraction * norm) return false;
    for (int s = 0; s < n; ++s) cur[s] /= norm;
  }
  return true;
}

void log_beta(const DecodingGraph& graph, const Posteriorgram& post, ForwardResult& r) {
  const int frames = post.frames();
  const int n = graph.num_nodes();
  auto logy = [&](int t, int s) { return clamped_log(post.log_prob(t, graph.node(s).symbol)); };
  CliqueSums<true> clique(graph);
  std::vector<double> next(n, kNegInf), cur(n), w(n);
  for (int s = 0; s < n; ++s)
    if (graph.is_end(s)) next[s] = 0.0;
  normalize_log_row(next, r.normalized_beta.data() + static_cast<std::size_t>(frames - 1) * n);
  for (int t = frames - 2; t >= 0; --t) {
    for (int s = 0; s < n; ++s) w[s] = logy(t + 1, s) + next[s];
    clique.others(w.data());
    for (int s = 0; s < n; ++s) {
      double out = w[s];
      for (int q : graph.successors(s)) out = log_add(out, w[q]);
      if (graph.in_clique(s)) out = log_add(out, clique.other_sum(s));
      cur[s] = out;
    }
    normalize_log_row(cur, r.normalized_beta.data() + static_cast<std::size_t>(t) * n);
    std::swap(next, cur);
  }
}

}  // namespace

ForwardResult forward(const DecodingGraph& graph, const Posteriorgram& post,
                      ForwardOptions options) {
  check_compatible(graph, post);
  ForwardResult r;
  r.frames = post.frames();
  r.nodes = graph.num_nodes();
  const auto cells = static_cast<std::size_t>(r.frames) * r.nodes;
  r.normalized_alpha.assign(cells, 0.0);
  r.log_scale.assign(r.frames, kNegInf);
  if (!scaled_alpha(graph, post, r)) log_alpha(graph, post, r);
  if (options.with_beta) {
    r.normalized_beta.assign(cells, 0.0);
    if (!scaled_beta(graph, post, r)) log_beta(graph, post, r);
  }
  return r;
}

double forward_log_domain(const DecodingGraph& graph,
                          const Posteriorgram& post) {
  check_compatible(graph, post);
  const int frames = post.frames();
  const int n = graph.num_nodes();
  std::vector<double> prev(n, kNegInf), cur(n, kNegInf);
  auto logy = [&](int t, int s) { return clamped_log(post.log_prob(t, graph.node(s).symbol)); };

  for (int s = 0; s < n; ++s)
    if (graph.is_start(s)) prev[s] = logy(0, s);

  CliqueSums<true> clique(graph);
  for (int t = 1; t < frames; ++t) {
    clique.others(prev.data());
    for (int s = 0; s < n; ++s) {
      double in = prev[s];
      for (int p : graph.predecessors(s)) in = log_add(in, prev[p]);
      if (graph.in_clique(s)) in = log_add(in, clique.other_sum(s));
      cur[s] = in + logy(t, s);
    }
    std::swap(prev, cur);
  }
  double total = kNegInf;
  for (int s = 0; s < n; ++s)
    if (graph.is_end(s)) total = log_add(total, prev[s]);
  return total;
}

namespace {

// Viterbi score: paths through zero-probability frames are ranked by how
// many such frames they contain before their log probability is compared,
// so a best path exists whenever the graph is feasible.
struct PathScore {
  int zeros = std::numeric_limits<int>::max();  // max: unreachable
  double log_prob = kNegInf;

  bool reachable() const { return zeros != std::numeric_limits<int>::max(); }
  bool better_than(const PathScore& o) const {
    if (zeros != o.zeros) return zeros < o.zeros;
    return log_prob > o.log_prob;
  }
  bool same_as(const PathScore& o) const {
    return zeros == o.zeros && log_prob == o.log_prob;
  }
  PathScore extend(double logy) const {
    if (!reachable()) return *this;
    PathScore r = *this;
    if (logy == kNegInf) {
      ++r.zeros;
    } else {
      r.log_prob += logy;
    }
    return r;
  }
};

}  // namespace

Alignment viterbi_align(const DecodingGraph& graph, const Posteriorgram& post) {
  check_compatible(graph, post);
  const int frames = post.frames();
  const int n = graph.num_nodes();
  std::vector<PathScore> prev(n), cur(n);
  std::vector<int> back(static_cast<std::size_t>(frames) * n, -1);
  auto logy = [&](int t, int s) { return clamped_log(post.log_prob(t, graph.node(s).symbol)); };

  for (int s = 0; s < n; ++s)
    if (graph.is_start(s)) prev[s] = PathScore{0, 0.0}.extend(logy(0, s));

  const auto clique = graph.clique();
  for (int t = 1; t < frames; ++t) {
    // Best and second-best clique member (lowest index on ties).
    int best1 = -1, best2 = -1;
    for (int c : clique) {
      if (best1 < 0 || prev[c].better_than(prev[best1])) {
        best2 = best1;
        best1 = c;
      } else if (best2 < 0 || prev[c].better_than(prev[best2])) {
        best2 = c;
      }
    }
    for (int s = 0; s < n; ++s) {
      PathScore best = prev[s];
      int arg = s;
      bool stayed = true;
      auto consider = [&](int p) {
        const PathScore& v = prev[p];
        if (!v.reachable()) return;
        if (v.better_than(best) || (!stayed && v.same_as(best) && p < arg)) {
          best = v;
          arg = p;
          stayed = false;
        }
      };
      for (int p : graph.predecessors(s)) consider(p);
      if (graph.in_clique(s)) {
        int other = best1 == s ? best2 : best1;
        if (other >= 0) consider(other);
      }
      cur[s] = best.extend(logy(t, s));
      back[static_cast<std::size_t>(t) * n + s] = arg;
    }
    std::swap(prev, cur);
  }

  int final_node = -1;
  for (int s = 0; s < n; ++s) {
    if (!graph.is_end(s) || !prev[s].reachable()) continue;
    if (final_node < 0 || prev[s].better_than(prev[final_node])) final_node = s;
  }
  if (final_node < 0) throw InfeasibleError("no accepted path");

  Alignment a;
  a.log_prob = prev[final_node].zeros > 0 ? kNegInf : prev[final_node].log_prob;
  a.node_path.assign(frames, -1);
  int s = final_node;
  for (int t = frames - 1; t >= 0; --t) {
    a.node_path[t] = s;
    if (t > 0) s = back[static_cast<std::size_t>(t) * n + s];
  }
  const PhoneId blank = graph.blank();
  for (int t = 0; t < frames; ++t) {
    const int node = a.node_path[t];
    if (graph.node(node).symbol == blank) continue;
    if (t > 0 && a.node_path[t - 1] == node) {
      a.label_spans.back().last = t;
    } else {
      a.label_spans.push_back({t, t});
    }
  }
  return a;
}

bool accepts(const DecodingGraph& graph, std::span<const PhoneId> frame_symbols) {
  const int n = graph.num_nodes();
  if (frame_symbols.empty()) return false;
  std::vector<char> prev(n, 0), cur(n, 0);
  for (int s = 0; s < n; ++s)
    prev[s] = graph.is_start(s) && graph.node(s).symbol == frame_symbols[0];
  for (std::size_t t = 1; t < frame_symbols.size(); ++t) {
    int active_clique = 0;
    for (int c : graph.clique()) active_clique += prev[c];
    for (int s = 0; s < n; ++s) {
      cur[s] = 0;
      if (graph.node(s).symbol != frame_symbols[t]) continue;
      bool ok = prev[s];
      for (int p : graph.predecessors(s)) ok = ok || prev[p];
      if (graph.in_clique(s)) ok = ok || (active_clique - prev[s] > 0);
      cur[s] = ok;
    }
    std::swap(prev, cur);
  }
  for (int s = 0; s < n; ++s)
    if (prev[s] && graph.is_end(s)) return true;
  return false;
}

std::vector<ScoredPath> brute_force_paths(const DecodingGraph& graph,
                                          const Posteriorgram& post) {
  const int frames = post.frames();
  const int v = post.symbols();
  if (v != graph.num_symbols())
    throw Error("posteriorgram symbol count does not match the graph");
  if (frames * std::log(static_cast<double>(v)) > std::log(1e7) + 1e-12)
    throw Error("instance too large to enumerate (V^T > 1e7)");

  std::vector<ScoredPath> out;
  std::vector<PhoneId> u(frames, 0);
  while (true) {
    if (accepts(graph, u)) {
      double lp = 0.0;
      for (int t = 0; t < frames; ++t) lp += clamped_log(post.log_prob(t, u[t]));
      out.push_back({u, lp});
    }
    int t = frames - 1;
    while (t >= 0 && ++u[t] == v) u[t--] = 0;
    if (t < 0) break;
  }
  return out;
}

std::vector<PhoneId> collapse(std::span<const PhoneId> frame_symbols,
                              PhoneId blank) {
  std::vector<PhoneId> out;
  for (std::size_t t = 0; t < frame_symbols.size(); ++t) {
    const PhoneId s = frame_symbols[t];
    if (s == blank) continue;
    if (t > 0 && frame_symbols[t - 1] == s) continue;
    out.push_back(s);
  }
  return out;
}

}  // namespace gopaf
