// gopaf/include/gopaf/lattice.h

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

#ifndef GOPAF_LATTICE_H_
#define GOPAF_LATTICE_H_

#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "gopaf/types.h"

namespace gopaf {

// Hypothesis set that replaces the target phoneme in an alignment-free
// graph: exactly one phoneme (S), at most one (SD), or any sequence (SDI).
enum class Variant { kS, kSD, kSDI };

std::string_view variant_name(Variant v);
Variant parse_variant(std::string_view name);  // "s", "sd", "sdi"

enum class NodeKind { kContext, kCentral, kBlank };

struct GraphNode {
  PhoneId symbol;
  NodeKind kind;
};

/// CTC decoding graph over frame-level symbols.
///
/// Every node carries an implicit self-loop. Arcs between distinct nodes are
/// stored as predecessor lists, except inside the optional clique: a set of
/// nodes that are all pairwise connected (the central phoneme block of an
/// SDI graph). The clique is kept implicit so that a forward step costs
/// O(|nodes| + |clique|) rather than O(|clique|^2).
///
/// Graphs built by this module are unambiguous: every accepted frame
/// sequence maps to exactly one node path, so path sums over nodes equal
/// probability sums over frame sequences.
class DecodingGraph {
 public:
  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  // Size of the symbol inventory the graph was built against.
  int num_symbols() const { return num_symbols_; }
  PhoneId blank() const { return blank_; }
  const GraphNode& node(int s) const { return nodes_[s]; }
  const std::vector<GraphNode>& nodes() const { return nodes_; }

  std::span<const int> predecessors(int s) const { return preds_[s]; }
  std::span<const int> successors(int s) const { return succs_[s]; }
  bool in_clique(int s) const { return in_clique_[s]; }
  std::span<const int> clique() const { return clique_; }

  // Arc between distinct nodes, including clique arcs.
  bool has_arc(int from, int to) const;
  // All arcs between distinct nodes with clique arcs expanded.
  std::vector<std::pair<int, int>> arcs() const;

  bool is_start(int s) const { return is_start_[s]; }
  bool is_end(int s) const { return is_end_[s]; }
  std::vector<int> start_nodes() const;
  std::vector<int> end_nodes() const;

  // N_C: the nodes standing in for the target phoneme.
  std::span<const int> central_nodes() const { return central_; }
  // Non-blank nodes of the canonical sequence, in order. For a canonical
  // graph this has one entry per phone.
  std::span<const int> label_nodes() const { return labels_; }

  // Fewest frames any accepted path needs.
  int min_frames() const { return min_frames_; }
  // Fewest transitions from s to an end node; -1 if no end is reachable.
  int steps_to_end(int s) const { return steps_to_end_[s]; }

 private:
  friend class GraphBuilder;

  std::vector<GraphNode> nodes_;
  std::vector<std::vector<int>> preds_;
  std::vector<std::vector<int>> succs_;
  std::vector<char> in_clique_;
  std::vector<int> clique_;
  std::vector<char> is_start_;
  std::vector<char> is_end_;
  std::vector<int> central_;
  std::vector<int> labels_;
  std::vector<int> steps_to_end_;
  int min_frames_ = 0;
  int num_symbols_ = 0;
  PhoneId blank_ = 0;
};

// Standard CTC topology: 2|phones|+1 nodes, blanks interleaving labels.
DecodingGraph build_canonical_graph(std::span<const PhoneId> phones,
                                    const PhoneInventory& inventory);

// Canonical sub-graphs for the left and right context joined through a
// central block with one node per phoneme (plus a central blank for SDI).
// The SDI graph has 2(|left|+|right|+1) + V nodes.
DecodingGraph build_af_graph(std::span<const PhoneId> left,
                             std::span<const PhoneId> right, Variant variant,
                             const PhoneInventory& inventory);

struct ForwardResult {
  int frames = 0;
  int nodes = 0;
  // log p(accepted paths | O); -inf when every accepted path has zero mass.
  double log_total = 0.0;
  // Per-frame renormalised forward variables, frames x nodes. Each row sums
  // to one while log_total is finite; rows after a zero-mass frame are zero.
  std::vector<double> normalized_alpha;
  // Log of the per-frame normalisers; they sum to log_total.
  std::vector<double> log_scale;
  // Per-frame renormalised backward variables (only with_beta).
  std::vector<double> normalized_beta;

  double alpha(int t, int s) const {
    return normalized_alpha[static_cast<std::size_t>(t) * nodes + s];
  }
  double beta(int t, int s) const {
    return normalized_beta[static_cast<std::size_t>(t) * nodes + s];
  }
};

struct ForwardOptions {
  bool with_beta = false;
};

// Scaled forward pass. Throws InfeasibleError if post has fewer frames than
// graph.min_frames().
ForwardResult forward(const DecodingGraph& graph, const Posteriorgram& post,
                      ForwardOptions options = {});

// Unscaled log-semiring forward pass (log-sum-exp recursion). Same value as
// forward().log_total by a different numerical route.
double forward_log_domain(const DecodingGraph& graph,
                          const Posteriorgram& post);

struct Alignment {
  std::vector<int> node_path;  // one node per frame
  // Spans of the visited non-blank nodes, in visiting order. For a canonical
  // graph entry i is the span of phone i.
  std::vector<FrameSpan> label_spans;
  double log_prob = 0.0;
};

// Most probable accepted path. Ties prefer staying in the current node, then
// the lowest-indexed predecessor; among final nodes the lowest index wins.
// When every accepted path crosses a zero-probability frame, the path with
// the fewest such frames is returned and log_prob is -inf.
Alignment viterbi_align(const DecodingGraph& graph, const Posteriorgram& post);

// Whether the frame-level symbol sequence has a node path through graph.
bool accepts(const DecodingGraph& graph, std::span<const PhoneId> frame_symbols);

struct ScoredPath {
  std::vector<PhoneId> symbols;
  double log_prob;
};

// Exhaustive enumeration of all V^T frame sequences, keeping the accepted
// ones. Throws Error when V^T exceeds 1e7.
std::vector<ScoredPath> brute_force_paths(const DecodingGraph& graph,
                                          const Posteriorgram& post);

// CTC collapse: merge repeats, then drop blanks.
std::vector<PhoneId> collapse(std::span<const PhoneId> frame_symbols,
                              PhoneId blank);

}  // namespace gopaf

#endif  // GOPAF_LATTICE_H_
