// gopaf/src/evaluation.cc

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

#include "gopaf/evaluation.h"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

namespace gopaf {

std::string_view orientation_name(Orientation o) {
  return o == Orientation::kLowerIsPositive ? "negated" : "raw";
}

Orientation parse_orientation(std::string_view name) {
  if (name == "negated" || name == "lower") return Orientation::kLowerIsPositive;
  if (name == "raw" || name == "higher") return Orientation::kHigherIsPositive;
  throw Error("unknown orientation '" + std::string(name) +
              "' (expected negated or raw)");
}

double hanley_mcneil_halfwidth(double auc, int n_pos, int n_neg) {
  if (n_pos < 1 || n_neg < 1) throw Error("Hanley-McNeil needs both classes");
  const double a = auc;
  const double q1 = a / (2.0 - a);
  const double q2 = 2.0 * a * a / (1.0 + a);
  const double var = (a * (1.0 - a) + (n_pos - 1.0) * (q1 - a * a) +
                      (n_neg - 1.0) * (q2 - a * a)) /
                     (static_cast<double>(n_pos) * n_neg);
  return 1.96 * std::sqrt(std::max(0.0, var));
}

namespace {

template <typename IsPositive>
AucResult auc_impl(std::span<const double> scores, IsPositive positive,
                   Orientation orientation) {
  const std::size_t n = scores.size();
  std::vector<double> key(scores.begin(), scores.end());
  if (orientation == Orientation::kLowerIsPositive)
    for (double& k : key) k = -k;
  for (double k : key)
    if (std::isnan(k)) throw Error("NaN score");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });

  // Sum of mid-ranks (1-based) of the positives.
  double rank_sum = 0.0;
  long long n_pos = 0;
  for (std::size_t lo = 0; lo < n;) {
    std::size_t hi = lo;
    while (hi < n && key[order[hi]] == key[order[lo]]) ++hi;
    const double mid_rank = 0.5 * static_cast<double>(lo + 1 + hi);
    for (std::size_t j = lo; j < hi; ++j) {
      if (positive(order[j])) {
        rank_sum += mid_rank;
        ++n_pos;
      }
    }
    lo = hi;
  }
  const long long n_neg = static_cast<long long>(n) - n_pos;
  if (n_pos == 0 || n_neg == 0)
    throw Error("AUC needs at least one positive and one negative example");

  AucResult r;
  r.n_pos = static_cast<int>(n_pos);
  r.n_neg = static_cast<int>(n_neg);
  r.orientation = orientation;
  const double u = rank_sum - 0.5 * static_cast<double>(n_pos) * (n_pos + 1);
  r.auc = u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
  r.ci95_halfwidth = hanley_mcneil_halfwidth(r.auc, r.n_pos, r.n_neg);
  return r;
}

}  // namespace

AucResult auc_roc(std::span<const double> scores, const std::vector<bool>& positive,
                  Orientation orientation) {
  if (scores.size() != positive.size())
    throw Error("scores and labels differ in length");
  return auc_impl(scores, [&](std::size_t i) { return positive[i]; }, orientation);
}

AucResult auc_roc(std::span<const ScoredPhone> scores, int positive_label,
                  Orientation orientation) {
  std::vector<double> s;
  s.reserve(scores.size());
  for (const ScoredPhone& p : scores) s.push_back(p.score);
  return auc_impl(
      s, [&](std::size_t i) { return scores[i].label == positive_label; },
      orientation);
}

double pcc(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error("pcc inputs differ in length");
  if (x.size() < 2) throw Error("pcc needs at least two points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) throw Error("pcc of a constant vector");
  return sxy / std::sqrt(sxx * syy);
}

std::vector<double> Poly2Fit::predict(std::span<const double> x) const {
  std::vector<double> out;
  out.reserve(x.size());
  for (double v : x) out.push_back(predict(v));
  return out;
}

Poly2Fit poly2_regression(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error("regression inputs differ in length");
  if (x.size() < 3) throw Error("degree-2 regression needs at least three points");
  if (std::set<double>(x.begin(), x.end()).size() < 3)
    throw Error("degree-2 regression is rank deficient (fewer than three distinct inputs)");

  const Eigen::Index n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd target(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    design(i, 0) = 1.0;
    design(i, 1) = x[i];
    design(i, 2) = x[i] * x[i];
    target(i) = y[i];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < 3) throw Error("degree-2 regression is rank deficient");
  Eigen::Vector3d c = qr.solve(target);
  Poly2Fit fit;
  fit.coef = {c(0), c(1), c(2)};
  return fit;
}

std::vector<CanonicalUtterance> simulate_errors(
    const CanonicalUtterance& utt, const PhoneInventory& inventory,
    SubstitutionStrategy strategy) {
  utt.validate(inventory);
  const std::vector<PhoneId> phones = inventory.phones();
  if (phones.size() < 2)
    throw Error("simulated errors need at least two non-blank phonemes");

  std::mt19937_64 rng(strategy.seed);
  std::vector<CanonicalUtterance> out;
  out.reserve(utt.phones.size());
  for (std::size_t i = 0; i < utt.phones.size(); ++i) {
    const PhoneId original = utt.phones[i];
    PhoneId replacement;
    if (strategy.kind == SubstitutionKind::kCyclic) {
      replacement = original;
      do {
        replacement = (replacement + 1) % inventory.size();
      } while (replacement == inventory.blank() || replacement == original);
    } else {
      std::vector<PhoneId> others;
      for (PhoneId q : phones)
        if (q != original) others.push_back(q);
      replacement = others[rng() % others.size()];
    }
    CanonicalUtterance c = utt;
    c.id = utt.id + "#sim" + std::to_string(i);
    c.phones[i] = replacement;
    c.labels = std::vector<int>(utt.phones.size(), 0);
    (*c.labels)[i] = 1;
    out.push_back(std::move(c));
  }
  return out;
}

CroppedUtterance crop_context(const Posteriorgram& post,
                              const CanonicalUtterance& utt, int i,
                              std::optional<int> k) {
  if (!utt.alignment)
    throw Error("utterance '" + utt.id + "' has no external alignment to crop with");
  const int n = static_cast<int>(utt.phones.size());
  if (i < 0 || i >= n) throw Error("phone index out of range");
  if (k && *k < 0) throw Error("negative context length");
  const std::vector<FrameSpan>& align = *utt.alignment;
  const int frames = post.frames();
  if (!k || *k >= n) return {post, utt, i, {0, frames - 1}};

  const int lo = std::max(0, i - *k);
  const int hi = std::min(n - 1, i + *k);
  const FrameSpan range{i - *k < 0 ? 0 : align[lo].first,
                        i + *k > n - 1 ? frames - 1 : align[hi].last};
  if (range.first < 0 || range.last >= frames || range.first > range.last)
    throw Error("utterance '" + utt.id + "': alignment outside the posteriorgram");

  CanonicalUtterance c;
  c.id = utt.id;
  c.phones.assign(utt.phones.begin() + lo, utt.phones.begin() + hi + 1);
  if (utt.labels) c.labels.emplace(utt.labels->begin() + lo, utt.labels->begin() + hi + 1);
  std::vector<FrameSpan> shifted;
  for (int j = lo; j <= hi; ++j)
    shifted.push_back({std::max(align[j].first, range.first) - range.first,
                       std::min(align[j].last, range.last) - range.first});
  c.alignment = std::move(shifted);
  return {post.slice(range.first, range.last), std::move(c), i - lo, range};
}

}  // namespace gopaf
