// gopaf/tests/test_peakiness.cc

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

#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "gopaf/peakiness.h"
#include "oracle.h"

using namespace gopaf;

namespace {

const PhoneInventory kAbc = oracle::letter_inventory(3);

CanonicalUtterance utterance(std::string id, std::vector<PhoneId> phones) {
  return CanonicalUtterance{std::move(id), std::move(phones), std::nullopt, std::nullopt};
}

Posteriorgram constant_blank(int frames, double p_blank) {
  std::vector<std::vector<double>> rows(frames, {1.0 - p_blank, 0.0, p_blank});
  return Posteriorgram::from_probabilities(rows);
}

}  // namespace

TEST_CASE("blank coverage") {
  CHECK(utterance_blank_coverage(constant_blank(5, 0.1), kAbc.blank()) == doctest::Approx(0.1).epsilon(1e-15));
  const std::vector<Posteriorgram> two{constant_blank(2, 0.2), constant_blank(8, 0.6)};
  CHECK(blank_coverage(two, kAbc.blank()) == doctest::Approx(0.4).epsilon(1e-15));
  const std::vector<Posteriorgram> single{constant_blank(1, 1.0)};
  CHECK(blank_coverage(single, kAbc.blank()) == 1.0);
  CHECK_THROWS_AS(blank_coverage({}, kAbc.blank()), Error);
}

TEST_CASE("blank coverage ignores frame order") {
  std::mt19937_64 rng(59);
  const Posteriorgram post = oracle::random_posteriorgram(rng, 12, 3);
  std::vector<std::vector<double>> rows;
  for (int t = 11; t >= 0; --t) {
    std::vector<double> r;
    for (double lp : post.row(t)) r.push_back(std::exp(lp));
    rows.push_back(r);
  }
  CHECK(utterance_blank_coverage(Posteriorgram::from_probabilities(rows, 1e-9), 2) ==
        doctest::Approx(utterance_blank_coverage(post, 2)).epsilon(1e-14));
}

TEST_CASE("conditional entropy fixtures") {
  const Posteriorgram one = Posteriorgram::from_probabilities({{0.5, 0.2, 0.3}});
  CHECK(conditional_entropy(one, utterance("u", {0}), kAbc) == 0.0);
  CHECK(conditional_entropy(oracle::running_example(), utterance("u", {0}), kAbc) ==
        doctest::Approx(0.7356219397587946).epsilon(1e-12));
  const Posteriorgram onehot =
      Posteriorgram::from_probabilities({{0, 0, 1}, {1, 0, 0}, {1, 0, 0}, {0, 0, 1}, {0, 1, 0}});
  CHECK(conditional_entropy(onehot, utterance("u", {0, 1}), kAbc) == 0.0);
  CHECK_THROWS_AS(conditional_entropy(one, utterance("u", {0, 0}), kAbc), InfeasibleError);
}

TEST_CASE("conditional entropy matches enumeration") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 100; ++trial) {
    const int v = 3 + trial % 2;
    const PhoneInventory inv = oracle::letter_inventory(v);
    const std::vector<PhoneId> phones = oracle::random_phones(rng, 1 + trial % 2, v);
    const int frames = 3 + trial % 4;
    const Posteriorgram post = oracle::random_posteriorgram(rng, frames, v, trial % 3 == 0 ? 0.2 : 0.0);
    const CanonicalUtterance u = utterance("u", phones);
    if (frames < build_canonical_graph(phones, inv).min_frames()) continue;
    if (std::isinf(oracle::log_total(post, phones, 0, oracle::Set::kC, inv.blank()))) {
      CHECK_THROWS_AS(conditional_entropy(post, u, inv), Error);
      continue;
    }
    const double h = conditional_entropy(post, u, inv);
    CHECK(h == doctest::Approx(oracle::canonical_entropy(post, phones, inv.blank())).epsilon(1e-8));
    CHECK(h >= 0.0);
    const int n = oracle::count_accepted(frames, v, phones, 0, oracle::Set::kC, inv.blank());
    CHECK(h <= std::log(static_cast<double>(n)) + 1e-12);
  }
}

TEST_CASE("conditional entropy of uniform posteriors counts paths") {
  for (int frames : {1, 7, 300, 10000}) {
    const std::vector<std::vector<double>> rows(frames, {1.0 / 3, 1.0 / 3, 1.0 / 3});
    const Posteriorgram post = Posteriorgram::from_probabilities(rows, 1e-9);
    const double t = frames;
    CHECK(conditional_entropy(post, utterance("u", {0}), kAbc) ==
          doctest::Approx(std::log(t * (t + 1) / 2)).epsilon(1e-10));
  }
}

TEST_CASE("peakiness report") {
  std::mt19937_64 rng(67);
  std::vector<CorpusItem> corpus;
  corpus.push_back({oracle::random_posteriorgram(rng, 6, 3), utterance("u1", {0, 1})});
  corpus.push_back({oracle::random_posteriorgram(rng, 1, 3), utterance("short", {0, 0})});
  corpus.push_back({oracle::random_posteriorgram(rng, 7, 3), utterance("u2", {1})});
  const PeakinessReport r = peakiness_report(corpus, kAbc, 2);
  CHECK(r.n_utterances == 2);
  REQUIRE(r.errors.size() == 1);
  CHECK(r.errors[0].utterance_id == "short");
  const double bc = (r.per_utterance[0].blank_coverage + r.per_utterance[1].blank_coverage) / 2;
  const double h = (r.per_utterance[0].cond_entropy + r.per_utterance[1].cond_entropy) / 2;
  CHECK(std::abs(r.blank_coverage - bc) <= 1e-12);
  CHECK(std::abs(r.cond_entropy - h) <= 1e-12);
  CHECK(r.blank_coverage >= 0.0);
  CHECK(r.blank_coverage <= 1.0);
  CHECK_THROWS_AS(peakiness_report({}, kAbc), Error);
}
