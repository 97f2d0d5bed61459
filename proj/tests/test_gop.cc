// gopaf/tests/test_gop.cc

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

#include <cmath>
#include <random>

#include "doctest.h"
#include "gopaf/gop.h"
#include "oracle.h"

using namespace gopaf;

namespace {

const PhoneInventory kAbc = oracle::letter_inventory(3);

CanonicalUtterance utterance(std::vector<PhoneId> phones) {
  return CanonicalUtterance{"u", std::move(phones), std::nullopt, std::nullopt};
}

}  // namespace

TEST_CASE("method names round-trip") {
  for (GopMethod m : {GopMethod::kAvgEa, GopMethod::kSa, GopMethod::kAfS, GopMethod::kAfSD,
                      GopMethod::kAfSDI, GopMethod::kAfSNorm, GopMethod::kAfSDNorm,
                      GopMethod::kAfSDINorm})
    CHECK(parse_method(method_name(m)) == m);
  CHECK(parse_method("af-sd") == GopMethod::kAfSD);
  CHECK(method_name(af_method(Variant::kSDI, true)) == "AF-SDI-Norm");
  CHECK_THROWS_AS(parse_method("gmm"), Error);
  CHECK_THROWS_AS(method_variant(GopMethod::kSa), Error);
}

TEST_CASE("gop_avg") {
  const Posteriorgram half = Posteriorgram::from_probabilities({{0.5, 0.5, 0.0}, {0.5, 0.25, 0.25}});
  CHECK(gop_avg(half, 0, {0, 1}) == doctest::Approx(std::log(0.5)));
  const Posteriorgram one = Posteriorgram::from_probabilities({{1.0, 0.0, 0.0}});
  CHECK(gop_avg(one, 0, {0, 0}) == 0.0);
  const Posteriorgram mixed =
      Posteriorgram::from_probabilities({{0.6, 0.3, 0.1}, {0.48, 0.5, 0.02}});
  CHECK(gop_avg(mixed, 0, {0, 1}) == doctest::Approx(-0.6223973994230956).epsilon(1e-12));
  CHECK_THROWS_AS(gop_avg(mixed, 0, {1, 2}), Error);
  CHECK_THROWS_AS(gop_avg(mixed, 0, {1, 0}), Error);
}

TEST_CASE("gop_avg_ea uses the external span") {
  const Posteriorgram mixed =
      Posteriorgram::from_probabilities({{0.6, 0.3, 0.1}, {0.48, 0.5, 0.02}});
  CanonicalUtterance u = utterance({0});
  CHECK_THROWS_AS(gop_avg_ea(mixed, u, 0), Error);
  u.alignment = std::vector<FrameSpan>{{1, 1}};
  const GopScore s = gop_avg_ea(mixed, u, 0);
  CHECK(s.value == doctest::Approx(std::log(0.48)));
  CHECK(s.span == FrameSpan{1, 1});
}

TEST_CASE("gop_sa") {
  const Posteriorgram peaky = Posteriorgram::from_probabilities(
      {{0.05, 0.05, 0.9}, {0.9, 0.05, 0.05}, {0.05, 0.05, 0.9}});
  const GopScore s = gop_sa(peaky, utterance({0}), 0, kAbc);
  CHECK(s.span == FrameSpan{1, 1});
  CHECK(s.value == doctest::Approx(std::log(0.9)));

  const Posteriorgram one = Posteriorgram::from_probabilities({{1.0, 0.0, 0.0}});
  CHECK(gop_sa(one, utterance({0}), 0, kAbc).value == 0.0);

  std::vector<std::vector<double>> uniform(4, std::vector<double>(3, 1.0 / 3));
  CHECK(gop_sa(Posteriorgram::from_probabilities(uniform), utterance({0}), 0, kAbc).value ==
        doctest::Approx(std::log(1.0 / 3)));
}

TEST_CASE("gop_sa equals gop_avg on the enumeration argmax span") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    const int v = 3 + trial % 2;
    const PhoneInventory inv = oracle::letter_inventory(v);
    const std::vector<PhoneId> phones = oracle::random_phones(rng, 1 + trial % 2, v);
    const Posteriorgram post = oracle::random_posteriorgram(rng, 4 + trial % 3, v);
    const oracle::ArgmaxPath best = oracle::canonical_argmax(post, phones, inv.blank());
    if (best.seq.empty()) continue;
    for (int i = 0; i < static_cast<int>(phones.size()); ++i) {
      const FrameSpan span = oracle::run_span(best.seq, inv.blank(), i);
      CHECK(gop_sa(post, utterance(phones), i, inv).value ==
            doctest::Approx(gop_avg(post, phones[i], span)).epsilon(1e-12));
    }
  }
}

TEST_CASE("gop_af on the running example") {
  const Posteriorgram post = oracle::running_example();
  CHECK(gop_af(post, utterance({0}), 0, Variant::kS, kAbc).value ==
        doctest::Approx(-0.271933715483642).epsilon(1e-12));
  CHECK(gop_af(post, utterance({0}), 0, Variant::kSD, kAbc).value ==
        doctest::Approx(-0.28768207245178123).epsilon(1e-12));
  CHECK(gop_af(post, utterance({0}), 0, Variant::kSDI, kAbc).value ==
        doctest::Approx(-0.7339691750802004).epsilon(1e-12));
}

TEST_CASE("gop_af matches the enumeration oracle and is ordered") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const int v = 3 + trial % 2;
    const PhoneInventory inv = oracle::letter_inventory(v);
    const int len = 1 + trial % 3;
    const std::vector<PhoneId> phones = oracle::random_phones(rng, len, v);
    const Posteriorgram post = oracle::random_posteriorgram(rng, 6, v);
    const CanonicalUtterance u = utterance(phones);
    const int i = static_cast<int>(rng() % len);
    const double lc = oracle::log_total(post, phones, i, oracle::Set::kC, inv.blank());
    if (std::isinf(lc)) continue;
    double prev = 0.0;
    for (Variant var : {Variant::kS, Variant::kSD, Variant::kSDI}) {
      const double value = gop_af(post, u, i, var, inv).value;
      const double lx = oracle::log_total(post, phones, i, oracle::to_set(var), inv.blank());
      CHECK(value == doctest::Approx(std::min(0.0, lc - lx)).epsilon(1e-8));
      CHECK(value <= 0.0);
      CHECK(value <= prev + 1e-12);
      prev = value;
    }
  }
}

TEST_CASE("gop_af is zero when the relaxed set holds only the canonical path") {
  const Posteriorgram one = Posteriorgram::from_probabilities({{1.0, 0.0, 0.0}});
  for (Variant var : {Variant::kS, Variant::kSD, Variant::kSDI})
    CHECK(gop_af(one, utterance({0}), 0, var, kAbc).value == 0.0);
}

TEST_CASE("occupancy matches the plain-probability reimplementation") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const int v = 3 + trial % 2;
    const PhoneInventory inv = oracle::letter_inventory(v);
    const int len = 1 + trial % 3;
    const std::vector<PhoneId> phones = oracle::random_phones(rng, len, v);
    const int frames = 3 + trial % 5;
    const Posteriorgram post = oracle::random_posteriorgram(rng, frames, v);
    const int i = static_cast<int>(rng() % len);
    const std::span<const PhoneId> all(phones);
    if (frames < build_canonical_graph(all, inv).min_frames()) continue;
    for (Variant var : {Variant::kS, Variant::kSD, Variant::kSDI}) {
      const DecodingGraph g = build_af_graph(all.first(i), all.subspan(i + 1), var, inv);
      const double raw = central_occupancy(g, forward(g, post));
      CHECK(raw == doctest::Approx(oracle::occupancy_ref(g, post)).epsilon(1e-8));
      const double occ = occupancy(post, utterance(phones), i, var, inv);
      CHECK(occ == doctest::Approx(std::max(1.0, raw)).epsilon(1e-12));
      CHECK(occ >= 1.0);
      CHECK(occ <= frames);
    }
  }
}

TEST_CASE("occupancy flooring") {
  const Posteriorgram one = Posteriorgram::from_probabilities({{1.0, 0.0, 0.0}});
  CHECK(occupancy(one, utterance({0}), 0, Variant::kSD, kAbc) == 1.0);
  CHECK(gop_af_norm(one, utterance({0}), 0, Variant::kSD, kAbc).value == 0.0);

  // Nearly all mass on blank: the deletion path dominates the SD graph.
  std::vector<std::vector<double>> rows(4, {0.01, 0.01, 0.98});
  const Posteriorgram blanky = Posteriorgram::from_probabilities(rows);
  const CanonicalUtterance u = utterance({0});
  UtteranceScorer scorer(blanky, u, kAbc);
  const auto terms = scorer.af_terms(0, Variant::kSD);
  CHECK(terms.raw_occupancy < 1.0);
  CHECK(terms.occupancy == 1.0);
  CHECK(gop_af_norm(blanky, u, 0, Variant::kSD, kAbc).value ==
        gop_af(blanky, u, 0, Variant::kSD, kAbc).value);
}

TEST_CASE("normalised score on the running example") {
  const Posteriorgram post = oracle::running_example();
  const CanonicalUtterance u = utterance({0});
  const DecodingGraph g = build_af_graph({}, {}, Variant::kSD, kAbc);
  const double occ = std::max(1.0, oracle::occupancy_ref(g, post));
  const GopScore s = gop_af_norm(post, u, 0, Variant::kSD, kAbc);
  REQUIRE(s.occupancy);
  CHECK(*s.occupancy == doctest::Approx(occ).epsilon(1e-12));
  CHECK(s.value == doctest::Approx(-0.28768207245178123 / occ).epsilon(1e-12));
  CHECK(s.method == GopMethod::kAfSDNorm);
}

TEST_CASE("forward-backward occupancy option stays in range") {
  std::mt19937_64 rng(37);
  const PhoneInventory inv = oracle::letter_inventory(4);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<PhoneId> phones = oracle::random_phones(rng, 3, 4);
    const Posteriorgram post = oracle::random_posteriorgram(rng, 8, 4);
    const double occ = occupancy(post, utterance(phones), 1, Variant::kSDI, inv,
                                 OccupancyMode::kForwardBackward);
    CHECK(occ >= 1.0);
    CHECK(occ <= 8.0);
  }
}

TEST_CASE("utterance scorer agrees with the free functions") {
  std::mt19937_64 rng(41);
  const PhoneInventory inv = oracle::letter_inventory(4);
  const std::vector<PhoneId> phones = oracle::random_phones(rng, 3, 4);
  const Posteriorgram post = oracle::random_posteriorgram(rng, 9, 4);
  CanonicalUtterance u = utterance(phones);
  u.alignment = std::vector<FrameSpan>{{0, 2}, {3, 5}, {6, 8}};
  UtteranceScorer scorer(post, u, inv);
  for (int i = 0; i < 3; ++i) {
    CHECK(scorer.score(i, GopMethod::kAfSD).value == gop_af(post, u, i, Variant::kSD, inv).value);
    CHECK(scorer.score(i, GopMethod::kAfSDINorm).value ==
          gop_af_norm(post, u, i, Variant::kSDI, inv).value);
    CHECK(scorer.score(i, GopMethod::kSa).value == gop_sa(post, u, i, inv).value);
    CHECK(scorer.score(i, GopMethod::kAvgEa).value == gop_avg_ea(post, u, i).value);
  }
  CHECK_THROWS_AS(scorer.score(3, GopMethod::kAfS), Error);
}

TEST_CASE("scores stay finite over repeated rows") {
  std::vector<std::vector<double>> rows;
  for (int t = 0; t < 200; ++t) rows.push_back({0.3, 0.2, 0.5});
  const Posteriorgram post = Posteriorgram::from_probabilities(rows);
  const CanonicalUtterance u = utterance({0, 1, 0});
  for (Variant var : {Variant::kS, Variant::kSD, Variant::kSDI}) {
    const GopScore s = gop_af(post, u, 1, var, kAbc);
    CHECK(std::isfinite(s.value));
  }
}

TEST_CASE("infeasible utterances throw") {
  const Posteriorgram one = Posteriorgram::from_probabilities({{1.0, 0.0, 0.0}});
  CHECK_THROWS_AS(gop_af(one, utterance({0, 1}), 0, Variant::kSD, kAbc), InfeasibleError);
  CHECK_THROWS_AS(gop_sa(one, utterance({0, 0}), 0, kAbc), InfeasibleError);
}
