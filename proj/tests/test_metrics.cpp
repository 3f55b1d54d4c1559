// Copyright 2026 The finecite Authors
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "finecite/citext.hpp"
#include "finecite/entail.hpp"
#include "finecite/error.hpp"
#include "finecite/metrics.hpp"

using finecite::Error;
using finecite::citext::CitationGroup;
using finecite::citext::ParseAnnotatedSentence;
using finecite::citext::Passage;
using finecite::citext::Response;
using finecite::entail::BuildPremise;
using finecite::entail::FixtureOracle;
using finecite::entail::Verdict;
using namespace finecite::metrics;

namespace {

Response MakeResponse(std::vector<Passage> passages) {
  Response r;
  r.id = "r";
  r.passages = std::move(passages);
  return r;
}

std::string Premise(const Response& r, std::vector<int> ids) {
  std::vector<const Passage*> ps;
  for (int id : ids) ps.push_back(r.FindPassage(id));
  return BuildPremise(ps);
}

// Population coefficient of variation, written out directly.
double OracleCv(const std::vector<double>& xs) {
  double mean = 0;
  for (double x : xs) mean += x;
  mean /= xs.size();
  double var = 0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= xs.size();
  return std::sqrt(var) / mean;
}

double OneDecimal(double fraction) { return std::round(fraction * 1000.0) / 10.0; }

}  // namespace

TEST_CASE("recall zero forces precision zero") {
  auto r = MakeResponse({{1, "A", "alpha"}, {2, "B", "beta"}});
  FixtureOracle oracle;
  oracle.Add(Premise(r, {1, 2}), "claim", Verdict::kNotEntailed);
  Judge judge(r, oracle);
  auto s = ScoreGroup("claim", CitationGroup{1, {2, 1}}, judge);
  CHECK(s.recall == 0);
  CHECK(s.precision == 0.0);
  CHECK(s.per_mark_precision.empty());
  CHECK(s.oracle_calls == 1);
}

TEST_CASE("singleton precision is one without extra calls") {
  auto r = MakeResponse({{1, "A", "alpha"}});
  FixtureOracle oracle;
  oracle.Add(Premise(r, {1}), "claim", Verdict::kEntailed);
  Judge judge(r, oracle);
  auto s = ScoreGroup("claim", CitationGroup{1, {1}}, judge);
  CHECK(s.recall == 1);
  CHECK(s.precision == 1.0);
  CHECK(s.oracle_calls == 1);
}

TEST_CASE("redundant mark table gives precision one half") {
  auto r = MakeResponse({{1, "A", "alpha"}, {2, "B", "beta"}});
  FixtureOracle oracle;
  oracle.Add(Premise(r, {1, 2}), "claim", Verdict::kEntailed);
  oracle.Add(Premise(r, {1}), "claim", Verdict::kEntailed);
  oracle.Add(Premise(r, {2}), "claim", Verdict::kNotEntailed);
  Judge judge(r, oracle);
  // Marks in reverse order still build the premise in ascending id order.
  auto s = ScoreGroup("claim", CitationGroup{1, {2, 1}}, judge);
  CHECK(s.recall == 1);
  CHECK(s.precision == doctest::Approx(0.5));
  CHECK(s.per_mark_precision == std::vector<int>{0, 1});
}

TEST_CASE("jointly necessary marks are both relevant") {
  auto r = MakeResponse({{1, "A", "alpha"}, {2, "B", "beta"}});
  FixtureOracle oracle;
  oracle.Add(Premise(r, {1, 2}), "claim", Verdict::kEntailed);
  oracle.Add(Premise(r, {1}), "claim", Verdict::kNotEntailed);
  oracle.Add(Premise(r, {2}), "claim", Verdict::kNotEntailed);
  Judge judge(r, oracle);
  auto s = ScoreGroup("claim", CitationGroup{1, {1, 2}}, judge);
  CHECK(s.precision == 1.0);
}

TEST_CASE("unknown marks are reported") {
  auto r = MakeResponse({{1, "A", "alpha"}});
  FixtureOracle oracle(true);
  Judge judge(r, oracle);
  CHECK_THROWS_AS(ScoreGroup("claim", CitationGroup{1, {7}}, judge), Error);
}

TEST_CASE("CVCP examples") {
  auto end = ParseAnnotatedSentence("A b c d [1].");
  CHECK(CvcpSentence(end) == 0.0);
  // Groups at units 4 and 8 of a ten-unit sentence.
  auto two = ParseAnnotatedSentence("a b c [1] e f g [2] i j");
  REQUIRE(two.length_units() == 10);
  REQUIRE(two.groups[0].unit_index == 4);
  REQUIRE(two.groups[1].unit_index == 8);
  CHECK(CvcpSentence(two).value() == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(std::abs(CvcpSentence(two).value() - OracleCv({0.4, 0.8})) < 1e-12);
  CHECK_FALSE(CvcpSentence(ParseAnnotatedSentence("no marks")).has_value());
}

TEST_CASE("mark mode repeats a group index per mark") {
  auto s = ParseAnnotatedSentence("a b c [1][2] e f g [3] i j");
  CHECK(CvcpSentence(s, CvcpIndexMode::kMark).value() ==
        doctest::Approx(OracleCv({0.4, 0.4, 0.8})));
  CHECK(CvcpSentence(s, CvcpIndexMode::kGroup).value() == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("CVCP is scale invariant and single groups contribute zero") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t units = 2 + rng() % 40;
    std::vector<std::size_t> pos;
    std::size_t groups = 1 + rng() % 5;
    for (std::size_t g = 0; g < groups; ++g) pos.push_back(1 + rng() % units);
    auto base = CvcpFromPositions(pos, units);
    REQUIRE(base.has_value());
    std::size_t factor = 1 + rng() % 7;
    std::vector<std::size_t> scaled;
    for (std::size_t p : pos) scaled.push_back(p * factor);
    auto s = CvcpFromPositions(scaled, units * factor);
    CHECK(std::abs(s->cv - base->cv) < 1e-9);
    std::vector<double> raw(pos.begin(), pos.end());
    CHECK(std::abs(CoefficientOfVariation(raw) - base->cv) < 1e-9);
    if (groups == 1) CHECK(base->cv == 0.0);
  }
  CHECK_THROWS_AS(CoefficientOfVariation(std::vector<double>{}), Error);
}

TEST_CASE("response CVCP averages cited sentences only") {
  std::vector<finecite::citext::AnnotatedSentence> sents = {
      ParseAnnotatedSentence("a b c [1] e f g [2] i j"), ParseAnnotatedSentence("plain words"),
      ParseAnnotatedSentence("x y [3]")};
  auto b = CvcpResponse(sents);
  CHECK(b.cited_sentence_count == 2);
  REQUIRE(b.response_cvcp.has_value());
  CHECK(*b.response_cvcp == doctest::Approx((1.0 / 3.0 + 0.0) / 2.0));
  CHECK(b.per_sentence[0].sentence_ordinal == 1);
  CHECK(b.per_sentence[1].sentence_ordinal == 3);
  std::vector<finecite::citext::AnnotatedSentence> uncited = {ParseAnnotatedSentence("a b")};
  CHECK_FALSE(CvcpResponse(uncited).response_cvcp.has_value());
}

TEST_CASE("F1 at one decimal matches the reported table row") {
  CHECK(OneDecimal(F1(0.784, 0.744)) == doctest::Approx(76.3));
  CHECK(F1(0, 0) == 0.0);
  ResponseSummary s;
  s.has_citations = true;
  s.recall = 0.784;
  s.precision = 0.744;
  std::vector<ResponseSummary> one = {s};
  auto corpus = AggregateCorpus(std::span<const ResponseSummary>(one));
  CHECK(OneDecimal(corpus.f1) == doctest::Approx(76.3));
}

TEST_CASE("corpus aggregation macro-averages responses with citations") {
  ResponseSummary a;
  a.has_citations = true;
  a.recall = 1.0;
  a.precision = 0.5;
  a.cvcp = 0.2;
  a.groups = 2;
  a.sentences = 2;
  ResponseSummary b;
  b.has_citations = true;
  b.recall = 0.0;
  b.precision = 0.0;
  b.cvcp = 0.4;
  b.groups = 1;
  b.sentences = 1;
  ResponseSummary none;
  none.sentences = 3;
  none.uncited_sentences = 3;
  std::vector<ResponseSummary> all = {a, b, none};
  auto c = AggregateCorpus(std::span<const ResponseSummary>(all));
  CHECK(c.recall == doctest::Approx(0.5));
  CHECK(c.precision == doctest::Approx(0.25));
  CHECK(c.f1 == doctest::Approx(F1(0.5, 0.25)));
  CHECK(c.cvcp.value() == doctest::Approx(0.3));
  CHECK(c.counts.responses == 3);
  CHECK(c.counts.responses_with_citations == 2);
  CHECK(c.counts.groups == 3);
  CHECK(c.counts.uncited_sentence_rate == doctest::Approx(0.5));
  CHECK_THROWS_AS(AggregateCorpus(std::span<const ResponseSummary>()), Error);
}

TEST_CASE("sentence-level baseline penalizes a mark the claim-level score keeps") {
  auto r = MakeResponse({{3, "Cup", "Cups can be made of glass or plastic."},
                         {4, "Plastic cup", "Cups can be made of plastic."}});
  r.sentences.push_back(ParseAnnotatedSentence("Cups can be made of glass [3] or plastic [3][4]."));
  FixtureOracle oracle(true);
  Judge judge(r, oracle);
  auto base = SentenceLevelScores(r.sentences[0], judge);
  CHECK(base.marks == std::vector<int>{3, 4});
  CHECK(base.recall == 1);
  CHECK(base.per_mark_precision == std::vector<int>{1, 0});
  auto summary = SummarizeBaseline({base});
  CHECK(summary.precision == doctest::Approx(0.5));

  auto plastic = ScoreGroup("Cups can be made of plastic", CitationGroup{10, {3, 4}}, judge);
  CHECK(plastic.per_mark_precision == std::vector<int>{1, 1});
  CHECK(plastic.precision == 1.0);
}

TEST_CASE("baseline aggregation counts marks across sentences") {
  SentenceLevelScore s1;
  s1.recall = 1;
  s1.marks = {1, 2};
  s1.per_mark_precision = {1, 0};
  SentenceLevelScore s2;
  s2.recall = 0;
  s2.marks = {3};
  SentenceLevelScore s3;  // uncited
  auto b = SummarizeBaseline({s1, s2, s3});
  CHECK(b.recall == doctest::Approx(1.0 / 3.0));
  CHECK(b.precision == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("precision never exceeds recall on random fixture tables") {
  std::mt19937 rng(99);
  const std::vector<std::string> vocab = {"red", "blue", "cups", "glass", "tall", "river", "stone"};
  for (int corpus = 0; corpus < 300; ++corpus) {
    std::vector<Passage> ps;
    std::size_t n = 1 + rng() % 4;
    for (std::size_t i = 1; i <= n; ++i) {
      std::string text;
      for (int w = 0; w < 3; ++w) text += vocab[rng() % vocab.size()] + " ";
      ps.push_back({static_cast<int>(i), "t", text});
    }
    auto r = MakeResponse(ps);
    FixtureOracle oracle(true);
    Judge judge(r, oracle);
    std::set<int> marks;
    std::size_t want = 1 + rng() % n;
    while (marks.size() < want) marks.insert(1 + static_cast<int>(rng() % n));
    std::string claim = vocab[rng() % vocab.size()] + " " + vocab[rng() % vocab.size()];
    auto s = ScoreGroup(claim, CitationGroup{1, {marks.begin(), marks.end()}}, judge);
    CHECK(s.precision <= s.recall);
    CHECK(s.precision >= 0.0);
  }
}
