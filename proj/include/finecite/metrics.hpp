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

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "finecite/citext.hpp"
#include "finecite/decomposer.hpp"
#include "finecite/entail.hpp"

namespace finecite::metrics {

/// Scores for one citation group against its atomic claim.
struct GroupScore {
  int recall = 0;  // 0 or 1
  double precision = 0.0;
  std::vector<int> per_mark_precision;  // empty when recall == 0
  std::size_t oracle_calls = 0;
  std::size_t max_premise_chars = 0;
};

/// Context for judging claims of one response: its passages plus the oracle.
class Judge {
 public:
  Judge(const citext::Response& response, entail::EntailmentOracle& oracle,
        std::string template_id = std::string(entail::kDefaultTemplateId));

  // Entailment of `hypothesis` by the passages of `marks` concatenated in
  // ascending id order. Throws Error{kMissingPassage} for an unknown mark.
  bool Entails(std::vector<int> marks, const std::string& hypothesis,
               GroupScore& accounting) const;

  const citext::Response& response() const { return *response_; }

 private:
  const citext::Response* response_;
  entail::EntailmentOracle* oracle_;
  std::string template_id_;
};

int CitationRecall(const std::string& claim, const citext::CitationGroup& group,
                   const Judge& judge, GroupScore& accounting);

/// A mark scores 0 only if it fails alone while the rest of the group
/// entails the claim. Zero when recall is 0; 1 for singleton groups.
double CitationPrecision(const std::string& claim, const citext::CitationGroup& group,
                         const Judge& judge, int recall, GroupScore& accounting);

GroupScore ScoreGroup(const std::string& claim, const citext::CitationGroup& group,
                      const Judge& judge);

enum class CvcpIndexMode { kGroup, kMark };

struct SentenceCvcp {
  std::size_t sentence_ordinal = 0;
  std::vector<double> indices;  // normalized by the unit count
  double mean = 0.0;
  double stdev = 0.0;
  double cv = 0.0;
};

struct CvcpBreakdown {
  std::vector<SentenceCvcp> per_sentence;
  std::optional<double> response_cvcp;  // absent when nothing is cited
  std::size_t cited_sentence_count = 0;
};

std::optional<SentenceCvcp> CvcpSentenceDetail(const citext::AnnotatedSentence& sentence,
                                               CvcpIndexMode mode = CvcpIndexMode::kGroup);
std::optional<double> CvcpSentence(const citext::AnnotatedSentence& sentence,
                                   CvcpIndexMode mode = CvcpIndexMode::kGroup);
CvcpBreakdown CvcpResponse(std::span<const citext::AnnotatedSentence> sentences,
                           CvcpIndexMode mode = CvcpIndexMode::kGroup);

/// Population σ/μ of `values`; requires a positive mean.
double CoefficientOfVariation(std::span<const double> values);

/// CVCP of one sentence from its 1-based unit indices and unit count.
std::optional<SentenceCvcp> CvcpFromPositions(std::span<const std::size_t> unit_indices,
                                              std::size_t unit_count);

/// Sentence-level baseline: the whole cleaned sentence against the union of
/// all its marks as one group.
struct SentenceLevelScore {
  int recall = 0;
  double precision = 0.0;
  std::vector<int> marks;                // ascending
  std::vector<int> per_mark_precision;
  std::size_t oracle_calls = 0;
};

SentenceLevelScore SentenceLevelScores(const citext::AnnotatedSentence& sentence,
                                       const Judge& judge);

double F1(double recall, double precision);

struct ScoredClaim {
  decomposer::AtomicClaim claim;
  GroupScore score;
};

struct BaselineSummary {
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  std::vector<SentenceLevelScore> per_sentence;
};

struct ResponseReport {
  std::string id;
  std::vector<ScoredClaim> claims;
  CvcpBreakdown cvcp;
  std::size_t sentence_count = 0;
  std::size_t uncited_sentence_count = 0;
  std::size_t degenerate_sentence_count = 0;
  std::size_t degenerate_claim_count = 0;
  std::optional<BaselineSummary> baseline;

  bool has_citations() const { return !claims.empty(); }
  // Means over groups; zero without groups.
  double recall() const;
  double precision() const;
  double f1() const { return F1(recall(), precision()); }
};

/// Sentence-level aggregation per response: recall averaged over all
/// sentences, precision = non-redundant marks / all marks.
BaselineSummary SummarizeBaseline(std::vector<SentenceLevelScore> per_sentence);

struct CorpusCounts {
  std::size_t responses = 0;
  std::size_t responses_with_citations = 0;
  std::size_t groups = 0;
  std::size_t sentences = 0;
  std::size_t uncited_sentences = 0;
  std::size_t degenerate_sentences = 0;
  std::size_t degenerate_claims = 0;
  double uncited_sentence_rate = 0.0;
};

struct CorpusReport {
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  std::optional<double> cvcp;
  CorpusCounts counts;
  std::optional<BaselineSummary> baseline;  // per_sentence left empty
};

/// What aggregation needs from one response.
struct ResponseSummary {
  bool has_citations = false;
  double recall = 0.0;
  double precision = 0.0;
  std::optional<double> cvcp;
  std::size_t groups = 0;
  std::size_t sentences = 0;
  std::size_t uncited_sentences = 0;
  std::size_t degenerate_sentences = 0;
  std::size_t degenerate_claims = 0;
  std::optional<BaselineSummary> baseline;
};

ResponseSummary Summarize(const ResponseReport& response);

/// Macro means over responses with at least one citation group; F1 from the
/// macro means; CVCP averaged over responses with a cited sentence.
/// Throws Error{kInvalidArgument} on an empty input.
CorpusReport AggregateCorpus(std::span<const ResponseSummary> responses);
CorpusReport AggregateCorpus(std::span<const ResponseReport> responses);

}  // namespace finecite::metrics
