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

#include "finecite/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "finecite/error.hpp"

namespace finecite::metrics {
namespace {

double Mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

}  // namespace

Judge::Judge(const citext::Response& response, entail::EntailmentOracle& oracle,
             std::string template_id)
    : response_(&response), oracle_(&oracle), template_id_(std::move(template_id)) {}

bool Judge::Entails(std::vector<int> marks, const std::string& hypothesis,
                    GroupScore& accounting) const {
  std::sort(marks.begin(), marks.end());
  std::vector<const citext::Passage*> passages;
  passages.reserve(marks.size());
  for (int m : marks) {
    const citext::Passage* p = response_->FindPassage(m);
    if (p == nullptr) {
      throw Error(ErrorCode::kMissingPassage,
                  "response " + response_->id + ": mark [" + std::to_string(m) +
                      "] has no passage");
    }
    passages.push_back(p);
  }
  std::string premise = entail::BuildPremise(passages);
  accounting.max_premise_chars = std::max(accounting.max_premise_chars, premise.size());
  ++accounting.oracle_calls;
  auto query = entail::EntailmentQuery::Make(std::move(premise), hypothesis, template_id_);
  return oracle_->Judge(query) == entail::Verdict::kEntailed;
}

int CitationRecall(const std::string& claim, const citext::CitationGroup& group,
                   const Judge& judge, GroupScore& accounting) {
  return judge.Entails(group.marks, claim, accounting) ? 1 : 0;
}

double CitationPrecision(const std::string& claim, const citext::CitationGroup& group,
                         const Judge& judge, int recall, GroupScore& accounting) {
  accounting.per_mark_precision.clear();
  if (recall == 0 || group.marks.empty()) return 0.0;
  if (group.marks.size() == 1) {
    accounting.per_mark_precision.push_back(1);
    return 1.0;
  }
  for (int mark : group.marks) {
    int score = 1;
    if (!judge.Entails({mark}, claim, accounting)) {
      std::vector<int> rest;
      for (int other : group.marks) {
        if (other != mark) rest.push_back(other);
      }
      if (judge.Entails(rest, claim, accounting)) score = 0;
    }
    accounting.per_mark_precision.push_back(score);
  }
  double total = std::accumulate(accounting.per_mark_precision.begin(),
                                 accounting.per_mark_precision.end(), 0.0);
  return total / static_cast<double>(group.marks.size());
}

GroupScore ScoreGroup(const std::string& claim, const citext::CitationGroup& group,
                      const Judge& judge) {
  GroupScore score;
  score.recall = CitationRecall(claim, group, judge, score);
  score.precision = CitationPrecision(claim, group, judge, score.recall, score);
  return score;
}

double CoefficientOfVariation(std::span<const double> values) {
  const double mu = Mean(values);
  if (values.empty() || mu <= 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "coefficient of variation needs a positive mean");
  }
  double ss = 0.0;
  for (double v : values) ss += (v - mu) * (v - mu);
  return std::sqrt(ss / static_cast<double>(values.size())) / mu;
}

std::optional<SentenceCvcp> CvcpFromPositions(std::span<const std::size_t> unit_indices,
                                              std::size_t unit_count) {
  if (unit_indices.empty()) return std::nullopt;
  if (unit_count == 0) {
    throw Error(ErrorCode::kInvalidArgument, "cited sentence with zero units");
  }
  SentenceCvcp out;
  for (std::size_t idx : unit_indices) {
    out.indices.push_back(static_cast<double>(idx) / static_cast<double>(unit_count));
  }
  out.mean = Mean(out.indices);
  double ss = 0.0;
  for (double p : out.indices) ss += (p - out.mean) * (p - out.mean);
  out.stdev = std::sqrt(ss / static_cast<double>(out.indices.size()));
  out.cv = out.stdev / out.mean;
  return out;
}

std::optional<SentenceCvcp> CvcpSentenceDetail(const citext::AnnotatedSentence& sentence,
                                               CvcpIndexMode mode) {
  std::vector<std::size_t> positions;
  for (const citext::CitationGroup& g : sentence.groups) {
    std::size_t repeat = mode == CvcpIndexMode::kMark ? g.marks.size() : 1;
    positions.insert(positions.end(), repeat, g.unit_index);
  }
  return CvcpFromPositions(positions, sentence.length_units());
}

std::optional<double> CvcpSentence(const citext::AnnotatedSentence& sentence,
                                   CvcpIndexMode mode) {
  auto detail = CvcpSentenceDetail(sentence, mode);
  if (!detail) return std::nullopt;
  return detail->cv;
}

CvcpBreakdown CvcpResponse(std::span<const citext::AnnotatedSentence> sentences,
                           CvcpIndexMode mode) {
  CvcpBreakdown out;
  double sum = 0.0;
  for (std::size_t k = 0; k < sentences.size(); ++k) {
    auto detail = CvcpSentenceDetail(sentences[k], mode);
    if (!detail) continue;
    detail->sentence_ordinal = k + 1;
    sum += detail->cv;
    out.per_sentence.push_back(std::move(*detail));
  }
  out.cited_sentence_count = out.per_sentence.size();
  if (out.cited_sentence_count > 0) {
    out.response_cvcp = sum / static_cast<double>(out.cited_sentence_count);
  }
  return out;
}

SentenceLevelScore SentenceLevelScores(const citext::AnnotatedSentence& sentence,
                                       const Judge& judge) {
  SentenceLevelScore out;
  for (const citext::CitationGroup& g : sentence.groups) {
    out.marks.insert(out.marks.end(), g.marks.begin(), g.marks.end());
  }
  std::sort(out.marks.begin(), out.marks.end());
  out.marks.erase(std::unique(out.marks.begin(), out.marks.end()), out.marks.end());
  if (out.marks.empty()) return out;

  citext::CitationGroup merged;
  merged.marks = out.marks;
  GroupScore score = ScoreGroup(sentence.CleanedText(), merged, judge);
  out.recall = score.recall;
  out.precision = score.precision;
  out.per_mark_precision = std::move(score.per_mark_precision);
  out.oracle_calls = score.oracle_calls;
  return out;
}

double F1(double recall, double precision) {
  if (recall + precision <= 0.0) return 0.0;
  return 2.0 * recall * precision / (recall + precision);
}

double ResponseReport::recall() const {
  if (claims.empty()) return 0.0;
  double total = 0.0;
  for (const ScoredClaim& c : claims) total += c.score.recall;
  return total / static_cast<double>(claims.size());
}

double ResponseReport::precision() const {
  if (claims.empty()) return 0.0;
  double total = 0.0;
  for (const ScoredClaim& c : claims) total += c.score.precision;
  return total / static_cast<double>(claims.size());
}

BaselineSummary SummarizeBaseline(std::vector<SentenceLevelScore> per_sentence) {
  BaselineSummary out;
  std::size_t marks = 0;
  double correct = 0.0;
  double recall = 0.0;
  for (const SentenceLevelScore& s : per_sentence) {
    recall += s.recall;
    marks += s.marks.size();
    for (int v : s.per_mark_precision) correct += v;
  }
  if (!per_sentence.empty()) recall /= static_cast<double>(per_sentence.size());
  out.recall = recall;
  out.precision = marks == 0 ? 0.0 : correct / static_cast<double>(marks);
  out.f1 = F1(out.recall, out.precision);
  out.per_sentence = std::move(per_sentence);
  return out;
}

ResponseSummary Summarize(const ResponseReport& response) {
  ResponseSummary s;
  s.has_citations = response.has_citations();
  s.recall = response.recall();
  s.precision = response.precision();
  s.cvcp = response.cvcp.response_cvcp;
  s.groups = response.claims.size();
  s.sentences = response.sentence_count;
  s.uncited_sentences = response.uncited_sentence_count;
  s.degenerate_sentences = response.degenerate_sentence_count;
  s.degenerate_claims = response.degenerate_claim_count;
  if (response.baseline) {
    s.baseline = *response.baseline;
    s.baseline->per_sentence.clear();
  }
  return s;
}

CorpusReport AggregateCorpus(std::span<const ResponseSummary> responses) {
  if (responses.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "cannot aggregate an empty corpus");
  }
  CorpusReport out;
  std::vector<double> recalls, precisions, cvcps;
  std::vector<double> base_recalls, base_precisions;
  for (const ResponseSummary& r : responses) {
    out.counts.responses++;
    out.counts.groups += r.groups;
    out.counts.sentences += r.sentences;
    out.counts.uncited_sentences += r.uncited_sentences;
    out.counts.degenerate_sentences += r.degenerate_sentences;
    out.counts.degenerate_claims += r.degenerate_claims;
    if (r.cvcp) cvcps.push_back(*r.cvcp);
    if (!r.has_citations) continue;
    out.counts.responses_with_citations++;
    recalls.push_back(r.recall);
    precisions.push_back(r.precision);
    if (r.baseline) {
      base_recalls.push_back(r.baseline->recall);
      base_precisions.push_back(r.baseline->precision);
    }
  }
  out.recall = Mean(recalls);
  out.precision = Mean(precisions);
  out.f1 = F1(out.recall, out.precision);
  if (!cvcps.empty()) out.cvcp = Mean(cvcps);
  if (out.counts.sentences > 0) {
    out.counts.uncited_sentence_rate = static_cast<double>(out.counts.uncited_sentences) /
                                       static_cast<double>(out.counts.sentences);
  }
  if (!base_recalls.empty()) {
    BaselineSummary b;
    b.recall = Mean(base_recalls);
    b.precision = Mean(base_precisions);
    b.f1 = F1(b.recall, b.precision);
    out.baseline = std::move(b);
  }
  return out;
}

CorpusReport AggregateCorpus(std::span<const ResponseReport> responses) {
  std::vector<ResponseSummary> summaries;
  summaries.reserve(responses.size());
  for (const ResponseReport& r : responses) summaries.push_back(Summarize(r));
  return AggregateCorpus(std::span<const ResponseSummary>(summaries));
}

}  // namespace finecite::metrics
