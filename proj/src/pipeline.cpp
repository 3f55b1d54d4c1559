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

#include "finecite/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "finecite/error.hpp"
#include "json.hpp"

namespace finecite::pipeline {
namespace {

using nlohmann::ordered_json;

std::string ReadFile(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, std::string("cannot read ") + what + " " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteOutput(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << content;
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path);
}

double Round(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(value * scale) / scale;
}

ordered_json Percent(double fraction) { return Round(fraction * 100.0, 1); }
ordered_json Ratio(double value) { return Round(value, 4); }
ordered_json Ratio(const std::optional<double>& value) {
  return value ? ordered_json(Round(*value, 4)) : ordered_json(nullptr);
}

// Runs fn(i) for i in [0, n) on up to `jobs` threads.
template <typename Fn>
void ParallelFor(std::size_t n, int jobs, Fn fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(jobs, 1), std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
}

std::string GroupsToString(const std::vector<citext::CitationGroup>& groups) {
  std::string out;
  for (const auto& g : groups) {
    out += "@" + std::to_string(g.unit_index);
    for (int m : g.marks) out += "[" + std::to_string(m) + "]";
    out += ' ';
  }
  return out.empty() ? "(none)" : out;
}

struct DecomposedResponse {
  std::vector<decomposer::AtomicClaim> claims;
  std::size_t degenerate_sentences = 0;
};

DecomposedResponse DecomposeResponse(const citext::Response& response,
                                     const ParseIndex& parses,
                                     const decomposer::DecomposeOptions& options) {
  DecomposedResponse out;
  std::vector<const ParsedSentence*> trees = parses.For(response);
  for (std::size_t k = 0; k < response.sentences.size(); ++k) {
    const citext::AnnotatedSentence& sentence = response.sentences[k];
    const ParsedSentence& parsed = *trees[k];
    if (parsed.groups && *parsed.groups != sentence.groups) {
      throw Error(ErrorCode::kAlignment,
                  "response " + response.id + ": sentence " + std::to_string(k + 1) +
                      ": sidecar groups " + GroupsToString(*parsed.groups) +
                      "differ from " + GroupsToString(sentence.groups));
    }
    if (sentence.degenerate()) {
      ++out.degenerate_sentences;
      continue;
    }
    try {
      auto claims = decomposer::DecomposeSentence(sentence, parsed.tree, k + 1, options);
      for (auto& c : claims) out.claims.push_back(std::move(c));
    } catch (const Error& e) {
      throw Error(e.code(), "response " + response.id + ": " + e.what());
    }
  }
  return out;
}

ResponseError ToResponseError(const std::string& id, const Error& e) {
  std::string kind = "alignment";
  switch (e.code()) {
    case ErrorCode::kMissingPassage: kind = "missing_passage"; break;
    case ErrorCode::kDegenerate: kind = "degenerate"; break;
    case ErrorCode::kOracleUnavailable:
    case ErrorCode::kFixtureMiss: kind = "oracle"; break;
    default: break;
  }
  return {id, kind, e.what()};
}

bool IsOracleFailure(const Error& e) {
  return e.code() == ErrorCode::kOracleUnavailable || e.code() == ErrorCode::kFixtureMiss;
}

void CheckPassages(const citext::Response& response) {
  for (std::size_t k = 0; k < response.sentences.size(); ++k) {
    for (const auto& g : response.sentences[k].groups) {
      for (int m : g.marks) {
        if (response.FindPassage(m) == nullptr) {
          throw Error(ErrorCode::kMissingPassage,
                      "response " + response.id + ", sentence " + std::to_string(k + 1) +
                          ", mark [" + std::to_string(m) + "]: no such passage");
        }
      }
    }
  }
}

const char* CvcpModeName(metrics::CvcpIndexMode mode) {
  return mode == metrics::CvcpIndexMode::kMark ? "mark" : "group";
}

ordered_json BaselineJson(const metrics::BaselineSummary& b, bool with_sentences) {
  ordered_json j;
  j["recall"] = Percent(b.recall);
  j["precision"] = Percent(b.precision);
  j["f1"] = Percent(b.f1);
  if (with_sentences) {
    ordered_json rows = ordered_json::array();
    for (std::size_t k = 0; k < b.per_sentence.size(); ++k) {
      const auto& s = b.per_sentence[k];
      rows.push_back({{"sentence_ordinal", k + 1},
                      {"marks", s.marks},
                      {"recall", s.recall},
                      {"precision", Percent(s.precision)},
                      {"per_mark_precision", s.per_mark_precision}});
    }
    j["sentences"] = std::move(rows);
  }
  return j;
}

std::string FormatNumber(const nlohmann::json& value, int decimals) {
  if (value.is_null()) return {};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value.get<double>());
  return buf;
}

}  // namespace

void RunConfig::Validate() const {
  if (jobs < 1) throw Error(ErrorCode::kInvalidArgument, "--jobs must be >= 1");
  if (input_path.empty()) throw Error(ErrorCode::kInvalidArgument, "--input is required");
  if (parses_path.empty()) throw Error(ErrorCode::kInvalidArgument, "--parses is required");
}

std::vector<ParsedSentence> ParseParses(std::string_view document) {
  std::size_t first = document.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  std::vector<ParsedSentence> out;
  if (document[first] != '{') {
    for (deptree::ConlluSentence& s : deptree::ParseConllu(document)) {
      ParsedSentence p{s.Comment("response_id"), std::nullopt, std::nullopt,
                       std::move(s.tree)};
      if (auto ord = s.Comment("sentence_ordinal")) {
        try {
          p.sentence_ordinal = static_cast<std::size_t>(std::stoul(*ord));
        } catch (const std::exception&) {
          throw Error(ErrorCode::kParse, "bad sentence_ordinal '" + *ord + "'");
        }
      }
      out.push_back(std::move(p));
    }
    return out;
  }

  std::istringstream in{std::string(document)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "parsed-JSON line " + std::to_string(line_no);
    try {
      nlohmann::json row = nlohmann::json::parse(line);
      std::vector<deptree::DepNode> nodes;
      for (const auto& tok : row.at("tokens")) {
        nodes.push_back({tok.at("i").get<std::size_t>(), tok.at("form").get<std::string>(),
                         tok.at("head").get<std::size_t>(),
                         tok.at("deprel").get<std::string>()});
      }
      std::optional<std::string> rid;
      if (row.contains("response_id")) {
        const auto& id = row["response_id"];
        rid = id.is_string() ? id.get<std::string>() : id.dump();
      }
      std::optional<std::size_t> ord;
      if (row.contains("sentence_ordinal")) ord = row["sentence_ordinal"].get<std::size_t>();
      std::optional<std::vector<citext::CitationGroup>> groups;
      if (row.contains("groups")) {
        groups.emplace();
        for (const auto& g : row["groups"]) {
          groups->push_back({g.at("unit_index").get<std::size_t>(),
                             g.at("marks").get<std::vector<int>>()});
        }
      }
      out.push_back({rid, ord, std::move(groups), deptree::DepTree(std::move(nodes), where)});
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParse, where + ": " + e.what());
    }
  }
  return out;
}

std::vector<citext::Response> ParseResponses(std::string_view jsonl,
                                             const citext::CleaningOptions& cleaning) {
  std::vector<citext::Response> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < jsonl.size()) {
    std::size_t nl = jsonl.find('\n', pos);
    std::string_view line = jsonl.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? jsonl.size() : nl + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      out.push_back(citext::ParseResponseRecord(line, cleaning));
    } catch (const Error& e) {
      throw Error(e.code(), "input line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

ParseIndex::ParseIndex(std::vector<ParsedSentence> parses,
                       const std::vector<citext::Response>& responses)
    : parses_(std::move(parses)) {
  keyed_ = !parses_.empty() && std::all_of(parses_.begin(), parses_.end(), [](const auto& p) {
             return p.response_id.has_value();
           });
  if (keyed_) {
    std::map<std::string, std::size_t> next_ordinal;
    for (std::size_t i = 0; i < parses_.size(); ++i) {
      const std::string& rid = *parses_[i].response_id;
      std::size_t& last = next_ordinal[rid];
      std::size_t ord = parses_[i].sentence_ordinal ? *parses_[i].sentence_ordinal : last + 1;
      last = std::max(last, ord);
      if (!by_key_.emplace(std::make_pair(rid, ord), i).second) {
        throw Error(ErrorCode::kParse, "duplicate parse for response " + rid +
                                           " sentence " + std::to_string(ord));
      }
      ++count_by_response_[rid];
    }
    return;
  }
  std::size_t cursor = 0;
  for (const citext::Response& r : responses) {
    sequential_[r.id] = {cursor, cursor + r.sentences.size()};
    cursor += r.sentences.size();
  }
}

std::vector<const ParsedSentence*> ParseIndex::For(const citext::Response& response) const {
  const std::size_t n = response.sentences.size();
  std::vector<const ParsedSentence*> out;
  if (keyed_) {
    auto it = count_by_response_.find(response.id);
    std::size_t have = it == count_by_response_.end() ? 0 : it->second;
    if (have != n) {
      throw Error(ErrorCode::kAlignment,
                  "response " + response.id + ": " + std::to_string(have) +
                      " parsed sentence(s) for " + std::to_string(n) + " sentence(s)");
    }
    for (std::size_t k = 1; k <= n; ++k) {
      auto found = by_key_.find({response.id, k});
      if (found == by_key_.end()) {
        throw Error(ErrorCode::kAlignment, "response " + response.id +
                                               ": no parse for sentence " +
                                               std::to_string(k));
      }
      out.push_back(&parses_[found->second]);
    }
    return out;
  }
  auto it = sequential_.find(response.id);
  if (it == sequential_.end() || it->second.second > parses_.size()) {
    throw Error(ErrorCode::kAlignment,
                "response " + response.id + ": parses file ran out of sentences");
  }
  for (std::size_t i = it->second.first; i < it->second.second; ++i) {
    out.push_back(&parses_[i]);
  }
  return out;
}

DecomposeResult Decompose(const std::vector<citext::Response>& responses,
                          const ParseIndex& parses, int jobs,
                          const decomposer::DecomposeOptions& options) {
  std::vector<std::optional<DecomposedResponse>> slots(responses.size());
  std::vector<std::optional<ResponseError>> failures(responses.size());
  ParallelFor(responses.size(), jobs, [&](std::size_t i) {
    try {
      slots[i] = DecomposeResponse(responses[i], parses, options);
    } catch (const Error& e) {
      failures[i] = ToResponseError(responses[i].id, e);
    }
  });
  DecomposeResult result;
  for (std::size_t i = 0; i < responses.size(); ++i) {
    if (failures[i]) {
      result.errors.push_back(*failures[i]);
      continue;
    }
    for (auto& c : slots[i]->claims) {
      result.claims.push_back(std::move(c));
      result.claim_response_ids.push_back(responses[i].id);
    }
  }
  return result;
}

EvaluateResult Evaluate(const std::vector<citext::Response>& responses,
                        const ParseIndex& parses, entail::EntailmentOracle& oracle,
                        const RunConfig& config) {
  const decomposer::DecomposeOptions options{config.strict_appendix};
  std::vector<std::optional<metrics::ResponseReport>> slots(responses.size());
  std::vector<std::optional<ResponseError>> failures(responses.size());
  std::atomic<bool> aborted{false};

  ParallelFor(responses.size(), config.jobs, [&](std::size_t i) {
    if (aborted.load()) return;
    const citext::Response& response = responses[i];
    try {
      DecomposedResponse decomposed = DecomposeResponse(response, parses, options);
      CheckPassages(response);
      metrics::Judge judge(response, oracle, config.oracle.template_id);
      metrics::ResponseReport report;
      report.id = response.id;
      report.sentence_count = response.sentences.size();
      report.degenerate_sentence_count = decomposed.degenerate_sentences;
      for (const auto& s : response.sentences) {
        if (s.groups.empty()) ++report.uncited_sentence_count;
      }
      for (auto& claim : decomposed.claims) {
        metrics::GroupScore score = metrics::ScoreGroup(claim.text, claim.group, judge);
        if (claim.degenerate) ++report.degenerate_claim_count;
        report.claims.push_back({std::move(claim), std::move(score)});
      }
      report.cvcp = metrics::CvcpResponse(response.sentences, config.cvcp_mode);
      if (config.baseline) {
        std::vector<metrics::SentenceLevelScore> rows;
        for (const auto& s : response.sentences) {
          rows.push_back(metrics::SentenceLevelScores(s, judge));
        }
        report.baseline = metrics::SummarizeBaseline(std::move(rows));
      }
      slots[i] = std::move(report);
    } catch (const Error& e) {
      failures[i] = ToResponseError(response.id, e);
      if (IsOracleFailure(e)) aborted = true;
    }
  });

  EvaluateResult result;
  result.complete = !aborted.load();
  for (std::size_t i = 0; i < responses.size(); ++i) {
    if (failures[i]) result.errors.push_back(*failures[i]);
    if (slots[i]) result.responses.push_back(std::move(*slots[i]));
  }
  if (!result.responses.empty()) {
    result.corpus = metrics::AggregateCorpus(
        std::span<const metrics::ResponseReport>(result.responses));
  }
  return result;
}

std::string ClaimsToJsonl(const DecomposeResult& result) {
  std::string out;
  for (std::size_t i = 0; i < result.claims.size(); ++i) {
    const auto& c = result.claims[i];
    ordered_json row;
    row["response_id"] = result.claim_response_ids[i];
    row["sentence_ordinal"] = c.sentence_ordinal;
    row["marks"] = c.group.marks;
    row["claim"] = c.text;
    row["citation_node"] = c.citation_node;
    if (c.degenerate) row["degenerate"] = true;
    out += row.dump();
    out += '\n';
  }
  return out;
}

std::string ReportToJson(const EvaluateResult& result, const RunConfig& config) {
  ordered_json doc;
  doc["format"] = "finecite-report/1";
  doc["complete"] = result.complete;
  doc["config"] = {
      {"oracle", config.oracle.kind == entail::OracleConfig::Kind::kRemote ? "remote" : "fixture"},
      {"template_id", config.oracle.template_id},
      {"cvcp_index_mode", CvcpModeName(config.cvcp_mode)},
      {"strict_appendix", config.strict_appendix},
      {"baseline", config.baseline}};

  if (result.corpus) {
    const metrics::CorpusReport& c = *result.corpus;
    ordered_json corpus;
    corpus["recall"] = Percent(c.recall);
    corpus["precision"] = Percent(c.precision);
    corpus["f1"] = Percent(c.f1);
    corpus["cvcp"] = Ratio(c.cvcp);
    corpus["counts"] = {{"responses", c.counts.responses},
                        {"responses_with_citations", c.counts.responses_with_citations},
                        {"groups", c.counts.groups},
                        {"sentences", c.counts.sentences},
                        {"uncited_sentences", c.counts.uncited_sentences},
                        {"uncited_sentence_rate", Percent(c.counts.uncited_sentence_rate)},
                        {"degenerate_sentences", c.counts.degenerate_sentences},
                        {"degenerate_claims", c.counts.degenerate_claims}};
    if (c.baseline) corpus["baseline"] = BaselineJson(*c.baseline, false);
    doc["corpus"] = std::move(corpus);
  } else {
    doc["corpus"] = nullptr;
  }

  ordered_json responses = ordered_json::array();
  for (const metrics::ResponseReport& r : result.responses) {
    ordered_json jr;
    jr["id"] = r.id;
    if (r.has_citations()) {
      jr["recall"] = Percent(r.recall());
      jr["precision"] = Percent(r.precision());
      jr["f1"] = Percent(r.f1());
    } else {
      jr["recall"] = nullptr;
      jr["precision"] = nullptr;
      jr["f1"] = nullptr;
    }
    jr["cvcp"] = Ratio(r.cvcp.response_cvcp);
    jr["counts"] = {{"sentences", r.sentence_count},
                    {"uncited_sentences", r.uncited_sentence_count},
                    {"degenerate_sentences", r.degenerate_sentence_count},
                    {"degenerate_claims", r.degenerate_claim_count}};
    ordered_json groups = ordered_json::array();
    for (const metrics::ScoredClaim& sc : r.claims) {
      ordered_json g;
      g["sentence_ordinal"] = sc.claim.sentence_ordinal;
      g["marks"] = sc.claim.group.marks;
      g["unit_index"] = sc.claim.group.unit_index;
      g["claim"] = sc.claim.text;
      g["citation_node"] = sc.claim.citation_node;
      g["recall"] = sc.score.recall;
      g["precision"] = Percent(sc.score.precision);
      g["per_mark_precision"] = sc.score.per_mark_precision;
      g["oracle_calls"] = sc.score.oracle_calls;
      g["premise_chars"] = sc.score.max_premise_chars;
      g["degenerate"] = sc.claim.degenerate;
      groups.push_back(std::move(g));
    }
    jr["groups"] = std::move(groups);
    ordered_json breakdown = ordered_json::array();
    for (const metrics::SentenceCvcp& s : r.cvcp.per_sentence) {
      ordered_json indices = ordered_json::array();
      for (double p : s.indices) indices.push_back(Ratio(p));
      breakdown.push_back({{"sentence_ordinal", s.sentence_ordinal},
                           {"indices", std::move(indices)},
                           {"mean", Ratio(s.mean)},
                           {"stdev", Ratio(s.stdev)},
                           {"cv", Ratio(s.cv)}});
    }
    jr["cvcp_breakdown"] = std::move(breakdown);
    if (r.baseline) jr["baseline"] = BaselineJson(*r.baseline, true);
    responses.push_back(std::move(jr));
  }
  doc["responses"] = std::move(responses);

  ordered_json errors = ordered_json::array();
  for (const ResponseError& e : result.errors) {
    errors.push_back({{"response_id", e.response_id}, {"kind", e.kind}, {"message", e.message}});
  }
  doc["errors"] = std::move(errors);
  return doc.dump(2) + "\n";
}

std::string RenderReports(const std::vector<NamedReport>& reports, OutputFormat format,
                          bool per_response) {
  struct Row {
    std::string label;
    std::string cells[4];
  };
  std::vector<Row> rows;
  auto add = [&rows](std::string label, const nlohmann::json& block, bool with_cvcp) {
    Row row{std::move(label), {}};
    row.cells[0] = FormatNumber(block.at("recall"), 1);
    row.cells[1] = FormatNumber(block.at("precision"), 1);
    row.cells[2] = FormatNumber(block.at("f1"), 1);
    if (with_cvcp) row.cells[3] = FormatNumber(block.at("cvcp"), 4);
    rows.push_back(std::move(row));
  };

  for (const NamedReport& report : reports) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(report.json);
      if (!doc.is_object() || !doc.contains("responses") || !doc["responses"].is_array()) {
        throw Error(ErrorCode::kParse, "report " + report.label + " has no responses list");
      }
      const nlohmann::json& corpus = doc.value("corpus", nlohmann::json());
      if (!corpus.is_null()) {
        add(report.label, corpus, true);
        if (corpus.contains("baseline")) {
          add(report.label + " [sentence-level]", corpus["baseline"], false);
        }
      }
      if (per_response) {
        for (const auto& r : doc["responses"]) {
          add(report.label + "/" + r.at("id").get<std::string>(), r, true);
        }
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParse, "malformed report " + report.label + ": " + e.what());
    }
  }

  static const char* kHeaders[4] = {"Rec.", "Prec.", "F1", "CVCP"};
  std::string out;
  if (format == OutputFormat::kCsv) {
    out = "config,recall,precision,f1,cvcp\n";
    for (const Row& row : rows) {
      std::string label = row.label;
      if (label.find_first_of(",\"\n") != std::string::npos) {
        std::string quoted = "\"";
        for (char c : label) {
          if (c == '"') quoted += '"';
          quoted += c;
        }
        label = quoted + "\"";
      }
      out += label;
      for (const std::string& cell : row.cells) out += "," + cell;
      out += '\n';
    }
    return out;
  }

  std::size_t label_width = 6;
  for (const Row& row : rows) label_width = std::max(label_width, row.label.size());
  auto pad_right = [](const std::string& s, std::size_t w) {
    return s + std::string(w > s.size() ? w - s.size() : 0, ' ');
  };
  auto pad_left = [](const std::string& s, std::size_t w) {
    return std::string(w > s.size() ? w - s.size() : 0, ' ') + s;
  };
  out += pad_right("Config", label_width);
  for (const char* h : kHeaders) out += "  " + pad_left(h, 7);
  out += '\n';
  out += std::string(label_width + 4 * 9, '-') + '\n';
  for (const Row& row : rows) {
    out += pad_right(row.label, label_width);
    for (const std::string& cell : row.cells) out += "  " + pad_left(cell.empty() ? "-" : cell, 7);
    out += '\n';
  }
  return out;
}

int RunDecompose(const RunConfig& config, std::vector<std::string>& diagnostics) {
  try {
    config.Validate();
    auto responses = ParseResponses(ReadFile(config.input_path, "input"), config.cleaning);
    ParseIndex parses(ParseParses(ReadFile(config.parses_path, "parses")), responses);
    DecomposeResult result =
        Decompose(responses, parses, config.jobs, {config.strict_appendix});
    WriteOutput(config.out_path, ClaimsToJsonl(result));
    for (const ResponseError& e : result.errors) {
      diagnostics.push_back(e.kind + " error: " + e.message);
    }
    return result.errors.empty() ? kExitOk : kExitAlignment;
  } catch (const Error& e) {
    diagnostics.push_back(e.what());
    return kExitIo;
  }
}

int RunEvaluate(const RunConfig& config, std::vector<std::string>& diagnostics) {
  RunConfig effective = config;
  if (effective.oracle.token.empty()) {
    if (const char* token = std::getenv("ALIICE_ORACLE_TOKEN")) effective.oracle.token = token;
  }
  EvaluateResult result;
  try {
    effective.Validate();
    auto responses = ParseResponses(ReadFile(effective.input_path, "input"), effective.cleaning);
    ParseIndex parses(ParseParses(ReadFile(effective.parses_path, "parses")), responses);
    auto oracle = entail::MakeOracle(effective.oracle);
    result = Evaluate(responses, parses, *oracle, effective);
    std::string rendered = ReportToJson(result, effective);
    if (effective.format == OutputFormat::kCsv) {
      rendered = RenderReports({{"run", rendered}}, OutputFormat::kCsv, true);
    }
    WriteOutput(effective.out_path, rendered);
  } catch (const Error& e) {
    diagnostics.push_back(e.what());
    return kExitIo;
  }
  for (const ResponseError& e : result.errors) {
    diagnostics.push_back(e.kind + " error: " + e.message);
  }
  if (!result.complete) {
    diagnostics.push_back("oracle unavailable: report is incomplete");
    return kExitOracle;
  }
  return result.errors.empty() ? kExitOk : kExitAlignment;
}

int RunReport(const std::vector<std::string>& report_paths, OutputFormat format,
              bool per_response, const std::string& out_path,
              std::vector<std::string>& diagnostics) {
  try {
    std::vector<NamedReport> reports;
    for (const std::string& path : report_paths) {
      reports.push_back({std::filesystem::path(path).stem().string(), ReadFile(path, "report")});
    }
    WriteOutput(out_path, RenderReports(reports, format, per_response));
    return kExitOk;
  } catch (const Error& e) {
    diagnostics.push_back(e.what());
    return kExitIo;
  }
}

}  // namespace finecite::pipeline
