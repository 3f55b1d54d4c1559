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

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "finecite/citext.hpp"
#include "finecite/decomposer.hpp"
#include "finecite/deptree.hpp"
#include "finecite/entail.hpp"
#include "finecite/metrics.hpp"

namespace finecite::pipeline {

// Stable process exit codes.
enum ExitCode : int { kExitOk = 0, kExitIo = 1, kExitAlignment = 2, kExitOracle = 3 };

enum class OutputFormat { kJson, kCsv, kTable };

struct RunConfig {
  std::string input_path;
  std::string parses_path;
  std::string out_path;  // empty: write to stdout
  entail::OracleConfig oracle;
  int jobs = 1;
  OutputFormat format = OutputFormat::kJson;
  metrics::CvcpIndexMode cvcp_mode = metrics::CvcpIndexMode::kGroup;
  bool strict_appendix = false;
  bool baseline = false;
  citext::CleaningOptions cleaning;

  void Validate() const;  // throws Error{kInvalidArgument}
};

/// One parsed sentence from the parses sidecar (CoNLL-U or parsed-JSON).
struct ParsedSentence {
  std::optional<std::string> response_id;
  std::optional<std::size_t> sentence_ordinal;  // 1-based
  std::optional<std::vector<citext::CitationGroup>> groups;  // parsed-JSON only
  deptree::DepTree tree;
};

/// Reads CoNLL-U (with "# response_id" / "# sentence_ordinal" comments) or
/// parsed-JSON lines {"response_id", "sentence_ordinal", "text",
/// "tokens": [{"i", "form", "head", "deprel"}], "groups": [{"unit_index",
/// "marks"}]}. The format is sniffed from the first non-blank character.
std::vector<ParsedSentence> ParseParses(std::string_view document);

std::vector<citext::Response> ParseResponses(std::string_view jsonl,
                                             const citext::CleaningOptions& cleaning);

/// Parses of one response, in sentence order, or an alignment diagnostic.
class ParseIndex {
 public:
  ParseIndex(std::vector<ParsedSentence> parses,
             const std::vector<citext::Response>& responses);
  // nullptr entries never occur; throws Error{kAlignment} naming the response.
  std::vector<const ParsedSentence*> For(const citext::Response& response) const;

 private:
  std::vector<ParsedSentence> parses_;
  bool keyed_ = false;
  std::map<std::pair<std::string, std::size_t>, std::size_t> by_key_;
  std::map<std::string, std::size_t> count_by_response_;
  std::map<std::string, std::pair<std::size_t, std::size_t>> sequential_;  // [begin,end)
};

struct ResponseError {
  std::string response_id;
  std::string kind;  // "alignment", "missing_passage", "degenerate", "oracle"
  std::string message;
};

struct DecomposeResult {
  std::vector<decomposer::AtomicClaim> claims;
  std::vector<std::string> claim_response_ids;
  std::vector<ResponseError> errors;
};

struct EvaluateResult {
  std::vector<metrics::ResponseReport> responses;
  std::optional<metrics::CorpusReport> corpus;
  std::vector<ResponseError> errors;
  bool complete = true;
};

DecomposeResult Decompose(const std::vector<citext::Response>& responses,
                          const ParseIndex& parses, int jobs,
                          const decomposer::DecomposeOptions& options);

EvaluateResult Evaluate(const std::vector<citext::Response>& responses,
                        const ParseIndex& parses, entail::EntailmentOracle& oracle,
                        const RunConfig& config);

std::string ClaimsToJsonl(const DecomposeResult& result);
std::string ReportToJson(const EvaluateResult& result, const RunConfig& config);

/// Table rendering of one or more report documents.
struct NamedReport {
  std::string label;
  std::string json;
};
std::string RenderReports(const std::vector<NamedReport>& reports, OutputFormat format,
                          bool per_response);

/// File-level commands. Diagnostics are appended to `diagnostics`.
int RunDecompose(const RunConfig& config, std::vector<std::string>& diagnostics);
int RunEvaluate(const RunConfig& config, std::vector<std::string>& diagnostics);
int RunReport(const std::vector<std::string>& report_paths, OutputFormat format,
              bool per_response, const std::string& out_path,
              std::vector<std::string>& diagnostics);

}  // namespace finecite::pipeline
