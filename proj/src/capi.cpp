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

#include "finecite/finecite.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include "finecite/citext.hpp"
#include "finecite/decomposer.hpp"
#include "finecite/deptree.hpp"
#include "finecite/error.hpp"
#include "finecite/metrics.hpp"
#include "finecite/pipeline.hpp"
#include "json.hpp"

struct finecite_config {
  finecite::pipeline::RunConfig run;
};

struct finecite_sentence {
  finecite::citext::AnnotatedSentence sentence;
};

struct finecite_tree {
  std::unique_ptr<finecite::deptree::DepTree> tree;
};

namespace {

thread_local std::string g_last_error;

finecite_status StatusFor(finecite::ErrorCode code) {
  using finecite::ErrorCode;
  switch (code) {
    case ErrorCode::kIo: return FINECITE_ERR_IO;
    case ErrorCode::kAlignment: return FINECITE_ERR_ALIGNMENT;
    case ErrorCode::kOracleUnavailable:
    case ErrorCode::kFixtureMiss: return FINECITE_ERR_ORACLE;
    case ErrorCode::kInvalidArgument: return FINECITE_ERR_INVALID_ARGUMENT;
    case ErrorCode::kParse: return FINECITE_ERR_PARSE;
    case ErrorCode::kStructure: return FINECITE_ERR_STRUCTURE;
    case ErrorCode::kDegenerate: return FINECITE_ERR_DEGENERATE;
    case ErrorCode::kMissingPassage: return FINECITE_ERR_MISSING_PASSAGE;
  }
  return FINECITE_ERR_INTERNAL;
}

finecite_status Fail(finecite_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
finecite_status Guard(Fn&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const finecite::Error& e) {
    return Fail(StatusFor(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return Fail(FINECITE_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(FINECITE_ERR_INTERNAL, e.what());
  }
}

char* Duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

bool ParseBool(const std::string& value) {
  if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
  if (value == "0" || value == "false" || value == "no" || value == "off") return false;
  throw finecite::Error(finecite::ErrorCode::kInvalidArgument,
                        "expected a boolean, got '" + value + "'");
}

template <typename T>
T ParseNumber(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    T out;
    if constexpr (std::is_floating_point_v<T>) {
      out = static_cast<T>(std::stod(value, &used));
    } else {
      out = static_cast<T>(std::stol(value, &used));
    }
    if (used != value.size()) throw std::invalid_argument(value);
    return out;
  } catch (const std::exception&) {
    throw finecite::Error(finecite::ErrorCode::kInvalidArgument,
                          key + ": expected a number, got '" + value + "'");
  }
}

finecite_status FinishRun(int exit_code, const std::vector<std::string>& lines,
                          char** diagnostics) {
  std::string text;
  for (const std::string& line : lines) text += line + "\n";
  if (diagnostics != nullptr) *diagnostics = Duplicate(text);
  if (exit_code != 0) g_last_error = lines.empty() ? "run failed" : lines.back();
  return static_cast<finecite_status>(exit_code);
}

}  // namespace

extern "C" {

const char* finecite_version(void) { return "1.0.0"; }

const char* finecite_last_error(void) { return g_last_error.c_str(); }

void finecite_string_free(char* str) { std::free(str); }

finecite_config* finecite_config_new(void) {
  return new (std::nothrow) finecite_config();
}

void finecite_config_free(finecite_config* config) { delete config; }

finecite_status finecite_config_set(finecite_config* config, const char* key,
                                    const char* value) {
  if (config == nullptr || key == nullptr || value == nullptr) {
    return Fail(FINECITE_ERR_INVALID_ARGUMENT, "null argument");
  }
  return Guard([&] {
    using finecite::entail::OracleConfig;
    auto& run = config->run;
    const std::string k = key;
    const std::string v = value;
    if (k == "input") {
      run.input_path = v;
    } else if (k == "parses") {
      run.parses_path = v;
    } else if (k == "out") {
      run.out_path = v;
    } else if (k == "format") {
      if (v == "json") run.format = finecite::pipeline::OutputFormat::kJson;
      else if (v == "csv") run.format = finecite::pipeline::OutputFormat::kCsv;
      else return Fail(FINECITE_ERR_INVALID_ARGUMENT, "format must be json or csv");
    } else if (k == "jobs") {
      run.jobs = ParseNumber<int>(k, v);
      if (run.jobs < 1) return Fail(FINECITE_ERR_INVALID_ARGUMENT, "jobs must be >= 1");
    } else if (k == "oracle") {
      if (v == "remote") run.oracle.kind = OracleConfig::Kind::kRemote;
      else if (v == "fixture") run.oracle.kind = OracleConfig::Kind::kFixture;
      else return Fail(FINECITE_ERR_INVALID_ARGUMENT, "oracle must be remote or fixture");
    } else if (k == "oracle-url") {
      run.oracle.endpoint = v;
    } else if (k == "fixture") {
      run.oracle.fixture_path = v;
    } else if (k == "fixture-fallback") {
      run.oracle.fixture_fallback = ParseBool(v);
    } else if (k == "cache") {
      run.oracle.cache_path = v;
    } else if (k == "timeout") {
      run.oracle.timeout_seconds = ParseNumber<double>(k, v);
    } else if (k == "retries") {
      run.oracle.retries = ParseNumber<int>(k, v);
    } else if (k == "max-in-flight") {
      run.oracle.max_in_flight = ParseNumber<int>(k, v);
    } else if (k == "template-id") {
      run.oracle.template_id = v;
    } else if (k == "token") {
      run.oracle.token = v;
    } else if (k == "baseline") {
      run.baseline = ParseBool(v);
    } else if (k == "cvcp-index-mode") {
      if (v == "group") run.cvcp_mode = finecite::metrics::CvcpIndexMode::kGroup;
      else if (v == "mark") run.cvcp_mode = finecite::metrics::CvcpIndexMode::kMark;
      else return Fail(FINECITE_ERR_INVALID_ARGUMENT, "cvcp-index-mode must be group or mark");
    } else if (k == "strict-appendix") {
      run.strict_appendix = ParseBool(v);
    } else {
      return Fail(FINECITE_ERR_INVALID_ARGUMENT, "unknown config key '" + k + "'");
    }
    return FINECITE_OK;
  });
}

finecite_status finecite_run_decompose(const finecite_config* config, char** diagnostics) {
  if (config == nullptr) return Fail(FINECITE_ERR_INVALID_ARGUMENT, "null config");
  return Guard([&] {
    std::vector<std::string> lines;
    int code = finecite::pipeline::RunDecompose(config->run, lines);
    return FinishRun(code, lines, diagnostics);
  });
}

finecite_status finecite_run_evaluate(const finecite_config* config, char** diagnostics) {
  if (config == nullptr) return Fail(FINECITE_ERR_INVALID_ARGUMENT, "null config");
  return Guard([&] {
    std::vector<std::string> lines;
    int code = finecite::pipeline::RunEvaluate(config->run, lines);
    return FinishRun(code, lines, diagnostics);
  });
}

finecite_status finecite_run_report(const char* const* report_paths, size_t count,
                                    const char* format, int per_response,
                                    const char* out_path, char** diagnostics) {
  if (report_paths == nullptr && count > 0) {
    return Fail(FINECITE_ERR_INVALID_ARGUMENT, "null report list");
  }
  return Guard([&] {
    using finecite::pipeline::OutputFormat;
    const std::string fmt = format == nullptr ? "table" : format;
    OutputFormat f;
    if (fmt == "table") f = OutputFormat::kTable;
    else if (fmt == "csv") f = OutputFormat::kCsv;
    else return Fail(FINECITE_ERR_INVALID_ARGUMENT, "format must be table or csv");
    std::vector<std::string> paths(report_paths, report_paths + count);
    std::vector<std::string> lines;
    int code = finecite::pipeline::RunReport(paths, f, per_response != 0,
                                             out_path == nullptr ? "" : out_path, lines);
    return FinishRun(code, lines, diagnostics);
  });
}

finecite_status finecite_sentence_parse(const char* text, finecite_sentence** out) {
  if (text == nullptr || out == nullptr) {
    return Fail(FINECITE_ERR_INVALID_ARGUMENT, "null argument");
  }
  return Guard([&] {
    auto handle = std::make_unique<finecite_sentence>();
    handle->sentence = finecite::citext::ParseAnnotatedSentence(text);
    *out = handle.release();
    return FINECITE_OK;
  });
}

void finecite_sentence_free(finecite_sentence* sentence) { delete sentence; }

size_t finecite_sentence_unit_count(const finecite_sentence* sentence) {
  return sentence == nullptr ? 0 : sentence->sentence.length_units();
}

size_t finecite_sentence_group_count(const finecite_sentence* sentence) {
  return sentence == nullptr ? 0 : sentence->sentence.groups.size();
}

size_t finecite_sentence_group_unit_index(const finecite_sentence* sentence, size_t group) {
  if (sentence == nullptr || group >= sentence->sentence.groups.size()) return 0;
  return sentence->sentence.groups[group].unit_index;
}

finecite_status finecite_sentence_cleaned_text(const finecite_sentence* sentence, char** out) {
  if (sentence == nullptr || out == nullptr) {
    return Fail(FINECITE_ERR_INVALID_ARGUMENT, "null argument");
  }
  return Guard([&] {
    *out = Duplicate(sentence->sentence.CleanedText());
    return FINECITE_OK;
  });
}

finecite_status finecite_sentence_cvcp(const finecite_sentence* sentence, int mark_mode,
                                       double* cv, int* present) {
  if (sentence == nullptr || cv == nullptr || present == nullptr) {
    return Fail(FINECITE_ERR_INVALID_ARGUMENT, "null argument");
  }
  return Guard([&] {
    auto value = finecite::metrics::CvcpSentence(
        sentence->sentence, mark_mode != 0 ? finecite::metrics::CvcpIndexMode::kMark
                                           : finecite::metrics::CvcpIndexMode::kGroup);
    *present = value.has_value() ? 1 : 0;
    *cv = value.value_or(0.0);
    return FINECITE_OK;
  });
}

finecite_status finecite_tree_from_conllu(const char* conllu, finecite_tree** out) {
  if (conllu == nullptr || out == nullptr) {
    return Fail(FINECITE_ERR_INVALID_ARGUMENT, "null argument");
  }
  return Guard([&] {
    auto trees = finecite::deptree::FromConllu(conllu);
    if (trees.empty()) return Fail(FINECITE_ERR_PARSE, "no sentence block in CoNLL-U input");
    auto handle = std::make_unique<finecite_tree>();
    handle->tree = std::make_unique<finecite::deptree::DepTree>(std::move(trees.front()));
    *out = handle.release();
    return FINECITE_OK;
  });
}

void finecite_tree_free(finecite_tree* tree) { delete tree; }

size_t finecite_tree_size(const finecite_tree* tree) {
  return tree == nullptr ? 0 : tree->tree->size();
}

finecite_status finecite_tree_lca(const finecite_tree* tree, size_t a, size_t b, size_t* out) {
  if (tree == nullptr || out == nullptr) {
    return Fail(FINECITE_ERR_INVALID_ARGUMENT, "null argument");
  }
  return Guard([&] {
    *out = tree->tree->Lca(a, b);
    return FINECITE_OK;
  });
}

finecite_status finecite_decompose_sentence(const finecite_sentence* sentence,
                                            const finecite_tree* tree, int strict_appendix,
                                            char** claims_json) {
  if (sentence == nullptr || tree == nullptr || claims_json == nullptr) {
    return Fail(FINECITE_ERR_INVALID_ARGUMENT, "null argument");
  }
  return Guard([&] {
    auto claims = finecite::decomposer::DecomposeSentence(
        sentence->sentence, *tree->tree, 1, {strict_appendix != 0});
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const auto& c : claims) {
      out.push_back({{"marks", c.group.marks},
                     {"claim", c.text},
                     {"citation_node", c.citation_node},
                     {"degenerate", c.degenerate}});
    }
    *claims_json = Duplicate(out.dump());
    return FINECITE_OK;
  });
}

}  // extern "C"
