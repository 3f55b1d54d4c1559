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

// finecite command-line driver. Talks to the library only through the C API.

#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "finecite/finecite.h"

namespace {

struct ConfigHandle {
  finecite_config* ptr = finecite_config_new();
  ~ConfigHandle() { finecite_config_free(ptr); }
};

struct CommonFlags {
  std::string input;
  std::string parses;
  std::string out;
  std::string format = "json";
  int jobs = 1;
  bool strict_appendix = false;
};

struct EvaluateFlags {
  std::string oracle = "remote";
  std::string oracle_url;
  std::string fixture;
  bool fixture_fallback = false;
  std::string cache;
  double timeout = 30.0;
  int retries = 2;
  int max_in_flight = 4;
  bool baseline = false;
  std::string cvcp_mode = "group";
};

// Returns a nonzero status on the first rejected key.
int Apply(finecite_config* cfg, const std::vector<std::pair<std::string, std::string>>& kv) {
  for (const auto& [key, value] : kv) {
    if (value.empty()) continue;
    finecite_status st = finecite_config_set(cfg, key.c_str(), value.c_str());
    if (st != FINECITE_OK) {
      std::fprintf(stderr, "finecite: --%s: %s\n", key.c_str(), finecite_last_error());
      return 1;
    }
  }
  return 0;
}

int Finish(finecite_status status, char* diagnostics) {
  if (diagnostics != nullptr) {
    std::fputs(diagnostics, stderr);
    finecite_string_free(diagnostics);
  }
  if (status > FINECITE_ERR_ORACLE) {
    std::fprintf(stderr, "finecite: %s\n", finecite_last_error());
    return 1;
  }
  return static_cast<int>(status);
}

void AddCommon(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--input", flags.input, "Responses JSONL")->required()->check(CLI::ExistingFile);
  cmd->add_option("--parses", flags.parses, "CoNLL-U or parsed-JSON sidecar")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", flags.out, "Output path (default: stdout)");
  cmd->add_option("--jobs", flags.jobs, "Worker count")->check(CLI::PositiveNumber);
  cmd->add_flag("--strict-appendix", flags.strict_appendix,
                "Apply the root/non-root rule to uncoordinated case (c)");
}

std::vector<std::pair<std::string, std::string>> CommonPairs(const CommonFlags& f) {
  return {{"input", f.input},
          {"parses", f.parses},
          {"out", f.out},
          {"jobs", std::to_string(f.jobs)},
          {"strict-appendix", f.strict_appendix ? "1" : "0"}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fine-grained citation evaluation"};
  app.set_version_flag("--version", std::string(finecite_version()));
  app.require_subcommand(1);

  CommonFlags decompose_flags;
  auto* decompose = app.add_subcommand("decompose", "Derive one atomic claim per citation group");
  AddCommon(decompose, decompose_flags);

  CommonFlags evaluate_flags;
  EvaluateFlags eval;
  auto* evaluate = app.add_subcommand("evaluate", "Score citation groups with an entailment oracle");
  AddCommon(evaluate, evaluate_flags);
  evaluate->add_option("--format", evaluate_flags.format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}));
  evaluate->add_option("--oracle", eval.oracle, "Oracle backend")
      ->check(CLI::IsMember({"remote", "fixture"}));
  evaluate->add_option("--oracle-url", eval.oracle_url, "Remote NLI endpoint (http://host:port)");
  evaluate->add_option("--fixture", eval.fixture, "Fixture verdict table (JSONL)");
  evaluate->add_flag("--fixture-fallback", eval.fixture_fallback,
                     "Answer fixture misses with the content-word rule");
  evaluate->add_option("--cache", eval.cache, "Persistent verdict cache file");
  evaluate->add_option("--timeout", eval.timeout, "Per-request timeout in seconds");
  evaluate->add_option("--retries", eval.retries, "Retries per oracle request");
  evaluate->add_option("--max-in-flight", eval.max_in_flight, "Concurrent oracle requests");
  evaluate->add_flag("--baseline", eval.baseline, "Also compute sentence-level scores");
  evaluate->add_option("--cvcp-index-mode", eval.cvcp_mode, "CVCP index per group or per mark")
      ->check(CLI::IsMember({"group", "mark"}));

  std::vector<std::string> report_paths;
  std::string report_format = "table";
  std::string report_out;
  bool per_response = false;
  auto* report = app.add_subcommand("report", "Render one or more evaluation reports");
  report->add_option("reports", report_paths, "Report files")->required()->check(CLI::ExistingFile);
  report->add_option("--format", report_format, "Rendering")
      ->check(CLI::IsMember({"table", "csv"}));
  report->add_option("--out", report_out, "Output path (default: stdout)");
  report->add_flag("--per-response", per_response, "Include one row per response");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  char* diagnostics = nullptr;
  if (*decompose) {
    ConfigHandle cfg;
    if (Apply(cfg.ptr, CommonPairs(decompose_flags)) != 0) return 1;
    finecite_status st = finecite_run_decompose(cfg.ptr, &diagnostics);
    return Finish(st, diagnostics);
  }
  if (*evaluate) {
    ConfigHandle cfg;
    auto pairs = CommonPairs(evaluate_flags);
    pairs.insert(pairs.end(), {{"format", evaluate_flags.format},
                               {"oracle", eval.oracle},
                               {"oracle-url", eval.oracle_url},
                               {"fixture", eval.fixture},
                               {"fixture-fallback", eval.fixture_fallback ? "1" : "0"},
                               {"cache", eval.cache},
                               {"timeout", std::to_string(eval.timeout)},
                               {"retries", std::to_string(eval.retries)},
                               {"max-in-flight", std::to_string(eval.max_in_flight)},
                               {"baseline", eval.baseline ? "1" : "0"},
                               {"cvcp-index-mode", eval.cvcp_mode}});
    if (Apply(cfg.ptr, pairs) != 0) return 1;
    finecite_status st = finecite_run_evaluate(cfg.ptr, &diagnostics);
    return Finish(st, diagnostics);
  }
  std::vector<const char*> paths;
  for (const std::string& p : report_paths) paths.push_back(p.c_str());
  finecite_status st = finecite_run_report(paths.data(), paths.size(), report_format.c_str(),
                                           per_response ? 1 : 0, report_out.c_str(), &diagnostics);
  return Finish(st, diagnostics);
}
