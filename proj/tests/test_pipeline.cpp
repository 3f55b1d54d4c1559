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

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "finecite/entail.hpp"
#include "finecite/error.hpp"
#include "finecite/pipeline.hpp"
#include "httplib.h"
#include "json.hpp"
#include "test_support.hpp"

using finecite::testing::FixturePath;
using finecite::testing::ReadFixture;
using namespace finecite::pipeline;
namespace entail = finecite::entail;

namespace {

class ConstantOracle : public entail::EntailmentOracle {
 public:
  explicit ConstantOracle(entail::Verdict v) : v_(v) {}
  entail::Verdict Judge(const entail::EntailmentQuery&) override {
    ++calls_;
    return v_;
  }
  std::size_t backend_calls() const override { return calls_; }

 private:
  entail::Verdict v_;
  std::atomic<std::size_t> calls_{0};
};

std::string TempFile(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() /
             ("finecite-pipeline-" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

std::string Slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<nlohmann::json> JsonLines(const std::string& text) {
  std::vector<nlohmann::json> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(nlohmann::json::parse(line));
  }
  return out;
}

RunConfig Config(const std::string& input, const std::string& parses, const std::string& out) {
  RunConfig c;
  c.input_path = FixturePath(input);
  c.parses_path = FixturePath(parses);
  c.out_path = out;
  c.oracle.fixture_fallback = true;
  return c;
}

nlohmann::json EvaluateWith(entail::Verdict verdict, const std::string& corpus,
                            const std::string& parses, RunConfig config = {}) {
  auto responses = ParseResponses(ReadFixture(corpus), config.cleaning);
  ParseIndex index(ParseParses(ReadFixture(parses)), responses);
  ConstantOracle oracle(verdict);
  auto result = Evaluate(responses, index, oracle, config);
  return nlohmann::json::parse(ReportToJson(result, config));
}

}  // namespace

TEST_CASE("CoNLL-U and parsed-JSON sidecars carry the same trees") {
  auto a = ParseParses(ReadFixture("corpus.conllu"));
  auto b = ParseParses(ReadFixture("corpus.parsed.jsonl"));
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].response_id == b[k].response_id);
    CHECK(a[k].sentence_ordinal == b[k].sentence_ordinal);
    CHECK(a[k].tree.nodes() == b[k].tree.nodes());
  }
}

TEST_CASE("decompose writes one claim per group") {
  for (const char* parses : {"worked_examples.conllu", "worked_examples.parsed.jsonl"}) {
    std::string out = TempFile("claims.jsonl");
    std::vector<std::string> diag;
    CHECK(RunDecompose(Config("worked_examples.jsonl", parses, out), diag) == kExitOk);
    CHECK(diag.empty());
    auto rows = JsonLines(Slurp(out));
    REQUIRE(rows.size() == 6);
    CHECK(rows[0]["response_id"] == "asqa-greys");
    CHECK(rows[0]["sentence_ordinal"] == 1);
    CHECK(rows[0]["marks"] == nlohmann::json::array({1, 2}));
    CHECK(rows[0]["citation_node"] == 16);
    CHECK(rows[3]["claim"] == "while standard packs typically contain 20 cigarettes");
    CHECK(rows[5]["marks"] == nlohmann::json::array({1}));
  }
}

TEST_CASE("a corpus without citations gives an empty claims file") {
  std::string out = TempFile("empty.jsonl");
  std::vector<std::string> diag;
  CHECK(RunDecompose(Config("uncited.jsonl", "uncited.conllu", out), diag) == kExitOk);
  CHECK(Slurp(out).empty());
}

TEST_CASE("parse count mismatch exits 2 naming the response and keeps valid output") {
  std::string out = TempFile("mismatch.jsonl");
  std::vector<std::string> diag;
  CHECK(RunDecompose(Config("mismatch.jsonl", "mismatch.conllu", out), diag) == kExitAlignment);
  REQUIRE(diag.size() == 1);
  CHECK(diag[0].find("eiffel") != std::string::npos);
  auto rows = JsonLines(Slurp(out));
  CHECK(rows.size() == 2);
  CHECK(rows[0]["response_id"] == "asqa-cigarettes");
}

TEST_CASE("unreadable inputs exit 1") {
  std::vector<std::string> diag;
  RunConfig c = Config("worked_examples.jsonl", "does-not-exist.conllu", TempFile("x.jsonl"));
  CHECK(RunDecompose(c, diag) == kExitIo);
  CHECK(diag.at(0).find("does-not-exist") != std::string::npos);
  diag.clear();
  CHECK(RunEvaluate(c, diag) == kExitIo);
}

TEST_CASE("sidecar groups that disagree with the text are alignment errors") {
  auto responses = ParseResponses(ReadFixture("overlap.jsonl"), {});
  std::string sidecar =
      R"({"response_id":"overlap-cups","sentence_ordinal":1,"tokens":[)"
      R"({"i":1,"form":"Cups","head":4,"deprel":"nsubjpass"},{"i":2,"form":"can","head":4,"deprel":"aux"},)"
      R"({"i":3,"form":"be","head":4,"deprel":"auxpass"},{"i":4,"form":"made","head":0,"deprel":"ROOT"},)"
      R"({"i":5,"form":"of","head":4,"deprel":"prep"},{"i":6,"form":"glass","head":5,"deprel":"pobj"},)"
      R"({"i":7,"form":"or","head":6,"deprel":"cc"},{"i":8,"form":"plastic","head":6,"deprel":"conj"}],)"
      R"("groups":[{"unit_index":7,"marks":[3]},{"unit_index":11,"marks":[3,4]}]})";
  ParseIndex bad(ParseParses(sidecar), responses);
  auto result = Decompose(responses, bad, 1, {});
  REQUIRE(result.errors.size() == 1);
  CHECK(result.errors[0].kind == "alignment");

  std::string good = sidecar;
  good.replace(good.find("\"unit_index\":11"), 15, "\"unit_index\":10");
  ParseIndex ok(ParseParses(good), responses);
  CHECK(Decompose(responses, ok, 1, {}).claims.size() == 2);
}

TEST_CASE("saturated and refusing oracles bracket the scores, CVCP does not move") {
  auto yes = EvaluateWith(entail::Verdict::kEntailed, "corpus.jsonl", "corpus.conllu");
  auto no = EvaluateWith(entail::Verdict::kNotEntailed, "corpus.jsonl", "corpus.conllu");
  CHECK(yes["complete"] == true);
  CHECK(yes["corpus"]["recall"] == 100.0);
  CHECK(yes["corpus"]["precision"] == 100.0);
  CHECK(yes["corpus"]["f1"] == 100.0);
  CHECK(no["corpus"]["recall"] == 0.0);
  CHECK(no["corpus"]["precision"] == 0.0);
  CHECK(no["corpus"]["f1"] == 0.0);
  CHECK(yes["corpus"]["cvcp"] == no["corpus"]["cvcp"]);
  CHECK(yes["corpus"]["counts"]["responses"] == 6);
  CHECK(yes["corpus"]["counts"]["responses_with_citations"] == 5);
  CHECK(yes["corpus"]["counts"]["uncited_sentences"] == 2);
  // The response without citations has null scores.
  CHECK(yes["responses"][5]["id"] == "no-citations");
  CHECK(yes["responses"][5]["recall"].is_null());
}

TEST_CASE("overlap case: the sentence-level baseline penalizes a citation the claim-level score keeps") {
  RunConfig config;
  config.baseline = true;
  auto responses = ParseResponses(ReadFixture("overlap.jsonl"), config.cleaning);
  ParseIndex index(ParseParses(ReadFixture("overlap.conllu")), responses);
  auto oracle = entail::FixtureOracle::FromFile(FixturePath("overlap.fixture.jsonl"));
  auto result = Evaluate(responses, index, *oracle, config);
  REQUIRE(result.complete);
  auto report = nlohmann::json::parse(ReportToJson(result, config));
  auto r = report["responses"][0];
  CHECK(r["precision"] == 100.0);
  CHECK(r["baseline"]["precision"] == 50.0);
  CHECK(r["baseline"]["sentences"][0]["per_mark_precision"] == nlohmann::json::array({1, 0}));
  CHECK(r["groups"][1]["per_mark_precision"] == nlohmann::json::array({1, 1}));
  CHECK(report["corpus"]["baseline"]["precision"] == 50.0);
}

TEST_CASE("reports are identical for any worker count") {
  RunConfig one = Config("corpus.jsonl", "corpus.conllu", TempFile("r1.json"));
  one.baseline = true;
  RunConfig eight = one;
  eight.jobs = 8;
  eight.out_path = TempFile("r8.json");
  std::vector<std::string> diag;
  CHECK(RunEvaluate(one, diag) == kExitOk);
  CHECK(RunEvaluate(eight, diag) == kExitOk);
  CHECK(Slurp(one.out_path) == Slurp(eight.out_path));
  CHECK_FALSE(Slurp(one.out_path).empty());
}

TEST_CASE("an unreachable oracle exits 3 with an incomplete report") {
  int dead_port;
  {
    httplib::Server probe;
    dead_port = probe.bind_to_any_port("127.0.0.1");
  }
  RunConfig c = Config("corpus.jsonl", "corpus.conllu", TempFile("partial.json"));
  c.oracle.kind = entail::OracleConfig::Kind::kRemote;
  c.oracle.endpoint = "http://127.0.0.1:" + std::to_string(dead_port);
  c.oracle.retries = 0;
  c.oracle.timeout_seconds = 1;
  std::vector<std::string> diag;
  CHECK(RunEvaluate(c, diag) == kExitOracle);
  auto report = nlohmann::json::parse(Slurp(c.out_path));
  CHECK(report["complete"] == false);
  REQUIRE_FALSE(report["errors"].empty());
  CHECK(report["errors"][0]["kind"] == "oracle");
}

TEST_CASE("missing passages are reported per response") {
  auto responses = ParseResponses(
      R"({"id":"m","question":"q","answer":"Paris is the capital of France [9].","docs":[]})", {});
  // Without response ids the parses pair with responses in order.
  auto parses = ParseParses(ReadFixture("uncited.conllu"));
  parses[0].response_id.reset();
  ParseIndex index(std::move(parses), responses);
  RunConfig config;
  ConstantOracle oracle(entail::Verdict::kEntailed);
  auto result = Evaluate(responses, index, oracle, config);
  REQUIRE(result.errors.size() == 1);
  CHECK(result.errors[0].kind == "missing_passage");
  CHECK(result.complete);
}

TEST_CASE("json to csv keeps every numeric field") {
  auto report = EvaluateWith(entail::Verdict::kEntailed, "corpus.jsonl", "corpus.conllu");
  std::string csv = RenderReports({{"run", report.dump()}}, OutputFormat::kCsv, true);
  std::istringstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "config,recall,precision,f1,cvcp");
  auto field = [](const std::string& cell) -> nlohmann::json {
    return cell.empty() ? nlohmann::json(nullptr) : nlohmann::json(std::stod(cell));
  };
  std::vector<nlohmann::json> blocks = {report["corpus"]};
  for (const auto& r : report["responses"]) blocks.push_back(r);
  for (const auto& block : blocks) {
    std::string line;
    REQUIRE(std::getline(in, line));
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    while (cells.size() < 5) cells.push_back("");
    for (auto [i, key] : {std::pair{1, "recall"}, {2, "precision"}, {3, "f1"}}) {
      CHECK(field(cells[i]) == block[key]);
    }
    if (block["cvcp"].is_null()) {
      CHECK(cells[4].empty());
    } else {
      CHECK(std::stod(cells[4]) == doctest::Approx(block["cvcp"].get<double>()).epsilon(1e-12));
    }
  }
}

TEST_CASE("table rendering") {
  std::string empty = R"({"format":"finecite-report/1","complete":true,"corpus":null,"responses":[]})";
  std::string table = RenderReports({{"empty", empty}}, OutputFormat::kTable, true);
  std::istringstream lines(table);
  std::string header, rule, extra;
  std::getline(lines, header);
  std::getline(lines, rule);
  CHECK_FALSE(std::getline(lines, extra));
  CHECK(header.find("Config") == 0);

  auto a = EvaluateWith(entail::Verdict::kEntailed, "corpus.jsonl", "corpus.conllu").dump();
  auto b = EvaluateWith(entail::Verdict::kNotEntailed, "corpus.jsonl", "corpus.conllu").dump();
  std::string two = RenderReports({{"model-a", a}, {"model-b", b}}, OutputFormat::kTable, false);
  std::istringstream in(two);
  std::getline(in, header);
  auto rec = header.find("Rec.");
  auto prec = header.find("Prec.");
  auto f1 = header.find("F1");
  auto cvcp = header.find("CVCP");
  CHECK(rec < prec);
  CHECK(prec < f1);
  CHECK(f1 < cvcp);
  CHECK(two.find("model-a") < two.find("model-b"));
  CHECK(two.find("100.0") != std::string::npos);
  CHECK(RenderReports({{"a", a}}, OutputFormat::kTable, false) ==
        RenderReports({{"a", a}}, OutputFormat::kTable, false));

  CHECK_THROWS_AS(RenderReports({{"bad", "{not json"}}, OutputFormat::kTable, false),
                  finecite::Error);
  std::string bad_path = TempFile("bad.json");
  std::ofstream(bad_path) << "[1,2]";
  std::vector<std::string> diag;
  CHECK(RunReport({bad_path}, OutputFormat::kTable, false, TempFile("t.txt"), diag) == kExitIo);
}
