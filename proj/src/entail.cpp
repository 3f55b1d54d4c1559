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

#include "finecite/entail.hpp"

#include <openssl/evp.h>

#include <cctype>
#include <chrono>
#include <fstream>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "finecite/error.hpp"
#include "httplib.h"
#include "json.hpp"

namespace finecite::entail {
namespace {

std::vector<std::string> LowerWords(std::string_view text) {
  std::vector<std::string> words;
  std::string current;
  for (char ch : text) {
    auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c) || c >= 0x80) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      words.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

const std::unordered_set<std::string>& StopWords() {
  static const std::unordered_set<std::string> kStop = {
      "a",     "an",    "the",   "is",    "are",   "was",   "were",  "be",
      "been",  "being", "am",    "can",   "could", "will",  "would", "shall",
      "should", "may",  "might", "must",  "do",    "does",  "did",   "have",
      "has",   "had",   "of",    "in",    "on",    "at",    "to",    "for",
      "from",  "by",    "with",  "and",   "or",    "but",   "as",    "that",
      "this",  "these", "those", "it",    "its",   "their", "there", "which",
      "who",   "whom",  "whose", "what",  "also",  "such",  "than",  "then",
      "while", "into",  "about", "some",  "s"};
  return kStop;
}

std::string Hex(const unsigned char* data, std::size_t n) {
  static const char* kDigits = "0123456789abcdef";
  std::string out;
  out.reserve(n * 2);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(kDigits[data[i] >> 4]);
    out.push_back(kDigits[data[i] & 0xF]);
  }
  return out;
}

}  // namespace

std::string BuildPremise(std::span<const citext::Passage* const> passages) {
  if (passages.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "premise needs at least one passage");
  }
  std::string premise;
  for (const citext::Passage* p : passages) {
    if (!premise.empty()) premise += "\n\n";
    premise += "Title: ";
    premise += p->title;
    premise += '\n';
    premise += p->text;
  }
  return premise;
}

std::string QueryKey(std::string_view template_id, std::string_view premise,
                     std::string_view hypothesis) {
  // Length-prefixed fields so that no two distinct triples share an input.
  std::string input;
  for (std::string_view field : {template_id, premise, hypothesis}) {
    input += std::to_string(field.size());
    input += ':';
    input += field;
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(input.data(), input.size(), digest, &len, EVP_sha256(), nullptr);
  return Hex(digest, len);
}

EntailmentQuery EntailmentQuery::Make(std::string premise, std::string hypothesis,
                                      std::string_view template_id) {
  EntailmentQuery q;
  q.key = QueryKey(template_id, premise, hypothesis);
  q.premise = std::move(premise);
  q.hypothesis = std::move(hypothesis);
  return q;
}

bool ContentWordsCovered(std::string_view premise, std::string_view hypothesis) {
  std::vector<std::string> premise_words = LowerWords(premise);
  std::unordered_set<std::string> available(premise_words.begin(), premise_words.end());
  for (const std::string& w : LowerWords(hypothesis)) {
    if (StopWords().contains(w)) continue;
    if (!available.contains(w)) return false;
  }
  return true;
}

FixtureOracle::FixtureOracle(bool fallback, std::string template_id)
    : fallback_(fallback), template_id_(std::move(template_id)) {}

void FixtureOracle::Add(std::string_view premise, std::string_view hypothesis,
                        Verdict verdict) {
  table_[QueryKey(template_id_, premise, hypothesis)] = verdict;
}

std::unique_ptr<FixtureOracle> FixtureOracle::FromJsonl(std::string_view document,
                                                        bool fallback,
                                                        std::string template_id) {
  auto oracle = std::make_unique<FixtureOracle>(fallback, std::move(template_id));
  std::istringstream in{std::string(document)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      nlohmann::json row = nlohmann::json::parse(line);
      oracle->Add(row.at("premise").get<std::string>(),
                  row.at("hypothesis").get<std::string>(),
                  row.at("entailed").get<bool>() ? Verdict::kEntailed
                                                 : Verdict::kNotEntailed);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParse, "fixture line " + std::to_string(line_no) +
                                         ": " + e.what());
    }
  }
  return oracle;
}

std::unique_ptr<FixtureOracle> FixtureOracle::FromFile(const std::string& path,
                                                       bool fallback,
                                                       std::string template_id) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read fixture " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return FromJsonl(buf.str(), fallback, std::move(template_id));
}

Verdict FixtureOracle::Judge(const EntailmentQuery& query) {
  ++calls_;
  const std::string key = query.key.empty()
                              ? QueryKey(template_id_, query.premise, query.hypothesis)
                              : query.key;
  if (auto it = table_.find(key); it != table_.end()) return it->second;
  if (fallback_) {
    return ContentWordsCovered(query.premise, query.hypothesis) ? Verdict::kEntailed
                                                                : Verdict::kNotEntailed;
  }
  throw Error(ErrorCode::kFixtureMiss, "no fixture verdict for query " + key +
                                           " (hypothesis: \"" + query.hypothesis + "\")");
}

void OracleConfig::Validate() const {
  if (kind == Kind::kRemote && endpoint.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "remote oracle requires an endpoint");
  }
  if (kind == Kind::kFixture && fixture_path.empty() && !fixture_fallback) {
    throw Error(ErrorCode::kInvalidArgument,
                "fixture oracle requires a fixture file or the fallback rule");
  }
  if (max_in_flight < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max in-flight calls must be >= 1");
  }
  if (retries < 0 || timeout_seconds <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "retries must be >= 0 and timeout > 0");
  }
}

RemoteOracle::RemoteOracle(OracleConfig config)
    : config_(std::move(config)), slots_(config_.max_in_flight) {
  config_.Validate();
  std::string rest = config_.endpoint;
  if (rest.starts_with("http://")) rest = rest.substr(7);
  if (rest.starts_with("https://")) {
    throw Error(ErrorCode::kInvalidArgument, "https endpoints are not supported");
  }
  std::size_t slash = rest.find('/');
  std::string authority = rest.substr(0, slash);
  base_path_ = slash == std::string::npos ? "" : rest.substr(slash);
  while (!base_path_.empty() && base_path_.back() == '/') base_path_.pop_back();
  std::size_t colon = authority.rfind(':');
  host_ = authority.substr(0, colon);
  if (colon != std::string::npos) {
    try {
      port_ = std::stoi(authority.substr(colon + 1));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidArgument, "bad endpoint port in " + config_.endpoint);
    }
  }
  if (host_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "bad endpoint " + config_.endpoint);
  }
}

Verdict RemoteOracle::Judge(const EntailmentQuery& query) {
  slots_.acquire();
  int now = ++in_flight_;
  int peak = peak_.load();
  while (now > peak && !peak_.compare_exchange_weak(peak, now)) {
  }
  struct Release {
    RemoteOracle* self;
    ~Release() {
      --self->in_flight_;
      self->slots_.release();
    }
  } release{this};
  return Post(query);
}

Verdict RemoteOracle::Post(const EntailmentQuery& query) {
  ++calls_;
  const nlohmann::json body = {{"premise", query.premise},
                               {"hypothesis", query.hypothesis}};
  const std::string payload = body.dump();
  auto timeout = std::chrono::duration<double>(config_.timeout_seconds);
  auto micros = std::chrono::duration_cast<std::chrono::microseconds>(timeout);

  std::string last_error = "no attempt made";
  for (int attempt = 0; attempt <= config_.retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(std::chrono::milliseconds(50 * attempt));
    httplib::Client client(host_, port_);
    client.set_connection_timeout(micros);
    client.set_read_timeout(micros);
    client.set_write_timeout(micros);
    httplib::Headers headers;
    if (!config_.token.empty()) {
      headers.emplace("Authorization", "Bearer " + config_.token);
    }
    auto res = client.Post(base_path_ + "/judge", headers, payload, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status < 200 || res->status >= 300) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    try {
      nlohmann::json reply = nlohmann::json::parse(res->body);
      return reply.at("entailed").get<bool>() ? Verdict::kEntailed
                                              : Verdict::kNotEntailed;
    } catch (const nlohmann::json::exception& e) {
      last_error = std::string("malformed reply: ") + e.what();
    }
  }
  throw Error(ErrorCode::kOracleUnavailable,
              "entailment service " + config_.endpoint + " unavailable after " +
                  std::to_string(config_.retries + 1) + " attempt(s): " + last_error);
}

VerdictCache::VerdictCache(std::string path) : path_(std::move(path)) {
  std::ifstream in(path_);
  std::string line;
  while (std::getline(in, line)) {
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab + 1 >= line.size()) continue;
    entries_[line.substr(0, tab)] =
        line[tab + 1] == '1' ? Verdict::kEntailed : Verdict::kNotEntailed;
  }
}

std::optional<Verdict> VerdictCache::Lookup(const std::string& key) const {
  std::shared_lock lock(mutex_);
  if (auto it = entries_.find(key); it != entries_.end()) return it->second;
  return std::nullopt;
}

void VerdictCache::Insert(const std::string& key, Verdict verdict) {
  std::unique_lock lock(mutex_);
  if (!entries_.emplace(key, verdict).second) return;
  if (path_.empty()) return;
  std::ofstream out(path_, std::ios::app);
  if (!out) throw Error(ErrorCode::kIo, "cannot append to cache " + path_);
  out << key << '\t' << (verdict == Verdict::kEntailed ? '1' : '0') << '\n';
}

std::size_t VerdictCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

CachingOracle::CachingOracle(std::unique_ptr<EntailmentOracle> inner,
                             std::shared_ptr<VerdictCache> cache)
    : inner_(std::move(inner)), cache_(std::move(cache)) {
  if (!cache_) cache_ = std::make_shared<VerdictCache>();
}

Verdict CachingOracle::Judge(const EntailmentQuery& query) {
  if (auto hit = cache_->Lookup(query.key)) return *hit;

  std::promise<Verdict> promise;
  std::shared_future<Verdict> future;
  bool owner = false;
  {
    std::lock_guard lock(pending_mutex_);
    // The owner inserts into the cache before leaving pending_.
    if (auto hit = cache_->Lookup(query.key)) return *hit;
    if (auto it = pending_.find(query.key); it != pending_.end()) {
      future = it->second;
    } else {
      future = promise.get_future().share();
      pending_.emplace(query.key, future);
      owner = true;
    }
  }
  if (!owner) return future.get();

  try {
    Verdict v = inner_->Judge(query);
    cache_->Insert(query.key, v);
    promise.set_value(v);
  } catch (...) {
    promise.set_exception(std::current_exception());
  }
  {
    std::lock_guard lock(pending_mutex_);
    pending_.erase(query.key);
  }
  return future.get();
}

std::unique_ptr<CachingOracle> MakeOracle(const OracleConfig& config) {
  config.Validate();
  std::unique_ptr<EntailmentOracle> inner;
  if (config.kind == OracleConfig::Kind::kRemote) {
    inner = std::make_unique<RemoteOracle>(config);
  } else if (config.fixture_path.empty()) {
    inner = std::make_unique<FixtureOracle>(config.fixture_fallback, config.template_id);
  } else {
    inner = FixtureOracle::FromFile(config.fixture_path, config.fixture_fallback,
                                    config.template_id);
  }
  auto cache = config.cache_path.empty()
                   ? std::make_shared<VerdictCache>()
                   : std::make_shared<VerdictCache>(config.cache_path);
  return std::make_unique<CachingOracle>(std::move(inner), std::move(cache));
}

}  // namespace finecite::entail
