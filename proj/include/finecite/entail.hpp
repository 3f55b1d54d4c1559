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

#include <atomic>
#include <cstddef>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "finecite/citext.hpp"

namespace finecite::entail {

enum class Verdict { kNotEntailed = 0, kEntailed = 1 };

inline constexpr std::string_view kDefaultTemplateId = "title-text-v1";

/// "Title: {title}\n{text}" blocks joined by blank lines, in the given order.
/// Throws Error{kInvalidArgument} on an empty list.
std::string BuildPremise(std::span<const citext::Passage* const> passages);

struct EntailmentQuery {
  std::string premise;
  std::string hypothesis;
  std::string key;  // hex SHA-256 of (template id, premise, hypothesis)

  static EntailmentQuery Make(std::string premise, std::string hypothesis,
                              std::string_view template_id = kDefaultTemplateId);
};

std::string QueryKey(std::string_view template_id, std::string_view premise,
                     std::string_view hypothesis);

/// The judge. Implementations must be safe under concurrent Judge calls.
class EntailmentOracle {
 public:
  virtual ~EntailmentOracle() = default;
  virtual Verdict Judge(const EntailmentQuery& query) = 0;
  // Queries that reached the backing judge (not served from a cache).
  virtual std::size_t backend_calls() const = 0;
};

/// Exact-key lookup table with an optional word-coverage fallback.
class FixtureOracle : public EntailmentOracle {
 public:
  explicit FixtureOracle(bool fallback = false,
                         std::string template_id = std::string(kDefaultTemplateId));

  // JSONL lines of {"premise", "hypothesis", "entailed"}.
  static std::unique_ptr<FixtureOracle> FromJsonl(
      std::string_view document, bool fallback = false,
      std::string template_id = std::string(kDefaultTemplateId));
  static std::unique_ptr<FixtureOracle> FromFile(
      const std::string& path, bool fallback = false,
      std::string template_id = std::string(kDefaultTemplateId));

  void Add(std::string_view premise, std::string_view hypothesis, Verdict verdict);
  Verdict Judge(const EntailmentQuery& query) override;
  std::size_t backend_calls() const override { return calls_.load(); }
  std::size_t size() const { return table_.size(); }

 private:
  bool fallback_;
  std::string template_id_;
  std::unordered_map<std::string, Verdict> table_;
  std::atomic<std::size_t> calls_{0};
};

/// Every content word of the hypothesis (lowercased, stop words removed)
/// occurs in the premise.
bool ContentWordsCovered(std::string_view premise, std::string_view hypothesis);

struct OracleConfig {
  enum class Kind { kRemote, kFixture };
  Kind kind = Kind::kFixture;
  std::string endpoint;  // e.g. http://127.0.0.1:8080
  double timeout_seconds = 30.0;
  int max_in_flight = 4;
  int retries = 2;
  std::string cache_path;  // empty: in-memory only
  std::string template_id = std::string(kDefaultTemplateId);
  std::string fixture_path;
  bool fixture_fallback = false;
  std::string token;  // bearer token; filled from ALIICE_ORACLE_TOKEN

  // Throws Error{kInvalidArgument}.
  void Validate() const;
};

/// POST {endpoint}/judge {"premise","hypothesis"} -> {"entailed": bool}.
class RemoteOracle : public EntailmentOracle {
 public:
  explicit RemoteOracle(OracleConfig config);
  Verdict Judge(const EntailmentQuery& query) override;
  std::size_t backend_calls() const override { return calls_.load(); }
  std::size_t peak_in_flight() const { return peak_.load(); }

 private:
  Verdict Post(const EntailmentQuery& query);

  OracleConfig config_;
  std::string host_;
  int port_ = 80;
  std::string base_path_;
  std::counting_semaphore<1024> slots_;
  std::atomic<int> in_flight_{0};
  std::atomic<int> peak_{0};
  std::atomic<std::size_t> calls_{0};
};

/// Append-only persistent verdict store: one "hexkey\t0|1" line per record.
class VerdictCache {
 public:
  VerdictCache() = default;  // in-memory
  explicit VerdictCache(std::string path);

  std::optional<Verdict> Lookup(const std::string& key) const;
  void Insert(const std::string& key, Verdict verdict);
  std::size_t size() const;

 private:
  std::string path_;
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, Verdict> entries_;
};

/// Serves repeated keys from the cache; concurrent identical queries share a
/// single backend call.
class CachingOracle : public EntailmentOracle {
 public:
  CachingOracle(std::unique_ptr<EntailmentOracle> inner,
                std::shared_ptr<VerdictCache> cache);
  Verdict Judge(const EntailmentQuery& query) override;
  std::size_t backend_calls() const override { return inner_->backend_calls(); }
  EntailmentOracle& inner() { return *inner_; }

 private:
  std::unique_ptr<EntailmentOracle> inner_;
  std::shared_ptr<VerdictCache> cache_;
  std::mutex pending_mutex_;
  std::map<std::string, std::shared_future<Verdict>> pending_;
};

/// Fixture or remote oracle per config, wrapped in a cache.
std::unique_ptr<CachingOracle> MakeOracle(const OracleConfig& config);

}  // namespace finecite::entail
