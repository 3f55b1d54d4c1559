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
#include <span>
#include <string>
#include <vector>

#include "finecite/citext.hpp"
#include "finecite/deptree.hpp"

namespace finecite::decomposer {

struct AtomicClaim {
  std::string text;
  citext::CitationGroup group;
  std::size_t citation_node = 0;
  std::size_t sentence_ordinal = 0;
  // Surgery left nothing; text holds the full cleaned sentence instead.
  bool degenerate = false;
};

struct DecomposeOptions {
  // Alternative no-cc rule: when the LCA is the tree
  // root, keep only T_i regardless of the branch order.
  bool strict_appendix = false;
};

/// Citation node per group, in group order. Each group takes the nearest
/// cleaned word before it, else the nearest one after; a node already taken
/// by an earlier group is skipped in favour of the next following word.
std::vector<std::size_t> MatchCitationNodes(const deptree::DepTree& tree,
                                            const citext::AnnotatedSentence& sentence);

/// Claim text for the citation node `target` given all citation nodes of the
/// sentence. Runs the LCA-guided masking/replacement over a fresh view.
std::string DeriveClaimText(const deptree::DepTree& tree,
                            std::span<const std::size_t> nodes,
                            std::size_t target,
                            const DecomposeOptions& options = {});

/// One claim per citation group, in group order. `sentence_ordinal` is only
/// recorded. Throws Error{kAlignment} when tree and cleaned words disagree and
/// Error{kDegenerate} for a sentence whose groups have no word to attach to.
std::vector<AtomicClaim> DecomposeSentence(const citext::AnnotatedSentence& sentence,
                                           const deptree::DepTree& tree,
                                           std::size_t sentence_ordinal = 1,
                                           const DecomposeOptions& options = {});

}  // namespace finecite::decomposer
