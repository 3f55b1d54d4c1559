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
#include <string>
#include <string_view>
#include <vector>

namespace finecite::deptree {

struct DepNode {
  std::size_t index = 0;  // 1-based position in cleaned word order
  std::string form;
  std::size_t head = 0;   // 0 for the root
  std::string deprel;

  bool operator==(const DepNode&) const = default;
};

/// Immutable rooted dependency tree over the cleaned words of one sentence.
///
/// Construction validates the structure: indices are 1..n without gaps,
/// exactly one node has head 0, no self-loops, and every head chain reaches
/// the root. Violations throw Error{kStructure}.
class DepTree {
 public:
  explicit DepTree(std::vector<DepNode> nodes, std::string label = {});

  std::size_t size() const { return nodes_.size(); }
  std::size_t root() const { return root_; }
  const std::string& label() const { return label_; }
  const std::vector<DepNode>& nodes() const { return nodes_; }
  const DepNode& node(std::size_t index) const;
  const std::vector<std::size_t>& children(std::size_t index) const;
  std::size_t depth(std::size_t index) const;

  bool Dominates(std::size_t ancestor, std::size_t descendant) const;
  // Deepest common ancestor; every node is its own ancestor.
  std::size_t Lca(std::size_t a, std::size_t b) const;
  // Child of `ancestor` on the path to `descendant`.
  std::size_t BranchToward(std::size_t ancestor, std::size_t descendant) const;
  // Indices of the subtree rooted at `index`, ascending.
  std::vector<std::size_t> Subtree(std::size_t index) const;

  std::vector<std::string> Forms() const;

 private:
  void CheckIndex(std::size_t index) const;

  std::vector<DepNode> nodes_;
  std::vector<std::vector<std::size_t>> children_;  // by index; [0] unused
  std::vector<std::size_t> depth_;
  std::size_t root_ = 0;
  std::string label_;
};

/// A CoNLL-U sentence block: the tree plus the block's "# key = value"
/// comments (e.g. response_id, sentence_ordinal, text).
struct ConlluSentence {
  std::vector<std::pair<std::string, std::string>> comments;
  DepTree tree;

  std::optional<std::string> Comment(std::string_view key) const;
};

std::vector<ConlluSentence> ParseConllu(std::string_view document);
std::vector<DepTree> FromConllu(std::string_view document);
std::string ToConllu(const std::vector<ConlluSentence>& sentences);

/// Copy-on-write masking over a shared tree, used for claim surgery.
class TreeView {
 public:
  explicit TreeView(const DepTree& tree);

  const DepTree& tree() const { return *tree_; }
  bool visible(std::size_t index) const;
  std::size_t VisibleCount() const;
  std::optional<std::size_t> root_override() const { return root_override_; }
  std::size_t EffectiveRoot() const;

  // Masks subroot and its descendants. Returns false (and changes nothing)
  // when subroot is already masked.
  bool MaskSubtree(std::size_t subroot);

  // Replaces the subtree at region_root with subroot's subtree: everything
  // under region_root outside subroot's subtree becomes masked. When the
  // region is the whole visible tree, subroot becomes the root override.
  void RestrictToSubtree(std::size_t subroot, std::size_t region_root);

  // First visible node below `ancestor` on the path to `descendant`; this is
  // the root of the branch as it appears in the modified tree.
  std::size_t VisibleBranchToward(std::size_t ancestor,
                                  std::size_t descendant) const;

  // Visible children of `index` in the original tree.
  std::vector<std::size_t> VisibleChildren(std::size_t index) const;

  // Visible forms joined by single spaces in ascending index order.
  std::string ToText() const;
  std::vector<std::size_t> VisibleNodes() const;

 private:
  const DepTree* tree_;
  std::vector<bool> masked_;  // by index; [0] unused
  std::optional<std::size_t> root_override_;
};

}  // namespace finecite::deptree
