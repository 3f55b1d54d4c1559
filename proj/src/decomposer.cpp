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

#include "finecite/decomposer.hpp"

#include <algorithm>
#include <set>

#include "finecite/error.hpp"

namespace finecite::decomposer {
namespace {

using deptree::DepTree;
using deptree::TreeView;

bool IsClauseModifier(const std::string& deprel) {
  return deprel == "prep" || deprel == "advcl";
}

// A "cc" child of `lca` whose root lies strictly between the two branch roots.
std::optional<std::size_t> FindCoordinator(const TreeView& view, std::size_t lca,
                                           std::size_t branch_a,
                                           std::size_t branch_b) {
  std::size_t lo = std::min(branch_a, branch_b);
  std::size_t hi = std::max(branch_a, branch_b);
  for (std::size_t c : view.VisibleChildren(lca)) {
    if (c > lo && c < hi && view.tree().node(c).deprel == "cc") return c;
  }
  return std::nullopt;
}

void ApplyPair(TreeView& view, std::size_t target, std::size_t other,
               const DecomposeOptions& options) {
  const DepTree& tree = view.tree();
  const std::size_t lca = tree.Lca(target, other);

  if (lca == target) {
    view.MaskSubtree(view.VisibleBranchToward(lca, other));
    return;
  }
  if (lca == other) {
    view.RestrictToSubtree(view.VisibleBranchToward(lca, target), lca);
    return;
  }

  const std::size_t own = view.VisibleBranchToward(lca, target);
  const std::size_t rival = view.VisibleBranchToward(lca, other);
  const bool own_first = own < rival;
  const bool at_root = lca == view.EffectiveRoot();
  const bool modifier = IsClauseModifier(tree.node(own).deprel);

  if (auto coordinator = FindCoordinator(view, lca, own, rival)) {
    const bool keep_own_only = own_first ? (at_root && modifier) : !(at_root && modifier);
    if (keep_own_only) {
      view.RestrictToSubtree(own, view.EffectiveRoot());
    } else {
      view.MaskSubtree(rival);
      view.MaskSubtree(*coordinator);
    }
    return;
  }

  if (options.strict_appendix) {
    if (at_root) {
      view.RestrictToSubtree(own, view.EffectiveRoot());
    } else {
      view.MaskSubtree(rival);
    }
    return;
  }

  if (own_first) {
    view.MaskSubtree(rival);
  } else {
    view.RestrictToSubtree(own, lca);
  }
}

void CheckAlignment(const citext::AnnotatedSentence& sentence, const DepTree& tree,
                    std::size_t ordinal) {
  const std::string where = "sentence " + std::to_string(ordinal);
  if (tree.size() != sentence.cleaned_words.size()) {
    throw Error(ErrorCode::kAlignment,
                where + ": tree has " + std::to_string(tree.size()) +
                    " nodes but the sentence has " +
                    std::to_string(sentence.cleaned_words.size()) +
                    " cleaned words");
  }
  for (std::size_t i = 0; i < tree.size(); ++i) {
    const std::string& form = tree.nodes()[i].form;
    if (form != sentence.cleaned_words[i]) {
      throw Error(ErrorCode::kAlignment,
                  where + ": token " + std::to_string(i + 1) + " is '" + form +
                      "' in the tree but '" + sentence.cleaned_words[i] +
                      "' in the cleaned sentence");
    }
  }
}

}  // namespace

std::vector<std::size_t> MatchCitationNodes(const DepTree& tree,
                                            const citext::AnnotatedSentence& sentence) {
  if (sentence.cleaned_words.empty()) {
    throw Error(ErrorCode::kDegenerate, "sentence has no words to attach citations to");
  }
  if (tree.size() != sentence.cleaned_words.size()) {
    throw Error(ErrorCode::kAlignment, "tree size differs from cleaned word count");
  }
  const auto& pos = sentence.clean_to_unit;
  std::set<std::size_t> claimed;  // 1-based cleaned positions == node indices
  std::vector<std::size_t> nodes;
  for (const citext::CitationGroup& group : sentence.groups) {
    // First cleaned word after the group.
    std::size_t after = static_cast<std::size_t>(
        std::upper_bound(pos.begin(), pos.end(), group.unit_index) - pos.begin());
    std::size_t chosen = 0;
    if (after > 0 && !claimed.contains(after)) {
      chosen = after;  // cleaned index `after` (1-based) is the word before
    }
    for (std::size_t i = after + 1; chosen == 0 && i <= pos.size(); ++i) {
      if (!claimed.contains(i)) chosen = i;
    }
    for (std::size_t i = after; chosen == 0 && i > 0; --i) {
      if (!claimed.contains(i)) chosen = i;
    }
    if (chosen == 0) {
      throw Error(ErrorCode::kDegenerate,
                  "more citation groups than words in the sentence");
    }
    claimed.insert(chosen);
    nodes.push_back(chosen);
  }
  return nodes;
}

std::string DeriveClaimText(const DepTree& tree, std::span<const std::size_t> nodes,
                            std::size_t target, const DecomposeOptions& options) {
  if (std::find(nodes.begin(), nodes.end(), target) == nodes.end()) {
    throw Error(ErrorCode::kInvalidArgument, "target is not a citation node");
  }
  std::vector<std::size_t> others(nodes.begin(), nodes.end());
  std::sort(others.begin(), others.end());
  TreeView view(tree);
  for (std::size_t other : others) {
    if (other == target || !view.visible(other)) continue;
    ApplyPair(view, target, other, options);
  }
  return view.ToText();
}

std::vector<AtomicClaim> DecomposeSentence(const citext::AnnotatedSentence& sentence,
                                           const DepTree& tree,
                                           std::size_t sentence_ordinal,
                                           const DecomposeOptions& options) {
  CheckAlignment(sentence, tree, sentence_ordinal);
  std::vector<AtomicClaim> claims;
  if (sentence.groups.empty()) return claims;
  if (sentence.degenerate()) {
    throw Error(ErrorCode::kDegenerate,
                "sentence " + std::to_string(sentence_ordinal) +
                    " has citation groups but no words");
  }
  std::vector<std::size_t> nodes = MatchCitationNodes(tree, sentence);
  for (std::size_t g = 0; g < sentence.groups.size(); ++g) {
    AtomicClaim claim;
    claim.group = sentence.groups[g];
    claim.citation_node = nodes[g];
    claim.sentence_ordinal = sentence_ordinal;
    try {
      claim.text = DeriveClaimText(tree, nodes, nodes[g], options);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDegenerate) throw;
      claim.text.clear();
    }
    if (claim.text.empty()) {
      claim.text = sentence.CleanedText();
      claim.degenerate = true;
    }
    claims.push_back(std::move(claim));
  }
  return claims;
}

}  // namespace finecite::decomposer
