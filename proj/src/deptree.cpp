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

#include "finecite/deptree.hpp"

#include <algorithm>
#include <sstream>

#include "finecite/error.hpp"

namespace finecite::deptree {
namespace {

std::string Where(const std::string& label) {
  return label.empty() ? std::string("tree") : label;
}

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> cols;
  std::size_t start = 0;
  for (;;) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      cols.push_back(line.substr(start));
      return cols;
    }
    cols.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

bool ParseIndex(std::string_view text, std::size_t& out) {
  if (text.empty() || text.size() > 9) return false;
  std::size_t value = 0;
  for (char c : text) {
    if (c < '0' || c > '9') return false;
    value = value * 10 + static_cast<std::size_t>(c - '0');
  }
  out = value;
  return true;
}

}  // namespace

DepTree::DepTree(std::vector<DepNode> nodes, std::string label)
    : nodes_(std::move(nodes)), label_(std::move(label)) {
  const std::size_t n = nodes_.size();
  if (n == 0) throw Error(ErrorCode::kStructure, Where(label_) + ": empty tree");
  children_.assign(n + 1, {});
  depth_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const DepNode& node = nodes_[i];
    if (node.index != i + 1) {
      throw Error(ErrorCode::kStructure,
                  Where(label_) + ": node indices must run 1.." +
                      std::to_string(n) + " without gaps (found " +
                      std::to_string(node.index) + " at position " +
                      std::to_string(i + 1) + ")");
    }
    if (node.head == node.index) {
      throw Error(ErrorCode::kStructure, Where(label_) + ": node " +
                                             std::to_string(node.index) +
                                             " is its own head");
    }
    if (node.head > n) {
      throw Error(ErrorCode::kStructure,
                  Where(label_) + ": node " + std::to_string(node.index) +
                      " has out-of-range head " + std::to_string(node.head));
    }
    if (node.head == 0) {
      if (root_ != 0) {
        throw Error(ErrorCode::kStructure,
                    Where(label_) + ": multiple roots (" +
                        std::to_string(root_) + " and " +
                        std::to_string(node.index) + ")");
      }
      root_ = node.index;
    } else {
      children_[node.head].push_back(node.index);
    }
  }
  if (root_ == 0) throw Error(ErrorCode::kStructure, Where(label_) + ": no root");

  // Breadth-first from the root; anything unreached sits on a cycle.
  std::vector<std::size_t> queue = {root_};
  std::size_t reached = 0;
  while (reached < queue.size()) {
    std::size_t v = queue[reached++];
    for (std::size_t c : children_[v]) {
      depth_[c] = depth_[v] + 1;
      queue.push_back(c);
    }
  }
  if (reached != n) {
    throw Error(ErrorCode::kStructure,
                Where(label_) + ": head links contain a cycle");
  }
}

void DepTree::CheckIndex(std::size_t index) const {
  if (index == 0 || index > nodes_.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                Where(label_) + ": invalid node index " + std::to_string(index));
  }
}

const DepNode& DepTree::node(std::size_t index) const {
  CheckIndex(index);
  return nodes_[index - 1];
}

const std::vector<std::size_t>& DepTree::children(std::size_t index) const {
  CheckIndex(index);
  return children_[index];
}

std::size_t DepTree::depth(std::size_t index) const {
  CheckIndex(index);
  return depth_[index];
}

bool DepTree::Dominates(std::size_t ancestor, std::size_t descendant) const {
  CheckIndex(ancestor);
  CheckIndex(descendant);
  while (depth_[descendant] > depth_[ancestor]) {
    descendant = nodes_[descendant - 1].head;
  }
  return descendant == ancestor;
}

std::size_t DepTree::Lca(std::size_t a, std::size_t b) const {
  CheckIndex(a);
  CheckIndex(b);
  while (depth_[a] > depth_[b]) a = nodes_[a - 1].head;
  while (depth_[b] > depth_[a]) b = nodes_[b - 1].head;
  while (a != b) {
    a = nodes_[a - 1].head;
    b = nodes_[b - 1].head;
  }
  return a;
}

std::size_t DepTree::BranchToward(std::size_t ancestor,
                                  std::size_t descendant) const {
  CheckIndex(ancestor);
  CheckIndex(descendant);
  if (ancestor == descendant || depth_[descendant] <= depth_[ancestor]) {
    throw Error(ErrorCode::kInvalidArgument,
                Where(label_) + ": node " + std::to_string(ancestor) +
                    " does not strictly dominate " + std::to_string(descendant));
  }
  std::size_t v = descendant;
  while (depth_[v] > depth_[ancestor] + 1) v = nodes_[v - 1].head;
  if (nodes_[v - 1].head != ancestor) {
    throw Error(ErrorCode::kInvalidArgument,
                Where(label_) + ": node " + std::to_string(ancestor) +
                    " does not strictly dominate " + std::to_string(descendant));
  }
  return v;
}

std::vector<std::size_t> DepTree::Subtree(std::size_t index) const {
  CheckIndex(index);
  std::vector<std::size_t> out = {index};
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& kids = children_[out[i]];
    out.insert(out.end(), kids.begin(), kids.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> DepTree::Forms() const {
  std::vector<std::string> forms;
  forms.reserve(nodes_.size());
  for (const DepNode& n : nodes_) forms.push_back(n.form);
  return forms;
}

std::optional<std::string> ConlluSentence::Comment(std::string_view key) const {
  for (const auto& [k, v] : comments) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::vector<ConlluSentence> ParseConllu(std::string_view document) {
  std::vector<ConlluSentence> out;
  std::vector<DepNode> nodes;
  std::vector<std::pair<std::string, std::string>> comments;
  std::size_t block_start_line = 0;
  std::size_t line_no = 0;

  auto flush = [&]() {
    if (nodes.empty()) {
      comments.clear();
      return;
    }
    std::string label = "sentence " + std::to_string(out.size() + 1) +
                        " (line " + std::to_string(block_start_line) + ")";
    out.push_back({std::move(comments), DepTree(std::move(nodes), label)});
    nodes.clear();
    comments.clear();
  };

  std::size_t pos = 0;
  while (pos <= document.size()) {
    std::size_t nl = document.find('\n', pos);
    std::string_view line = document.substr(
        pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? document.size() + 1 : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (line.find_first_not_of(" \t") == std::string_view::npos) {
      flush();
      continue;
    }
    if (nodes.empty() && comments.empty()) block_start_line = line_no;
    if (line.front() == '#') {
      std::string_view body = line.substr(1);
      std::size_t eq = body.find('=');
      auto trim = [](std::string_view s) {
        std::size_t b = s.find_first_not_of(' ');
        std::size_t e = s.find_last_not_of(' ');
        return b == std::string_view::npos ? std::string()
                                           : std::string(s.substr(b, e - b + 1));
      };
      if (eq != std::string_view::npos) {
        comments.emplace_back(trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
      } else {
        comments.emplace_back(trim(body), std::string());
      }
      continue;
    }

    std::vector<std::string_view> cols = SplitTabs(line);
    if (cols.size() != 10) {
      throw Error(ErrorCode::kParse,
                  "CoNLL-U line " + std::to_string(line_no) + ": expected 10 " +
                      "tab-separated columns, found " +
                      std::to_string(cols.size()));
    }
    // Multiword tokens (1-2) and empty nodes (1.1) are skipped.
    if (cols[0].find_first_of("-.") != std::string_view::npos) continue;

    DepNode node;
    if (!ParseIndex(cols[0], node.index) || node.index == 0) {
      throw Error(ErrorCode::kParse, "CoNLL-U line " + std::to_string(line_no) +
                                         ": bad ID '" + std::string(cols[0]) + "'");
    }
    if (!ParseIndex(cols[6], node.head)) {
      throw Error(ErrorCode::kParse, "CoNLL-U line " + std::to_string(line_no) +
                                         ": bad HEAD '" + std::string(cols[6]) +
                                         "'");
    }
    node.form = std::string(cols[1]);
    node.deprel = std::string(cols[7]);
    nodes.push_back(std::move(node));
  }
  flush();
  return out;
}

std::vector<DepTree> FromConllu(std::string_view document) {
  std::vector<DepTree> trees;
  for (ConlluSentence& s : ParseConllu(document)) trees.push_back(std::move(s.tree));
  return trees;
}

std::string ToConllu(const std::vector<ConlluSentence>& sentences) {
  std::ostringstream out;
  for (const ConlluSentence& s : sentences) {
    for (const auto& [k, v] : s.comments) {
      out << "# " << k;
      if (!v.empty()) out << " = " << v;
      out << '\n';
    }
    for (const DepNode& n : s.tree.nodes()) {
      out << n.index << '\t' << n.form << "\t_\t_\t_\t_\t" << n.head << '\t'
          << n.deprel << "\t_\t_\n";
    }
    out << '\n';
  }
  return out.str();
}

TreeView::TreeView(const DepTree& tree)
    : tree_(&tree), masked_(tree.size() + 1, false) {}

bool TreeView::visible(std::size_t index) const {
  tree_->node(index);
  return !masked_[index];
}

std::size_t TreeView::VisibleCount() const {
  return static_cast<std::size_t>(
      std::count(masked_.begin() + 1, masked_.end(), false));
}

std::size_t TreeView::EffectiveRoot() const {
  return root_override_.value_or(tree_->root());
}

bool TreeView::MaskSubtree(std::size_t subroot) {
  if (!visible(subroot)) return false;
  for (std::size_t v : tree_->Subtree(subroot)) masked_[v] = true;
  return true;
}

void TreeView::RestrictToSubtree(std::size_t subroot, std::size_t region_root) {
  if (!visible(subroot)) {
    throw Error(ErrorCode::kInvalidArgument,
                "cannot restrict to masked node " + std::to_string(subroot));
  }
  if (!tree_->Dominates(region_root, subroot)) {
    throw Error(ErrorCode::kInvalidArgument,
                "node " + std::to_string(region_root) + " does not contain " +
                    std::to_string(subroot));
  }
  std::vector<std::size_t> keep = tree_->Subtree(subroot);
  for (std::size_t v : tree_->Subtree(region_root)) {
    if (!std::binary_search(keep.begin(), keep.end(), v)) masked_[v] = true;
  }
  if (region_root == EffectiveRoot() || tree_->Dominates(region_root, EffectiveRoot())) {
    root_override_ = subroot;
  }
}

std::size_t TreeView::VisibleBranchToward(std::size_t ancestor,
                                          std::size_t descendant) const {
  tree_->BranchToward(ancestor, descendant);  // validates strict domination
  std::size_t branch = 0;
  for (std::size_t v = descendant; v != ancestor; v = tree_->node(v).head) {
    if (!masked_[v]) branch = v;
  }
  if (branch == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "no visible node between " + std::to_string(ancestor) +
                    " and " + std::to_string(descendant));
  }
  return branch;
}

std::vector<std::size_t> TreeView::VisibleChildren(std::size_t index) const {
  std::vector<std::size_t> out;
  for (std::size_t c : tree_->children(index)) {
    if (!masked_[c]) out.push_back(c);
  }
  return out;
}

std::vector<std::size_t> TreeView::VisibleNodes() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i < masked_.size(); ++i) {
    if (!masked_[i]) out.push_back(i);
  }
  return out;
}

std::string TreeView::ToText() const {
  std::string text;
  for (std::size_t i = 1; i < masked_.size(); ++i) {
    if (masked_[i]) continue;
    if (!text.empty()) text += ' ';
    text += tree_->node(i).form;
  }
  if (text.empty() && VisibleCount() == 0) {
    throw Error(ErrorCode::kDegenerate, "all nodes of the view are masked");
  }
  return text;
}

}  // namespace finecite::deptree
