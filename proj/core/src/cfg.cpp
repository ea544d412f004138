// Copyright 2026 The branchmeld Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "meld/cfg.hpp"

#include <algorithm>
#include <map>

namespace meld {

std::vector<std::string> successor_labels(const BasicBlock& block) {
  const Instruction* term = block.terminator();
  if (!term || term->op == Opcode::Ret) return {};
  return term->labels;
}

ControlFlowGraph::ControlFlowGraph(const Function& function)
    : succs_(function.blocks.size()),
      preds_(function.blocks.size()),
      rpo_index_(function.blocks.size(), kNone),
      idom_(function.blocks.size(), kNone) {
  std::map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < function.blocks.size(); ++i)
    index.emplace(function.blocks[i].label, i);

  for (std::size_t b = 0; b < function.blocks.size(); ++b) {
    for (const auto& label : successor_labels(function.blocks[b])) {
      auto it = index.find(label);
      if (it == index.end()) continue;
      std::size_t s = it->second;
      if (std::find(succs_[b].begin(), succs_[b].end(), s) == succs_[b].end()) {
        succs_[b].push_back(s);
        preds_[s].push_back(b);
      }
    }
  }
  if (function.blocks.empty()) return;

  // Iterative DFS post-order from the entry.
  std::vector<std::size_t> post;
  std::vector<char> seen(size(), 0);
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
  seen[0] = 1;
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < succs_[node].size()) {
      std::size_t s = succs_[node][next++];
      if (!seen[s]) {
        seen[s] = 1;
        stack.emplace_back(s, 0);
      }
    } else {
      post.push_back(node);
      stack.pop_back();
    }
  }
  rpo_.assign(post.rbegin(), post.rend());
  for (std::size_t i = 0; i < rpo_.size(); ++i) rpo_index_[rpo_[i]] = i;

  // Cooper-Harvey-Kennedy.
  idom_[0] = 0;
  auto intersect = [&](std::size_t a, std::size_t b) {
    while (a != b) {
      while (rpo_index_[a] > rpo_index_[b]) a = idom_[a];
      while (rpo_index_[b] > rpo_index_[a]) b = idom_[b];
    }
    return a;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 1; i < rpo_.size(); ++i) {
      std::size_t b = rpo_[i];
      std::size_t new_idom = kNone;
      for (std::size_t p : preds_[b]) {
        if (idom_[p] == kNone) continue;
        new_idom = new_idom == kNone ? p : intersect(p, new_idom);
      }
      if (new_idom != idom_[b]) {
        idom_[b] = new_idom;
        changed = true;
      }
    }
  }
  idom_[0] = kNone;
}

bool ControlFlowGraph::dominates(std::size_t a, std::size_t b) const {
  if (!reachable(a) || !reachable(b)) return false;
  for (std::size_t cur = b; cur != kNone; cur = idom_[cur])
    if (cur == a) return true;
  return false;
}

}  // namespace meld
