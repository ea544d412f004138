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

#pragma once

#include <cstddef>
#include <vector>

#include "meld/ir.hpp"

namespace meld {

/// Index-based view of a function's control-flow graph. Edges to unknown
/// labels are dropped; successors and predecessors are deduplicated.
class ControlFlowGraph {
 public:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  explicit ControlFlowGraph(const Function& function);

  std::size_t size() const { return succs_.size(); }
  const std::vector<std::size_t>& successors(std::size_t b) const { return succs_[b]; }
  const std::vector<std::size_t>& predecessors(std::size_t b) const { return preds_[b]; }
  bool reachable(std::size_t b) const { return rpo_index_[b] != kNone; }
  const std::vector<std::size_t>& reverse_post_order() const { return rpo_; }

  /// Immediate dominator of `b`; the entry and unreachable blocks have none.
  std::size_t idom(std::size_t b) const { return idom_[b]; }
  bool dominates(std::size_t a, std::size_t b) const;

 private:
  std::vector<std::vector<std::size_t>> succs_;
  std::vector<std::vector<std::size_t>> preds_;
  std::vector<std::size_t> rpo_;
  std::vector<std::size_t> rpo_index_;
  std::vector<std::size_t> idom_;
};

/// Labels targeted by a block's terminator, in operand order (may repeat).
std::vector<std::string> successor_labels(const BasicBlock& block);

}  // namespace meld
