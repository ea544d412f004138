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

#include "meld/region.hpp"

#include <algorithm>
#include <stdexcept>

#include "meld/cfg.hpp"

namespace meld {

std::vector<std::string> FilterSpec::problems() const {
  std::vector<std::string> out;
  if (include_funcs)
    for (const auto& f : exclude_funcs)
      if (include_funcs->contains(f))
        out.push_back("function '" + f + "' is both included and excluded");
  return out;
}

bool FilterSpec::admits_function(const Function& function, const std::string& file) const {
  if (include_funcs && !include_funcs->contains(function.name)) return false;
  if (exclude_funcs.contains(function.name)) return false;
  if (exclude_files.contains(file)) return false;
  return true;
}

bool FilterSpec::admits_branch(const Function& function, const std::string& file,
                               std::optional<int> line) const {
  if (!admits_function(function, file)) return false;
  if (!include_lines) return true;
  auto it = include_lines->find(file);
  return it != include_lines->end() && line && it->second.contains(*line);
}

namespace {

const Instruction* unconditional_target(const BasicBlock& b) {
  const Instruction* t = b.terminator();
  return t && t->op == Opcode::Br ? t : nullptr;
}

bool has_phi(const BasicBlock& b) { return b.body_begin() > 0; }

std::set<std::size_t> as_set(const std::vector<std::size_t>& v) { return {v.begin(), v.end()}; }

}  // namespace

std::vector<DiamondRegion> collect_valid_branches(const Function& function,
                                                  const FilterSpec& filters,
                                                  const RegionOptions& options) {
  std::vector<DiamondRegion> out;
  const std::string file = function.source_file.value_or(options.default_file);
  if (function.blocks.empty() || !filters.admits_function(function, file)) return out;

  ControlFlowGraph cfg(function);
  auto index_of = [&](const std::string& l) { return *function.block_index(l); };

  // A path block hangs off `head` alone, has no phis, stays under the size
  // cap and jumps unconditionally to `merge`; returns merge's index.
  auto path_target = [&](std::size_t path, std::size_t head) -> std::optional<std::size_t> {
    const BasicBlock& b = function.blocks[path];
    if (path == 0 || cfg.predecessors(path) != std::vector<std::size_t>{head}) return std::nullopt;
    if (has_phi(b)) return std::nullopt;
    const Instruction* br = unconditional_target(b);
    if (!br) return std::nullopt;
    if (b.body_end() - b.body_begin() > options.max_block_size) return std::nullopt;
    return index_of(br->labels[0]);
  };

  for (std::size_t h = 0; h < function.blocks.size(); ++h) {
    const BasicBlock& head = function.blocks[h];
    const Instruction* term = head.terminator();
    if (!term || term->op != Opcode::BrCond || !cfg.reachable(h)) continue;
    if (term->labels[0] == term->labels[1]) continue;
    std::size_t t = index_of(term->labels[0]);
    std::size_t f = index_of(term->labels[1]);
    if (t == h || f == h) continue;

    auto t_target = path_target(t, h);
    auto f_target = path_target(f, h);
    std::optional<std::size_t> merge;
    std::set<std::size_t> merge_preds_with_phis;
    if (t_target && f_target && *t_target == *f_target) {
      merge = *t_target;
      merge_preds_with_phis = {t, f};
    } else if (t_target && *t_target == f) {
      merge = f;
      merge_preds_with_phis = {h, t};
    } else if (f_target && *f_target == t) {
      merge = t;
      merge_preds_with_phis = {h, f};
    }
    if (!merge || *merge == h) continue;
    const BasicBlock& mb = function.blocks[*merge];
    if (has_phi(mb) && as_set(cfg.predecessors(*merge)) != merge_preds_with_phis) continue;
    if (!filters.admits_branch(function, file, term->source_line)) continue;

    DiamondRegion r;
    r.head_block = head.label;
    r.condition = term->operands[0];
    r.then_block = function.blocks[t].label;
    r.else_block = function.blocks[f].label;
    r.merge_block = mb.label;
    r.branch_line = term->source_line;
    out.push_back(std::move(r));
  }
  return out;
}

DiamondRegion canonicalize_if_then(Function& function, const DiamondRegion& region) {
  if (!region.is_triangle()) return region;
  const bool empty_else = region.else_block == region.merge_block;

  NameAllocator names(function);
  const std::string& path = empty_else ? region.then_block : region.else_block;
  std::string label = names.fresh_label(path + (empty_else ? ".else" : ".then"));

  BasicBlock synthesized;
  synthesized.label = label;
  Instruction br;
  br.op = Opcode::Br;
  br.labels = {region.merge_block};
  synthesized.instructions.push_back(std::move(br));

  BasicBlock* head = function.find_block(region.head_block);
  if (!head || !head->terminator() || head->terminator()->op != Opcode::BrCond)
    throw std::logic_error("canonicalize_if_then: region head is not a conditional branch");
  head->terminator()->labels[empty_else ? 1 : 0] = label;

  BasicBlock* merge = function.find_block(region.merge_block);
  for (std::size_t i = 0; i < merge->body_begin(); ++i)
    for (auto& l : merge->instructions[i].labels)
      if (l == region.head_block) l = label;

  auto pos = *function.block_index(path) + 1;
  function.blocks.insert(function.blocks.begin() + static_cast<std::ptrdiff_t>(pos),
                         std::move(synthesized));

  DiamondRegion out = region;
  (empty_else ? out.else_block : out.then_block) = label;
  out.synthesized_else = true;
  return out;
}

std::vector<Instruction> path_instructions(const Function& function, const std::string& path,
                                           const DiamondRegion& region) {
  if (path == region.merge_block) return {};
  const BasicBlock* b = function.find_block(path);
  if (!b) return {};
  return {b->instructions.begin() + static_cast<std::ptrdiff_t>(b->body_begin()),
          b->instructions.begin() + static_cast<std::ptrdiff_t>(b->body_end())};
}

}  // namespace meld
