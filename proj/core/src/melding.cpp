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

#include "meld/melding.hpp"

#include <algorithm>
#include <stdexcept>

#include "meld/cfg.hpp"
#include "meld/validate.hpp"

namespace meld {

std::string_view operand_source_name(OperandSource s) {
  switch (s) {
    case OperandSource::MirroredDef: return "mirrored-def";
    case OperandSource::IdentityConst: return "identity-const";
    case OperandSource::ReplicatedSafe: return "replicated-safe";
    case OperandSource::SafeGlobalAddr: return "safe-global-addr";
  }
  return "?";
}

std::set<std::string> ExtraneousPlan::twin_results() const {
  std::set<std::string> out;
  for (const auto& t : twins)
    if (t.twin.has_result()) out.insert(t.twin.result);
  return out;
}

namespace {

std::vector<Instruction> body_of(const BasicBlock& b) {
  return {b.instructions.begin() + static_cast<std::ptrdiff_t>(b.body_begin()),
          b.instructions.begin() + static_cast<std::ptrdiff_t>(b.body_end())};
}

void replace_body(BasicBlock& b, std::vector<Instruction> body) {
  Instruction term = b.instructions.back();
  body.push_back(std::move(term));
  b.instructions = std::move(body);
}

// Neutral right-hand operand for binary ops; nullopt when the position is not
// an identity position.
std::optional<std::int64_t> identity_operand(Opcode op) {
  switch (op) {
    case Opcode::Add: case Opcode::Sub: case Opcode::Or: case Opcode::Xor:
    case Opcode::Shl: case Opcode::LShr: case Opcode::AShr: case Opcode::PtrAdd:
      return 0;
    case Opcode::Mul: case Opcode::UDiv: case Opcode::SDiv:
      return 1;
    case Opcode::And:
      return -1;
    default:
      return std::nullopt;
  }
}

class TwinBuilder {
 public:
  TwinBuilder(IRModule& module, Function& function) : module_(module), names_(function) {}

  /// Builds the opposite-path twin of `real`. `same_side_defs` are the
  /// registers defined on real's path; `partner` maps each of them to its
  /// counterpart already placed on the twin's path.
  ExtraneousTwin build(const Instruction& real, const std::set<std::string>& same_side_defs,
                       const std::map<std::string, std::string>& partner) {
    if (!has_safe_twin(real))
      throw std::logic_error("insert_extraneous: no safe twin for " +
                             std::string(opcode_name(real.op)));
    ExtraneousTwin out;
    Instruction& t = out.twin;
    t.op = real.op;
    t.pred = real.pred;
    t.type = real.type;
    if (real.has_result()) t.result = names_.fresh_register(real.result + ".x");

    for (std::size_t p = 0; p < real.operands.size(); ++p) {
      const Value& v = real.operands[p];
      const bool rhs = p == 1 && (is_binary(real.op) || real.op == Opcode::PtrAdd);
      const bool address = (real.op == Opcode::Load && p == 0) ||
                           (real.op == Opcode::Store && p == 1);
      if (rhs && is_division(real.op)) {
        t.operands.push_back(Value::constant(v.type, 1));
        out.sources.push_back(OperandSource::IdentityConst);
      } else if (rhs && is_shift(real.op)) {
        t.operands.push_back(Value::constant(v.type, 0));
        out.sources.push_back(OperandSource::IdentityConst);
      } else if (address) {
        t.operands.push_back(ensure_safe_global(module_));
        out.sources.push_back(OperandSource::SafeGlobalAddr);
      } else if (v.is_reg() && same_side_defs.contains(v.name)) {
        auto it = partner.find(v.name);
        if (it == partner.end())
          throw std::logic_error("insert_extraneous: %" + v.name + " has no counterpart");
        t.operands.push_back(Value::reg(it->second, v.type));
        out.sources.push_back(OperandSource::MirroredDef);
      } else if (rhs) {
        t.operands.push_back(Value::constant(v.type, *identity_operand(real.op)));
        out.sources.push_back(OperandSource::IdentityConst);
      } else {
        t.operands.push_back(v);
        out.sources.push_back(OperandSource::ReplicatedSafe);
      }
    }
    return out;
  }

 private:
  IRModule& module_;
  NameAllocator names_;
};

}  // namespace

InsertResult insert_extraneous(IRModule& module, Function& function, const DiamondRegion& region,
                               const Alignment& alignment) {
  if (region.is_triangle())
    throw std::logic_error("insert_extraneous: canonicalize the if-then region first");
  BasicBlock* tb = function.find_block(region.then_block);
  BasicBlock* eb = function.find_block(region.else_block);
  if (!tb || !eb) throw std::logic_error("insert_extraneous: missing path block");
  const std::string then_label = tb->label;
  const std::string else_label = eb->label;
  const auto then_seq = body_of(*tb);
  const auto else_seq = body_of(*eb);

  std::set<std::string> then_defs, else_defs;
  for (const auto& i : then_seq)
    if (i.has_result()) then_defs.insert(i.result);
  for (const auto& i : else_seq)
    if (i.has_result()) else_defs.insert(i.result);

  TwinBuilder builder(module, function);
  std::map<std::string, std::string> then_to_else, else_to_then;
  std::vector<Instruction> new_then, new_else;
  InsertResult result;

  for (std::size_t j = 0; j < alignment.pairs.size(); ++j) {
    const AlignmentPair& pair = alignment.pairs[j];
    if (pair.is_match()) {
      const Instruction& a = then_seq.at(*pair.left);
      const Instruction& b = else_seq.at(*pair.right);
      new_then.push_back(a);
      new_else.push_back(b);
      if (a.has_result() && b.has_result()) {
        then_to_else[a.result] = b.result;
        else_to_then[b.result] = a.result;
      }
    } else if (pair.left) {
      const Instruction& a = then_seq.at(*pair.left);
      ExtraneousTwin twin = builder.build(a, then_defs, then_to_else);
      twin.pair_index = j;
      twin.in_then_block = false;
      if (a.has_result()) then_to_else[a.result] = twin.twin.result;
      new_then.push_back(a);
      new_else.push_back(twin.twin);
      result.plan.twins.push_back(std::move(twin));
    } else {
      const Instruction& b = else_seq.at(*pair.right);
      ExtraneousTwin twin = builder.build(b, else_defs, else_to_then);
      twin.pair_index = j;
      twin.in_then_block = true;
      if (b.has_result()) else_to_then[b.result] = twin.twin.result;
      new_then.push_back(twin.twin);
      new_else.push_back(b);
      result.plan.twins.push_back(std::move(twin));
    }
  }

  // ensure_safe_global may have grown module.globals, never functions, so
  // the block pointers are still valid; look them up again regardless.
  replace_body(*function.find_block(then_label), std::move(new_then));
  replace_body(*function.find_block(else_label), std::move(new_else));

  Alignment& c = result.complete;
  for (std::size_t j = 0; j < alignment.pairs.size(); ++j) c.pairs.push_back({j, j});
  c.num_matches = c.pairs.size();
  c.num_gaps = 0;
  // Scores of the completed alignment are those of a perfect match; callers
  // that need the pre-completion score keep the original alignment.
  c.raw_score = static_cast<double>(c.num_matches);
  c.normalized_score = c.pairs.empty() ? 1.0 : 1.0;
  return result;
}

MeldResult meld_blocks(Function& function, const DiamondRegion& region, const Alignment& complete) {
  if (region.is_triangle()) throw std::logic_error("meld_blocks: region is not a diamond");
  if (!complete.is_complete()) throw std::logic_error("meld_blocks: alignment is not complete");
  const BasicBlock* tb = function.find_block(region.then_block);
  const BasicBlock* eb = function.find_block(region.else_block);
  if (!tb || !eb) throw std::logic_error("meld_blocks: missing path block");
  const auto then_seq = body_of(*tb);
  const auto else_seq = body_of(*eb);

  NameAllocator names(function);
  MeldResult out;
  std::map<std::string, Value> subst;
  auto sub = [&](const Value& v) {
    if (v.is_reg())
      if (auto it = subst.find(v.name); it != subst.end()) return it->second;
    return v;
  };

  BasicBlock melded;
  melded.label = names.fresh_label(region.head_block + ".meld");
  auto emit_select = [&](std::string name, const Value& a, const Value& b) {
    Instruction s;
    s.op = Opcode::Select;
    s.type = a.type;
    s.operands = {region.condition, a, b};
    s.result = std::move(name);
    Value v = s.result_value();
    melded.instructions.push_back(std::move(s));
    out.melded_values.insert(v.name);
    ++out.selects_added;
    return v;
  };

  for (const auto& pair : complete.pairs) {
    const Instruction& a = then_seq.at(*pair.left);
    const Instruction& b = else_seq.at(*pair.right);
    if (!compatible(a, b)) throw std::logic_error("meld_blocks: incompatible pair");
    Instruction m = a;
    m.operands.clear();
    for (std::size_t p = 0; p < a.operands.size(); ++p) {
      Value va = sub(a.operands[p]);
      Value vb = sub(b.operands[p]);
      m.operands.push_back(va == vb ? va : emit_select(names.fresh_register("s"), va, vb));
    }
    if (a.has_result()) {
      m.result = names.fresh_register(a.result + "_" + b.result);
      subst[a.result] = m.result_value();
      subst[b.result] = m.result_value();
      out.map.registers[a.result] = m.result;
      out.map.registers[b.result] = m.result;
      out.melded_values.insert(m.result);
    }
    if (!m.source_line) m.source_line = b.source_line;
    melded.instructions.push_back(std::move(m));
    out.map.pairs[{*pair.left, *pair.right}] = melded.instructions.size() - 1;
  }

  // Merge-block phis fed by the two paths.
  BasicBlock* mb = function.find_block(region.merge_block);
  std::vector<std::pair<std::string, Value>> replacements;
  std::vector<Instruction> kept_phis;
  for (std::size_t i = 0; i < mb->body_begin(); ++i) {
    Instruction phi = mb->instructions[i];
    std::optional<Value> vt, vf;
    Instruction rest = phi;
    rest.operands.clear();
    rest.labels.clear();
    for (std::size_t k = 0; k < phi.operands.size(); ++k) {
      if (phi.labels[k] == region.then_block) {
        vt = sub(phi.operands[k]);
      } else if (phi.labels[k] == region.else_block) {
        vf = sub(phi.operands[k]);
      } else {
        rest.operands.push_back(phi.operands[k]);
        rest.labels.push_back(phi.labels[k]);
      }
    }
    if (!vt || !vf) {
      kept_phis.push_back(std::move(phi));
      continue;
    }
    if (rest.operands.empty()) {
      if (*vt == *vf) {
        replacements.emplace_back(phi.result, *vt);
      } else {
        emit_select(phi.result, *vt, *vf);
      }
      continue;
    }
    Value v = *vt == *vf ? *vt : emit_select(names.fresh_register(phi.result + ".sel"), *vt, *vf);
    rest.operands.push_back(v);
    rest.labels.push_back(melded.label);
    kept_phis.push_back(std::move(rest));
  }
  std::vector<Instruction> merge_insts = std::move(kept_phis);
  merge_insts.insert(merge_insts.end(),
                     mb->instructions.begin() + static_cast<std::ptrdiff_t>(mb->body_begin()),
                     mb->instructions.end());
  mb->instructions = std::move(merge_insts);

  Instruction br;
  br.op = Opcode::Br;
  br.labels = {region.merge_block};
  melded.instructions.push_back(std::move(br));

  BasicBlock* head = function.find_block(region.head_block);
  Instruction& term = head->instructions.back();
  term.op = Opcode::Br;
  term.operands.clear();
  term.labels = {melded.label};

  auto pos = *function.block_index(region.then_block);
  out.melded_block = melded.label;
  function.blocks[pos] = std::move(melded);
  function.blocks.erase(function.blocks.begin() +
                        static_cast<std::ptrdiff_t>(*function.block_index(region.else_block)));

  for (const auto& [name, v] : replacements) replace_all_uses(function, name, v);
  return out;
}

// ---------------------------------------------------------------------------
// simplify
// ---------------------------------------------------------------------------

namespace {

// Removes every instruction for which `pred` returns a replacement value and
// rewrites its uses. Returns true if anything was removed.
template <typename Pred>
bool fold_instructions(Function& function, Pred&& pred) {
  bool changed = false;
  for (std::size_t b = 0; b < function.blocks.size(); ++b) {
    for (std::size_t i = 0; i < function.blocks[b].instructions.size();) {
      const Instruction& inst = function.blocks[b].instructions[i];
      std::optional<Value> repl = pred(inst);
      if (!repl || (repl->is_reg() && repl->name == inst.result)) {
        ++i;
        continue;
      }
      std::string name = inst.result;
      function.blocks[b].instructions.erase(function.blocks[b].instructions.begin() +
                                            static_cast<std::ptrdiff_t>(i));
      replace_all_uses(function, name, *repl);
      changed = true;
    }
  }
  return changed;
}

std::optional<Value> fold_select(const Instruction& inst) {
  if (inst.op != Opcode::Select) return std::nullopt;
  if (inst.operands[1] == inst.operands[2]) return inst.operands[1];
  if (inst.operands[0].is_const()) return inst.operands[0].payload ? inst.operands[1] : inst.operands[2];
  return std::nullopt;
}

std::optional<Value> fold_phi(const Instruction& inst) {
  if (inst.op != Opcode::Phi) return std::nullopt;
  std::optional<Value> unique;
  for (const auto& v : inst.operands) {
    if (v.is_reg() && v.name == inst.result) continue;
    if (unique && !(*unique == v)) return std::nullopt;
    unique = v;
  }
  return unique;
}

bool merge_straight_chains(Function& function) {
  ControlFlowGraph cfg(function);
  for (std::size_t b = 1; b < function.blocks.size(); ++b) {
    if (cfg.predecessors(b).size() != 1) continue;
    std::size_t p = cfg.predecessors(b)[0];
    if (p == b) continue;
    const Instruction* pt = function.blocks[p].terminator();
    if (!pt || pt->op != Opcode::Br) continue;

    BasicBlock block = std::move(function.blocks[b]);
    std::vector<std::pair<std::string, Value>> phis;
    for (std::size_t i = 0; i < block.body_begin(); ++i)
      phis.emplace_back(block.instructions[i].result, block.instructions[i].operands.at(0));
    BasicBlock& pred = function.blocks[p];
    pred.instructions.pop_back();
    pred.instructions.insert(pred.instructions.end(),
                             block.instructions.begin() + static_cast<std::ptrdiff_t>(block.body_begin()),
                             block.instructions.end());
    const std::string pred_label = pred.label;
    for (const auto& s : successor_labels(block))
      if (BasicBlock* sb = function.find_block(s))
        for (std::size_t i = 0; i < sb->body_begin(); ++i)
          for (auto& l : sb->instructions[i].labels)
            if (l == block.label) l = pred_label;
    function.blocks.erase(function.blocks.begin() + static_cast<std::ptrdiff_t>(b));
    for (const auto& [name, v] : phis) replace_all_uses(function, name, v);
    return true;
  }
  return false;
}

bool fold_forwarding_blocks(Function& function) {
  ControlFlowGraph cfg(function);
  for (std::size_t b = 1; b < function.blocks.size(); ++b) {
    const BasicBlock& block = function.blocks[b];
    if (block.instructions.size() != 1 || block.instructions[0].op != Opcode::Br) continue;
    const std::string target = block.instructions[0].labels[0];
    auto x = function.block_index(target);
    if (!x || *x == b || cfg.predecessors(b).empty()) continue;
    const BasicBlock& tgt = function.blocks[*x];
    const bool target_has_phis = tgt.body_begin() > 0;
    const auto& preds = cfg.predecessors(b);
    if (target_has_phis) {
      if (preds.size() != 1) continue;
      const auto& xp = cfg.predecessors(*x);
      if (std::find(xp.begin(), xp.end(), preds[0]) != xp.end()) continue;
    }
    bool ok = true;
    for (std::size_t p : preds) {
      const Instruction* t = function.blocks[p].terminator();
      if (t->op == Opcode::BrCond &&
          std::find(t->labels.begin(), t->labels.end(), target) != t->labels.end())
        ok = false;
    }
    if (!ok) continue;

    const std::string label = block.label;
    for (std::size_t p : preds)
      for (auto& l : function.blocks[p].instructions.back().labels)
        if (l == label) l = target;
    if (target_has_phis) {
      const std::string pred_label = function.blocks[preds[0]].label;
      BasicBlock& t = *function.find_block(target);
      for (std::size_t i = 0; i < t.body_begin(); ++i)
        for (auto& l : t.instructions[i].labels)
          if (l == label) l = pred_label;
    }
    function.blocks.erase(function.blocks.begin() + static_cast<std::ptrdiff_t>(b));
    return true;
  }
  return false;
}

}  // namespace

bool simplify(Function& function, const SimplifyOptions& options) {
  auto select_defined = [&](const std::string& name) {
    for (const auto& b : function.blocks)
      for (const auto& i : b.instructions)
        if (i.result == name) return i.op == Opcode::Select;
    return false;
  };
  auto fold_identity = [&](const Instruction& inst) -> std::optional<Value> {
    if (!is_binary(inst.op) || inst.op == Opcode::And) return std::nullopt;
    const Value& x = inst.operands[0];
    if (!x.is_reg()) return std::nullopt;
    if (!inst.operands[1].is_const(*identity_operand(inst.op))) return std::nullopt;
    bool eligible = options.fold_candidates ? options.fold_candidates->contains(x.name)
                                            : select_defined(x.name);
    return eligible ? std::optional<Value>(x) : std::nullopt;
  };

  bool any = false;
  for (;;) {
    bool changed = false;
    changed |= fold_instructions(function, fold_select);
    changed |= fold_instructions(function, fold_phi);
    if (options.peephole) changed |= fold_instructions(function, fold_identity);
    changed |= merge_straight_chains(function);
    changed |= fold_forwarding_blocks(function);
    if (!changed) break;
    any = true;
  }
  return any;
}

// ---------------------------------------------------------------------------
// meld_region
// ---------------------------------------------------------------------------

MeldReport meld_region(IRModule& module, Function& function, const DiamondRegion& region,
                       const MeldOptions& options) {
  MeldReport report;
  report.instructions_before = count_ops(function);
  report.instructions_after = report.instructions_before;
  if (!validate_function(function, &module).empty()) {
    report.reason_if_skipped = kReasonInvalid;
    return report;
  }

  const auto then_seq = path_instructions(function, region.then_block, region);
  const auto else_seq = path_instructions(function, region.else_block, region);
  const Alignment alignment = compute_alignment(then_seq, else_seq, options.params);
  report.num_matches = alignment.num_matches;
  report.num_gaps = alignment.num_gaps;
  report.raw_score = alignment.raw_score;
  report.normalized_score = alignment.normalized_score;
  report.region_ops_before = then_seq.size() + else_seq.size() + 1;

  if (!should_transform(alignment, region, options.params)) {
    report.reason_if_skipped = kReasonBelowThreshold;
    return report;
  }
  if (!can_complete_alignment(alignment, then_seq, else_seq)) {
    report.reason_if_skipped = kReasonIncompletable;
    return report;
  }

  DiamondRegion diamond = canonicalize_if_then(function, region);
  InsertResult inserted = insert_extraneous(module, function, diamond, alignment);
  MeldResult melded = meld_blocks(function, diamond, inserted.complete);

  report.transformed = true;
  report.extraneous_added = inserted.plan.twins.size();
  report.selects_added = melded.selects_added;
  report.region_ops_after = inserted.complete.pairs.size() + melded.selects_added;
  simplify(function, SimplifyOptions{options.peephole, &melded.melded_values});
  report.instructions_after = count_ops(function);
  return report;
}

}  // namespace meld
