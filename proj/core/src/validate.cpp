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

#include "meld/validate.hpp"

#include <algorithm>
#include <memory>
#include <set>
#include <sstream>

#include "meld/cfg.hpp"

namespace meld {

namespace {

struct DefSite {
  std::size_t block;
  std::size_t pos;
  Type type;
};

class FunctionChecker {
 public:
  FunctionChecker(const Function& f, const IRModule* m) : fn_(f), module_(m) {}

  std::vector<std::string> run() {
    check_params();
    check_blocks();
    if (!fn_.blocks.empty()) {
      collect_defs();
      for (std::size_t b = 0; b < fn_.blocks.size(); ++b) check_block(b);
    }
    return std::move(out_);
  }

 private:
  template <typename... Parts>
  void report(const Parts&... parts) {
    std::ostringstream os;
    os << "function @" << fn_.name << ": ";
    (os << ... << parts);
    out_.push_back(os.str());
  }

  void check_params() {
    std::set<std::string_view> seen;
    for (const auto& p : fn_.params)
      if (!seen.insert(p.name).second) report("duplicate parameter %", p.name);
  }

  void check_blocks() {
    std::set<std::string_view> seen;
    for (const auto& b : fn_.blocks)
      if (!seen.insert(b.label).second) report("duplicate block label ", b.label);
  }

  void collect_defs() {
    std::set<std::string_view> params;
    for (const auto& p : fn_.params) params.insert(p.name);
    for (std::size_t b = 0; b < fn_.blocks.size(); ++b) {
      const auto& insts = fn_.blocks[b].instructions;
      for (std::size_t i = 0; i < insts.size(); ++i) {
        const auto& inst = insts[i];
        if (!inst.has_result()) continue;
        if (params.contains(inst.result))
          report("register %", inst.result, " shadows a parameter");
        if (!defs_.emplace(inst.result, DefSite{b, i, inst.result_type()}).second)
          report("register %", inst.result, " defined more than once");
      }
    }
  }

  void check_block(std::size_t b) {
    const BasicBlock& block = fn_.blocks[b];
    const auto& insts = block.instructions;
    if (insts.empty()) {
      report("block ", block.label, " is empty (missing terminator)");
      return;
    }
    if (!is_terminator(insts.back().op))
      report("block ", block.label, " does not end with a terminator");
    bool in_phi_prefix = true;
    for (std::size_t i = 0; i < insts.size(); ++i) {
      const Instruction& inst = insts[i];
      if (is_terminator(inst.op) && i + 1 != insts.size())
        report("block ", block.label, ": terminator ", opcode_name(inst.op),
               " is not the last instruction");
      if (inst.op == Opcode::Phi) {
        if (!in_phi_prefix)
          report("block ", block.label, ": phi %", inst.result, " after a non-phi instruction");
        if (b == 0) report("entry block ", block.label, " contains a phi");
      } else {
        in_phi_prefix = false;
      }
      check_shape(block, inst);
      check_operands(b, i, inst);
    }
    if (cfg_ == nullptr) cfg_ = std::make_unique<ControlFlowGraph>(fn_);
    check_phi_edges(b);
  }

  void check_shape(const BasicBlock& block, const Instruction& inst) {
    const auto name = opcode_name(inst.op);
    auto arity = [&](std::size_t n) {
      if (inst.operands.size() != n) {
        report("block ", block.label, ": ", name, " expects ", n, " operands, has ",
               inst.operands.size());
        return false;
      }
      return true;
    };
    auto operand_type = [&](std::size_t k, Type t) {
      if (inst.operands[k].type != t)
        report("block ", block.label, ": ", name, " operand ", k + 1, " has type ",
               type_name(inst.operands[k].type), ", expected ", type_name(t));
    };
    bool wants_result = !is_terminator(inst.op) && inst.op != Opcode::Store;
    if (wants_result && !inst.has_result())
      report("block ", block.label, ": ", name, " must define a result");
    if (!wants_result && inst.has_result())
      report("block ", block.label, ": ", name, " cannot define a result");
    if ((inst.op == Opcode::ICmp) != (inst.pred != Predicate::None))
      report("block ", block.label, ": predicate only valid on icmp");
    std::size_t want_labels = inst.op == Opcode::Br       ? 1
                              : inst.op == Opcode::BrCond ? 2
                              : inst.op == Opcode::Phi    ? inst.operands.size()
                                                          : 0;
    if (inst.labels.size() != want_labels)
      report("block ", block.label, ": ", name, " has ", inst.labels.size(), " labels, expected ",
             want_labels);

    switch (inst.op) {
      case Opcode::ICmp:
        if (arity(2)) {
          operand_type(0, inst.type);
          operand_type(1, inst.type);
        }
        break;
      case Opcode::Select:
        if (arity(3)) {
          operand_type(0, Type::I1);
          operand_type(1, inst.type);
          operand_type(2, inst.type);
        }
        break;
      case Opcode::Load:
        if (arity(1)) operand_type(0, Type::Ptr);
        break;
      case Opcode::Store:
        if (arity(2)) {
          operand_type(0, inst.type);
          operand_type(1, Type::Ptr);
        }
        break;
      case Opcode::PtrAdd:
        if (inst.type != Type::Ptr) report("block ", block.label, ": ptradd must produce ptr");
        if (arity(2)) {
          operand_type(0, Type::Ptr);
          if (!is_integer(inst.operands[1].type))
            report("block ", block.label, ": ptradd offset must be an integer");
        }
        break;
      case Opcode::BrCond:
        if (arity(1)) operand_type(0, Type::I1);
        break;
      case Opcode::Br:
        arity(0);
        break;
      case Opcode::Phi:
        if (inst.operands.empty()) report("block ", block.label, ": phi without incoming values");
        for (std::size_t k = 0; k < inst.operands.size(); ++k) operand_type(k, inst.type);
        break;
      case Opcode::Ret:
        if (fn_.return_type) {
          if (arity(1)) operand_type(0, *fn_.return_type);
        } else if (!inst.operands.empty()) {
          report("block ", block.label, ": ret with a value in a void function");
        }
        break;
      default:  // binary arithmetic
        if (!is_integer(inst.type))
          report("block ", block.label, ": ", name, " on non-integer type");
        if (arity(2)) {
          operand_type(0, inst.type);
          operand_type(1, inst.type);
        }
        break;
    }

    if (inst.op == Opcode::Br || inst.op == Opcode::BrCond) {
      for (const auto& l : inst.labels)
        if (!fn_.find_block(l)) report("block ", block.label, ": branch to unknown label ", l);
    }
  }

  void check_operands(std::size_t b, std::size_t i, const Instruction& inst) {
    const BasicBlock& block = fn_.blocks[b];
    for (std::size_t k = 0; k < inst.operands.size(); ++k) {
      const Value& v = inst.operands[k];
      switch (v.kind) {
        case Value::Kind::Const:
          if (v.payload != truncate_to(v.type, v.payload))
            report("block ", block.label, ": constant ", v.payload, " does not fit ",
                   type_name(v.type));
          break;
        case Value::Kind::Arg:
          if (v.index >= fn_.params.size())
            report("block ", block.label, ": argument index ", v.index, " out of range");
          else if (fn_.params[v.index].type != v.type)
            report("block ", block.label, ": argument %", fn_.params[v.index].name,
                   " used with wrong type");
          break;
        case Value::Kind::Global:
          if (module_ && !module_->find_global(v.name))
            report("block ", block.label, ": unknown global @", v.name);
          if (v.type != Type::Ptr) report("block ", block.label, ": global @", v.name, " not ptr");
          break;
        case Value::Kind::Reg: {
          auto it = defs_.find(v.name);
          if (it == defs_.end()) {
            report("block ", block.label, ": use of undefined register %", v.name);
            break;
          }
          if (it->second.type != v.type)
            report("block ", block.label, ": register %", v.name, " used as ",
                   type_name(v.type), " but defined as ", type_name(it->second.type));
          check_dominance(b, i, inst, k, it->second);
          break;
        }
      }
    }
  }

  void check_dominance(std::size_t b, std::size_t i, const Instruction& inst, std::size_t k,
                       const DefSite& def) {
    if (!cfg_) cfg_ = std::make_unique<ControlFlowGraph>(fn_);
    const std::string& user_label = fn_.blocks[b].label;
    const std::string& reg = inst.operands[k].name;
    if (inst.op == Opcode::Phi) {
      auto pred = fn_.block_index(inst.labels.size() > k ? inst.labels[k] : std::string{});
      if (!pred || !cfg_->reachable(*pred)) return;
      if (*pred != def.block && !cfg_->dominates(def.block, *pred))
        report("block ", user_label, ": phi operand %", reg,
               " does not dominate incoming edge from ", fn_.blocks[*pred].label);
      return;
    }
    if (!cfg_->reachable(b)) return;
    bool ok = def.block == b ? def.pos < i : cfg_->dominates(def.block, b);
    if (!ok)
      report("block ", user_label, ": use of %", reg, " is not dominated by its definition");
  }

  void check_phi_edges(std::size_t b) {
    const BasicBlock& block = fn_.blocks[b];
    std::set<std::string> preds;
    for (std::size_t p : cfg_->predecessors(b)) preds.insert(fn_.blocks[p].label);
    for (std::size_t i = 0; i < block.body_begin(); ++i) {
      const Instruction& phi = block.instructions[i];
      std::set<std::string> incoming(phi.labels.begin(), phi.labels.end());
      if (incoming.size() != phi.labels.size())
        report("block ", block.label, ": phi %", phi.result, " lists an edge twice");
      if (incoming != preds)
        report("block ", block.label, ": phi %", phi.result,
               " incoming labels do not match the predecessors");
    }
  }

  const Function& fn_;
  const IRModule* module_;
  std::map<std::string, DefSite, std::less<>> defs_;
  std::unique_ptr<ControlFlowGraph> cfg_;
  std::vector<std::string> out_;
};

}  // namespace

std::vector<std::string> validate_function(const Function& function, const IRModule* module) {
  return FunctionChecker(function, module).run();
}

std::vector<std::string> validate_module(const IRModule& module) {
  std::vector<std::string> out;
  std::set<std::string_view> globals;
  for (const auto& g : module.globals) {
    if (!globals.insert(g.name).second) out.push_back("duplicate global @" + g.name);
    if (g.size() == 0) out.push_back("global @" + g.name + " has zero size");
  }
  if (module.safe_global) {
    const Global* g = module.find_global(*module.safe_global);
    if (!g) {
      out.push_back("safe global @" + *module.safe_global + " is not declared");
    } else {
      if (g->size() < kSafeGlobalSize) out.push_back("safe global is smaller than 8 bytes");
      if (std::any_of(g->init.begin(), g->init.end(), [](std::uint8_t x) { return x != 0; }))
        out.push_back("safe global is not zero-initialized");
    }
  }
  std::set<std::string_view> names;
  for (const auto& f : module.functions) {
    if (!names.insert(f.name).second) out.push_back("duplicate function @" + f.name);
    auto v = validate_function(f, &module);
    out.insert(out.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
  }
  return out;
}

std::map<std::string, DefUse> def_use_map(const Function& function) {
  std::map<std::string, DefUse> map;
  for (const auto& b : function.blocks)
    for (const auto& inst : b.instructions)
      if (inst.has_result()) map[inst.result].def = &inst;
  for (const auto& b : function.blocks) {
    for (const auto& inst : b.instructions) {
      std::set<std::string_view> counted;
      for (const auto& v : inst.operands) {
        if (!v.is_reg() || !counted.insert(v.name).second) continue;
        auto it = map.find(v.name);
        if (it != map.end()) it->second.uses.push_back(&inst);
      }
    }
  }
  return map;
}

}  // namespace meld
