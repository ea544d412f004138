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

#include "meld/ir.hpp"

#include <algorithm>
#include <array>

namespace meld {

namespace {

constexpr std::array<std::string_view, 5> kTypeNames = {"i1", "i8", "i32", "i64", "ptr"};

constexpr std::array<std::string_view, kNumOpcodes> kOpcodeNames = {
    "add", "sub", "mul", "udiv", "sdiv", "and",    "or",     "xor",  "shl", "lshr",
    "ashr", "icmp", "select", "load", "store", "ptradd", "br_cond", "br", "phi", "ret",
};

constexpr std::array<std::string_view, 11> kPredicateNames = {
    "", "eq", "ne", "ult", "ule", "slt", "sle", "ugt", "uge", "sgt", "sge",
};

}  // namespace

std::string_view type_name(Type t) { return kTypeNames[static_cast<std::size_t>(t)]; }

std::optional<Type> parse_type_name(std::string_view s) {
  for (std::size_t i = 0; i < kTypeNames.size(); ++i)
    if (kTypeNames[i] == s) return static_cast<Type>(i);
  return std::nullopt;
}

std::string_view opcode_name(Opcode op) { return kOpcodeNames[static_cast<std::size_t>(op)]; }

std::optional<Opcode> parse_opcode_name(std::string_view s) {
  for (std::size_t i = 0; i < kOpcodeNames.size(); ++i)
    if (kOpcodeNames[i] == s) return static_cast<Opcode>(i);
  return std::nullopt;
}

std::string_view predicate_name(Predicate p) {
  return kPredicateNames[static_cast<std::size_t>(p)];
}

std::optional<Predicate> parse_predicate_name(std::string_view s) {
  for (std::size_t i = 1; i < kPredicateNames.size(); ++i)
    if (kPredicateNames[i] == s) return static_cast<Predicate>(i);
  return std::nullopt;
}

std::size_t BasicBlock::body_begin() const {
  std::size_t i = 0;
  while (i < instructions.size() && instructions[i].op == Opcode::Phi) ++i;
  return i;
}

std::size_t BasicBlock::body_end() const {
  return terminator() ? instructions.size() - 1 : instructions.size();
}

BasicBlock* Function::find_block(std::string_view label) {
  for (auto& b : blocks)
    if (b.label == label) return &b;
  return nullptr;
}

const BasicBlock* Function::find_block(std::string_view label) const {
  for (const auto& b : blocks)
    if (b.label == label) return &b;
  return nullptr;
}

std::optional<std::size_t> Function::block_index(std::string_view label) const {
  for (std::size_t i = 0; i < blocks.size(); ++i)
    if (blocks[i].label == label) return i;
  return std::nullopt;
}

Function* IRModule::find_function(std::string_view name) {
  for (auto& f : functions)
    if (f.name == name) return &f;
  return nullptr;
}

const Function* IRModule::find_function(std::string_view name) const {
  for (const auto& f : functions)
    if (f.name == name) return &f;
  return nullptr;
}

const Global* IRModule::find_global(std::string_view name) const {
  for (const auto& g : globals)
    if (g.name == name) return &g;
  return nullptr;
}

Value ensure_safe_global(IRModule& module) {
  if (module.safe_global) return Value::global(*module.safe_global);
  std::string name(kSafeGlobalName);
  for (int n = 1; module.find_global(name) != nullptr; ++n)
    name = std::string(kSafeGlobalName) + "." + std::to_string(n);
  module.globals.push_back(Global{name, std::vector<std::uint8_t>(kSafeGlobalSize, 0)});
  module.safe_global = name;
  return Value::global(name);
}

void replace_all_uses(Function& function, std::string_view name, const Value& replacement) {
  for_each_operand(function, [&](Value& v) {
    if (v.is_reg() && v.name == name) v = replacement;
  });
}

std::size_t count_ops(const Function& function) {
  std::size_t n = 0;
  for (const auto& b : function.blocks)
    for (const auto& inst : b.instructions)
      if (inst.op != Opcode::Br && inst.op != Opcode::Phi) ++n;
  return n;
}

std::size_t count_opcode(const Function& function, Opcode op) {
  std::size_t n = 0;
  for (const auto& b : function.blocks)
    n += static_cast<std::size_t>(std::count_if(b.instructions.begin(), b.instructions.end(),
                                                [op](const Instruction& i) { return i.op == op; }));
  return n;
}

NameAllocator::NameAllocator(const Function& function) {
  for (const auto& p : function.params) registers_.emplace(p.name, 0);
  for (const auto& b : function.blocks) {
    labels_.emplace(b.label, 0);
    for (const auto& inst : b.instructions)
      if (inst.has_result()) registers_.emplace(inst.result, 0);
  }
}

std::string NameAllocator::fresh(std::string_view hint,
                                 std::map<std::string, int, std::less<>>& taken) {
  std::string base(hint.empty() ? "v" : hint);
  if (!taken.contains(base)) {
    taken.emplace(base, 0);
    return base;
  }
  int& counter = taken.find(base)->second;
  for (;;) {
    std::string candidate = base + "." + std::to_string(++counter);
    if (!taken.contains(candidate)) {
      taken.emplace(candidate, 0);
      return candidate;
    }
  }
}

std::string NameAllocator::fresh_register(std::string_view hint) { return fresh(hint, registers_); }
std::string NameAllocator::fresh_label(std::string_view hint) { return fresh(hint, labels_); }

}  // namespace meld
