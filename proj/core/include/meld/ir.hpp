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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace meld {

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

enum class Type : std::uint8_t { I1, I8, I32, I64, Ptr };

/// Bit width of a type; ptr is a 64-bit address.
constexpr unsigned bit_width(Type t) {
  switch (t) {
    case Type::I1: return 1;
    case Type::I8: return 8;
    case Type::I32: return 32;
    case Type::I64: return 64;
    case Type::Ptr: return 64;
  }
  return 64;
}

/// Bytes occupied in memory by a loaded/stored value of type `t`.
constexpr unsigned byte_size(Type t) { return t == Type::I1 ? 1 : bit_width(t) / 8; }

constexpr bool is_integer(Type t) { return t != Type::Ptr; }

std::string_view type_name(Type t);
std::optional<Type> parse_type_name(std::string_view s);

/// Truncates `raw` to the width of `t` (zero-extended into 64 bits).
constexpr std::uint64_t truncate_to(Type t, std::uint64_t raw) {
  unsigned w = bit_width(t);
  return w == 64 ? raw : (raw & ((std::uint64_t{1} << w) - 1));
}

/// Interprets a width-truncated payload as a signed value.
constexpr std::int64_t sign_extend(Type t, std::uint64_t payload) {
  unsigned w = bit_width(t);
  if (w == 64) return static_cast<std::int64_t>(payload);
  std::uint64_t sign = std::uint64_t{1} << (w - 1);
  std::uint64_t v = truncate_to(t, payload);
  return static_cast<std::int64_t>((v ^ sign) - sign);
}

// ---------------------------------------------------------------------------
// Values
// ---------------------------------------------------------------------------

/// An instruction operand. Constants carry their payload truncated to the
/// declared width; registers and globals are referenced by name, arguments by
/// parameter index.
struct Value {
  enum class Kind : std::uint8_t { Const, Reg, Global, Arg };

  Kind kind = Kind::Const;
  Type type = Type::I32;
  std::uint64_t payload = 0;  // Const
  std::string name;           // Reg, Global
  std::uint32_t index = 0;    // Arg

  static Value constant(Type t, std::int64_t v) {
    return Value{Kind::Const, t, truncate_to(t, static_cast<std::uint64_t>(v)), {}, 0};
  }
  static Value reg(std::string n, Type t) { return Value{Kind::Reg, t, 0, std::move(n), 0}; }
  static Value global(std::string n) { return Value{Kind::Global, Type::Ptr, 0, std::move(n), 0}; }
  static Value arg(std::uint32_t i, Type t) { return Value{Kind::Arg, t, 0, {}, i}; }

  bool is_const() const { return kind == Kind::Const; }
  bool is_reg() const { return kind == Kind::Reg; }
  bool is_global() const { return kind == Kind::Global; }
  bool is_arg() const { return kind == Kind::Arg; }
  bool is_const(std::int64_t v) const {
    return is_const() && payload == truncate_to(type, static_cast<std::uint64_t>(v));
  }
  std::int64_t signed_payload() const { return sign_extend(type, payload); }

  friend bool operator==(const Value& a, const Value& b) {
    if (a.kind != b.kind || a.type != b.type) return false;
    switch (a.kind) {
      case Kind::Const: return a.payload == b.payload;
      case Kind::Reg:
      case Kind::Global: return a.name == b.name;
      case Kind::Arg: return a.index == b.index;
    }
    return false;
  }
};

// ---------------------------------------------------------------------------
// Instructions
// ---------------------------------------------------------------------------

enum class Opcode : std::uint8_t {
  Add, Sub, Mul, UDiv, SDiv, And, Or, Xor, Shl, LShr, AShr,
  ICmp, Select, Load, Store, PtrAdd, BrCond, Br, Phi, Ret,
};
inline constexpr std::size_t kNumOpcodes = static_cast<std::size_t>(Opcode::Ret) + 1;

enum class Predicate : std::uint8_t { None, Eq, Ne, Ult, Ule, Slt, Sle, Ugt, Uge, Sgt, Sge };

std::string_view opcode_name(Opcode op);
std::optional<Opcode> parse_opcode_name(std::string_view s);
std::string_view predicate_name(Predicate p);
std::optional<Predicate> parse_predicate_name(std::string_view s);

constexpr bool is_terminator(Opcode op) {
  return op == Opcode::BrCond || op == Opcode::Br || op == Opcode::Ret;
}

constexpr bool is_binary(Opcode op) {
  switch (op) {
    case Opcode::Add: case Opcode::Sub: case Opcode::Mul: case Opcode::UDiv:
    case Opcode::SDiv: case Opcode::And: case Opcode::Or: case Opcode::Xor:
    case Opcode::Shl: case Opcode::LShr: case Opcode::AShr:
      return true;
    default:
      return false;
  }
}

constexpr bool is_division(Opcode op) { return op == Opcode::UDiv || op == Opcode::SDiv; }
constexpr bool is_shift(Opcode op) {
  return op == Opcode::Shl || op == Opcode::LShr || op == Opcode::AShr;
}
constexpr bool is_memory(Opcode op) { return op == Opcode::Load || op == Opcode::Store; }

/// One SSA operation.
///
/// `type` is the value type the operation works at: the result type for
/// arithmetic, select, load, phi and ptradd; the compared operand type for
/// icmp (whose result is always i1); the stored value type for store. It is
/// unused for terminators.
///
/// `labels` holds branch targets (br: 1, br_cond: 2) and, for phi, the
/// incoming block of each operand in parallel with `operands`.
struct Instruction {
  Opcode op = Opcode::Add;
  Predicate pred = Predicate::None;
  Type type = Type::I32;
  std::vector<Value> operands;
  std::vector<std::string> labels;
  std::string result;  // empty when the instruction defines nothing
  std::optional<int> source_line;

  bool has_result() const { return !result.empty(); }
  Type result_type() const { return op == Opcode::ICmp ? Type::I1 : type; }
  Value result_value() const { return Value::reg(result, result_type()); }

  /// Structural equality; the source line is provenance, not structure.
  friend bool operator==(const Instruction& a, const Instruction& b) {
    return a.op == b.op && a.pred == b.pred && a.type == b.type && a.operands == b.operands &&
           a.labels == b.labels && a.result == b.result;
  }
};

struct BasicBlock {
  std::string label;
  std::vector<Instruction> instructions;

  const Instruction* terminator() const {
    if (instructions.empty() || !is_terminator(instructions.back().op)) return nullptr;
    return &instructions.back();
  }
  Instruction* terminator() {
    if (instructions.empty() || !is_terminator(instructions.back().op)) return nullptr;
    return &instructions.back();
  }
  /// Instructions that are neither phis nor the terminator.
  std::size_t body_begin() const;
  std::size_t body_end() const;

  friend bool operator==(const BasicBlock&, const BasicBlock&) = default;
};

struct Param {
  std::string name;
  Type type = Type::I32;
  friend bool operator==(const Param&, const Param&) = default;
};

struct Function {
  std::string name;
  std::vector<Param> params;
  std::optional<Type> return_type;  // nullopt = void
  std::vector<BasicBlock> blocks;   // blocks[0] is the entry
  std::optional<std::string> source_file;

  BasicBlock* find_block(std::string_view label);
  const BasicBlock* find_block(std::string_view label) const;
  std::optional<std::size_t> block_index(std::string_view label) const;

  friend bool operator==(const Function&, const Function&) = default;
};

struct Global {
  std::string name;
  std::vector<std::uint8_t> init;  // always exactly `size` bytes
  std::size_t size() const { return init.size(); }
  friend bool operator==(const Global&, const Global&) = default;
};

struct IRModule {
  std::vector<Function> functions;
  std::vector<Global> globals;
  std::optional<std::string> safe_global;

  Function* find_function(std::string_view name);
  const Function* find_function(std::string_view name) const;
  const Global* find_global(std::string_view name) const;

  friend bool operator==(const IRModule&, const IRModule&) = default;
};

inline constexpr std::string_view kSafeGlobalName = "__meld_safe";
inline constexpr std::size_t kSafeGlobalSize = 8;

/// Returns the module's safe global, creating the 8-byte zeroed slot on first
/// use.
Value ensure_safe_global(IRModule& module);

// ---------------------------------------------------------------------------
// Whole-function helpers shared by the passes
// ---------------------------------------------------------------------------

/// Calls `fn(value)` on every operand of every instruction.
template <typename F>
void for_each_operand(Function& function, F&& fn) {
  for (auto& block : function.blocks)
    for (auto& inst : block.instructions)
      for (auto& v : inst.operands) fn(v);
}

/// Replaces every use of register `name` with `replacement`.
void replace_all_uses(Function& function, std::string_view name, const Value& replacement);

/// Number of "ops" in a function: every instruction except unconditional
/// branches and phis. Selects count.
std::size_t count_ops(const Function& function);
std::size_t count_opcode(const Function& function, Opcode op);

/// Hands out register and label names that do not collide with anything in a
/// function.
class NameAllocator {
 public:
  explicit NameAllocator(const Function& function);
  std::string fresh_register(std::string_view hint);
  std::string fresh_label(std::string_view hint);

 private:
  std::string fresh(std::string_view hint, std::map<std::string, int, std::less<>>& taken);
  std::map<std::string, int, std::less<>> registers_;
  std::map<std::string, int, std::less<>> labels_;
};

}  // namespace meld
