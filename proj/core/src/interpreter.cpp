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

#include "meld/interpreter.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace meld {

std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Returned: return "returned";
    case Outcome::Trap: return "trap";
    case Outcome::FuelExhausted: return "fuel-exhausted";
  }
  return "?";
}

std::string_view trap_name(TrapKind t) {
  switch (t) {
    case TrapKind::None: return "none";
    case TrapKind::DivByZero: return "div-by-zero";
    case TrapKind::UnmappedMemory: return "unmapped-memory";
    case TrapKind::InvalidShift: return "invalid-shift";
  }
  return "?";
}

namespace {

constexpr std::uint32_t kNoSlot = std::numeric_limits<std::uint32_t>::max();

struct Operand {
  bool immediate = true;
  std::uint32_t slot = 0;
  std::uint64_t value = 0;
};

struct Op {
  Opcode op = Opcode::Add;
  Predicate pred = Predicate::None;
  Type type = Type::I32;
  Type operand_type = Type::I32;  // second operand, for ptradd offsets
  std::uint32_t dst = kNoSlot;
  std::vector<Operand> in;
  std::uint32_t target[2] = {0, 0};
};

struct PhiOp {
  std::uint32_t dst = kNoSlot;
  std::vector<std::pair<std::uint32_t, Operand>> incoming;  // (pred block, value)
};

struct Block {
  std::vector<PhiOp> phis;
  std::vector<Op> ops;  // body then terminator
};

struct Segment {
  std::string name;
  std::uint64_t base = 0;
  std::vector<std::uint8_t> bytes;
};

std::uint64_t align16(std::uint64_t x) { return (x + 15) & ~std::uint64_t{15}; }

bool compare(Predicate p, Type t, std::uint64_t a, std::uint64_t b) {
  const std::int64_t sa = sign_extend(t, a), sb = sign_extend(t, b);
  switch (p) {
    case Predicate::Eq: return a == b;
    case Predicate::Ne: return a != b;
    case Predicate::Ult: return a < b;
    case Predicate::Ule: return a <= b;
    case Predicate::Ugt: return a > b;
    case Predicate::Uge: return a >= b;
    case Predicate::Slt: return sa < sb;
    case Predicate::Sle: return sa <= sb;
    case Predicate::Sgt: return sa > sb;
    case Predicate::Sge: return sa >= sb;
    case Predicate::None: break;
  }
  return false;
}

}  // namespace

struct Interpreter::Program {
  std::vector<Param> params;
  std::vector<Block> blocks;
  std::size_t num_slots = 0;
  std::vector<Segment> globals;
};

Interpreter::Interpreter(const IRModule& module, std::string_view function_name)
    : program_(std::make_unique<Program>()) {
  const Function* fn = module.find_function(function_name);
  if (!fn) throw std::invalid_argument("no function @" + std::string(function_name));
  Program& p = *program_;
  p.params = fn->params;

  std::map<std::string, std::uint64_t, std::less<>> global_addr;
  std::uint64_t next = kGlobalBase;
  auto place = [&](const Global& g) {
    global_addr[g.name] = next;
    p.globals.push_back({g.name, next, g.init});
    next = align16(next + g.size() + kGuardGap);
  };
  for (const auto& g : module.globals)
    if (!module.safe_global || g.name != *module.safe_global) place(g);
  if (module.safe_global)
    if (const Global* g = module.find_global(*module.safe_global)) place(*g);

  std::map<std::string, std::uint32_t, std::less<>> slots;
  std::uint32_t n = static_cast<std::uint32_t>(fn->params.size());
  for (const auto& b : fn->blocks)
    for (const auto& i : b.instructions)
      if (i.has_result()) slots.emplace(i.result, n++);
  p.num_slots = n;

  auto lower = [&](const Value& v) {
    Operand o;
    switch (v.kind) {
      case Value::Kind::Const: o.value = v.payload; break;
      case Value::Kind::Global: o.value = global_addr.at(v.name); break;
      case Value::Kind::Arg: o.immediate = false; o.slot = v.index; break;
      case Value::Kind::Reg: o.immediate = false; o.slot = slots.at(v.name); break;
    }
    return o;
  };
  auto block_id = [&](const std::string& l) {
    return static_cast<std::uint32_t>(*fn->block_index(l));
  };

  for (const auto& b : fn->blocks) {
    Block out;
    for (const auto& i : b.instructions) {
      if (i.op == Opcode::Phi) {
        PhiOp phi;
        phi.dst = slots.at(i.result);
        for (std::size_t k = 0; k < i.operands.size(); ++k)
          phi.incoming.emplace_back(block_id(i.labels[k]), lower(i.operands[k]));
        out.phis.push_back(std::move(phi));
        continue;
      }
      Op op;
      op.op = i.op;
      op.pred = i.pred;
      op.type = i.type;
      if (i.operands.size() > 1) op.operand_type = i.operands[1].type;
      if (i.has_result()) op.dst = slots.at(i.result);
      for (const auto& v : i.operands) op.in.push_back(lower(v));
      for (std::size_t k = 0; k < i.labels.size() && k < 2; ++k) op.target[k] = block_id(i.labels[k]);
      out.ops.push_back(std::move(op));
    }
    p.blocks.push_back(std::move(out));
  }
}

Interpreter::~Interpreter() = default;
Interpreter::Interpreter(Interpreter&&) noexcept = default;
Interpreter& Interpreter::operator=(Interpreter&&) noexcept = default;

const std::vector<Param>& Interpreter::params() const { return program_->params; }

ExecutionTrace Interpreter::run(std::span<const ArgValue> args, std::uint64_t fuel) const {
  const Program& p = *program_;
  if (args.size() != p.params.size())
    throw std::invalid_argument("expected " + std::to_string(p.params.size()) + " arguments, got " +
                                std::to_string(args.size()));
  if (fuel == 0) throw std::invalid_argument("fuel must be positive");

  ExecutionTrace trace;
  std::vector<Segment> memory;
  std::vector<std::uint64_t> regs(p.num_slots, 0);
  std::uint64_t next = kArgBase;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const Type t = p.params[i].type;
    if (t == Type::Ptr && args[i].buffer) {
      memory.push_back({"arg:" + p.params[i].name, next, *args[i].buffer});
      regs[i] = next;
      next = align16(next + args[i].buffer->size() + kGuardGap);
    } else {
      regs[i] = truncate_to(t, args[i].scalar);
    }
  }
  memory.insert(memory.end(), p.globals.begin(), p.globals.end());

  auto find_segment = [&](std::uint64_t addr, std::size_t len) -> Segment* {
    for (auto& s : memory)
      if (addr >= s.base && addr - s.base < s.bytes.size() && len <= s.bytes.size() - (addr - s.base))
        return &s;
    return nullptr;
  };
  auto get = [&](const Operand& o) { return o.immediate ? o.value : regs[o.slot]; };
  auto finish = [&] {
    for (auto& s : memory) trace.final_memory[s.name] = std::move(s.bytes);
  };
  auto trap = [&](TrapKind k) {
    trace.outcome = Outcome::Trap;
    trace.trap = k;
    finish();
    return trace;
  };

  std::uint32_t prev = 0, cur = 0;
  bool entered_from_edge = false;
  std::vector<std::uint64_t> phi_vals;
  for (;;) {
    const Block& block = p.blocks[cur];
    if (entered_from_edge && !block.phis.empty()) {
      phi_vals.clear();
      for (const auto& phi : block.phis) {
        if (trace.total_dynamic_instructions >= fuel) {
          trace.outcome = Outcome::FuelExhausted;
          finish();
          return trace;
        }
        ++trace.total_dynamic_instructions;
        ++trace.dyn_counts[static_cast<std::size_t>(Opcode::Phi)];
        std::uint64_t v = 0;
        for (const auto& [from, val] : phi.incoming)
          if (from == prev) { v = get(val); break; }
        phi_vals.push_back(v);
      }
      for (std::size_t k = 0; k < block.phis.size(); ++k) regs[block.phis[k].dst] = phi_vals[k];
    }

    std::optional<std::uint32_t> jump;
    for (const Op& op : block.ops) {
      if (trace.total_dynamic_instructions >= fuel) {
        trace.outcome = Outcome::FuelExhausted;
        finish();
        return trace;
      }
      ++trace.total_dynamic_instructions;
      ++trace.dyn_counts[static_cast<std::size_t>(op.op)];
      const Type t = op.type;
      auto result = [&](std::uint64_t v) { regs[op.dst] = truncate_to(t, v); };
      switch (op.op) {
        case Opcode::Add: result(get(op.in[0]) + get(op.in[1])); break;
        case Opcode::Sub: result(get(op.in[0]) - get(op.in[1])); break;
        case Opcode::Mul: result(get(op.in[0]) * get(op.in[1])); break;
        case Opcode::And: result(get(op.in[0]) & get(op.in[1])); break;
        case Opcode::Or: result(get(op.in[0]) | get(op.in[1])); break;
        case Opcode::Xor: result(get(op.in[0]) ^ get(op.in[1])); break;
        case Opcode::UDiv: {
          const std::uint64_t d = get(op.in[1]);
          if (d == 0) return trap(TrapKind::DivByZero);
          result(get(op.in[0]) / d);
          break;
        }
        case Opcode::SDiv: {
          const std::int64_t a = sign_extend(t, get(op.in[0]));
          const std::int64_t d = sign_extend(t, get(op.in[1]));
          if (d == 0) return trap(TrapKind::DivByZero);
          // MIN / -1 wraps to MIN.
          if (d == -1) result(static_cast<std::uint64_t>(0) - static_cast<std::uint64_t>(a));
          else result(static_cast<std::uint64_t>(a / d));
          break;
        }
        case Opcode::Shl:
        case Opcode::LShr:
        case Opcode::AShr: {
          const std::uint64_t s = get(op.in[1]);
          if (s >= bit_width(t)) return trap(TrapKind::InvalidShift);
          const std::uint64_t a = get(op.in[0]);
          if (op.op == Opcode::Shl) result(a << s);
          else if (op.op == Opcode::LShr) result(a >> s);
          else result(static_cast<std::uint64_t>(sign_extend(t, a) >> s));
          break;
        }
        case Opcode::ICmp:
          regs[op.dst] = compare(op.pred, t, get(op.in[0]), get(op.in[1])) ? 1 : 0;
          break;
        case Opcode::Select:
          ++trace.select_count;
          regs[op.dst] = get(op.in[0]) ? get(op.in[1]) : get(op.in[2]);
          break;
        case Opcode::PtrAdd:
          regs[op.dst] = get(op.in[0]) +
                         static_cast<std::uint64_t>(sign_extend(op.operand_type, get(op.in[1])));
          break;
        case Opcode::Load: {
          const std::size_t len = byte_size(t);
          const std::uint64_t addr = get(op.in[0]);
          Segment* s = find_segment(addr, len);
          if (!s) return trap(TrapKind::UnmappedMemory);
          std::uint64_t v = 0;
          for (std::size_t k = 0; k < len; ++k)
            v |= static_cast<std::uint64_t>(s->bytes[addr - s->base + k]) << (8 * k);
          result(v);
          break;
        }
        case Opcode::Store: {
          const std::size_t len = byte_size(t);
          const std::uint64_t addr = get(op.in[1]);
          Segment* s = find_segment(addr, len);
          if (!s) return trap(TrapKind::UnmappedMemory);
          const std::uint64_t v = truncate_to(t, get(op.in[0]));
          auto& w = trace.writes[s->name];
          for (std::size_t k = 0; k < len; ++k) {
            s->bytes[addr - s->base + k] = static_cast<std::uint8_t>(v >> (8 * k));
            w.insert(addr - s->base + k);
          }
          break;
        }
        case Opcode::BrCond:
          ++trace.cond_branch_count;
          jump = op.target[get(op.in[0]) ? 0 : 1];
          break;
        case Opcode::Br:
          jump = op.target[0];
          break;
        case Opcode::Ret:
          if (!op.in.empty()) trace.return_value = get(op.in[0]);
          trace.outcome = Outcome::Returned;
          finish();
          return trace;
        case Opcode::Phi:
          break;
      }
    }
    if (!jump) throw std::logic_error("block without terminator");
    prev = cur;
    cur = *jump;
    entered_from_edge = true;
  }
}

ExecutionTrace interpret(const IRModule& module, std::string_view function_name,
                         std::span<const ArgValue> args, std::uint64_t fuel) {
  return Interpreter(module, function_name).run(args, fuel);
}

InputGenerator default_input_generator(std::vector<Param> params, std::size_t max_buffer) {
  return [params = std::move(params), max_buffer](std::mt19937_64& rng) {
    static constexpr std::string_view kAlnum =
        "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
    std::vector<ArgValue> out;
    std::optional<std::size_t> pending_length;
    for (const auto& param : params) {
      if (param.type == Type::Ptr) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(0, max_buffer)(rng);
        const bool ascii = rng() & 1;
        std::vector<std::uint8_t> buf(n);
        for (auto& b : buf)
          b = ascii ? static_cast<std::uint8_t>(kAlnum[rng() % kAlnum.size()])
                    : static_cast<std::uint8_t>(rng());
        out.push_back(ArgValue::bytes(std::move(buf)));
        pending_length = n;
        continue;
      }
      if (pending_length) {
        out.push_back(ArgValue::of(*pending_length));
        pending_length.reset();
        continue;
      }
      std::uint64_t v = 0;
      switch (rng() % 3) {
        case 0:
          v = static_cast<std::uint64_t>(std::uniform_int_distribution<std::int64_t>(-4, 16)(rng));
          break;
        case 1: {
          const unsigned w = bit_width(param.type);
          const std::uint64_t edges[] = {0, 1, ~std::uint64_t{0},
                                         std::uint64_t{1} << (w - 1),
                                         (std::uint64_t{1} << (w - 1)) - 1};
          v = edges[rng() % 5];
          break;
        }
        default:
          v = rng();
      }
      out.push_back(ArgValue::of(truncate_to(param.type, v)));
    }
    return out;
  };
}

std::string format_args(std::span<const ArgValue> args) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) os << ", ";
    if (args[i].buffer) {
      os << "bytes[";
      for (std::size_t k = 0; k < args[i].buffer->size(); ++k)
        os << (k ? " " : "") << static_cast<unsigned>((*args[i].buffer)[k]);
      os << ']';
    } else {
      os << args[i].scalar;
    }
  }
  os << ')';
  return os.str();
}

std::string compare_traces(const ExecutionTrace& before, const ExecutionTrace& after,
                           const std::set<std::string>& ignored_segments) {
  if (before.outcome == Outcome::Trap) {
    if (after.outcome != Outcome::Trap || after.trap != before.trap)
      return "original trapped (" + std::string(trap_name(before.trap)) + "), transformed " +
             std::string(outcome_name(after.outcome)) +
             (after.outcome == Outcome::Trap ? " (" + std::string(trap_name(after.trap)) + ")" : "");
    return {};
  }
  if (after.outcome != before.outcome)
    return "original " + std::string(outcome_name(before.outcome)) + ", transformed " +
           std::string(outcome_name(after.outcome)) +
           (after.outcome == Outcome::Trap ? " (" + std::string(trap_name(after.trap)) + ")" : "");
  if (before.return_value != after.return_value) {
    auto show = [](const std::optional<std::uint64_t>& v) {
      return v ? std::to_string(*v) : std::string("void");
    };
    return "return value " + show(before.return_value) + " vs " + show(after.return_value);
  }
  for (const auto& [name, bytes] : before.final_memory) {
    if (ignored_segments.contains(name)) continue;
    auto it = after.final_memory.find(name);
    if (it == after.final_memory.end()) return "segment " + name + " missing";
    if (it->second != bytes) {
      auto mm = std::mismatch(bytes.begin(), bytes.end(), it->second.begin(), it->second.end());
      return "memory " + name + "+" + std::to_string(mm.first - bytes.begin()) + " differs";
    }
  }
  for (const auto& [name, bytes] : after.final_memory)
    if (!ignored_segments.contains(name) && !before.final_memory.contains(name))
      return "unexpected segment " + name;
  return {};
}

std::vector<std::string> unconfined_writes(const ExecutionTrace& before,
                                           const ExecutionTrace& after,
                                           const std::set<std::string>& ignored_segments) {
  std::vector<std::string> out;
  for (const auto& [name, offsets] : after.writes) {
    if (ignored_segments.contains(name)) continue;
    auto it = before.writes.find(name);
    for (auto off : offsets)
      if (it == before.writes.end() || !it->second.contains(off))
        out.push_back(name + "+" + std::to_string(off));
  }
  return out;
}

Verdict differential_check(const IRModule& before, const IRModule& after,
                           std::string_view function_name, const InputGenerator& generator,
                           std::size_t trials, std::uint64_t seed, std::uint64_t fuel) {
  Interpreter a(before, function_name);
  Interpreter b(after, function_name);
  std::set<std::string> ignored;
  if (before.safe_global) ignored.insert(*before.safe_global);
  if (after.safe_global) ignored.insert(*after.safe_global);

  Verdict verdict;
  std::mt19937_64 rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<ArgValue> args = generator(rng);
    ExecutionTrace ta = a.run(args, fuel);
    if (ta.outcome == Outcome::FuelExhausted) {
      ++verdict.trials_skipped;
      continue;
    }
    ++verdict.trials_run;
    ExecutionTrace tb = b.run(args, fuel);
    std::string diff = compare_traces(ta, tb, ignored);
    if (!diff.empty()) {
      verdict.equivalent = false;
      verdict.counterexample = Counterexample{std::move(args), std::move(diff)};
      return verdict;
    }
  }
  return verdict;
}

}  // namespace meld
