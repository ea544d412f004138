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

#include "test_support.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "meld/ir_text.hpp"

#ifndef MELD_FIXTURE_DIR
#error "MELD_FIXTURE_DIR must be defined"
#endif

namespace meld::testing {

std::string fixture_path(const std::string& name) {
  return std::string(MELD_FIXTURE_DIR) + "/" + name;
}

std::string read_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name));
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

IRModule load_fixture(const std::string& name) { return parse_module(read_fixture(name)); }

std::vector<std::string> fixture_names() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(MELD_FIXTURE_DIR))
    if (e.path().extension() == ".mir") out.push_back(e.path().filename().string());
  std::sort(out.begin(), out.end());
  return out;
}

double brute_force_best_score(std::span<const Instruction> a, std::span<const Instruction> b,
                              const AlignmentParams& params) {
  const std::size_t total = a.size() + b.size();
  double best = -std::numeric_limits<double>::infinity();
  std::function<void(std::size_t, std::size_t, std::size_t)> walk =
      [&](std::size_t i0, std::size_t j0, std::size_t k) {
        const double s = static_cast<double>(k) * params.match_bonus -
                         static_cast<double>(total - 2 * k) * params.gap_penalty;
        best = std::max(best, s);
        for (std::size_t i = i0; i < a.size(); ++i)
          for (std::size_t j = j0; j < b.size(); ++j)
            if (compatible(a[i], b[j])) walk(i + 1, j + 1, k + 1);
      };
  walk(0, 0, 0);
  return best;
}

std::optional<double> rescore(const Alignment& alignment, std::span<const Instruction> a,
                              std::span<const Instruction> b, const AlignmentParams& params) {
  std::size_t i = 0, j = 0, matches = 0, gaps = 0;
  for (const auto& p : alignment.pairs) {
    if (!p.left && !p.right) return std::nullopt;
    if (p.left && *p.left != i++) return std::nullopt;
    if (p.right && *p.right != j++) return std::nullopt;
    if (p.is_match()) {
      if (!compatible(a[*p.left], b[*p.right])) return std::nullopt;
      ++matches;
    } else {
      ++gaps;
    }
  }
  if (i != a.size() || j != b.size()) return std::nullopt;
  return static_cast<double>(matches) * params.match_bonus -
         static_cast<double>(gaps) * params.gap_penalty;
}

std::vector<Instruction> random_sequence(std::mt19937_64& rng, std::size_t max_len) {
  const std::size_t n = std::uniform_int_distribution<std::size_t>(0, max_len)(rng);
  std::vector<Instruction> out;
  for (std::size_t k = 0; k < n; ++k) {
    Instruction inst;
    inst.result = "v" + std::to_string(k);
    const Value x = Value::arg(0, Type::I32);
    const Value y = Value::constant(Type::I32, static_cast<std::int64_t>(rng() % 9));
    switch (rng() % 6) {
      case 0: inst.op = Opcode::Add; inst.operands = {x, y}; break;
      case 1: inst.op = Opcode::Sub; inst.operands = {x, y}; break;
      case 2: inst.op = Opcode::Mul; inst.operands = {y, x}; break;
      case 3:
        inst.op = Opcode::Add;
        inst.type = Type::I8;
        inst.operands = {Value::arg(1, Type::I8), Value::constant(Type::I8, 1)};
        break;
      case 4:
        inst.op = Opcode::ICmp;
        inst.pred = (rng() & 1) ? Predicate::Eq : Predicate::Slt;
        inst.operands = {x, y};
        break;
      default:
        inst.op = Opcode::Store;
        inst.result.clear();
        inst.operands = {x, Value::global("g")};
        break;
    }
    out.push_back(std::move(inst));
  }
  return out;
}

namespace {

class ProgramWriter {
 public:
  explicit ProgramWriter(std::mt19937_64& rng) : rng_(rng) {}

  std::string function(const std::string& name) {
    os_.str({});
    counter_ = 0;
    os_ << "func @" << name << "(i32 %a, i32 %b, i32 %c) -> i32 {\n";
    open("entry");
    std::vector<std::string> pool = {"%a", "%b", "%c"};
    straight(pool, 0, 3);
    region(pool, 0);
    straight(pool, 0, 2);
    const std::string fin = fresh();
    line(fin + " = load i32, @g");
    const std::string r = fresh();
    line(r + " = add i32 " + pick(pool) + ", " + fin);
    line("ret " + r);
    os_ << "}\n";
    return os_.str();
  }

 private:
  std::size_t roll(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  bool chance(double p) { return std::uniform_real_distribution<double>(0, 1)(rng_) < p; }

  std::string fresh() { return "%v" + std::to_string(counter_++); }
  void open(const std::string& label) {
    os_ << label << ":\n";
    current_ = label;
  }
  void line(const std::string& s) { os_ << "  " << s << "\n"; }

  std::string constant() {
    if (chance(0.7)) return std::to_string(static_cast<int>(roll(0, 20)) - 4);
    return std::to_string(static_cast<std::int32_t>(rng_()));
  }
  std::string pick(const std::vector<std::string>& pool) { return pool[roll(0, pool.size() - 1)]; }
  std::string operand(const std::vector<std::string>& pool) {
    return chance(0.3) ? constant() : pick(pool);
  }
  std::string predicate() {
    static const char* preds[] = {"eq", "ne", "ult", "ule", "ugt", "uge", "slt", "sle", "sgt", "sge"};
    return preds[roll(0, 9)];
  }

  // An in-bounds i32 address into @g.
  std::string address(std::vector<std::string>& pool) {
    if (chance(0.3)) return "@g";
    const std::string off = fresh();
    line(off + " = and i32 " + operand(pool) + ", 12");
    const std::string p = fresh();
    line(p + " = ptradd @g, " + off);
    return p;
  }

  void instruction(std::vector<std::string>& pool) {
    const std::string v = fresh();
    switch (roll(0, 9)) {
      case 0: case 1: case 2: {
        static const char* ops[] = {"add", "sub", "mul", "and", "or", "xor"};
        line(v + " = " + ops[roll(0, 5)] + " i32 " + operand(pool) + ", " + operand(pool));
        break;
      }
      case 3: {
        const char* op = chance(0.5) ? "udiv" : "sdiv";
        const std::string d = chance(0.6) ? std::to_string(roll(1, 9)) : pick(pool);
        line(v + " = " + op + " i32 " + operand(pool) + ", " + d);
        break;
      }
      case 4: {
        static const char* ops[] = {"shl", "lshr", "ashr"};
        const std::string s = chance(0.6) ? std::to_string(roll(0, 31)) : pick(pool);
        line(v + " = " + ops[roll(0, 2)] + " i32 " + operand(pool) + ", " + s);
        break;
      }
      case 5: {
        const std::string c = fresh();
        line(c + " = icmp " + predicate() + " i32 " + operand(pool) + ", " + operand(pool));
        line(v + " = select " + c + ", " + pick(pool) + ", " + operand(pool));
        break;
      }
      case 6: case 7: {
        const std::string p = address(pool);
        line(v + " = load i32, " + p);
        break;
      }
      default: {
        const std::string p = address(pool);
        line("store i32 " + operand(pool) + ", " + p);
        return;  // defines nothing
      }
    }
    pool.push_back(v);
  }

  void straight(std::vector<std::string>& pool, std::size_t lo, std::size_t hi) {
    for (std::size_t n = roll(lo, hi); n > 0; --n) instruction(pool);
  }

  void region(std::vector<std::string>& pool, int depth) {
    const int id = region_id_++;
    const std::string t = "then" + std::to_string(id);
    const std::string e = "else" + std::to_string(id);
    const std::string m = "merge" + std::to_string(id);
    const bool triangle = chance(0.3);
    const std::string cond = fresh();
    line(cond + " = icmp " + predicate() + " i32 " + operand(pool) + ", " + operand(pool));
    const std::string head = current_;
    line("br " + cond + ", label %" + t + ", label %" + (triangle ? m : e));

    open(t);
    std::vector<std::string> tp = pool;
    straight(tp, triangle ? 1 : 0, 5);
    if (depth < 2 && chance(0.25)) {
      region(tp, depth + 1);
      straight(tp, 0, 2);
    }
    const std::string t_last = current_;
    line("br label %" + m);

    std::vector<std::string> ep = pool;
    std::string e_last = head;
    if (!triangle) {
      open(e);
      straight(ep, 0, 5);
      if (depth < 2 && chance(0.15)) {
        region(ep, depth + 1);
        straight(ep, 0, 2);
      }
      e_last = current_;
      line("br label %" + m);
    }

    open(m);
    for (std::size_t n = roll(1, 3); n > 0; --n) {
      const std::string phi = fresh();
      line(phi + " = phi i32 [" + operand(tp) + ", %" + t_last + "], [" + operand(ep) + ", %" +
           e_last + "]");
      pool.push_back(phi);
    }
  }

  std::mt19937_64& rng_;
  std::ostringstream os_;
  std::string current_;
  int counter_ = 0;
  int region_id_ = 0;
};

}  // namespace

std::string random_diamond_module_text(std::mt19937_64& rng, std::size_t functions) {
  std::ostringstream os;
  os << "global @g[16] = [";
  for (int k = 0; k < 16; ++k) os << (k ? ", " : "") << (rng() % 256);
  os << "]\n\n";
  ProgramWriter writer(rng);
  for (std::size_t f = 0; f < functions; ++f) os << writer.function("f" + std::to_string(f)) << "\n";
  return os.str();
}

std::vector<ArgValue> random_scalar_args(std::mt19937_64& rng, std::size_t count) {
  std::vector<ArgValue> out;
  for (std::size_t k = 0; k < count; ++k) {
    std::uint64_t v;
    switch (rng() % 3) {
      case 0: v = static_cast<std::uint64_t>(static_cast<std::int64_t>(rng() % 21) - 4); break;
      case 1: {
        static const std::uint64_t edges[] = {0, 1, 0xffffffff, 0x80000000, 0x7fffffff, 31, 32};
        v = edges[rng() % 7];
        break;
      }
      default: v = rng();
    }
    out.push_back(ArgValue::of(truncate_to(Type::I32, v)));
  }
  return out;
}

}  // namespace meld::testing
