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

#include <gtest/gtest.h>

#include "meld/interpreter.hpp"
#include "meld/ir_text.hpp"
#include "meld/melding.hpp"
#include "meld/validate.hpp"
#include "test_support.hpp"

namespace meld {
namespace {

using meld::testing::load_fixture;

DiamondRegion only_region(const Function& fn) {
  auto r = collect_valid_branches(fn, {});
  EXPECT_EQ(r.size(), 1u);
  return r.at(0);
}

TEST(Melding, ExtraneousOperandSources) {
  IRModule m = load_fixture("to_upper.mir");
  Function& fn = m.functions[0];
  DiamondRegion d = canonicalize_if_then(fn, only_region(fn));
  Alignment a = compute_alignment(path_instructions(fn, d.then_block, d), {});
  InsertResult ins = insert_extraneous(m, fn, d, a);
  ASSERT_EQ(ins.plan.twins.size(), 4u);
  using S = OperandSource;
  EXPECT_EQ(ins.plan.twins[0].sources, (std::vector<S>{S::SafeGlobalAddr}));
  EXPECT_EQ(ins.plan.twins[1].sources, (std::vector<S>{S::MirroredDef, S::IdentityConst}));
  EXPECT_EQ(ins.plan.twins[2].sources, (std::vector<S>{S::MirroredDef, S::IdentityConst}));
  EXPECT_EQ(ins.plan.twins[3].sources, (std::vector<S>{S::MirroredDef, S::SafeGlobalAddr}));
  for (const auto& t : ins.plan.twins) EXPECT_FALSE(t.in_then_block);
  EXPECT_EQ(ins.plan.twin_results(), (std::set<std::string>{"t1.x", "t2.x", "t3.x"}));
  EXPECT_TRUE(ins.complete.is_complete());
  EXPECT_EQ(m.safe_global, "__meld_safe");
  EXPECT_TRUE(validate_module(m).empty());
}

TEST(Melding, TrapSensitiveOperandsGetSafeConstants) {
  IRModule m = parse_module(R"(func @f(i32 %x, i32 %y, i1 %c) -> i32 {
entry:
  br %c, label %t, label %e
t:
  %q = udiv i32 %x, %y
  %s = ashr i32 %q, %y
  %m = and i32 %s, %x
  br label %j
e:
  br label %j
j:
  %r = phi i32 [%m, %t], [0, %e]
  ret %r
}
)");
  Function& fn = m.functions[0];
  DiamondRegion d = only_region(fn);
  Alignment a = compute_alignment(path_instructions(fn, d.then_block, d), {});
  InsertResult ins = insert_extraneous(m, fn, d, a);
  const BasicBlock* e = fn.find_block("e");
  EXPECT_TRUE(e->instructions[0].operands[1].is_const(1));   // divisor
  EXPECT_TRUE(e->instructions[1].operands[1].is_const(0));   // shift amount
  EXPECT_TRUE(e->instructions[2].operands[1].is_const(-1));  // and identity
  EXPECT_FALSE(m.safe_global.has_value());
}

TEST(Melding, MeldMapAndSelectMinimisation) {
  IRModule m = load_fixture("scaled_sum.mir");
  Function& fn = m.functions[0];
  DiamondRegion d = only_region(fn);
  Alignment a = compute_alignment(path_instructions(fn, "then", d), path_instructions(fn, "else", d));
  MeldResult r = meld_blocks(fn, d, a);
  EXPECT_EQ(r.selects_added, 2u);
  EXPECT_EQ(r.map.registers.at("a1"), "a1_a2");
  EXPECT_EQ(r.map.registers.at("m2"), "m1_m2");
  EXPECT_EQ(r.map.pairs.size(), 2u);
  EXPECT_EQ(fn.find_block("then"), nullptr);
  EXPECT_EQ(fn.find_block("else"), nullptr);
  EXPECT_EQ(fn.blocks[0].terminator()->op, Opcode::Br);
  EXPECT_TRUE(validate_function(fn, &m).empty());
  // Phis fed by melded values on both sides disappear.
  EXPECT_EQ(count_opcode(fn, Opcode::Phi), 0u);
}

TEST(Melding, MergeWithThirdPredecessorIsNotARegion) {
  IRModule m = parse_module(R"(func @f(i32 %x, i1 %c, i1 %d) -> i32 {
entry:
  br %d, label %h, label %j
h:
  br %c, label %t, label %e
t:
  %a = add i32 %x, 1
  br label %j
e:
  %b = add i32 %x, 2
  br label %j
j:
  %r = phi i32 [%a, %t], [%b, %e], [%x, %entry]
  ret %r
}
)");
  auto regions = collect_valid_branches(m.functions[0], {});
  // j has a third predecessor, so the region is not structurally valid.
  for (const auto& r : regions) EXPECT_NE(r.head_block, "h");
}

TEST(Melding, MergePhiMixingOutsideValueBecomesSelect) {
  IRModule m = parse_module(R"(func @f(i32 %x, i32 %y) -> i32 {
entry:
  %c = icmp eq i32 %x, %y
  br %c, label %t, label %e
t:
  %a = mul i32 %x, 3
  br label %j
e:
  %b = mul i32 %y, 3
  br label %j
j:
  %r = phi i32 [%a, %t], [%x, %e]
  ret %r
}
)");
  const IRModule original = m;
  Function& fn = m.functions[0];
  MeldReport rep = meld_region(m, fn, only_region(fn));
  ASSERT_TRUE(rep.transformed);
  EXPECT_TRUE(validate_module(m).empty());
  Verdict v = differential_check(original, m, "f", default_input_generator(original.functions[0].params),
                                 500);
  EXPECT_TRUE(v.equivalent) << (v.counterexample ? v.counterexample->divergence : "");
}

TEST(Melding, SimplifyFoldsSelectsAndPhis) {
  IRModule m = parse_module(R"(func @f(i32 %x, i1 %c) -> i32 {
entry:
  %a = select %c, %x, %x
  %b = select i32 true, 4, 5
  br label %n
n:
  %p = phi i32 [%a, %entry]
  %s = add i32 %p, %b
  ret %s
}
)");
  Function& fn = m.functions[0];
  EXPECT_TRUE(simplify(fn));
  ASSERT_EQ(fn.blocks.size(), 1u);
  EXPECT_EQ(print_function(fn), "func @f(i32 %x, i1 %c) -> i32 {\nentry:\n  %s = add i32 %x, 4\n  ret %s\n}\n");
}

TEST(Melding, PeepholeOnlyTouchesCandidates) {
  const char* text = R"(func @f(i32 %x, i1 %c) -> i32 {
entry:
  %k = add i32 %x, 0
  %s = select %c, %x, %k
  %t = mul i32 %s, 1
  ret %t
}
)";
  IRModule m = parse_module(text);
  simplify(m.functions[0]);
  const std::string out = print_function(m.functions[0]);
  EXPECT_NE(out.find("%k = add i32 %x, 0"), std::string::npos);  // not a select result
  EXPECT_EQ(out.find("mul"), std::string::npos);                  // select result folded

  IRModule off = parse_module(text);
  simplify(off.functions[0], SimplifyOptions{false, nullptr});
  EXPECT_NE(print_function(off.functions[0]).find("mul"), std::string::npos);
}

TEST(Melding, SharedOperandNeedsNoSelect) {
  // Only the differing first operand is selected; the shared 1 is not.
  IRModule m = parse_module(R"(func @f(i32 %x, i32 %y) -> i32 {
entry:
  %c = icmp ult i32 %x, %y
  br %c, label %t, label %e
t:
  %a = add i32 %x, 1
  br label %j
e:
  %b = add i32 %y, 1
  br label %j
j:
  %r = phi i32 [%a, %t], [%b, %e]
  ret %r
}
)");
  Function& fn = m.functions[0];
  MeldReport rep = meld_region(m, fn, only_region(fn));
  EXPECT_TRUE(rep.transformed);
  EXPECT_EQ(rep.selects_added, 1u);
  EXPECT_EQ(count_opcode(fn, Opcode::BrCond), 0u);
}

TEST(Melding, RejectionLeavesFunctionUntouched) {
  IRModule m = load_fixture("low_score.mir");
  const IRModule before = m;
  MeldReport rep = meld_region(m, m.functions[0], only_region(m.functions[0]));
  EXPECT_FALSE(rep.transformed);
  EXPECT_EQ(rep.reason_if_skipped, kReasonBelowThreshold);
  EXPECT_EQ(m, before);
}

TEST(Melding, IncompletableAlignment) {
  Instruction ret;
  ret.op = Opcode::Ret;
  EXPECT_FALSE(has_safe_twin(ret));
  std::vector<Instruction> t = {ret};
  Alignment a = compute_alignment(t, {});
  EXPECT_FALSE(can_complete_alignment(a, t, {}));
}

TEST(Melding, ReportCountsStaticOps) {
  IRModule m = load_fixture("to_upper.mir");
  MeldReport rep = meld_region(m, m.functions[0], only_region(m.functions[0]));
  ASSERT_TRUE(rep.transformed);
  EXPECT_EQ(rep.region_ops_before, 5u);
  // matched (0) + extraneous-completed slots (4) + selects (4).
  EXPECT_EQ(rep.region_ops_after, 8u);
  EXPECT_EQ(rep.extraneous_added, 4u);
  EXPECT_EQ(rep.instructions_before, 16u);
  EXPECT_EQ(rep.instructions_after, 19u);
}

TEST(Melding, EveryFixtureStaysValid) {
  for (const auto& name : meld::testing::fixture_names()) {
    IRModule m = load_fixture(name);
    for (auto& fn : m.functions) {
      for (int guard = 0; guard < 10; ++guard) {
        auto regions = collect_valid_branches(fn, {});
        bool any = false;
        for (const auto& r : regions)
          if (meld_region(m, fn, r).transformed) {
            any = true;
            break;
          }
        EXPECT_TRUE(validate_module(m).empty()) << name;
        if (!any) break;
      }
    }
  }
}

}  // namespace
}  // namespace meld
