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

#include "meld/ifconv.hpp"
#include "meld/interpreter.hpp"
#include "meld/ir_text.hpp"
#include "meld/validate.hpp"
#include "test_support.hpp"

namespace meld {
namespace {

using meld::testing::load_fixture;

IfConvReport convert_first(IRModule& m) {
  auto r = collect_valid_branches(m.functions[0], {});
  EXPECT_FALSE(r.empty());
  return if_convert_region(m.functions[0], r.at(0));
}

TEST(IfConv, ScaledSumKeepsEveryOpPlusOneSelectPerPhi) {
  IRModule m = load_fixture("scaled_sum.mir");
  const IRModule original = m;
  IfConvReport rep = convert_first(m);
  EXPECT_TRUE(rep.transformed);
  EXPECT_EQ(rep.selects_added, 2u);
  EXPECT_EQ(rep.ops_after, 6u);
  EXPECT_EQ(count_opcode(m.functions[0], Opcode::BrCond), 0u);
  EXPECT_TRUE(validate_module(m).empty());
  EXPECT_TRUE(differential_check(original, m, "scaled_sum",
                                 default_input_generator(original.functions[0].params), 500)
                  .equivalent);
}

TEST(IfConv, RejectsMemory) {
  IRModule m = load_fixture("to_upper.mir");
  const IRModule before = m;
  IfConvReport rep = convert_first(m);
  EXPECT_FALSE(rep.transformed);
  EXPECT_EQ(rep.reason_if_skipped, kReasonUnsafeMemory);
  EXPECT_EQ(m, before);
}

TEST(IfConv, RejectsDivideByVariable) {
  IRModule m = load_fixture("safe_div.mir");
  EXPECT_EQ(convert_first(m).reason_if_skipped, kReasonUnsafeDivide);
}

TEST(IfConv, AcceptsDivideByNonzeroConstant) {
  IRModule m = parse_module(R"(func @f(i32 %x) -> i32 {
entry:
  %c = icmp sgt i32 %x, 10
  br %c, label %t, label %j
t:
  %q = sdiv i32 %x, 3
  br label %j
j:
  %r = phi i32 [%q, %t], [%x, %entry]
  ret %r
}
)");
  EXPECT_TRUE(convert_first(m).transformed);
}

TEST(IfConv, RejectsDivideByZeroConstant) {
  IRModule m = parse_module(R"(func @f(i32 %x) -> i32 {
entry:
  %c = icmp sgt i32 %x, 10
  br %c, label %t, label %j
t:
  %q = udiv i32 %x, 0
  br label %j
j:
  %r = phi i32 [%q, %t], [%x, %entry]
  ret %r
}
)");
  EXPECT_EQ(convert_first(m).reason_if_skipped, kReasonUnsafeDivide);
}

TEST(IfConv, RejectsVariableShift) {
  IRModule m = load_fixture("shl_checked.mir");
  EXPECT_EQ(convert_first(m).reason_if_skipped, kReasonUnsafeShift);
}

TEST(IfConv, EmptyElseSpeculatesThenPath) {
  IRModule m = load_fixture("iabs.mir");
  const IRModule original = m;
  IfConvReport rep = convert_first(m);
  EXPECT_TRUE(rep.transformed);
  EXPECT_EQ(rep.ops_after, 2u);
  EXPECT_TRUE(differential_check(original, m, "iabs",
                                 default_input_generator(original.functions[0].params), 500)
                  .equivalent);
}

TEST(IfConv, MemoryReasonWinsOverDivide) {
  IRModule m = parse_module(R"(global @g[4] zeroinit
func @f(i32 %x, i32 %y) -> i32 {
entry:
  %c = icmp sgt i32 %x, 10
  br %c, label %t, label %j
t:
  %q = udiv i32 %x, %y
  store i32 %q, @g
  br label %j
j:
  ret %x
}
)");
  EXPECT_EQ(convert_first(m).reason_if_skipped, kReasonUnsafeMemory);
}

TEST(IfConv, PreservesSemanticsOnGeneratedPrograms) {
  std::mt19937_64 rng(5);
  int converted = 0;
  for (int k = 0; k < 100; ++k) {
    const IRModule original = parse_module(meld::testing::random_diamond_module_text(rng));
    IRModule m = original;
    for (const auto& r : collect_valid_branches(m.functions[0], {})) {
      if (if_convert_region(m.functions[0], r).transformed) ++converted;
      break;
    }
    ASSERT_TRUE(validate_module(m).empty());
    InputGenerator gen = [](std::mt19937_64& g) { return meld::testing::random_scalar_args(g, 3); };
    Verdict v = differential_check(original, m, "f0", gen, 40, k);
    EXPECT_TRUE(v.equivalent) << (v.counterexample ? v.counterexample->divergence : "");
  }
  EXPECT_GT(converted, 0);
}

}  // namespace
}  // namespace meld
