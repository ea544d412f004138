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

#include "meld/alignment.hpp"
#include "meld/ir_text.hpp"
#include "test_support.hpp"

namespace meld {
namespace {

std::vector<Instruction> body(const IRModule& m, const std::string& block) {
  const BasicBlock* b = m.functions[0].find_block(block);
  return {b->instructions.begin() + static_cast<std::ptrdiff_t>(b->body_begin()),
          b->instructions.begin() + static_cast<std::ptrdiff_t>(b->body_end())};
}

TEST(Alignment, CompatibilityIgnoresOperandValues) {
  IRModule m = meld::testing::load_fixture("scaled_sum.mir");
  auto t = body(m, "then"), e = body(m, "else");
  EXPECT_TRUE(compatible(t[0], e[0]));
  EXPECT_FALSE(compatible(t[0], e[1]));
  Instruction lt = t[0], gt = t[0];
  lt.op = gt.op = Opcode::ICmp;
  lt.pred = Predicate::Slt;
  gt.pred = Predicate::Sgt;
  EXPECT_FALSE(compatible(lt, gt));
}

TEST(Alignment, ScaledSumIsPerfect) {
  IRModule m = meld::testing::load_fixture("scaled_sum.mir");
  Alignment a = compute_alignment(body(m, "then"), body(m, "else"));
  EXPECT_EQ(a.num_matches, 2u);
  EXPECT_EQ(a.num_gaps, 0u);
  EXPECT_DOUBLE_EQ(a.raw_score, 2.0);
  EXPECT_DOUBLE_EQ(a.normalized_score, 1.0);
  EXPECT_TRUE(a.is_complete());
}

TEST(Alignment, LowScoreFixture) {
  IRModule m = meld::testing::load_fixture("low_score.mir");
  Alignment a = compute_alignment(body(m, "a"), body(m, "b"));
  EXPECT_EQ(a.num_matches, 1u);
  EXPECT_EQ(a.num_gaps, 4u);
  EXPECT_DOUBLE_EQ(a.raw_score, -1.0);
  EXPECT_DOUBLE_EQ(a.normalized_score, -0.2);
  DiamondRegion r;
  r.then_block = "a";
  r.else_block = "b";
  r.merge_block = "m";
  EXPECT_FALSE(should_transform(a, r));
}

TEST(Alignment, OneSidedAllGaps) {
  IRModule m = meld::testing::load_fixture("to_upper.mir");
  Alignment a = compute_alignment(body(m, "then"), {});
  EXPECT_EQ(a.num_gaps, 4u);
  EXPECT_DOUBLE_EQ(a.normalized_score, -0.5);
  DiamondRegion r;
  r.then_block = "then";
  r.else_block = r.merge_block = "latch";
  EXPECT_TRUE(should_transform(a, r));
  AlignmentParams strict;
  strict.exempt_one_sided = false;
  EXPECT_FALSE(should_transform(a, r, strict));
}

TEST(Alignment, EmptyPathsAreVacuouslyPerfect) {
  Alignment a = compute_alignment({}, {});
  EXPECT_TRUE(a.pairs.empty());
  EXPECT_DOUBLE_EQ(a.normalized_score, 1.0);
}

TEST(Alignment, TiesPreferMatchThenThenSideGap) {
  // [add] vs [add, add]: the match could take either else instruction. The
  // traceback runs from the end, so the later one is matched.
  Instruction add;
  add.op = Opcode::Add;
  add.operands = {Value::arg(0, Type::I32), Value::constant(Type::I32, 1)};
  add.result = "x";
  std::vector<Instruction> a = {add}, b = {add, add};
  Alignment al = compute_alignment(a, b);
  ASSERT_EQ(al.pairs.size(), 2u);
  EXPECT_EQ(al.pairs[0], (AlignmentPair{std::nullopt, 0}));
  EXPECT_EQ(al.pairs[1], (AlignmentPair{0, 1}));
}

TEST(Alignment, MatchesBruteForceOracle) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 300; ++k) {
    auto a = meld::testing::random_sequence(rng, 7);
    auto b = meld::testing::random_sequence(rng, 7);
    for (AlignmentParams p : {AlignmentParams{}, AlignmentParams{2.0, 0.25, 0.2, true},
                              AlignmentParams{1.0, 3.0, 0.2, true}}) {
      Alignment al = compute_alignment(a, b, p);
      EXPECT_EQ(al.raw_score, meld::testing::brute_force_best_score(a, b, p));
      auto re = meld::testing::rescore(al, a, b, p);
      ASSERT_TRUE(re.has_value());
      EXPECT_EQ(*re, al.raw_score);
    }
  }
}

TEST(Alignment, SafeTwins) {
  Instruction i;
  i.op = Opcode::Load;
  i.type = Type::I64;
  EXPECT_TRUE(has_safe_twin(i));
  i.op = Opcode::Br;
  EXPECT_FALSE(has_safe_twin(i));
  i.op = Opcode::UDiv;
  EXPECT_TRUE(has_safe_twin(i));
}

}  // namespace
}  // namespace meld
