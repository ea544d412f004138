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

#include "meld/ir_text.hpp"
#include "meld/validate.hpp"
#include "test_support.hpp"

namespace meld {
namespace {

TEST(IrText, ParsesGlobalsAndFunctions) {
  IRModule m = parse_module(R"(
global @tab[4] = [1, 2]
global @z[3] zeroinit
func @f(ptr %s, i64 %n) -> i8 {
entry:
  %p = ptradd %s, %n
  %v = load i8, %p
  %w = add i8 %v, 'A'
  ret %w
}
)");
  ASSERT_EQ(m.globals.size(), 2u);
  EXPECT_EQ(m.globals[0].init, (std::vector<std::uint8_t>{1, 2, 0, 0}));
  EXPECT_EQ(m.globals[1].size(), 3u);
  const Function& f = m.functions.at(0);
  EXPECT_EQ(f.params.size(), 2u);
  EXPECT_EQ(f.return_type, Type::I8);
  const Instruction& add = f.blocks[0].instructions[2];
  EXPECT_EQ(add.op, Opcode::Add);
  EXPECT_TRUE(add.operands[1].is_const(65));
  EXPECT_TRUE(f.blocks[0].instructions[0].operands[0].is_arg());
}

TEST(IrText, ConstantsWrapToWidth) {
  IRModule m = parse_module("func @f() -> i8 {\nentry:\n  %a = add i8 -1, 0\n  ret %a\n}\n");
  EXPECT_EQ(m.functions[0].blocks[0].instructions[0].operands[0].payload, 0xffu);
}

TEST(IrText, ReportsUndefinedValueWithPosition) {
  try {
    parse_module(meld::testing::read_fixture("bad/undefined_value.mir"));
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.span().line, 3);
    EXPECT_NE(e.message().find("nope"), std::string::npos);
  }
}

TEST(IrText, RejectsTypeMismatch) {
  EXPECT_THROW(parse_module("func @f(i32 %x) -> i32 {\nentry:\n  %a = add i8 %x, 1\n  ret %a\n}\n"),
               ParseError);
}

TEST(IrText, RejectsConstantThatDoesNotFit) {
  EXPECT_THROW(parse_module("func @f() -> i8 {\nentry:\n  %a = add i8 300, 1\n  ret %a\n}\n"),
               ParseError);
}

TEST(IrText, RejectsUnknownLabel) {
  EXPECT_THROW(parse_module("func @f() -> void {\nentry:\n  br label %nowhere\n}\n"), ParseError);
}

TEST(IrText, RejectsRedefinition) {
  EXPECT_THROW(parse_module("func @f(i32 %x) -> i32 {\nentry:\n  %a = add i32 %x, 1\n"
                            "  %a = add i32 %x, 2\n  ret %a\n}\n"),
               ParseError);
}

TEST(IrText, RejectsUseNotDominatedByDef) {
  EXPECT_THROW(parse_module(R"(func @f(i1 %c) -> i32 {
entry:
  br %c, label %a, label %b
a:
  %x = add i32 1, 2
  br label %b
b:
  ret %x
}
)"),
               ParseError);
}

TEST(IrText, RejectsPhiLabelsThatAreNotPredecessors) {
  EXPECT_THROW(parse_module(R"(func @f(i1 %c) -> i32 {
entry:
  br %c, label %a, label %b
a:
  br label %b
b:
  %p = phi i32 [1, %a]
  ret %p
}
)"),
               ParseError);
}

TEST(IrText, SafeGlobalMustBeZeroed) {
  EXPECT_THROW(parse_module("global @s[8] = [1]\nsafe_global @s\n"), ParseError);
  EXPECT_NO_THROW(parse_module("global @s[8] zeroinit\nsafe_global @s\n"));
}

TEST(IrText, PrintsSelectTypeOnlyForConstantOperands) {
  IRModule m = parse_module(R"(func @f(i1 %c, i32 %x) -> i32 {
entry:
  %a = select i32 %c, 1, 2
  %b = select %c, %a, %x
  ret %b
}
)");
  const std::string text = print_module(m);
  EXPECT_NE(text.find("%a = select i32 %c, 1, 2"), std::string::npos);
  EXPECT_NE(text.find("%b = select %c, %a, %x"), std::string::npos);
}

TEST(IrText, FixturesRoundTrip) {
  for (const auto& name : meld::testing::fixture_names()) {
    IRModule a = meld::testing::load_fixture(name);
    IRModule b = parse_module(print_module(a));
    EXPECT_EQ(a, b) << name;
  }
}

TEST(IrText, SourceLinesAreMirLines) {
  IRModule m = meld::testing::load_fixture("to_upper.mir");
  const auto* body = m.functions[0].find_block("body");
  ASSERT_NE(body, nullptr);
  EXPECT_EQ(body->terminator()->source_line, 17);
}

TEST(IrText, SourceAttributeRoundTrips) {
  const std::string text =
      "; branchmeld module\n\nfunc @f() -> void source \"k.c\" {\nentry:\n  ret\n}\n";
  IRModule m = parse_module(text);
  EXPECT_EQ(m.functions[0].source_file, "k.c");
  EXPECT_EQ(print_module(m), text);
}

}  // namespace
}  // namespace meld
