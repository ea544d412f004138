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

// Textual `.mir` form of an IRModule.
//
//   ; comment
//   global @table[4] = [1, 2, 3, 4]
//   global @__meld_safe[8] zeroinit
//   safe_global @__meld_safe
//
//   func @to_upper(ptr %str, i64 %n) -> void source "to_upper.c" {
//   entry:
//     %c = icmp sge i8 %x, 'a'
//     br %c, label %then, label %done
//     ...
//   }
//
// Constants are decimal (or 0x hex, or 'c' character) literals typed by the
// operand position they appear in. `select` takes an explicit type only when
// both of its value operands are constants.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "meld/ir.hpp"

namespace meld {

/// 1-based position in `.mir` text.
struct SourceSpan {
  int line = 1;
  int column = 1;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(SourceSpan span, const std::string& message);
  const SourceSpan& span() const { return span_; }
  const std::string& message() const { return message_; }

 private:
  SourceSpan span_;
  std::string message_;
};

/// Parses and validates a module. Every instruction's `source_line` is set to
/// the line it was read from. Throws ParseError on syntax errors, semantic
/// errors (unknown label or register, type mismatch) and validation failures.
IRModule parse_module(std::string_view text);

/// Deterministic text for a module; parse_module(print_module(m)) == m.
std::string print_module(const IRModule& module);
std::string print_function(const Function& function);
std::string print_instruction(const Function& function, const Instruction& inst);

}  // namespace meld
