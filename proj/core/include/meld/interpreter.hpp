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

// Reference interpreter and differential checker.
//
// Memory is a set of disjoint segments: argument buffers from 0x10000000,
// module globals from 0x40000000 in declaration order with the safe global
// last, each followed by a 4 KiB unmapped gap. Loads and stores outside a
// segment trap.

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "meld/ir.hpp"

namespace meld {

inline constexpr std::uint64_t kDefaultFuel = 10'000'000;
inline constexpr std::uint64_t kArgBase = 0x10000000;
inline constexpr std::uint64_t kGlobalBase = 0x40000000;
inline constexpr std::uint64_t kGuardGap = 4096;

/// One actual argument. A pointer parameter given a buffer receives the
/// address of a fresh segment holding it; otherwise `scalar` is passed as is.
struct ArgValue {
  std::uint64_t scalar = 0;
  std::optional<std::vector<std::uint8_t>> buffer;

  static ArgValue of(std::uint64_t v) { return {v, std::nullopt}; }
  static ArgValue bytes(std::vector<std::uint8_t> b) { return {0, std::move(b)}; }
  static ArgValue text(std::string_view s) { return bytes({s.begin(), s.end()}); }
  friend bool operator==(const ArgValue&, const ArgValue&) = default;
};

enum class Outcome : std::uint8_t { Returned, Trap, FuelExhausted };
enum class TrapKind : std::uint8_t { None, DivByZero, UnmappedMemory, InvalidShift };

std::string_view outcome_name(Outcome o);
std::string_view trap_name(TrapKind t);

struct ExecutionTrace {
  Outcome outcome = Outcome::Returned;
  TrapKind trap = TrapKind::None;
  std::optional<std::uint64_t> return_value;
  /// Segment name -> bytes at exit. Argument buffers are named "arg:<param>".
  std::map<std::string, std::vector<std::uint8_t>> final_memory;
  std::array<std::uint64_t, kNumOpcodes> dyn_counts{};
  std::uint64_t cond_branch_count = 0;
  std::uint64_t select_count = 0;
  std::uint64_t total_dynamic_instructions = 0;
  /// Segment name -> byte offsets stored to.
  std::map<std::string, std::set<std::uint64_t>> writes;

  std::uint64_t count(Opcode op) const { return dyn_counts[static_cast<std::size_t>(op)]; }
};

/// A function lowered to slot form for repeated execution. Holds a reference
/// to nothing; the module may be destroyed afterwards.
class Interpreter {
 public:
  /// Throws std::invalid_argument if the function does not exist.
  Interpreter(const IRModule& module, std::string_view function_name);
  ~Interpreter();
  Interpreter(Interpreter&&) noexcept;
  Interpreter& operator=(Interpreter&&) noexcept;

  /// Throws std::invalid_argument on an argument count mismatch or zero fuel.
  ExecutionTrace run(std::span<const ArgValue> args, std::uint64_t fuel = kDefaultFuel) const;

  const std::vector<Param>& params() const;

 private:
  struct Program;
  std::unique_ptr<Program> program_;
};

ExecutionTrace interpret(const IRModule& module, std::string_view function_name,
                         std::span<const ArgValue> args, std::uint64_t fuel = kDefaultFuel);

using InputGenerator = std::function<std::vector<ArgValue>(std::mt19937_64&)>;

/// Inputs shaped by the signature: each pointer parameter gets a random
/// buffer (0..max_buffer bytes, often ASCII letters and digits) and a directly
/// following integer parameter receives its length; other integers mix small,
/// boundary and uniform values.
InputGenerator default_input_generator(std::vector<Param> params, std::size_t max_buffer = 48);

struct Counterexample {
  std::vector<ArgValue> args;
  std::string divergence;
};

struct Verdict {
  bool equivalent = true;
  std::size_t trials_run = 0;
  std::size_t trials_skipped = 0;  // original ran out of fuel
  std::optional<Counterexample> counterexample;
};

/// Returns, memory outside the safe global and trap behaviour must agree on
/// every trial. An original trap must be matched by a trap of the same kind.
Verdict differential_check(const IRModule& before, const IRModule& after,
                           std::string_view function_name, const InputGenerator& generator,
                           std::size_t trials, std::uint64_t seed = 0,
                           std::uint64_t fuel = kDefaultFuel);

/// Compares two traces of the same inputs; empty when they agree.
std::string compare_traces(const ExecutionTrace& before, const ExecutionTrace& after,
                           const std::set<std::string>& ignored_segments);

/// Writes in `after` that hit neither a location written by `before` nor an
/// ignored segment, formatted "segment+offset".
std::vector<std::string> unconfined_writes(const ExecutionTrace& before,
                                           const ExecutionTrace& after,
                                           const std::set<std::string>& ignored_segments);

std::string format_args(std::span<const ArgValue> args);

}  // namespace meld
