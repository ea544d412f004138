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

// Shared helpers for the unit and acceptance tests: fixture loading, an
// exhaustive alignment oracle and random program generators.

#pragma once

#include <random>
#include <span>
#include <string>
#include <vector>

#include "meld/alignment.hpp"
#include "meld/interpreter.hpp"
#include "meld/ir.hpp"

namespace meld::testing {

std::string fixture_path(const std::string& name);
std::string read_fixture(const std::string& name);
IRModule load_fixture(const std::string& name);

/// Every *.mir file in the fixture directory, sorted.
std::vector<std::string> fixture_names();

/// Best raw score over all monotone sets of compatible pairs, found by
/// enumerating every such set. Exponential; keep sequences short.
double brute_force_best_score(std::span<const Instruction> a, std::span<const Instruction> b,
                              const AlignmentParams& params = {});

/// Recomputes the score of an alignment from its pairs, checking that it
/// covers both sequences in order and only matches compatible pairs. Returns
/// nullopt if the alignment is malformed.
std::optional<double> rescore(const Alignment& alignment, std::span<const Instruction> a,
                              std::span<const Instruction> b, const AlignmentParams& params = {});

/// A short random straight-line sequence drawn from a small opcode set so
/// that compatible pairs are common. Operands are constants and arguments.
std::vector<Instruction> random_sequence(std::mt19937_64& rng, std::size_t max_len);

/// Source text of a random module whose functions each contain one diamond or
/// triangle (sometimes nested) over arithmetic, shifts, divisions, selects
/// and in-bounds loads and stores on a 16-byte global. Functions take
/// (i32 %a, i32 %b, i32 %c) and return i32.
std::string random_diamond_module_text(std::mt19937_64& rng, std::size_t functions = 1);

/// Inputs for the generated functions: three i32 scalars.
std::vector<ArgValue> random_scalar_args(std::mt19937_64& rng, std::size_t count);

}  // namespace meld::testing
