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

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "meld/ir.hpp"
#include "meld/region.hpp"

namespace meld {

struct AlignmentParams {
  double match_bonus = 1.0;
  double gap_penalty = 0.5;
  double score_threshold = 0.2;
  /// One-sided (if-then) regions always align as all gaps; when true they
  /// bypass the score threshold.
  bool exempt_one_sided = true;
};

/// One slot of an alignment. Indices refer into the then/else sequences the
/// alignment was computed over; nullopt is the empty slot.
struct AlignmentPair {
  std::optional<std::size_t> left;
  std::optional<std::size_t> right;

  bool is_match() const { return left && right; }
  friend bool operator==(const AlignmentPair&, const AlignmentPair&) = default;
};

struct Alignment {
  std::vector<AlignmentPair> pairs;
  double raw_score = 0.0;
  double normalized_score = 0.0;
  std::size_t num_matches = 0;
  std::size_t num_gaps = 0;

  bool is_complete() const { return num_gaps == 0; }
};

/// Same operation (opcode, predicate, types); operand values may differ.
bool compatible(const Instruction& a, const Instruction& b);

/// Highest-scoring alignment covering every instruction of both sequences.
/// Only compatible instructions may share a slot; everything else is a gap.
/// Ties prefer a match, then a then-side gap, then an else-side gap, judged
/// from the end of the sequences backwards.
Alignment compute_alignment(std::span<const Instruction> then_seq,
                            std::span<const Instruction> else_seq,
                            const AlignmentParams& params = {});

/// Alignment score gate.
bool should_transform(const Alignment& alignment, const DiamondRegion& region,
                      const AlignmentParams& params = {});

/// True when an extraneous twin can be synthesized for this instruction on
/// the opposite path.
bool has_safe_twin(const Instruction& inst);

/// True iff every unaligned instruction admits a safe extraneous twin and no
/// path instruction is of an unsupported kind.
bool can_complete_alignment(const Alignment& alignment, std::span<const Instruction> then_seq,
                            std::span<const Instruction> else_seq);
bool can_complete_alignment(const Alignment& alignment, const Function& function,
                            const DiamondRegion& region);

}  // namespace meld
