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

// Branch melding: complete an alignment with trap-free extraneous
// instructions, fuse the two paths into one block whose differing operands are
// chosen by selects on the branch condition, then clean up the CFG.

#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "meld/alignment.hpp"
#include "meld/ir.hpp"
#include "meld/region.hpp"

namespace meld {

/// Where an extraneous instruction's operand came from.
enum class OperandSource {
  MirroredDef,     // the opposite-path twin of an earlier same-path definition
  IdentityConst,   // the operation's neutral constant (0 for add, 1 for div, ...)
  ReplicatedSafe,  // constant, argument or outer value copied verbatim
  SafeGlobalAddr,  // memory address redirected to the safe global
};

std::string_view operand_source_name(OperandSource s);

struct ExtraneousTwin {
  std::size_t pair_index = 0;  // slot in the alignment it completes
  bool in_then_block = false;  // side the twin was inserted into
  Instruction twin;
  std::vector<OperandSource> sources;  // parallel to twin.operands
};

struct ExtraneousPlan {
  std::vector<ExtraneousTwin> twins;

  /// Result registers defined by twins.
  std::set<std::string> twin_results() const;
};

struct InsertResult {
  Alignment complete;  // pairs (i, i) over the rewritten path blocks
  ExtraneousPlan plan;
};

/// Fills every empty slot of `alignment` with an extraneous twin, rewriting
/// both path blocks into alignment order. `region` must be a diamond (call
/// canonicalize_if_then first). Creates the module's safe global when a memory
/// twin needs it. Throws std::logic_error if some unaligned instruction has no
/// safe twin.
InsertResult insert_extraneous(IRModule& module, Function& function, const DiamondRegion& region,
                               const Alignment& alignment);

struct MeldMap {
  /// Alignment slot (then index, else index) -> index of the melded
  /// instruction in the melded block.
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> pairs;
  /// Original result register (either path) -> melded register.
  std::map<std::string, std::string> registers;
};

struct MeldResult {
  std::string melded_block;
  MeldMap map;
  std::size_t selects_added = 0;  // operand selects plus merge-phi selects
  std::set<std::string> melded_values;  // melded results and inserted selects
};

/// Replaces the two path blocks of a diamond with a single block. Requires a
/// complete alignment over the current path blocks. The head's conditional
/// branch becomes an unconditional jump into the melded block.
MeldResult meld_blocks(Function& function, const DiamondRegion& region, const Alignment& complete);

struct SimplifyOptions {
  bool peephole = true;
  /// Registers whose identity arithmetic (x+0, x*1, ...) may be folded. When
  /// null, any select result qualifies.
  const std::set<std::string>* fold_candidates = nullptr;
};

/// CFG and select cleanup after melding. Returns true if anything changed.
bool simplify(Function& function, const SimplifyOptions& options = {});

struct MeldOptions {
  AlignmentParams params;
  bool peephole = true;
};

struct MeldReport {
  bool transformed = false;
  std::string reason_if_skipped;
  std::size_t selects_added = 0;
  std::size_t instructions_before = 0;  // count_ops of the function
  std::size_t instructions_after = 0;
  std::size_t region_ops_before = 0;  // both paths plus the conditional branch
  std::size_t region_ops_after = 0;   // melded block ops before simplification
  std::size_t extraneous_added = 0;
  std::size_t num_matches = 0;
  std::size_t num_gaps = 0;
  double raw_score = 0.0;
  double normalized_score = 0.0;
};

inline constexpr std::string_view kReasonBelowThreshold = "score below threshold";
inline constexpr std::string_view kReasonIncompletable = "incompletable alignment";
inline constexpr std::string_view kReasonInvalid = "invalid function";

/// Full pipeline for one region: align, gate, complete, meld, simplify. On
/// rejection the function is left untouched.
MeldReport meld_region(IRModule& module, Function& function, const DiamondRegion& region,
                       const MeldOptions& options = {});

}  // namespace meld
