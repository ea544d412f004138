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

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "meld/ir.hpp"

namespace meld {

/// A conditional branch whose two straight-line paths reconverge.
///
/// A triangle (if-then) has one of then_block/else_block equal to
/// merge_block until canonicalize_if_then gives it a synthesized empty path;
/// `synthesized_else` is then set. In the rare inverted triangle the empty
/// path is the true side; the flag still records that one side was
/// synthesized.
struct DiamondRegion {
  std::string head_block;
  Value condition;
  std::string then_block;
  std::string else_block;
  std::string merge_block;
  bool synthesized_else = false;
  std::optional<int> branch_line;  // source line of the head's br_cond

  bool is_triangle() const { return then_block == merge_block || else_block == merge_block; }

  friend bool operator==(const DiamondRegion&, const DiamondRegion&) = default;
};

/// Selective-application filters, as given on the command line.
struct FilterSpec {
  std::optional<std::set<std::string>> include_funcs;
  std::set<std::string> exclude_funcs;
  std::set<std::string> exclude_files;
  /// file name -> line numbers whose branches may be transformed.
  std::optional<std::map<std::string, std::set<int>>> include_lines;

  /// Contradictory settings, such as a function both included and excluded.
  std::vector<std::string> problems() const;

  /// `file` is the function's source_file, or the input file name when the
  /// function has none.
  bool admits_function(const Function& function, const std::string& file) const;
  bool admits_branch(const Function& function, const std::string& file,
                     std::optional<int> line) const;
};

struct RegionOptions {
  std::size_t max_block_size = 64;  // non-terminator instructions per path
  std::string default_file;
};

/// Every structurally valid branch of `function` that passes `filters`, in
/// block order. Triangles are returned as-is (one side equal to the merge).
std::vector<DiamondRegion> collect_valid_branches(const Function& function,
                                                  const FilterSpec& filters,
                                                  const RegionOptions& options = {});

/// Gives a triangle an empty path block so it becomes a diamond. Phis in the
/// merge block that received a value from the head now receive it from the
/// new block. Diamonds are returned unchanged.
DiamondRegion canonicalize_if_then(Function& function, const DiamondRegion& region);

/// Non-terminator instructions of one path. Empty for the missing side of an
/// un-canonicalized triangle.
std::vector<Instruction> path_instructions(const Function& function, const std::string& path,
                                           const DiamondRegion& region);

}  // namespace meld
