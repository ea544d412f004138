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

// Full-speculation if-conversion: run both paths unconditionally and pick the
// merge values with selects. Used as the comparison baseline.

#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "meld/ir.hpp"
#include "meld/region.hpp"

namespace meld {

struct IfConvReport {
  bool transformed = false;
  std::size_t ops_after = 0;  // region ops, counted like MeldReport::region_ops_after
  std::size_t selects_added = 0;
  std::size_t instructions_after = 0;  // count_ops of the whole function
  std::string reason_if_skipped;
};

inline constexpr std::string_view kReasonUnsafeMemory = "unsafe memory operation";
inline constexpr std::string_view kReasonUnsafeDivide = "unsafe divide";
inline constexpr std::string_view kReasonUnsafeShift = "unsafe shift";

/// Empty when every path instruction may be executed speculatively, else the
/// rejection reason.
std::string speculation_hazard(const Function& function, const DiamondRegion& region);

/// Speculates a region. On rejection the function is left untouched.
IfConvReport if_convert_region(Function& function, const DiamondRegion& region);

}  // namespace meld
