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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "meld/ifconv.hpp"
#include "meld/interpreter.hpp"
#include "meld/melding.hpp"

namespace meld {

/// Dynamic totals of one variant over a shared input set.
struct VariantDynamics {
  std::uint64_t runs = 0;
  std::uint64_t cond_branches = 0;
  std::uint64_t total_instructions = 0;
  std::uint64_t selects = 0;
  std::uint64_t traps = 0;
  std::uint64_t fuel_exhausted = 0;
};

/// Op counts exclude `br` and `phi` and include selects.
struct RegionComparison {
  std::string region_id;  // "<function>:<head block>"
  DiamondRegion region;

  // Whole-function static op counts.
  std::size_t original_ops = 0;
  std::size_t melded_ops = 0;
  std::size_t if_converted_ops = 0;

  // The region alone: both path bodies plus the branch before; the rewritten
  // block (matched ops, extraneous ops and selects) after.
  std::size_t original_region_ops = 0;
  std::size_t melded_region_ops = 0;
  std::size_t if_converted_region_ops = 0;

  std::size_t melded_selects = 0;
  std::size_t if_converted_selects = 0;
  bool melded_transformed = false;
  bool if_converted_transformed = false;

  MeldReport meld;
  IfConvReport ifconv;

  VariantDynamics original_dynamic;
  VariantDynamics melded_dynamic;
  VariantDynamics if_converted_dynamic;  // measured only when transformed
};

VariantDynamics measure(const IRModule& module, std::string_view function_name,
                        std::span<const std::vector<ArgValue>> inputs,
                        std::uint64_t fuel = kDefaultFuel);

/// Runs both transformations on private copies of `module` and interprets
/// every variant on `inputs`.
RegionComparison compare_region(const IRModule& module, std::string_view function_name,
                                const DiamondRegion& region,
                                std::span<const std::vector<ArgValue>> inputs,
                                const MeldOptions& options = {});

}  // namespace meld
