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

#include "meld/metrics.hpp"

#include <stdexcept>

namespace meld {

VariantDynamics measure(const IRModule& module, std::string_view function_name,
                        std::span<const std::vector<ArgValue>> inputs, std::uint64_t fuel) {
  VariantDynamics d;
  Interpreter interp(module, function_name);
  for (const auto& args : inputs) {
    ExecutionTrace t = interp.run(args, fuel);
    ++d.runs;
    d.cond_branches += t.cond_branch_count;
    d.total_instructions += t.total_dynamic_instructions;
    d.selects += t.select_count;
    if (t.outcome == Outcome::Trap) ++d.traps;
    if (t.outcome == Outcome::FuelExhausted) ++d.fuel_exhausted;
  }
  return d;
}

RegionComparison compare_region(const IRModule& module, std::string_view function_name,
                                const DiamondRegion& region,
                                std::span<const std::vector<ArgValue>> inputs,
                                const MeldOptions& options) {
  const Function* fn = module.find_function(function_name);
  if (!fn) throw std::invalid_argument("no function @" + std::string(function_name));

  RegionComparison c;
  c.region_id = std::string(function_name) + ":" + region.head_block;
  c.region = region;
  c.original_ops = count_ops(*fn);
  c.original_region_ops = path_instructions(*fn, region.then_block, region).size() +
                          path_instructions(*fn, region.else_block, region).size() + 1;

  IRModule melded = module;
  c.meld = meld_region(melded, *melded.find_function(function_name), region, options);
  c.melded_transformed = c.meld.transformed;
  c.melded_ops = count_ops(*melded.find_function(function_name));
  c.melded_region_ops = c.meld.transformed ? c.meld.region_ops_after : c.original_region_ops;
  c.melded_selects = c.meld.selects_added;

  IRModule converted = module;
  c.ifconv = if_convert_region(*converted.find_function(function_name), region);
  c.if_converted_transformed = c.ifconv.transformed;
  c.if_converted_ops = count_ops(*converted.find_function(function_name));
  c.if_converted_region_ops = c.ifconv.transformed ? c.ifconv.ops_after : c.original_region_ops;
  c.if_converted_selects = c.ifconv.selects_added;

  c.original_dynamic = measure(module, function_name, inputs);
  if (c.melded_transformed) c.melded_dynamic = measure(melded, function_name, inputs);
  if (c.if_converted_transformed) c.if_converted_dynamic = measure(converted, function_name, inputs);
  return c;
}

}  // namespace meld
