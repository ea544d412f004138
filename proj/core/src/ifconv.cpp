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

#include "meld/ifconv.hpp"

#include <optional>
#include <stdexcept>

#include "meld/melding.hpp"
#include "meld/validate.hpp"

namespace meld {

namespace {

std::string hazard_of(const Instruction& inst) {
  if (is_memory(inst.op)) return std::string(kReasonUnsafeMemory);
  if (is_division(inst.op)) {
    const Value& d = inst.operands[1];
    if (!d.is_const() || d.payload == 0) return std::string(kReasonUnsafeDivide);
  }
  if (is_shift(inst.op)) {
    const Value& s = inst.operands[1];
    if (!s.is_const() || s.payload >= bit_width(inst.type)) return std::string(kReasonUnsafeShift);
  }
  return {};
}

}  // namespace

std::string speculation_hazard(const Function& function, const DiamondRegion& region) {
  // Memory wins over the other reasons so the report is stable whatever the
  // instruction order.
  std::string first;
  for (const auto* path : {&region.then_block, &region.else_block}) {
    for (const auto& inst : path_instructions(function, *path, region)) {
      std::string h = hazard_of(inst);
      if (h == kReasonUnsafeMemory) return h;
      if (first.empty()) first = std::move(h);
    }
  }
  return first;
}

IfConvReport if_convert_region(Function& function, const DiamondRegion& region) {
  IfConvReport report;
  report.instructions_after = count_ops(function);
  if (!validate_function(function).empty()) {
    report.reason_if_skipped = kReasonInvalid;
    return report;
  }
  report.reason_if_skipped = speculation_hazard(function, region);
  if (!report.reason_if_skipped.empty()) return report;

  const DiamondRegion r = canonicalize_if_then(function, region);
  NameAllocator names(function);
  BasicBlock spec;
  spec.label = names.fresh_label(r.head_block + ".spec");
  for (const auto* path : {&r.then_block, &r.else_block})
    for (auto& inst : path_instructions(function, *path, r)) spec.instructions.push_back(inst);
  const std::size_t path_ops = spec.instructions.size();

  BasicBlock* mb = function.find_block(r.merge_block);
  std::vector<Instruction> merge_insts;
  for (std::size_t i = 0; i < mb->body_begin(); ++i) {
    const Instruction& phi = mb->instructions[i];
    std::optional<Value> vt, vf;
    Instruction rest = phi;
    rest.operands.clear();
    rest.labels.clear();
    for (std::size_t k = 0; k < phi.operands.size(); ++k) {
      if (phi.labels[k] == r.then_block) vt = phi.operands[k];
      else if (phi.labels[k] == r.else_block) vf = phi.operands[k];
      else {
        rest.operands.push_back(phi.operands[k]);
        rest.labels.push_back(phi.labels[k]);
      }
    }
    if (!vt || !vf) {
      merge_insts.push_back(phi);
      continue;
    }
    Instruction sel;
    sel.op = Opcode::Select;
    sel.type = phi.type;
    sel.operands = {r.condition, *vt, *vf};
    sel.result = rest.operands.empty() ? phi.result : names.fresh_register(phi.result + ".sel");
    ++report.selects_added;
    if (!rest.operands.empty()) {
      rest.operands.push_back(sel.result_value());
      rest.labels.push_back(spec.label);
      merge_insts.push_back(std::move(rest));
    }
    spec.instructions.push_back(std::move(sel));
  }
  merge_insts.insert(merge_insts.end(),
                     mb->instructions.begin() + static_cast<std::ptrdiff_t>(mb->body_begin()),
                     mb->instructions.end());
  mb->instructions = std::move(merge_insts);

  Instruction br;
  br.op = Opcode::Br;
  br.labels = {r.merge_block};
  spec.instructions.push_back(std::move(br));

  Instruction& term = function.find_block(r.head_block)->instructions.back();
  term.op = Opcode::Br;
  term.operands.clear();
  term.labels = {spec.label};

  auto pos = *function.block_index(r.then_block);
  function.blocks[pos] = std::move(spec);
  function.blocks.erase(function.blocks.begin() +
                        static_cast<std::ptrdiff_t>(*function.block_index(r.else_block)));

  report.transformed = true;
  report.ops_after = path_ops + report.selects_added;
  simplify(function, SimplifyOptions{false, nullptr});
  report.instructions_after = count_ops(function);
  return report;
}

}  // namespace meld
