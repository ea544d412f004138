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

#include "meld/alignment.hpp"

#include <algorithm>

namespace meld {

bool compatible(const Instruction& a, const Instruction& b) {
  if (a.op != b.op || a.pred != b.pred || a.type != b.type) return false;
  if (is_terminator(a.op) || a.op == Opcode::Phi) return false;
  if (a.operands.size() != b.operands.size()) return false;
  for (std::size_t i = 0; i < a.operands.size(); ++i)
    if (a.operands[i].type != b.operands[i].type) return false;
  return true;
}

Alignment compute_alignment(std::span<const Instruction> then_seq,
                            std::span<const Instruction> else_seq,
                            const AlignmentParams& params) {
  const std::size_t n = then_seq.size();
  const std::size_t m = else_seq.size();
  const double bonus = params.match_bonus;
  const double gap = params.gap_penalty;

  // score[i][j]: best alignment of then_seq[0..i) with else_seq[0..j).
  std::vector<std::vector<double>> score(n + 1, std::vector<double>(m + 1, 0.0));
  std::vector<std::vector<char>> compat(n, std::vector<char>(m, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) compat[i][j] = compatible(then_seq[i], else_seq[j]);

  for (std::size_t i = 1; i <= n; ++i) score[i][0] = score[i - 1][0] - gap;
  for (std::size_t j = 1; j <= m; ++j) score[0][j] = score[0][j - 1] - gap;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      double best = std::max(score[i - 1][j] - gap, score[i][j - 1] - gap);
      if (compat[i - 1][j - 1]) best = std::max(best, score[i - 1][j - 1] + bonus);
      score[i][j] = best;
    }
  }

  Alignment out;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    const double here = score[i][j];
    if (i > 0 && j > 0 && compat[i - 1][j - 1] && score[i - 1][j - 1] + bonus == here) {
      out.pairs.push_back({i - 1, j - 1});
      --i;
      --j;
    } else if (i > 0 && score[i - 1][j] - gap == here) {
      out.pairs.push_back({i - 1, std::nullopt});
      --i;
    } else {
      out.pairs.push_back({std::nullopt, j - 1});
      --j;
    }
  }
  std::reverse(out.pairs.begin(), out.pairs.end());

  for (const auto& p : out.pairs) (p.is_match() ? out.num_matches : out.num_gaps) += 1;
  out.raw_score = static_cast<double>(out.num_matches) * bonus -
                  static_cast<double>(out.num_gaps) * gap;
  // An empty alignment (both paths empty) is vacuously perfect.
  out.normalized_score =
      out.pairs.empty() ? bonus : out.raw_score / static_cast<double>(out.pairs.size());
  return out;
}

bool should_transform(const Alignment& alignment, const DiamondRegion& region,
                      const AlignmentParams& params) {
  if (params.exempt_one_sided && (region.synthesized_else || region.is_triangle())) return true;
  return alignment.normalized_score >= params.score_threshold;
}

bool has_safe_twin(const Instruction& inst) {
  if (is_binary(inst.op)) return true;
  switch (inst.op) {
    case Opcode::ICmp:
    case Opcode::Select:
    case Opcode::PtrAdd:
      return true;
    case Opcode::Load:
    case Opcode::Store:
      // Redirected to the 8-byte safe global.
      return byte_size(inst.type) <= kSafeGlobalSize;
    default:
      return false;
  }
}

bool can_complete_alignment(const Alignment& alignment, std::span<const Instruction> then_seq,
                            std::span<const Instruction> else_seq) {
  for (const auto& inst : then_seq)
    if (!has_safe_twin(inst)) return false;
  for (const auto& inst : else_seq)
    if (!has_safe_twin(inst)) return false;
  for (const auto& p : alignment.pairs) {
    if (p.is_match()) continue;
    if (p.left && *p.left >= then_seq.size()) return false;
    if (p.right && *p.right >= else_seq.size()) return false;
  }
  return true;
}

bool can_complete_alignment(const Alignment& alignment, const Function& function,
                            const DiamondRegion& region) {
  auto t = path_instructions(function, region.then_block, region);
  auto e = path_instructions(function, region.else_block, region);
  return can_complete_alignment(alignment, t, e);
}

}  // namespace meld
