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

// Whole-module driver: per function, collect branches, transform the first
// that passes the gates, and repeat until nothing changes.
//
// Exit codes: 0 success, 1 usage or I/O error, 2 parse or validation failure,
// 3 differential check found a counterexample.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "meld/alignment.hpp"
#include "meld/ir.hpp"
#include "meld/region.hpp"

namespace meld {

enum class Mode { Meld, IfConv, Both, Check };

std::string_view mode_name(Mode m);
std::optional<Mode> parse_mode(std::string_view s);

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitCounterexample = 3;

inline constexpr int kReportSchemaVersion = 1;

struct RunConfig {
  std::vector<std::string> inputs;
  std::optional<std::string> output;
  std::optional<std::string> report_path;
  FilterSpec filters;
  AlignmentParams params;
  Mode mode = Mode::Meld;
  std::size_t trials = 100;  // differential trials in check mode, profile inputs otherwise
  std::uint64_t seed = 0;
  std::size_t max_block_size = 64;
  bool peephole = true;

  std::vector<std::string> problems() const;
};

struct ModuleResult {
  IRModule module;          // transformed
  std::string report_json;  // one module's report object
  std::size_t regions_transformed = 0;
  std::vector<std::string> counterexamples;  // check mode, one line each
};

/// Runs the configured mode over one parsed module. `file_name` is used for
/// file filters when a function carries no source attribute.
ModuleResult process_module(const IRModule& module, const std::string& file_name,
                            const RunConfig& config);

struct PipelineResult {
  int exit_code = kExitOk;
  std::vector<std::string> outputs;  // printed modules, parallel to inputs
  std::string report_json;
  std::vector<std::string> diagnostics;
  std::size_t regions_transformed = 0;
};

/// Reads the inputs, processes each, and writes the output module and report
/// files named in `config`.
PipelineResult run_pipeline(const RunConfig& config);

/// Parses the line-filter format: an object mapping file names to arrays of
/// line numbers. Throws std::runtime_error on malformed input.
std::map<std::string, std::set<int>> parse_line_filter_json(const std::string& text);

}  // namespace meld
