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

// meld: branch melding driver for .mir modules.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "meld/pipeline.hpp"

namespace {

std::set<std::string> split_list(const std::string& s) {
  std::set<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.insert(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Branch melding for .mir modules"};
  app.set_version_flag("--version", "meld 0.1.0");

  meld::RunConfig config;
  std::vector<std::string> positionals;
  std::string mode = "meld";
  std::string include_funcs, exclude_funcs, exclude_files, include_lines;
  bool threshold_one_sided = false;
  std::string peephole = "on";

  app.add_option("inputs", positionals, "[MODE] FILE.mir ...")->required();
  app.add_option("--mode", mode, "meld, ifconv, both or check")
      ->check(CLI::IsMember({"meld", "ifconv", "both", "check"}));
  app.add_option("-o,--output", config.output, "Write the transformed module here");
  app.add_option("--report", config.report_path, "Write the JSON report here");
  app.add_option("--include-func-names", include_funcs, "Only transform these functions (comma list)");
  app.add_option("--exclude-func-names", exclude_funcs, "Never transform these functions (comma list)");
  app.add_option("--exclude-file-names", exclude_files, "Never transform functions from these files");
  app.add_option("--json-include-lines", include_lines,
                 "JSON file mapping file names to line arrays; only those branches are transformed");
  app.add_option("--match-bonus", config.params.match_bonus, "Score for an aligned pair")
      ->capture_default_str();
  app.add_option("--gap-penalty", config.params.gap_penalty, "Penalty for an unaligned instruction")
      ->capture_default_str();
  app.add_option("--score-threshold", config.params.score_threshold,
                 "Minimum normalized alignment score")
      ->capture_default_str();
  app.add_flag("--threshold-one-sided", threshold_one_sided,
               "Apply the score threshold to if-then regions too");
  app.add_option("--max-block-size", config.max_block_size, "Largest path block considered")
      ->capture_default_str();
  app.add_option("--trials", config.trials, "Random inputs for check mode and profiling")
      ->capture_default_str();
  app.add_option("--seed", config.seed, "Random seed")->capture_default_str();
  app.add_option("--peephole", peephole, "Fold identity arithmetic after melding (on/off)")
      ->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? meld::kExitOk : meld::kExitUsage;
  }

  // `meld check prog.mir` is accepted as a shorthand for --mode=check.
  if (!positionals.empty() && meld::parse_mode(positionals.front())) {
    mode = positionals.front();
    positionals.erase(positionals.begin());
  }
  config.inputs = positionals;
  config.mode = *meld::parse_mode(mode);
  config.peephole = peephole == "on";
  config.params.exempt_one_sided = !threshold_one_sided;
  if (!include_funcs.empty()) config.filters.include_funcs = split_list(include_funcs);
  config.filters.exclude_funcs = split_list(exclude_funcs);
  config.filters.exclude_files = split_list(exclude_files);
  if (!include_lines.empty()) {
    std::ifstream in(include_lines);
    if (!in) {
      std::cerr << "meld: " << include_lines << ": cannot read file\n";
      return meld::kExitUsage;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      config.filters.include_lines = meld::parse_line_filter_json(ss.str());
    } catch (const std::exception& e) {
      std::cerr << "meld: " << include_lines << ": " << e.what() << '\n';
      return meld::kExitUsage;
    }
  }

  meld::PipelineResult result = meld::run_pipeline(config);
  for (const auto& d : result.diagnostics) std::cerr << "meld: " << d << '\n';
  if (result.exit_code == meld::kExitOk || result.exit_code == meld::kExitCounterexample) {
    if (!config.output)
      for (const auto& text : result.outputs) std::cout << text;
    std::cerr << "meld: " << result.regions_transformed << " region(s) transformed\n";
  }
  return result.exit_code;
}
