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

#include "meld/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "meld/ifconv.hpp"
#include "meld/interpreter.hpp"
#include "meld/ir_text.hpp"
#include "meld/melding.hpp"
#include "meld/metrics.hpp"

namespace meld {

using json = nlohmann::ordered_json;

std::string_view mode_name(Mode m) {
  switch (m) {
    case Mode::Meld: return "meld";
    case Mode::IfConv: return "ifconv";
    case Mode::Both: return "both";
    case Mode::Check: return "check";
  }
  return "?";
}

std::optional<Mode> parse_mode(std::string_view s) {
  for (Mode m : {Mode::Meld, Mode::IfConv, Mode::Both, Mode::Check})
    if (mode_name(m) == s) return m;
  return std::nullopt;
}

std::vector<std::string> RunConfig::problems() const {
  std::vector<std::string> out = filters.problems();
  if (inputs.empty()) out.push_back("no input files");
  if (output && inputs.size() > 1) out.push_back("--output needs exactly one input");
  if (mode == Mode::Check && trials == 0) out.push_back("check mode needs --trials > 0");
  if (max_block_size == 0) out.push_back("--max-block-size must be positive");
  return out;
}

namespace {

json params_json(const RunConfig& c) {
  return {{"match_bonus", c.params.match_bonus},
          {"gap_penalty", c.params.gap_penalty},
          {"score_threshold", c.params.score_threshold},
          {"threshold_one_sided", !c.params.exempt_one_sided},
          {"max_block_size", c.max_block_size},
          {"peephole", c.peephole},
          {"trials", c.trials},
          {"seed", c.seed}};
}

json region_json(const Function& fn, const DiamondRegion& r) {
  json j = {{"id", fn.name + ":" + r.head_block},
            {"head", r.head_block},
            {"then", r.then_block},
            {"else", r.else_block},
            {"merge", r.merge_block},
            {"shape", r.is_triangle() ? "triangle" : "diamond"}};
  j["line"] = r.branch_line ? json(*r.branch_line) : json(nullptr);
  return j;
}

json meld_json(const MeldReport& m) {
  return {{"transformed", m.transformed},
          {"reason_if_skipped", m.reason_if_skipped},
          {"selects_added", m.selects_added},
          {"instructions_before", m.instructions_before},
          {"instructions_after", m.instructions_after},
          {"region_ops_before", m.region_ops_before},
          {"region_ops_after", m.region_ops_after},
          {"extraneous_added", m.extraneous_added},
          {"num_matches", m.num_matches},
          {"num_gaps", m.num_gaps},
          {"raw_score", m.raw_score},
          {"normalized_score", m.normalized_score}};
}

json ifconv_json(const IfConvReport& r) {
  return {{"transformed", r.transformed},
          {"ops_after", r.ops_after},
          {"selects_added", r.selects_added},
          {"instructions_after", r.instructions_after},
          {"reason_if_skipped", r.reason_if_skipped}};
}

json dynamics_json(const VariantDynamics& d) {
  return {{"runs", d.runs},
          {"cond_branches", d.cond_branches},
          {"total_instructions", d.total_instructions},
          {"selects", d.selects},
          {"traps", d.traps},
          {"fuel_exhausted", d.fuel_exhausted}};
}

json comparison_json(const RegionComparison& c) {
  json j;
  j["static_ops"] = {{"original", c.original_ops},
                     {"melded", c.melded_ops},
                     {"if_converted", c.if_converted_ops}};
  j["region_ops"] = {{"original", c.original_region_ops},
                     {"melded", c.melded_region_ops},
                     {"if_converted", c.if_converted_region_ops}};
  j["selects"] = {{"melded", c.melded_selects}, {"if_converted", c.if_converted_selects}};
  j["transformed"] = {{"melded", c.melded_transformed},
                      {"if_converted", c.if_converted_transformed}};
  j["dynamic"] = {{"original", dynamics_json(c.original_dynamic)}};
  if (c.melded_transformed) j["dynamic"]["melded"] = dynamics_json(c.melded_dynamic);
  if (c.if_converted_transformed) j["dynamic"]["if_converted"] = dynamics_json(c.if_converted_dynamic);
  return j;
}

std::string region_key(const DiamondRegion& r) {
  return r.head_block + "|" + r.then_block + "|" + r.else_block + "|" + r.merge_block;
}

// Baseline-only fixpoint over every admitted function, for --mode=both.
json baseline_module_totals(const IRModule& module, const std::string& file_name,
                            const RunConfig& config) {
  IRModule copy = module;
  std::size_t transformed = 0, ops_before = 0, ops_after = 0;
  for (auto& fn : copy.functions) {
    ops_before += count_ops(fn);
    RegionOptions opts{config.max_block_size, file_name};
    std::set<std::string> rejected;
    for (;;) {
      std::optional<DiamondRegion> next;
      for (auto& r : collect_valid_branches(fn, config.filters, opts))
        if (!rejected.contains(region_key(r))) {
          next = r;
          break;
        }
      if (!next) break;
      if (if_convert_region(fn, *next).transformed) ++transformed;
      else rejected.insert(region_key(*next));
    }
    ops_after += count_ops(fn);
  }
  return {{"regions_transformed", transformed}, {"ops_before", ops_before}, {"ops_after", ops_after}};
}

}  // namespace

ModuleResult process_module(const IRModule& module, const std::string& file_name,
                            const RunConfig& config) {
  ModuleResult result;
  result.module = module;
  const MeldOptions meld_options{config.params, config.peephole};
  const bool baseline_output = config.mode == Mode::IfConv;

  json report;
  report["schema_version"] = kReportSchemaVersion;
  report["module"] = file_name;
  report["mode"] = mode_name(config.mode);
  report["params"] = params_json(config);
  report["functions"] = json::array();

  json totals = {{"regions", 0},       {"transformed", 0}, {"rejected", 0},
                 {"filtered", 0},      {"selects_added", 0}, {"ops_before", 0},
                 {"ops_after", 0},     {"cond_branches_before", 0}, {"cond_branches_after", 0}};
  auto bump = [](json& j, const char* k, std::size_t v) { j[k] = j[k].get<std::size_t>() + v; };

  for (std::size_t fi = 0; fi < result.module.functions.size(); ++fi) {
    Function& fn = result.module.functions[fi];
    const std::string file = fn.source_file.value_or(file_name);
    const RegionOptions opts{config.max_block_size, file_name};

    json fj;
    fj["name"] = fn.name;
    fj["filtered"] = !config.filters.admits_function(fn, file);
    fj["regions"] = json::array();
    json ft = {{"regions", 0},   {"transformed", 0},   {"rejected", 0},
               {"filtered", 0},  {"selects_added", 0}, {"ops_before", count_ops(fn)},
               {"ops_after", 0}, {"cond_branches_before", count_opcode(fn, Opcode::BrCond)},
               {"cond_branches_after", 0}};

    for (const auto& r : collect_valid_branches(fn, FilterSpec{}, opts)) {
      if (config.filters.admits_branch(fn, file, r.branch_line)) continue;
      json row = region_json(fn, r);
      row["status"] = "filtered";
      fj["regions"].push_back(std::move(row));
      bump(ft, "filtered", 1);
    }

    std::vector<std::vector<ArgValue>> inputs;
    {
      InputGenerator gen = default_input_generator(fn.params);
      std::mt19937_64 rng(config.seed + fi);
      for (std::size_t t = 0; t < config.trials; ++t) inputs.push_back(gen(rng));
    }

    std::set<std::string> rejected;
    bool changed = false;
    for (;;) {
      std::optional<DiamondRegion> next;
      for (auto& r : collect_valid_branches(fn, config.filters, opts))
        if (!rejected.contains(region_key(r))) {
          next = r;
          break;
        }
      if (!next) break;

      json row = region_json(fn, *next);
      RegionComparison cmp = compare_region(result.module, fn.name, *next, inputs, meld_options);
      bool transformed = false;
      std::size_t selects = 0;
      std::string reason;
      if (baseline_output) {
        IfConvReport rep = if_convert_region(fn, *next);
        transformed = rep.transformed;
        selects = rep.selects_added;
        reason = rep.reason_if_skipped;
        row["meld"] = meld_json(cmp.meld);
        row["baseline"] = ifconv_json(rep);
      } else {
        MeldReport rep = meld_region(result.module, fn, *next, meld_options);
        transformed = rep.transformed;
        selects = rep.selects_added;
        reason = rep.reason_if_skipped;
        row["meld"] = meld_json(rep);
        row["baseline"] = ifconv_json(cmp.ifconv);
      }
      row["status"] = transformed ? "transformed" : "rejected";
      if (!transformed) row["reason"] = reason;
      row["comparison"] = comparison_json(cmp);
      fj["regions"].push_back(std::move(row));
      bump(ft, "regions", 1);
      if (transformed) {
        changed = true;
        bump(ft, "transformed", 1);
        bump(ft, "selects_added", selects);
        ++result.regions_transformed;
      } else {
        bump(ft, "rejected", 1);
        rejected.insert(region_key(*next));
      }
    }
    if (changed) simplify(fn, SimplifyOptions{false, nullptr});

    ft["ops_after"] = count_ops(fn);
    ft["cond_branches_after"] = count_opcode(fn, Opcode::BrCond);
    for (const char* k : {"regions", "transformed", "rejected", "filtered", "selects_added",
                          "ops_before", "ops_after", "cond_branches_before", "cond_branches_after"})
      bump(totals, k, ft[k].get<std::size_t>());
    fj["totals"] = std::move(ft);

    if (config.mode == Mode::Check) {
      Verdict v = differential_check(module, result.module, fn.name,
                                     default_input_generator(fn.params), config.trials,
                                     config.seed + fi);
      json cj = {{"equivalent", v.equivalent},
                 {"trials_run", v.trials_run},
                 {"trials_skipped", v.trials_skipped}};
      if (v.counterexample) {
        cj["counterexample"] = {{"args", format_args(v.counterexample->args)},
                                {"divergence", v.counterexample->divergence}};
        result.counterexamples.push_back("@" + fn.name + " " +
                                         format_args(v.counterexample->args) + ": " +
                                         v.counterexample->divergence);
      }
      fj["check"] = std::move(cj);
    }
    report["functions"].push_back(std::move(fj));
  }

  report["totals"] = std::move(totals);
  if (config.mode == Mode::Both) report["baseline_totals"] = baseline_module_totals(module, file_name, config);
  result.report_json = report.dump(2);
  return result;
}

std::map<std::string, std::set<int>> parse_line_filter_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(std::string("line filter: ") + e.what());
  }
  if (!j.is_object()) throw std::runtime_error("line filter: expected an object");
  std::map<std::string, std::set<int>> out;
  for (const auto& [file, lines] : j.items()) {
    if (!lines.is_array())
      throw std::runtime_error("line filter: \"" + file + "\" must map to an array");
    auto& set = out[file];
    for (const auto& l : lines) {
      if (!l.is_number_integer())
        throw std::runtime_error("line filter: \"" + file + "\" has a non-integer line");
      set.insert(l.get<int>());
    }
  }
  return out;
}

namespace {

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

}  // namespace

PipelineResult run_pipeline(const RunConfig& config) {
  PipelineResult result;
  if (auto problems = config.problems(); !problems.empty()) {
    result.diagnostics = std::move(problems);
    result.exit_code = kExitUsage;
    return result;
  }

  std::vector<std::string> reports;
  std::vector<std::string> counterexamples;
  for (const auto& path : config.inputs) {
    auto text = read_file(path);
    if (!text) {
      result.diagnostics.push_back(path + ": cannot read file");
      result.exit_code = kExitUsage;
      return result;
    }
    IRModule module;
    try {
      module = parse_module(*text);
    } catch (const ParseError& e) {
      result.diagnostics.push_back(path + ":" + e.what());
      result.exit_code = kExitParse;
      return result;
    }
    const std::string name = std::filesystem::path(path).filename().string();
    ModuleResult mr = process_module(module, name, config);
    result.outputs.push_back(print_module(mr.module));
    reports.push_back(std::move(mr.report_json));
    result.regions_transformed += mr.regions_transformed;
    for (auto& c : mr.counterexamples) counterexamples.push_back(path + ": counterexample in " + c);
  }

  if (reports.size() == 1) {
    result.report_json = reports[0];
  } else {
    json all = {{"schema_version", kReportSchemaVersion}, {"modules", json::array()}};
    for (const auto& r : reports) all["modules"].push_back(json::parse(r));
    result.report_json = all.dump(2);
  }

  if (config.output && !write_file(*config.output, result.outputs[0])) {
    result.diagnostics.push_back(*config.output + ": cannot write file");
    result.exit_code = kExitUsage;
    return result;
  }
  if (config.report_path && !write_file(*config.report_path, result.report_json + "\n")) {
    result.diagnostics.push_back(*config.report_path + ": cannot write file");
    result.exit_code = kExitUsage;
    return result;
  }
  if (!counterexamples.empty()) {
    result.diagnostics.insert(result.diagnostics.end(), counterexamples.begin(),
                              counterexamples.end());
    result.exit_code = kExitCounterexample;
  }
  return result;
}

}  // namespace meld
