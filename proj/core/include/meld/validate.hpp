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
#include <string>
#include <vector>

#include "meld/ir.hpp"

namespace meld {

/// Every violated structural invariant of the module, one human-readable line
/// each. An empty list means the module is well formed. Transformation passes
/// refuse modules for which this is non-empty.
std::vector<std::string> validate_module(const IRModule& module);

/// Same checks restricted to one function. Global references are resolved
/// against `module` when given.
std::vector<std::string> validate_function(const Function& function,
                                           const IRModule* module = nullptr);

struct DefUse {
  const Instruction* def = nullptr;
  std::vector<const Instruction*> uses;  // program order, one entry per user
};

/// Definition and users of every register defined in `function`. Pointers
/// refer into `function` and are invalidated by any mutation of it.
std::map<std::string, DefUse> def_use_map(const Function& function);

}  // namespace meld
