// Copyright 2026 The covx Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "covx/numkernel.hpp"

namespace covx::cli {

inline constexpr int kExitTrue = 0;
inline constexpr int kExitFalse = 1;
inline constexpr int kExitError = 2;

enum class OutputMode { Json, Text };

struct RunConfig {
  Tolerances tol;
  std::uint64_t rng_seed = kDefaultSeed;
  OutputMode output = OutputMode::Json;
};

/// args excludes the program name. Exit 0 = verdict true or success,
/// 1 = verdict false, 2 = input or contract error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace covx::cli
