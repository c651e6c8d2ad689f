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

// JSON file formats.
//
//   matrix:  {"rows": n, "cols": m, "data": [[re, im], ...]}  (row-major)
//   channel: a matrix object with extra "dim_in" and "dim_out" fields
//   rep:     {"type": "u1_weights", "weights": [...]}
//          | {"type": "finite", "unitaries": [matrix, ...]}
//          | {"type": "su_d_tensor", "d": n, "variant": "u_ustar" | "ustar_ustar"}
//
// Report objects that carry a matrix under "maximizer", "witness" or
// "matrix" are accepted wherever a matrix is expected.

#pragma once

#include <string>

#include <json.hpp>

#include "covx/channels.hpp"
#include "covx/numkernel.hpp"
#include "covx/povm.hpp"
#include "covx/reps.hpp"

namespace covx::io {

using Json = nlohmann::json;

/// Parses text; ParseError messages carry the byte offset and `source`.
Json parse_json(const std::string& text, const std::string& source = "<input>");
Json load_json(const std::string& path);

Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);
ComplexMatrix load_matrix(const std::string& path);

Json representation_to_json(const Representation& r);
Representation representation_from_json(const Json& j, double tol = kDefaultTol);
Representation load_representation(const std::string& path, double tol = kDefaultTol);

Json channel_to_json(const ChoiOperator& r);
ChoiOperator channel_from_json(const Json& j);
ChoiOperator load_channel(const std::string& path);

Json decomposition_to_json(const IsotypicDecomposition& dec, bool with_isometries = false);
Json report_to_json(const ExtremalityReport& rep);

}  // namespace covx::io
