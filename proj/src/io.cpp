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

#include "covx/io.hpp"

#include <fstream>
#include <sstream>

namespace covx::io {

namespace {

const Json& unwrap_matrix(const Json& j) {
  if (!j.is_object()) throw ParseError("matrix: expected a JSON object");
  if (j.contains("rows")) return j;
  for (const char* key : {"maximizer", "witness", "matrix"}) {
    if (j.contains(key) && j[key].is_object()) return j[key];
  }
  throw ParseError("matrix: missing \"rows\"");
}

std::size_t positive_size(const Json& j, const char* key, const char* what) {
  if (!j.contains(key)) throw ParseError(std::string(what) + ": missing \"" + key + "\"");
  const Json& v = j[key];
  if (!v.is_number_integer() || v.get<long long>() <= 0) {
    throw ParseError(std::string(what) + ": \"" + key + "\" must be a positive integer");
  }
  return v.get<std::size_t>();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(source + ": parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

Json load_json(const std::string& path) { return parse_json(read_file(path), path); }

Json matrix_to_json(const ComplexMatrix& m) {
  Json data = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back({m(i, j).real(), m(i, j).imag()});
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

ComplexMatrix matrix_from_json(const Json& jin) {
  const Json& j = unwrap_matrix(jin);
  const std::size_t rows = positive_size(j, "rows", "matrix");
  const std::size_t cols = positive_size(j, "cols", "matrix");
  if (!j.contains("data") || !j["data"].is_array()) throw ParseError("matrix: missing \"data\" array");
  const Json& data = j["data"];
  if (data.size() != rows * cols) {
    throw ParseError("matrix: \"data\" has " + std::to_string(data.size()) + " entries, expected " +
                     std::to_string(rows * cols));
  }
  ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t idx = 0; idx < data.size(); ++idx) {
    const Json& e = data[idx];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw ParseError("matrix: entry " + std::to_string(idx) + " is not a [re, im] pair");
    }
    m(static_cast<Eigen::Index>(idx / cols), static_cast<Eigen::Index>(idx % cols)) =
        Complex(e[0].get<double>(), e[1].get<double>());
  }
  return m;
}

ComplexMatrix load_matrix(const std::string& path) {
  try {
    return matrix_from_json(load_json(path));
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    if (msg.rfind(path, 0) == 0) throw;
    throw ParseError(path + ": " + msg);
  }
}

Json representation_to_json(const Representation& r) {
  return std::visit(
      [](const auto& k) -> Json {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, U1Weights>) {
          return Json{{"type", "u1_weights"}, {"weights", k.weights}};
        } else if constexpr (std::is_same_v<T, FiniteGroup>) {
          Json us = Json::array();
          for (const auto& u : k.unitaries) us.push_back(matrix_to_json(u));
          return Json{{"type", "finite"}, {"unitaries", std::move(us)}};
        } else {
          return Json{{"type", "su_d_tensor"},
                      {"d", k.d},
                      {"variant", k.variant == SudVariant::UUstar ? "u_ustar" : "ustar_ustar"}};
        }
      },
      r.kind());
}

Representation representation_from_json(const Json& j, double tol) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
    throw ParseError("representation: missing \"type\"");
  }
  const std::string type = j["type"].get<std::string>();
  if (type == "u1_weights") {
    if (!j.contains("weights") || !j["weights"].is_array() || j["weights"].empty()) {
      throw ParseError("representation: \"weights\" must be a non-empty array");
    }
    std::vector<int> w;
    for (const auto& e : j["weights"]) {
      if (!e.is_number_integer()) throw ParseError("representation: weights must be integers");
      w.push_back(e.get<int>());
    }
    return Representation::u1(std::move(w));
  }
  if (type == "finite") {
    if (!j.contains("unitaries") || !j["unitaries"].is_array() || j["unitaries"].empty()) {
      throw ParseError("representation: \"unitaries\" must be a non-empty array");
    }
    std::vector<ComplexMatrix> us;
    for (const auto& e : j["unitaries"]) us.push_back(matrix_from_json(e));
    return Representation::finite(std::move(us), tol);
  }
  if (type == "su_d_tensor") {
    const std::size_t d = positive_size(j, "d", "representation");
    if (!j.contains("variant") || !j["variant"].is_string()) {
      throw ParseError("representation: missing \"variant\"");
    }
    const std::string v = j["variant"].get<std::string>();
    if (v == "u_ustar") return Representation::su_d_tensor(d, SudVariant::UUstar);
    if (v == "ustar_ustar") return Representation::su_d_tensor(d, SudVariant::UstarUstar);
    throw ParseError("representation: unknown variant \"" + v + "\"");
  }
  throw ParseError("representation: unknown type \"" + type + "\"");
}

Representation load_representation(const std::string& path, double tol) {
  try {
    return representation_from_json(load_json(path), tol);
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    if (msg.rfind(path, 0) == 0) throw;
    throw ParseError(path + ": " + msg);
  }
}

Json channel_to_json(const ChoiOperator& r) {
  Json j = matrix_to_json(r.matrix());
  j["dim_in"] = r.dim_in();
  j["dim_out"] = r.dim_out();
  return j;
}

ChoiOperator channel_from_json(const Json& j) {
  const ComplexMatrix m = matrix_from_json(j);
  const Json& inner = unwrap_matrix(j);
  const Json& hdr = inner.contains("dim_in") ? inner : j;
  const std::size_t din = positive_size(hdr, "dim_in", "channel");
  const std::size_t dout = positive_size(hdr, "dim_out", "channel");
  return ChoiOperator(m, din, dout);
}

ChoiOperator load_channel(const std::string& path) {
  try {
    return channel_from_json(load_json(path));
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    if (msg.rfind(path, 0) == 0) throw;
    throw ParseError(path + ": " + msg);
  }
}

Json decomposition_to_json(const IsotypicDecomposition& dec, bool with_isometries) {
  Json blocks = Json::array();
  for (const auto& b : dec.blocks) {
    Json e{{"label", b.label}, {"irrep_dim", b.irrep_dim}, {"multiplicity", b.multiplicity}};
    if (with_isometries) e["isometry"] = matrix_to_json(b.isometry);
    blocks.push_back(std::move(e));
  }
  return Json{{"carrier_dim", dec.carrier_dim},
              {"sum_multiplicity_squares", dec.sum_multiplicity_squares()},
              {"blocks", std::move(blocks)}};
}

Json report_to_json(const ExtremalityReport& rep) {
  Json j{{"verdict", rep.is_extremal ? "extremal" : "not_extremal"},
         {"rank", rep.rank},
         {"span_achieved", rep.span_achieved},
         {"span_required", rep.span_required},
         {"bound_ok", rep.necessary_bound_ok},
         {"last_kept_rel", rep.last_kept_rel},
         {"first_dropped_rel", rep.first_dropped_rel}};
  if (rep.witness) j["witness"] = matrix_to_json(*rep.witness);
  if (rep.witness_step) j["witness_step"] = *rep.witness_step;
  return j;
}

}  // namespace covx::io
