// Copyright 2026 The luequiv Authors
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

#ifndef LUEQUIV_MATRIX_IO_HPP
#define LUEQUIV_MATRIX_IO_HPP

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "luequiv/tensor_core.hpp"

namespace luequiv {

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Text (JSON) matrix file:
//   {"dims": [2, 2], "data": [[re, im], ...], "label": "...", "seed": 7}
// Entries are row-major. Without "shape" the matrix is square with side
// prod(dims); "shape": [rows, cols] allows non-square payloads.
struct MatrixFile {
  std::vector<int> dims;
  CMatrix data;
  std::optional<std::string> label;
  std::optional<std::uint64_t> seed;

  bool square_over_dims() const {
    long long side = 1;
    for (int d : dims) side *= d;
    return data.rows() == side && data.cols() == side;
  }
};

inline nlohmann::json to_json(const MatrixFile& mf) {
  nlohmann::json j;
  j["dims"] = mf.dims;
  if (!mf.square_over_dims()) j["shape"] = {mf.data.rows(), mf.data.cols()};
  nlohmann::json data = nlohmann::json::array();
  for (Eigen::Index r = 0; r < mf.data.rows(); ++r)
    for (Eigen::Index c = 0; c < mf.data.cols(); ++c)
      data.push_back({mf.data(r, c).real(), mf.data(r, c).imag()});
  j["data"] = std::move(data);
  if (mf.label) j["label"] = *mf.label;
  if (mf.seed) j["seed"] = *mf.seed;
  return j;
}

inline std::string dump_matrix_file(const MatrixFile& mf) { return to_json(mf).dump() + "\n"; }

inline MatrixFile matrix_file_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("matrix file: top level must be an object");
  if (!j.contains("dims") || !j["dims"].is_array() || j["dims"].empty()) {
    throw ParseError("matrix file: missing or empty \"dims\"");
  }
  MatrixFile mf;
  long long side = 1;
  for (const auto& d : j["dims"]) {
    if (!d.is_number_integer() || d.get<long long>() < 1) {
      throw ParseError("matrix file: dims must be positive integers");
    }
    mf.dims.push_back(d.get<int>());
    side *= d.get<long long>();
  }
  long long rows = side, cols = side;
  if (j.contains("shape")) {
    const auto& s = j["shape"];
    if (!s.is_array() || s.size() != 2 || !s[0].is_number_integer() ||
        !s[1].is_number_integer() || s[0].get<long long>() < 1 ||
        s[1].get<long long>() < 1) {
      throw ParseError("matrix file: \"shape\" must be [rows, cols]");
    }
    rows = s[0].get<long long>();
    cols = s[1].get<long long>();
  }
  if (!j.contains("data") || !j["data"].is_array()) {
    throw ParseError("matrix file: missing \"data\" array");
  }
  const auto& data = j["data"];
  if (static_cast<long long>(data.size()) != rows * cols) {
    throw ParseError("matrix file: data has " + std::to_string(data.size()) +
                     " entries, expected " + std::to_string(rows * cols));
  }
  mf.data.resize(rows, cols);
  std::size_t k = 0;
  for (long long r = 0; r < rows; ++r) {
    for (long long c = 0; c < cols; ++c, ++k) {
      const auto& e = data[k];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw ParseError("matrix file: entry " + std::to_string(k) +
                         " is not a [re, im] pair");
      }
      mf.data(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  if (j.contains("label") && j["label"].is_string()) mf.label = j["label"].get<std::string>();
  if (j.contains("seed") && j["seed"].is_number_unsigned()) {
    mf.seed = j["seed"].get<std::uint64_t>();
  }
  return mf;
}

inline MatrixFile parse_matrix_file(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("matrix file: ") + e.what());
  }
  return matrix_file_from_json(j);
}

inline MatrixFile read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_matrix_file(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline void write_matrix_file(const std::string& path, const MatrixFile& mf) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << dump_matrix_file(mf);
}

}  // namespace luequiv

#endif  // LUEQUIV_MATRIX_IO_HPP
