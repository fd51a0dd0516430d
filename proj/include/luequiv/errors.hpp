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

#ifndef LUEQUIV_ERRORS_HPP
#define LUEQUIV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace luequiv {

// Inconsistent matrix shapes or dimension profiles.
class ShapeError : public std::invalid_argument {
 public:
  explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

// Input violates a numerical precondition (Hermiticity, unitarity, trace,
// positivity). `defect` carries the measured violation, e.g. ||H - H^dag||_F.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(const std::string& what, double defect)
      : std::invalid_argument(what), defect_(defect) {}
  double defect() const noexcept { return defect_; }

 private:
  double defect_;
};

}  // namespace luequiv

#endif  // LUEQUIV_ERRORS_HPP
