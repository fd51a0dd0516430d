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

#ifndef LUEQUIV_DENSITY_HPP
#define LUEQUIV_DENSITY_HPP

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "luequiv/errors.hpp"
#include "luequiv/tensor_core.hpp"

namespace luequiv {

inline constexpr double kTraceTol = 1e-8;
inline constexpr double kPositivityTol = 1e-8;

// Hermitian, positive semi-definite, unit-trace matrix on a multipartite space.
class DensityMatrix {
 public:
  DensityMatrix(CMatrix rho, DimProfile profile)
      : rho_(std::move(rho)), profile_(std::move(profile)) {
    validate();
  }

  /// Rescales by the trace first. Appends a note to `warnings` when the
  /// input trace is off by more than kTraceTol.
  static DensityMatrix normalized(CMatrix m, DimProfile profile,
                                  std::vector<std::string>* warnings = nullptr) {
    if (m.rows() != m.cols()) throw ShapeError("density matrix is not square");
    const Complex tr = m.trace();
    if (!(tr.real() > 0.0)) {
      throw ValidationError("density matrix has non-positive trace", tr.real());
    }
    if (std::abs(tr - Complex(1.0, 0.0)) > kTraceTol && warnings) {
      warnings->push_back("input trace " + std::to_string(tr.real()) +
                          " rescaled to 1");
    }
    m /= tr.real();
    return DensityMatrix(std::move(m), std::move(profile));
  }

  const CMatrix& matrix() const noexcept { return rho_; }
  const DimProfile& profile() const noexcept { return profile_; }
  Eigen::Index dimension() const noexcept { return rho_.rows(); }

 private:
  void validate() const {
    if (rho_.rows() != rho_.cols()) throw ShapeError("density matrix is not square");
    if (rho_.rows() != profile_.total()) {
      throw ShapeError("density matrix side " + std::to_string(rho_.rows()) +
                       " does not match profile " + to_string(profile_));
    }
    const double herm = hermiticity_defect(rho_);
    if (herm > 1e-10 * std::max(1.0, rho_.norm())) {
      throw ValidationError("density matrix is not Hermitian, ||rho - rho^dag||_F = " +
                                std::to_string(herm),
                            herm);
    }
    const Complex tr = rho_.trace();
    if (std::abs(tr - Complex(1.0, 0.0)) > kTraceTol) {
      throw ValidationError("density matrix trace is " + std::to_string(tr.real()) +
                                ", expected 1",
                            std::abs(tr - Complex(1.0, 0.0)));
    }
    const CMatrix sym = 0.5 * (rho_ + rho_.adjoint());
    const double lmin =
        Eigen::SelfAdjointEigenSolver<CMatrix>(sym, Eigen::EigenvaluesOnly)
            .eigenvalues()
            .minCoeff();
    if (lmin < -kPositivityTol) {
      throw ValidationError("density matrix has negative eigenvalue " +
                                std::to_string(lmin),
                            -lmin);
    }
  }

  CMatrix rho_;
  DimProfile profile_;
};

}  // namespace luequiv

#endif  // LUEQUIV_DENSITY_HPP
