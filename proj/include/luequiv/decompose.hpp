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

#ifndef LUEQUIV_DECOMPOSE_HPP
#define LUEQUIV_DECOMPOSE_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "luequiv/errors.hpp"
#include "luequiv/spectral.hpp"
#include "luequiv/tensor_core.hpp"

namespace luequiv {

// Bound on ||U U^dag - I||_F for inputs and outputs of the factorization.
inline constexpr double kUnitarityTol = 1e-8;

class NotDecomposable : public std::runtime_error {
 public:
  NotDecomposable(const std::string& what, int cut, RankOneReport report)
      : std::runtime_error(what), cut_(cut), report_(report) {}
  // Sequential cut that failed; 0 when the failure is the final residual.
  int cut() const noexcept { return cut_; }
  const RankOneReport& report() const noexcept { return report_; }

 private:
  int cut_;
  RankOneReport report_;
};

struct DecomposabilityReport {
  bool decomposable = false;
  std::vector<RankOneReport> cuts;  // cuts[k - 1] belongs to cut k

  double max_ratio() const {
    double m = 0.0;
    for (const auto& r : cuts) m = std::max(m, r.ratio);
    return m;
  }
  // First failing cut (1-based), or 0 if every cut passes.
  int first_failing_cut() const {
    for (std::size_t k = 0; k < cuts.size(); ++k)
      if (!cuts[k].is_rank_one) return static_cast<int>(k) + 1;
    return 0;
  }
};

struct FactorSet {
  std::vector<CMatrix> factors;
  double residual = 0.0;  // ||kron(factors) - v||_F

  CMatrix product() const { return kron_all(factors); }
};

struct FactorPair {
  CMatrix left;
  CMatrix right;
  RankOneReport report;
};

/// Closest unitary in Frobenius norm (polar factor).
inline CMatrix nearest_unitary(const CMatrix& a) {
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

namespace detail {

inline void require_unitary(const CMatrix& v, const char* where) {
  const double defect = unitarity_defect(v);
  if (!(defect <= kUnitarityTol)) {
    throw ValidationError(std::string(where) +
                              ": input is not unitary, ||V V^dag - I||_F = " +
                              std::to_string(defect),
                          defect);
  }
}

// Index of the largest-magnitude entry in row-major order; near-ties go to
// the earliest entry.
inline std::pair<Eigen::Index, Eigen::Index> dominant_entry(const CMatrix& a) {
  const double amax = a.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (std::abs(a(i, j)) >= amax * (1.0 - 1e-8)) return {i, j};
  return {0, 0};
}

}  // namespace detail

/// Rank-one test at every sequential cut. Requires a unitary input.
inline DecomposabilityReport is_decomposable(const CMatrix& v,
                                             const DimProfile& profile,
                                             double tol) {
  if (v.rows() != profile.total() || v.cols() != profile.total()) {
    throw ShapeError("is_decomposable: matrix side " + std::to_string(v.rows()) +
                     " does not match profile " + to_string(profile));
  }
  detail::require_unitary(v, "is_decomposable");
  DecomposabilityReport out;
  out.decomposable = true;
  for (const auto& cr : realign_all(v, profile)) {
    out.cuts.push_back(rank_one_test(cr.matrix, tol));
    out.decomposable = out.decomposable && out.cuts.back().is_rank_one;
  }
  return out;
}

/// Splits a unitary u ~ U1 (x) U2 with U1 of side dim_left. Both factors are
/// returned unitary; the left factor's dominant entry is real positive and
/// the compensating phase sits in the right factor.
inline FactorPair factor_pair(const CMatrix& u, int dim_left, int dim_right,
                              double tol) {
  if (dim_left < 1 || dim_right < 1 ||
      u.rows() != static_cast<Eigen::Index>(dim_left) * dim_right ||
      u.cols() != u.rows()) {
    throw ShapeError("factor_pair: " + std::to_string(u.rows()) + "x" +
                     std::to_string(u.cols()) + " matrix cannot split as " +
                     std::to_string(dim_left) + " x " + std::to_string(dim_right));
  }
  detail::require_unitary(u, "factor_pair");
  const CMatrix r = realign(u, dim_left, dim_right);
  Eigen::JacobiSVD<CMatrix> svd(r, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& sv = svd.singularValues();
  FactorPair out;
  out.report.sigma1 = sv(0);
  out.report.sigma2 = sv.size() > 1 ? sv(1) : 0.0;
  out.report.ratio = out.report.sigma1 > 0.0 ? out.report.sigma2 / out.report.sigma1 : 0.0;
  out.report.is_rank_one = out.report.sigma1 > 0.0 && out.report.sigma2 <= tol * out.report.sigma1;
  if (!out.report.is_rank_one) {
    throw NotDecomposable("factor_pair: realignment is not rank one (sigma2/sigma1 = " +
                              std::to_string(out.report.ratio) + ")",
                          1, out.report);
  }

  CMatrix a = unvec(svd.matrixU().col(0), dim_left, dim_left);
  CMatrix b = unvec(sv(0) * svd.matrixV().col(0).conjugate(), dim_right, dim_right);
  // Scale s minimizing ||s^2 A A^dag - I||_F; a unitary rank-one input makes
  // A A^dag a multiple of the identity, which is the freedom k > 0 of a split.
  const CMatrix gram = a * a.adjoint();
  const double s2 = gram.trace().real() / gram.squaredNorm();
  const double s = std::sqrt(s2);
  a *= s;
  b /= s;
  const auto [pi, pj] = detail::dominant_entry(a);
  const Complex phase = std::conj(a(pi, pj)) / std::abs(a(pi, pj));
  a *= phase;
  b *= std::conj(phase);
  out.left = nearest_unitary(a);
  out.right = nearest_unitary(b);
  return out;
}

/// Peels U1, U2, ... off a decomposable unitary left to right.
inline FactorSet factor_full(const CMatrix& v, const DimProfile& profile,
                             double tol) {
  if (v.rows() != profile.total() || v.cols() != profile.total()) {
    throw ShapeError("factor_full: matrix side " + std::to_string(v.rows()) +
                     " does not match profile " + to_string(profile));
  }
  detail::require_unitary(v, "factor_full");
  FactorSet fs;
  CMatrix rest = v;
  int remaining = profile.total();
  for (int site = 0; site + 1 < profile.parties(); ++site) {
    const int dl = profile.dim(site);
    remaining /= dl;
    try {
      FactorPair fp = factor_pair(rest, dl, remaining, tol);
      fs.factors.push_back(std::move(fp.left));
      rest = std::move(fp.right);
    } catch (const NotDecomposable& e) {
      throw NotDecomposable("factor_full: cut " + std::to_string(site + 1) +
                                " is not rank one (sigma2/sigma1 = " +
                                std::to_string(e.report().ratio) + ")",
                            site + 1, e.report());
    }
  }
  fs.factors.push_back(std::move(rest));
  fs.residual = (fs.product() - v).norm();
  if (!(fs.residual < tol * v.norm())) {
    throw NotDecomposable("factor_full: residual " + std::to_string(fs.residual) +
                              " exceeds tolerance",
                          0, RankOneReport{});
  }
  return fs;
}

}  // namespace luequiv

#endif  // LUEQUIV_DECOMPOSE_HPP
