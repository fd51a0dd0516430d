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

#ifndef LUEQUIV_SPECTRAL_HPP
#define LUEQUIV_SPECTRAL_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "luequiv/errors.hpp"
#include "luequiv/tensor_core.hpp"

namespace luequiv {

// rho = X diag(eigenvalues) X^dag with eigenvalues non-increasing and column
// j of `basis` paired with eigenvalues(j).
struct Spectrum {
  RVector eigenvalues;
  CMatrix basis;

  Eigen::Index dimension() const noexcept { return eigenvalues.size(); }
  CMatrix reconstruct() const {
    return basis * eigenvalues.cast<Complex>().asDiagonal() * basis.adjoint();
  }
};

struct DegeneracyBlock {
  double eigenvalue = 0.0;  // mean of the grouped eigenvalues
  int multiplicity = 0;
  int offset = 0;  // first column of the block in Spectrum::basis
};

struct DegeneracyProfile {
  std::vector<DegeneracyBlock> blocks;
  int total = 0;

  bool non_degenerate() const noexcept {
    return std::all_of(blocks.begin(), blocks.end(),
                       [](const DegeneracyBlock& b) { return b.multiplicity == 1; });
  }
  int max_multiplicity() const noexcept {
    int m = 0;
    for (const auto& b : blocks) m = std::max(m, b.multiplicity);
    return m;
  }
  std::vector<int> sizes() const {
    std::vector<int> s;
    s.reserve(blocks.size());
    for (const auto& b : blocks) s.push_back(b.multiplicity);
    return s;
  }
};

struct RankOneReport {
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  double ratio = 0.0;
  bool is_rank_one = false;
};

namespace detail {

// Rotate v so its largest-magnitude entry is real and positive. Entries whose
// magnitudes agree to 1e-8 relative count as tied; the first one wins.
inline void normalize_phase(Eigen::Ref<CVector> v) {
  double vmax = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) vmax = std::max(vmax, std::abs(v(i)));
  if (vmax == 0.0) return;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) >= vmax * (1.0 - 1e-8)) {
      v *= std::conj(v(i)) / std::abs(v(i));
      v(i) = Complex(std::abs(v(i)), 0.0);
      return;
    }
  }
}

// Lexicographic "a > b" on (re, im) with a small dead band.
inline bool lex_greater(const CVector& a, const CVector& b) {
  constexpr double eps = 1e-12;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (std::abs(a(i).real() - b(i).real()) > eps) return a(i).real() > b(i).real();
    if (std::abs(a(i).imag() - b(i).imag()) > eps) return a(i).imag() > b(i).imag();
  }
  return false;
}

}  // namespace detail

/// Eigendecomposition of a Hermitian matrix with a deterministic gauge: each
/// eigenvector's largest entry is real positive, and numerically tied
/// eigenvalues are ordered by descending lexicographic eigenvector.
inline Spectrum eig_hermitian(const CMatrix& h) {
  if (h.rows() != h.cols()) throw ShapeError("eig_hermitian: matrix is not square");
  const double defect = hermiticity_defect(h);
  const double scale = std::max(1.0, h.norm());
  if (defect > 1e-10 * scale) {
    throw ValidationError(
        "eig_hermitian: matrix is not Hermitian, ||H - H^dag||_F = " +
            std::to_string(defect),
        defect);
  }
  const CMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eig_hermitian: eigensolver did not converge");
  }
  const Eigen::Index n = h.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const RVector& w = solver.eigenvalues();
  CMatrix vecs = solver.eigenvectors();
  for (Eigen::Index j = 0; j < n; ++j) detail::normalize_phase(vecs.col(j));

  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return w(a) > w(b); });
  const double tie = 1e-12 * std::max(1.0, w.cwiseAbs().maxCoeff());
  for (std::size_t start = 0; start < order.size();) {
    std::size_t end = start + 1;
    while (end < order.size() && w(order[end - 1]) - w(order[end]) <= tie) ++end;
    if (end - start > 1) {
      std::stable_sort(order.begin() + static_cast<std::ptrdiff_t>(start),
                       order.begin() + static_cast<std::ptrdiff_t>(end),
                       [&](Eigen::Index a, Eigen::Index b) {
                         return detail::lex_greater(vecs.col(a), vecs.col(b));
                       });
    }
    start = end;
  }

  Spectrum s;
  s.eigenvalues.resize(n);
  s.basis.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    s.eigenvalues(j) = w(order[static_cast<std::size_t>(j)]);
    s.basis.col(j) = vecs.col(order[static_cast<std::size_t>(j)]);
  }
  return s;
}

/// Groups consecutive eigenvalues whose gap is <= tol (absolute).
inline DegeneracyProfile degeneracy_profile(const Spectrum& s, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("degeneracy_profile: tol must be > 0");
  DegeneracyProfile p;
  p.total = static_cast<int>(s.dimension());
  const auto& w = s.eigenvalues;
  for (Eigen::Index i = 0; i < w.size();) {
    Eigen::Index j = i + 1;
    while (j < w.size() && w(j - 1) - w(j) <= tol) ++j;
    DegeneracyBlock b;
    b.offset = static_cast<int>(i);
    b.multiplicity = static_cast<int>(j - i);
    b.eigenvalue = w.segment(i, j - i).mean();
    p.blocks.push_back(b);
    i = j;
  }
  return p;
}

inline double spectral_distance(const Spectrum& s1, const Spectrum& s2) {
  if (s1.dimension() != s2.dimension()) {
    throw ShapeError("spectra have different dimensions (" +
                     std::to_string(s1.dimension()) + " vs " +
                     std::to_string(s2.dimension()) + ")");
  }
  if (s1.dimension() == 0) return 0.0;
  return (s1.eigenvalues - s2.eigenvalues).cwiseAbs().maxCoeff();
}

/// Sorted eigenvalues agree element-wise within tol.
inline bool spectra_match(const Spectrum& s1, const Spectrum& s2, double tol) {
  return spectral_distance(s1, s2) <= tol;
}

inline RVector singular_values(const CMatrix& m) {
  if (m.size() == 0) return RVector();
  if (std::min(m.rows(), m.cols()) <= 16) {
    Eigen::JacobiSVD<CMatrix> svd(m);
    return svd.singularValues();
  }
  Eigen::BDCSVD<CMatrix> svd(m);
  return svd.singularValues();
}

/// sigma2 <= tol * sigma1 and sigma1 > 0.
inline RankOneReport rank_one_test(const CMatrix& m, double tol) {
  if (!(tol > 0.0 && tol < 1.0)) {
    throw std::invalid_argument("rank_one_test: tol must lie in (0, 1)");
  }
  const RVector sv = singular_values(m);
  RankOneReport r;
  r.sigma1 = sv.size() > 0 ? sv(0) : 0.0;
  r.sigma2 = sv.size() > 1 ? sv(1) : 0.0;
  r.ratio = r.sigma1 > 0.0 ? r.sigma2 / r.sigma1 : 0.0;
  r.is_rank_one = r.sigma1 > 0.0 && r.sigma2 <= tol * r.sigma1;
  return r;
}

}  // namespace luequiv

#endif  // LUEQUIV_SPECTRAL_HPP
