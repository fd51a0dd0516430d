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

#ifndef LUEQUIV_TENSOR_CORE_HPP
#define LUEQUIV_TENSOR_CORE_HPP

#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "luequiv/errors.hpp"

namespace luequiv {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// Local dimensions (N_1, ..., N_M) of a multipartite Hilbert space.
class DimProfile {
 public:
  DimProfile() = default;

  explicit DimProfile(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.size() < 2) {
      throw ShapeError("DimProfile needs at least two subsystems, got " +
                       std::to_string(dims_.size()));
    }
    total_ = 1;
    for (int d : dims_) {
      if (d < 1) throw ShapeError("DimProfile: local dimension must be >= 1");
      total_ *= d;
    }
  }

  DimProfile(std::initializer_list<int> dims)
      : DimProfile(std::vector<int>(dims)) {}

  const std::vector<int>& dims() const noexcept { return dims_; }
  int parties() const noexcept { return static_cast<int>(dims_.size()); }
  int total() const noexcept { return total_; }
  int dim(int site) const { return dims_.at(static_cast<std::size_t>(site)); }

  // Product of the first `cut` local dimensions.
  int left(int cut) const {
    check_cut(cut);
    return std::accumulate(dims_.begin(), dims_.begin() + cut, 1,
                           std::multiplies<>());
  }
  int right(int cut) const { return total_ / left(cut); }

  void check_cut(int cut) const {
    if (cut < 1 || cut >= parties()) {
      throw ShapeError("cut " + std::to_string(cut) + " out of range [1, " +
                       std::to_string(parties() - 1) + "]");
    }
  }

  friend bool operator==(const DimProfile&, const DimProfile&) = default;

 private:
  std::vector<int> dims_;
  int total_ = 0;
};

inline std::string to_string(const DimProfile& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.dims().size(); ++i) {
    if (i) s += ",";
    s += std::to_string(p.dims()[i]);
  }
  return s + ")";
}

/// Row-major flattening: [a_11, ..., a_1N, a_21, ..., a_MN].
inline CVector vec(const CMatrix& a) {
  CVector v(a.size());
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) v(k++) = a(i, j);
  return v;
}

/// Inverse of vec for a rows x cols target.
inline CMatrix unvec(const CVector& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols) {
    throw ShapeError("unvec: length " + std::to_string(v.size()) +
                     " does not fill a " + std::to_string(rows) + "x" +
                     std::to_string(cols) + " matrix");
  }
  CMatrix a(rows, cols);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = v(k++);
  return a;
}

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Left-to-right Kronecker product of a non-empty factor list.
inline CMatrix kron_all(std::span<const CMatrix> factors) {
  if (factors.empty()) throw ShapeError("kron_all: empty factor list");
  CMatrix out = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) out = kron(out, factors[i]);
  return out;
}

struct CutRealignment {
  int cut = 0;
  CMatrix matrix;
};

/// Realignment of a (dl*dr) x (dl*dr) matrix across the left/right split:
/// out((I,I'), (J,J')) = z((I,J), (I',J')), composite indices row-major.
/// Row (I,I') of the result is vec of the (I,I') block of size dr x dr.
inline CMatrix realign(const CMatrix& z, int dl, int dr) {
  const Eigen::Index side = static_cast<Eigen::Index>(dl) * dr;
  if (z.rows() != side || z.cols() != side) {
    throw ShapeError("realign: expected a " + std::to_string(side) +
                     "x" + std::to_string(side) + " matrix, got " +
                     std::to_string(z.rows()) + "x" +
                     std::to_string(z.cols()));
  }
  CMatrix out(static_cast<Eigen::Index>(dl) * dl,
              static_cast<Eigen::Index>(dr) * dr);
  for (int i = 0; i < dl; ++i)
    for (int ip = 0; ip < dl; ++ip)
      for (int j = 0; j < dr; ++j)
        for (int jp = 0; jp < dr; ++jp)
          out(i * dl + ip, j * dr + jp) = z(i * dr + j, ip * dr + jp);
  return out;
}

/// Inverse index map of realign(z, dl, dr).
inline CMatrix unrealign(const CMatrix& r, int dl, int dr) {
  if (r.rows() != static_cast<Eigen::Index>(dl) * dl ||
      r.cols() != static_cast<Eigen::Index>(dr) * dr) {
    throw ShapeError("unrealign: shape does not match the split");
  }
  const Eigen::Index side = static_cast<Eigen::Index>(dl) * dr;
  CMatrix z(side, side);
  for (int i = 0; i < dl; ++i)
    for (int ip = 0; ip < dl; ++ip)
      for (int j = 0; j < dr; ++j)
        for (int jp = 0; jp < dr; ++jp)
          z(i * dr + j, ip * dr + jp) = r(i * dl + ip, j * dr + jp);
  return z;
}

/// Realignment across the sequential cut (1..cut | cut+1..M).
inline CutRealignment realign(const CMatrix& z, const DimProfile& profile,
                              int cut) {
  profile.check_cut(cut);
  if (z.rows() != profile.total() || z.cols() != profile.total()) {
    throw ShapeError("realign at cut " + std::to_string(cut) + ": matrix is " +
                     std::to_string(z.rows()) + "x" +
                     std::to_string(z.cols()) + " but profile " +
                     to_string(profile) + " needs side " +
                     std::to_string(profile.total()));
  }
  return {cut, realign(z, profile.left(cut), profile.right(cut))};
}

/// All M-1 sequential-cut realignments, cut = 1..M-1 in order.
inline std::vector<CutRealignment> realign_all(const CMatrix& z,
                                               const DimProfile& profile) {
  std::vector<CutRealignment> out;
  out.reserve(static_cast<std::size_t>(profile.parties() - 1));
  for (int k = 1; k < profile.parties(); ++k)
    out.push_back(realign(z, profile, k));
  return out;
}

inline CMatrix identity(Eigen::Index n) { return CMatrix::Identity(n, n); }

// ||A A^dag - I||_F
inline double unitarity_defect(const CMatrix& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  return (a * a.adjoint() - identity(a.rows())).norm();
}

inline double hermiticity_defect(const CMatrix& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  return (a - a.adjoint()).norm();
}

}  // namespace luequiv

#endif  // LUEQUIV_TENSOR_CORE_HPP
