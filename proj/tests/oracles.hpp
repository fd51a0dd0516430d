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

// Reference implementations used only by the tests. These deliberately avoid
// the library's index helpers: everything is spelled out with digit loops.

#ifndef LUEQUIV_TESTS_ORACLES_HPP
#define LUEQUIV_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracles {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;

// Row-major mixed-radix digits of `index` over `radix`.
inline std::vector<int> digits(long index, const std::vector<int>& radix) {
  std::vector<int> out(radix.size());
  for (std::size_t k = radix.size(); k-- > 0;) {
    out[k] = static_cast<int>(index % radix[k]);
    index /= radix[k];
  }
  return out;
}

inline long encode(const std::vector<int>& d, const std::vector<int>& radix) {
  long idx = 0;
  for (std::size_t k = 0; k < radix.size(); ++k) idx = idx * radix[k] + d[k];
  return idx;
}

// (R)_{i1..ik i1'..ik', i(k+1)..iM i(k+1)'..iM'} = (Z)_{i1..iM, i1'..iM'}
inline Mat naive_realign(const Mat& z, const std::vector<int>& dims, int cut) {
  const std::vector<int> left(dims.begin(), dims.begin() + cut);
  const std::vector<int> right(dims.begin() + cut, dims.end());
  std::vector<int> row_radix = left, col_radix = right;
  row_radix.insert(row_radix.end(), left.begin(), left.end());
  col_radix.insert(col_radix.end(), right.begin(), right.end());
  long dl = 1, dr = 1;
  for (int d : left) dl *= d;
  for (int d : right) dr *= d;
  Mat out = Mat::Zero(dl * dl, dr * dr);
  const long n = z.rows();
  for (long r = 0; r < n; ++r) {
    const std::vector<int> i = digits(r, dims);
    for (long c = 0; c < n; ++c) {
      const std::vector<int> ip = digits(c, dims);
      std::vector<int> rd, cd;
      for (int k = 0; k < cut; ++k) rd.push_back(i[k]);
      for (int k = 0; k < cut; ++k) rd.push_back(ip[k]);
      for (std::size_t k = cut; k < dims.size(); ++k) cd.push_back(i[k]);
      for (std::size_t k = cut; k < dims.size(); ++k) cd.push_back(ip[k]);
      out(encode(rd, row_radix), encode(cd, col_radix)) = z(r, c);
    }
  }
  return out;
}

inline Mat naive_kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (long i = 0; i < a.rows(); ++i)
    for (long j = 0; j < a.cols(); ++j)
      for (long r = 0; r < b.rows(); ++r)
        for (long c = 0; c < b.cols(); ++c) out(i * b.rows() + r, j * b.cols() + c) = a(i, j) * b(r, c);
  return out;
}

// Largest singular value via power iteration on m^dag m.
inline double power_sigma1(const Mat& m, int iterations = 2000) {
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(m.cols());
  for (long k = 0; k < v.size(); ++k) v(k) = Complex(g(rng), g(rng));
  v.normalize();
  const Mat a = m.adjoint() * m;
  double lambda = 0.0;
  for (int it = 0; it < iterations; ++it) {
    Eigen::VectorXcd w = a * v;
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    v = w / nw;
    if (std::abs(nw - lambda) <= 1e-15 * nw) {
      lambda = nw;
      break;
    }
    lambda = nw;
  }
  return std::sqrt(lambda);
}

// Eigenvalues of a 2x2 Hermitian matrix, descending.
inline std::pair<double, double> hermitian2_eigenvalues(const Mat& h) {
  const double a = h(0, 0).real(), d = h(1, 1).real();
  const double r = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(h(0, 1)));
  return {0.5 * (a + d) + r, 0.5 * (a + d) - r};
}

// Partial trace keeping one site, by explicit digit loops.
inline Mat naive_reduced(const Mat& rho, const std::vector<int>& dims, int site) {
  const int n = dims[site];
  Mat out = Mat::Zero(n, n);
  const long total = rho.rows();
  for (long r = 0; r < total; ++r) {
    const auto i = digits(r, dims);
    for (long c = 0; c < total; ++c) {
      const auto j = digits(c, dims);
      bool same = true;
      for (std::size_t k = 0; k < dims.size(); ++k)
        if (static_cast<int>(k) != site && i[k] != j[k]) same = false;
      if (same) out(i[site], j[site]) += rho(r, c);
    }
  }
  return out;
}

// Gram-Schmidt on a complex Gaussian matrix; independent of the library's QR.
inline Mat gram_schmidt_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < j; ++k) m.col(j) -= m.col(k).dot(m.col(j)) * m.col(k);
    m.col(j).normalize();
  }
  return m;
}

inline Mat random_matrix(long rows, long cols, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Mat m(rows, cols);
  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j) m(i, j) = Complex(u(rng), u(rng));
  return m;
}

}  // namespace oracles

#endif  // LUEQUIV_TESTS_ORACLES_HPP
