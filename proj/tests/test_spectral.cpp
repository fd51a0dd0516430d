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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "luequiv/oracle.hpp"
#include "luequiv/random.hpp"
#include "luequiv/spectral.hpp"
#include "oracles.hpp"

namespace {

using namespace luequiv;

CMatrix random_hermitian(int n, std::mt19937_64& rng) {
  CMatrix a = oracles::random_matrix(n, n, rng);
  return 0.5 * (a + a.adjoint());
}

TEST(EigHermitian, DiagonalIsSortedDescending) {
  CMatrix h = CMatrix::Zero(3, 3);
  h.diagonal() << 1.0, 3.0, 2.0;
  Spectrum s = eig_hermitian(h);
  EXPECT_DOUBLE_EQ(s.eigenvalues(0), 3.0);
  EXPECT_DOUBLE_EQ(s.eigenvalues(1), 2.0);
  EXPECT_DOUBLE_EQ(s.eigenvalues(2), 1.0);
  // Permutation of the identity: column j is e_{1}, e_{2}, e_{0}.
  EXPECT_NEAR(std::abs(s.basis(1, 0) - 1.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(s.basis(2, 1) - 1.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(s.basis(0, 2) - 1.0), 0.0, 1e-14);
}

TEST(EigHermitian, PauliXClosedForm) {
  CMatrix h(2, 2);
  h << 0.0, 1.0, 1.0, 0.0;
  Spectrum s = eig_hermitian(h);
  EXPECT_NEAR(s.eigenvalues(0), 1.0, 1e-14);
  EXPECT_NEAR(s.eigenvalues(1), -1.0, 1e-14);
  const double r = 1.0 / std::sqrt(2.0);
  // Tied magnitudes: the first entry carries the positive real gauge.
  EXPECT_NEAR(std::abs(s.basis(0, 0) - r), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(s.basis(1, 0) - r), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(s.basis(0, 1) - r), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(s.basis(1, 1) + r), 0.0, 1e-14);
}

TEST(EigHermitian, TwoByTwoAgainstClosedForm) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 50; ++t) {
    CMatrix h = random_hermitian(2, rng);
    auto [l0, l1] = oracles::hermitian2_eigenvalues(h);
    Spectrum s = eig_hermitian(h);
    EXPECT_NEAR(s.eigenvalues(0), l0, 1e-13);
    EXPECT_NEAR(s.eigenvalues(1), l1, 1e-13);
  }
}

TEST(EigHermitian, ExampleSpectrum) {
  const double a = 3, b = 5, c = 7;
  auto [rho, rhop] = oracle::paper_example_raw(a, b, c);
  Spectrum s = eig_hermitian(rho);
  const double expect[8] = {7, 5, 3, 2, 1 / 3.0, 1 / 5.0, 1 / 7.0, 0};
  for (int i = 0; i < 8; ++i) EXPECT_NEAR(s.eigenvalues(i), expect[i], 1e-13) << i;
  EXPECT_TRUE(spectra_match(s, eig_hermitian(rhop), 1e-12));
}

TEST(EigHermitian, RejectsNonHermitianWithDefect) {
  CMatrix h(2, 2);
  h << 1.0, 1.0, 0.0, 1.0;
  try {
    eig_hermitian(h);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NEAR(e.defect(), std::sqrt(2.0), 1e-14);
  }
  EXPECT_THROW(eig_hermitian(CMatrix::Zero(2, 3)), ShapeError);
}

TEST(EigHermitian, ReconstructionAndOrthonormality) {
  std::mt19937_64 rng(2);
  for (int n : {1, 2, 5, 8, 12, 24}) {
    for (int t = 0; t < 5; ++t) {
      CMatrix h = random_hermitian(n, rng) * std::pow(10.0, t - 2);
      Spectrum s = eig_hermitian(h);
      EXPECT_LE((s.reconstruct() - h).norm(), 1e-10 * std::max(1.0, h.norm()));
      EXPECT_LE((s.basis.adjoint() * s.basis - CMatrix::Identity(n, n)).norm(), 1e-10);
      for (int i = 1; i < n; ++i) EXPECT_GE(s.eigenvalues(i - 1), s.eigenvalues(i));
    }
  }
}

TEST(EigHermitian, GaugeLargestEntryRealPositive) {
  std::mt19937_64 rng(3);
  CMatrix h = random_hermitian(6, rng);
  Spectrum s = eig_hermitian(h);
  for (int j = 0; j < 6; ++j) {
    Eigen::Index k;
    s.basis.col(j).cwiseAbs().maxCoeff(&k);
    EXPECT_NEAR(s.basis(k, j).imag(), 0.0, 1e-14);
    EXPECT_GT(s.basis(k, j).real(), 0.0);
  }
}

TEST(EigHermitian, DeterministicAndPhaseInvariant) {
  // Conjugating by a diagonal phase changes eigenvectors only by phases, which
  // the gauge removes up to the same diagonal.
  std::mt19937_64 rng(4);
  CMatrix h = random_hermitian(5, rng);
  Spectrum s1 = eig_hermitian(h), s2 = eig_hermitian(h);
  EXPECT_TRUE((s1.basis.array() == s2.basis.array()).all());
  EXPECT_TRUE((s1.eigenvalues.array() == s2.eigenvalues.array()).all());
}

TEST(EigHermitian, DegenerateTieOrderIsStable) {
  CMatrix h = CMatrix::Zero(4, 4);
  h.diagonal() << 0.5, 0.0, 0.5, 0.0;
  Spectrum s = eig_hermitian(h);
  EXPECT_DOUBLE_EQ(s.eigenvalues(0), 0.5);
  EXPECT_DOUBLE_EQ(s.eigenvalues(1), 0.5);
  EXPECT_LE((s.reconstruct() - h).norm(), 1e-14);
  EXPECT_TRUE((eig_hermitian(h).basis.array() == s.basis.array()).all());
}

TEST(Degeneracy, DistinctValues) {
  CMatrix h = CMatrix::Zero(3, 3);
  h.diagonal() << 3.0, 2.0, 1.0;
  DegeneracyProfile p = degeneracy_profile(eig_hermitian(h), 1e-8);
  EXPECT_TRUE(p.non_degenerate());
  EXPECT_EQ(p.blocks.size(), 3u);
  EXPECT_EQ(p.total, 3);
}

TEST(Degeneracy, ExactTies) {
  CMatrix h = CMatrix::Zero(4, 4);
  h.diagonal() << 0.5, 0.0, 0.5, 0.0;
  DegeneracyProfile p = degeneracy_profile(eig_hermitian(h), 1e-8);
  ASSERT_EQ(p.blocks.size(), 2u);
  EXPECT_DOUBLE_EQ(p.blocks[0].eigenvalue, 0.5);
  EXPECT_EQ(p.blocks[0].multiplicity, 2);
  EXPECT_EQ(p.blocks[0].offset, 0);
  EXPECT_DOUBLE_EQ(p.blocks[1].eigenvalue, 0.0);
  EXPECT_EQ(p.blocks[1].multiplicity, 2);
  EXPECT_EQ(p.blocks[1].offset, 2);
  EXPECT_EQ(p.max_multiplicity(), 2);
  EXPECT_EQ(p.sizes(), (std::vector<int>{2, 2}));
}

TEST(Degeneracy, ExampleFamilyNonDegenerateForGenericParameters) {
  for (auto [a, b, c] : {std::tuple{3.0, 5.0, 7.0}, {1.5, 4.0, 9.0}, {0.3, 2.5, 6.0}}) {
    auto [rho, rhop] = oracle::paper_example_raw(a, b, c);
    EXPECT_TRUE(degeneracy_profile(eig_hermitian(rho), 1e-8).non_degenerate());
  }
  // a = 2 collides with the eigenvalue 2 of the corner block.
  auto [rho, rhop] = oracle::paper_example_raw(2.0, 5.0, 7.0);
  DegeneracyProfile p = degeneracy_profile(eig_hermitian(rho), 1e-8);
  EXPECT_EQ(p.max_multiplicity(), 2);
}

TEST(Degeneracy, MultiplicitiesSumAndStrictlyDecrease) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    CMatrix h = random_hermitian(6, rng);
    const double tol = (t % 2) ? 1e-8 : 0.5;
    DegeneracyProfile p = degeneracy_profile(eig_hermitian(h), tol);
    int sum = 0;
    for (std::size_t b = 0; b < p.blocks.size(); ++b) {
      sum += p.blocks[b].multiplicity;
      if (b > 0) {
        EXPECT_GT(p.blocks[b - 1].eigenvalue, p.blocks[b].eigenvalue);
      }
    }
    EXPECT_EQ(sum, 6);
  }
  EXPECT_THROW(degeneracy_profile(eig_hermitian(CMatrix::Identity(2, 2)), 0.0),
               std::invalid_argument);
}

TEST(SpectraMatch, Cases) {
  CMatrix a = CMatrix::Zero(2, 2), b = CMatrix::Zero(2, 2);
  a.diagonal() << 0.6, 0.4;
  b.diagonal() << 0.7, 0.3;
  EXPECT_TRUE(spectra_match(eig_hermitian(a), eig_hermitian(a), 1e-8));
  EXPECT_FALSE(spectra_match(eig_hermitian(a), eig_hermitian(b), 1e-8));
  EXPECT_NEAR(spectral_distance(eig_hermitian(a), eig_hermitian(b)), 0.1, 1e-15);
  EXPECT_THROW(spectra_match(eig_hermitian(a), eig_hermitian(CMatrix::Identity(3, 3)), 1e-8),
               ShapeError);
}

TEST(SpectraMatch, ExamplePairAcrossParameters) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  for (int t = 0; t < 20; ++t) {
    auto [rho, rhop] = oracle::paper_example_raw(u(rng), u(rng), u(rng));
    EXPECT_TRUE(spectra_match(eig_hermitian(rho), eig_hermitian(rhop), 1e-12));
  }
}

TEST(RankOne, OuterProductOfUnitaries) {
  Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    CMatrix u1 = haar_unitary(3, rng), u2 = haar_unitary(2, rng);
    RankOneReport r = rank_one_test(vec(u1) * vec(u2).transpose(), 1e-7);
    EXPECT_TRUE(r.is_rank_one);
    EXPECT_LT(r.ratio, 1e-12);
  }
}

TEST(RankOne, IdentityIsNotRankOne) {
  RankOneReport r = rank_one_test(CMatrix::Identity(4, 4), 1e-7);
  EXPECT_NEAR(r.sigma1, 1.0, 1e-15);
  EXPECT_NEAR(r.sigma2, 1.0, 1e-15);
  EXPECT_FALSE(r.is_rank_one);
}

TEST(RankOne, ZeroMatrix) {
  RankOneReport r = rank_one_test(CMatrix::Zero(3, 3), 1e-7);
  EXPECT_EQ(r.sigma1, 0.0);
  EXPECT_EQ(r.ratio, 0.0);
  EXPECT_FALSE(r.is_rank_one);
}

TEST(RankOne, ToleranceMustBeInUnitInterval) {
  CMatrix m = CMatrix::Identity(2, 2);
  EXPECT_THROW(rank_one_test(m, 0.0), std::invalid_argument);
  EXPECT_THROW(rank_one_test(m, 1.0), std::invalid_argument);
  EXPECT_THROW(rank_one_test(m, -0.5), std::invalid_argument);
}

TEST(RankOne, ScaleInvariantVerdict) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 20; ++t) {
    CMatrix m = oracles::random_matrix(4, 6, rng);
    if (t % 2) m = m.col(0) * m.row(1) + 1e-9 * m;
    const Complex alpha(std::pow(10.0, (t % 7) - 3), 0.7 * t);
    RankOneReport r1 = rank_one_test(m, 1e-7), r2 = rank_one_test(alpha * m, 1e-7);
    EXPECT_EQ(r1.is_rank_one, r2.is_rank_one);
    EXPECT_NEAR(r1.ratio, r2.ratio, 1e-10 * std::max(1.0, r1.ratio));
  }
}

TEST(RankOne, Sigma1MatchesPowerIteration) {
  std::mt19937_64 rng(9);
  for (auto [r, c] : {std::pair{3, 3}, {4, 16}, {16, 4}, {20, 30}}) {
    CMatrix m = oracles::random_matrix(r, c, rng);
    EXPECT_NEAR(rank_one_test(m, 1e-7).sigma1, oracles::power_sigma1(m), 1e-10);
  }
}

TEST(RankOne, TwoByTwoSingularValuesClosedForm) {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 20; ++t) {
    CMatrix m = oracles::random_matrix(2, 2, rng);
    auto [l0, l1] = oracles::hermitian2_eigenvalues(m.adjoint() * m);
    RankOneReport r = rank_one_test(m, 1e-7);
    EXPECT_NEAR(r.sigma1, std::sqrt(l0), 1e-12);
    EXPECT_NEAR(r.sigma2, std::sqrt(std::max(0.0, l1)), 1e-7);
  }
}

TEST(RankOne, OrderedSingularValues) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 10; ++t) {
    RankOneReport r = rank_one_test(oracles::random_matrix(5, 3, rng), 1e-7);
    EXPECT_GE(r.sigma1, r.sigma2);
    EXPECT_GE(r.sigma2, 0.0);
  }
}

}  // namespace
