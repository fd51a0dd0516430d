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

#ifndef LUEQUIV_ORACLE_HPP
#define LUEQUIV_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "luequiv/decompose.hpp"
#include "luequiv/density.hpp"
#include "luequiv/errors.hpp"
#include "luequiv/random.hpp"
#include "luequiv/tensor_core.hpp"

namespace luequiv::oracle {

// Minimum pairwise gap of generated non-degenerate spectra.
inline constexpr double kGenericGap = 1e-3;
inline constexpr double kMismatchShift = 1e-2;

struct SpectrumSpec {
  enum class Kind { kGenericNonDegenerate, kPlanted };
  Kind kind = Kind::kGenericNonDegenerate;
  std::vector<double> eigenvalues;  // used when planted

  static SpectrumSpec generic() { return {}; }
  static SpectrumSpec planted(std::vector<double> ev) {
    return {Kind::kPlanted, std::move(ev)};
  }
};

enum class PairLabel { kEquivalent, kSpectrumMismatch, kUnknown };

inline std::string to_string(PairLabel l) {
  switch (l) {
    case PairLabel::kEquivalent: return "EQUIVALENT";
    case PairLabel::kSpectrumMismatch: return "SPECTRUM_MISMATCH";
    case PairLabel::kUnknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

struct PairSample {
  DensityMatrix rho;
  DensityMatrix rho_prime;
  PairLabel label = PairLabel::kUnknown;
  std::optional<FactorSet> planted;  // rho' = (xU) rho (xU)^dag
  std::uint64_t seed = 0;
};

inline double min_gap(std::vector<double> ev) {
  std::sort(ev.begin(), ev.end());
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < ev.size(); ++i) g = std::min(g, ev[i] - ev[i - 1]);
  return g;
}

/// Unit-sum spectrum of length n with all pairwise gaps >= kGenericGap.
inline std::vector<double> generic_spectrum(int n, Rng& rng) {
  std::exponential_distribution<double> expo(1.0);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<double> ev(static_cast<std::size_t>(n));
    double sum = 0.0;
    for (double& x : ev) sum += (x = expo(rng));
    for (double& x : ev) x /= sum;
    if (n < 2 || min_gap(ev) >= kGenericGap) {
      std::sort(ev.rbegin(), ev.rend());
      return ev;
    }
  }
  // Evenly spread fallback, unreachable for n <= 24 in practice.
  std::vector<double> ev(static_cast<std::size_t>(n));
  const double norm = n * (n + 1) / 2.0;
  for (int i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = (n - i) / norm;
  return ev;
}

/// Unit-sum spectrum of length n in which one eigenvalue appears exactly
/// `multiplicity` times and all distinct values are >= kGenericGap apart.
inline std::vector<double> degenerate_spectrum(int n, int multiplicity, Rng& rng) {
  if (multiplicity < 1 || multiplicity > n) {
    throw std::invalid_argument("degenerate_spectrum: bad multiplicity");
  }
  std::exponential_distribution<double> expo(1.0);
  std::uniform_int_distribution<int> pick(0, n - multiplicity);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<double> distinct(static_cast<std::size_t>(n - multiplicity + 1));
    for (double& x : distinct) x = expo(rng);
    const auto rep = static_cast<std::size_t>(pick(rng));
    double sum = 0.0;
    for (std::size_t i = 0; i < distinct.size(); ++i)
      sum += distinct[i] * (i == rep ? multiplicity : 1);
    for (double& x : distinct) x /= sum;
    if (distinct.size() > 1 && min_gap(distinct) < kGenericGap) continue;
    std::vector<double> ev;
    for (std::size_t i = 0; i < distinct.size(); ++i)
      for (int k = 0; k < (i == rep ? multiplicity : 1); ++k) ev.push_back(distinct[i]);
    std::sort(ev.rbegin(), ev.rend());
    return ev;
  }
  throw std::runtime_error("degenerate_spectrum: no admissible draw");
}

inline CMatrix hermitize(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

/// U diag(spectrum) U^dag with U Haar on the full space.
inline DensityMatrix random_density(const DimProfile& profile, const SpectrumSpec& spec,
                                    Rng& rng) {
  const int n = profile.total();
  std::vector<double> ev;
  if (spec.kind == SpectrumSpec::Kind::kPlanted) {
    ev = spec.eigenvalues;
    if (static_cast<int>(ev.size()) != n) {
      throw ShapeError("random_density: planted spectrum has " +
                       std::to_string(ev.size()) + " values, need " + std::to_string(n));
    }
    double sum = 0.0;
    for (double x : ev) {
      if (!(x >= 0.0)) throw std::invalid_argument("random_density: negative eigenvalue");
      sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw std::invalid_argument("random_density: planted spectrum does not sum to 1");
    }
  } else {
    ev = generic_spectrum(n, rng);
  }
  const CMatrix u = haar_unitary(n, rng);
  RVector lam = Eigen::Map<const RVector>(ev.data(), n);
  CMatrix rho = hermitize(u * lam.cast<Complex>().asDiagonal() * u.adjoint());
  return DensityMatrix(std::move(rho), profile);
}

inline DensityMatrix random_density(const DimProfile& profile, const SpectrumSpec& spec,
                                    std::uint64_t seed) {
  Rng rng(seed);
  return random_density(profile, spec, rng);
}

inline FactorSet random_local_unitary(const DimProfile& profile, Rng& rng) {
  FactorSet fs;
  for (int d : profile.dims()) fs.factors.push_back(haar_unitary(d, rng));
  return fs;
}

inline DensityMatrix conjugate(const DensityMatrix& rho, const FactorSet& local) {
  const CMatrix w = local.product();
  return DensityMatrix(hermitize(w * rho.matrix() * w.adjoint()), rho.profile());
}

/// rho random, rho' = (xU) rho (xU)^dag for Haar local factors U.
inline PairSample make_equivalent_pair(const DimProfile& profile, std::uint64_t seed,
                                       const SpectrumSpec& spec = SpectrumSpec::generic()) {
  Rng rng(seed);
  DensityMatrix rho = random_density(profile, spec, rng);
  FactorSet plant = random_local_unitary(profile, rng);
  DensityMatrix rho_prime = conjugate(rho, plant);
  return {std::move(rho), std::move(rho_prime), PairLabel::kEquivalent,
          std::move(plant), seed};
}

/// Pair with one equal-trace eigenvalue pair shifted by +-delta.
inline PairSample make_spectrum_mismatch_pair(const DimProfile& profile,
                                              std::uint64_t seed,
                                              double delta = kMismatchShift) {
  Rng rng(seed);
  const int n = profile.total();
  std::vector<double> ev = generic_spectrum(n, rng);  // descending
  const CMatrix u = haar_unitary(n, rng);
  std::vector<double> shifted = ev;
  if (n >= 2 && ev[1] >= delta) {
    shifted[0] += delta;
    shifted[1] -= delta;
  } else if (n >= 2) {
    shifted[0] -= delta;
    shifted[1] += delta;
  }
  double sum = 0.0;
  for (double x : shifted) sum += x;
  for (double& x : shifted) x /= sum;
  auto build = [&](const std::vector<double>& e) {
    RVector lam = Eigen::Map<const RVector>(e.data(), n);
    return DensityMatrix(hermitize(u * lam.cast<Complex>().asDiagonal() * u.adjoint()),
                         profile);
  };
  return {build(ev), build(shifted), PairLabel::kSpectrumMismatch, std::nullopt, seed};
}

struct PaperExample {
  DensityMatrix rho;
  DensityMatrix rho_prime;
  double trace = 0.0;  // common trace before normalization
  bool degenerate = false;
  std::vector<std::string> warnings;
};

/// Unnormalized 8x8 family on (2,2,2): rho has -1 corners and diagonal
/// (1, 1/a, 1/b, 1/c, c, b, a, 1); rho' has +1 corners and diagonal
/// (1, a, b, c, 1/c, 1/b, 1/a, 1).
inline std::pair<CMatrix, CMatrix> paper_example_raw(double a, double b, double c) {
  if (!(a > 0.0 && b > 0.0 && c > 0.0)) {
    throw std::invalid_argument("paper_example: parameters must be positive");
  }
  CMatrix rho = CMatrix::Zero(8, 8);
  CMatrix rhop = CMatrix::Zero(8, 8);
  const double d1[8] = {1, 1 / a, 1 / b, 1 / c, c, b, a, 1};
  const double d2[8] = {1, a, b, c, 1 / c, 1 / b, 1 / a, 1};
  for (int i = 0; i < 8; ++i) {
    rho(i, i) = d1[i];
    rhop(i, i) = d2[i];
  }
  rho(0, 7) = rho(7, 0) = -1.0;
  rhop(0, 7) = rhop(7, 0) = 1.0;
  return {rho, rhop};
}

inline PaperExample paper_example(double a, double b, double c) {
  auto [rho, rhop] = paper_example_raw(a, b, c);
  const double tr = rho.trace().real();
  std::vector<double> ev = {2.0, 0.0, a, 1 / a, b, 1 / b, c, 1 / c};
  const bool degenerate = min_gap(ev) <= 1e-9 * tr;
  std::vector<std::string> warnings;
  if (degenerate) {
    warnings.push_back("paper_example: parameters produce a degenerate spectrum");
  }
  const DimProfile p{2, 2, 2};
  return {DensityMatrix(rho / tr, p), DensityMatrix(rhop / tr, p), tr, degenerate,
          std::move(warnings)};
}

/// Reduced state of one site (0-based), tracing out all others.
inline CMatrix reduced_density(const CMatrix& rho, const DimProfile& profile, int site) {
  if (rho.rows() != profile.total() || rho.cols() != profile.total()) {
    throw ShapeError("reduced_density: matrix does not match the profile");
  }
  const int n = profile.dim(site);
  int inner = 1;
  for (int k = site + 1; k < profile.parties(); ++k) inner *= profile.dim(k);
  const int outer = profile.total() / (n * inner);
  CMatrix red = CMatrix::Zero(n, n);
  for (int o = 0; o < outer; ++o)
    for (int in = 0; in < inner; ++in)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          red(i, j) += rho((o * n + i) * inner + in, (o * n + j) * inner + in);
  return red;
}

}  // namespace luequiv::oracle

#endif  // LUEQUIV_ORACLE_HPP
