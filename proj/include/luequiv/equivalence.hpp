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

#ifndef LUEQUIV_EQUIVALENCE_HPP
#define LUEQUIV_EQUIVALENCE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "luequiv/decompose.hpp"
#include "luequiv/density.hpp"
#include "luequiv/errors.hpp"
#include "luequiv/random.hpp"
#include "luequiv/spectral.hpp"
#include "luequiv/tensor_core.hpp"

namespace luequiv {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Soundness bound for witnesses, scaled by max(1, ||rho||_F).
inline constexpr double kWitnessTol = 1e-8;

inline double wrap_angle(double t) {
  t = std::fmod(t, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

// theta in [0, 2pi)^D, parameterizing D = diag(exp(i theta)).
struct PhaseVector {
  std::vector<double> theta;

  PhaseVector() = default;
  explicit PhaseVector(std::vector<double> t) : theta(std::move(t)) {
    for (double& x : theta) x = wrap_angle(x);
  }
  std::size_t size() const noexcept { return theta.size(); }
  CVector diagonal() const {
    CVector d(static_cast<Eigen::Index>(theta.size()));
    for (std::size_t i = 0; i < theta.size(); ++i)
      d(static_cast<Eigen::Index>(i)) = std::polar(1.0, theta[i]);
    return d;
  }
};

// Unitary blocks A_1, ..., A_r of a block-diagonal matrix, sizes following a
// DegeneracyProfile.
struct BlockUnitarySet {
  std::vector<CMatrix> blocks;

  int total() const {
    int t = 0;
    for (const auto& b : blocks) t += static_cast<int>(b.rows());
    return t;
  }
};

enum class Status {
  kEquivalent,
  kInequivalentSpectrum,
  kNotFound,
  kDegenerateUnsupported,
};

inline std::string to_string(Status s) {
  switch (s) {
    case Status::kEquivalent: return "EQUIVALENT";
    case Status::kInequivalentSpectrum: return "INEQUIVALENT_SPECTRUM";
    case Status::kNotFound: return "NOT_FOUND";
    case Status::kDegenerateUnsupported: return "DEGENERATE_UNSUPPORTED";
  }
  return "UNKNOWN";
}

struct SearchConfig {
  double tol_rank = 1e-7;        // sigma2/sigma1 at every cut
  double tol_spectrum = 1e-8;    // element-wise eigenvalue agreement
  double tol_degeneracy = 1e-8;  // relative to the spectral range
  int discrete_seeds = 64;
  int sweeps = 200;  // descent cycles per start
  int restarts = 20;
  int max_block = 2;
  std::uint64_t seed = 1;
  int threads = 1;
  int projection_steps = 100;
  int line_grid = 12;
  int golden_iterations = 40;
};

struct HistoryEntry {
  int iteration = 0;
  double objective = 0.0;
};

// Read-only data shared by every start of a search.
struct SearchContext {
  CMatrix x;
  CMatrix y;
  DimProfile profile;
  DegeneracyProfile degeneracy;
};

struct SearchResult {
  bool found = false;
  double objective = std::numeric_limits<double>::infinity();
  BlockUnitarySet blocks;
  std::optional<PhaseVector> phases;  // set when every block is 1x1
  std::vector<HistoryEntry> history;
  int start_index = -1;
  std::string stage;  // "seed", "descent" or "restart"
};

struct Verdict {
  Status status = Status::kNotFound;
  std::optional<FactorSet> witness;  // (U_1 .. U_M) with (xU) rho (xU)^dag = rho'
  std::vector<HistoryEntry> objective_history;
  std::optional<PhaseVector> phases;
  std::optional<BlockUnitarySet> blocks;
  std::vector<RankOneReport> cut_reports;  // at the best point found
  double objective = std::numeric_limits<double>::quiet_NaN();
  double witness_residual = std::numeric_limits<double>::quiet_NaN();
  double spectral_distance = 0.0;
  DegeneracyProfile degeneracy;
  bool relies_on_degenerate_extension = false;
  std::string stage;
  std::vector<std::string> notes;
};

/// X diag(exp(i theta)) Y^dag.
inline CMatrix build_V(const CMatrix& x, const CMatrix& y, const PhaseVector& phases) {
  const auto n = static_cast<Eigen::Index>(phases.size());
  if (x.rows() != n || x.cols() != n || y.rows() != n || y.cols() != n) {
    throw ShapeError("build_V: bases and phase vector disagree on dimension");
  }
  return x * phases.diagonal().asDiagonal() * y.adjoint();
}

/// X blockdiag(A_1, ..., A_r) Y^dag.
inline CMatrix build_V0(const CMatrix& x, const CMatrix& y,
                        const DegeneracyProfile& profile,
                        const BlockUnitarySet& blocks) {
  if (blocks.blocks.size() != profile.blocks.size()) {
    throw ShapeError("build_V0: " + std::to_string(blocks.blocks.size()) +
                     " blocks for a profile with " +
                     std::to_string(profile.blocks.size()));
  }
  if (x.rows() != profile.total || x.cols() != profile.total ||
      y.rows() != profile.total || y.cols() != profile.total) {
    throw ShapeError("build_V0: bases do not match the profile dimension");
  }
  CMatrix v = CMatrix::Zero(x.rows(), x.cols());
  for (std::size_t b = 0; b < blocks.blocks.size(); ++b) {
    const auto& blk = profile.blocks[b];
    const CMatrix& a = blocks.blocks[b];
    if (a.rows() != blk.multiplicity || a.cols() != blk.multiplicity) {
      throw ShapeError("build_V0: block " + std::to_string(b) + " has size " +
                       std::to_string(a.rows()) + ", expected " +
                       std::to_string(blk.multiplicity));
    }
    v.noalias() += x.middleCols(blk.offset, blk.multiplicity) * a *
                   y.middleCols(blk.offset, blk.multiplicity).adjoint();
  }
  return v;
}

/// Sum over sequential cuts of (sigma2 / sigma1)^2.
inline double objective(const CMatrix& v, const DimProfile& profile) {
  double f = 0.0;
  for (int k = 1; k < profile.parties(); ++k) {
    const RVector sv = singular_values(realign(v, profile.left(k), profile.right(k)));
    if (sv.size() < 2) continue;
    if (sv(0) == 0.0) return std::numeric_limits<double>::infinity();
    const double r = sv(1) / sv(0);
    f += r * r;
  }
  return f;
}

inline double objective(const PhaseVector& phases, const SearchContext& ctx) {
  return objective(build_V(ctx.x, ctx.y, phases), ctx.profile);
}

inline double objective(const BlockUnitarySet& blocks, const SearchContext& ctx) {
  return objective(build_V0(ctx.x, ctx.y, ctx.degeneracy, blocks), ctx.profile);
}

/// ||(xU) rho (xU)^dag - rho'||_F.
inline double verify_witness(const DensityMatrix& rho, const DensityMatrix& rho_prime,
                             const FactorSet& factors) {
  const CMatrix w = factors.product();
  if (w.rows() != rho.dimension() || rho.dimension() != rho_prime.dimension()) {
    throw ShapeError("verify_witness: factor product does not match the states");
  }
  return (w * rho.matrix() * w.adjoint() - rho_prime.matrix()).norm();
}

namespace detail {

// Kronecker product of the polar-projected leading singular factors, peeled
// left to right. Exact on decomposable unitaries.
inline CMatrix project_to_local(const CMatrix& v, const DimProfile& profile) {
  std::vector<CMatrix> factors;
  CMatrix rest = v;
  int remaining = profile.total();
  for (int site = 0; site + 1 < profile.parties(); ++site) {
    const int dl = profile.dim(site);
    remaining /= dl;
    const CMatrix r = realign(rest, dl, remaining);
    Eigen::JacobiSVD<CMatrix> svd(r, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double s0 = svd.singularValues()(0);
    factors.push_back(nearest_unitary(unvec(svd.matrixU().col(0), dl, dl)));
    rest = unvec(s0 * svd.matrixV().col(0).conjugate(), remaining, remaining);
  }
  factors.push_back(nearest_unitary(rest));
  return kron_all(factors);
}

// Screening version of objective() from Gram-matrix eigenvalues. Absolute
// error is ~1e-16, so it only ranks candidates; thresholds use objective().
inline double screening_objective(const CMatrix& v, const DimProfile& profile) {
  double f = 0.0;
  for (int k = 1; k < profile.parties(); ++k) {
    const CMatrix r = realign(v, profile.left(k), profile.right(k));
    if (std::min(r.rows(), r.cols()) < 2) continue;
    const CMatrix g = r.rows() <= r.cols() ? CMatrix(r * r.adjoint())
                                           : CMatrix(r.adjoint() * r);
    const RVector ev =
        Eigen::SelfAdjointEigenSolver<CMatrix>(g, Eigen::EigenvaluesOnly).eigenvalues();
    const double l1 = ev(ev.size() - 1);
    if (!(l1 > 0.0)) return std::numeric_limits<double>::infinity();
    f += std::max(ev(ev.size() - 2), 0.0) / l1;
  }
  return f;
}

struct Generator {
  CMatrix g;  // Hermitian, g^3 = g
  CMatrix p;  // g^2, projector onto its support
};

inline std::vector<Generator> unitary_generators(int n) {
  std::vector<Generator> gens;
  for (int j = 0; j < n; ++j) {
    Generator d{CMatrix::Zero(n, n), CMatrix::Zero(n, n)};
    d.g(j, j) = 1.0;
    d.p(j, j) = 1.0;
    gens.push_back(d);
  }
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      CMatrix p = CMatrix::Zero(n, n);
      p(j, j) = p(k, k) = 1.0;
      Generator s{CMatrix::Zero(n, n), p};
      s.g(j, k) = s.g(k, j) = 1.0;
      Generator a{CMatrix::Zero(n, n), p};
      a.g(j, k) = Complex(0.0, -1.0);
      a.g(k, j) = Complex(0.0, 1.0);
      gens.push_back(s);
      gens.push_back(a);
    }
  }
  return gens;
}

struct StartOutcome {
  bool success = false;
  double objective = std::numeric_limits<double>::infinity();
  std::vector<CMatrix> blocks;
  std::vector<double> history;  // objective after each refinement step
  bool success_without_refinement = false;
};

// Coordinate descent over block generators interleaved with alternating
// projection between the block-diagonal coset and local unitaries.
class BlockSearchEngine {
 public:
  BlockSearchEngine(const SearchContext& ctx, const SearchConfig& cfg, bool pin_phase)
      : ctx_(ctx), cfg_(cfg), pin_phase_(pin_phase) {
    for (const auto& b : ctx_.degeneracy.blocks) {
      xb_.push_back(ctx_.x.middleCols(b.offset, b.multiplicity));
      ybh_.push_back(ctx_.y.middleCols(b.offset, b.multiplicity).adjoint());
      gens_.push_back(unitary_generators(b.multiplicity));
    }
    threshold_ = cfg_.tol_rank * cfg_.tol_rank;
  }

  double threshold() const noexcept { return threshold_; }

  CMatrix assemble(const std::vector<CMatrix>& a) const {
    CMatrix v = CMatrix::Zero(ctx_.x.rows(), ctx_.x.cols());
    for (std::size_t b = 0; b < a.size(); ++b) v.noalias() += xb_[b] * a[b] * ybh_[b];
    return v;
  }

  double evaluate(const std::vector<CMatrix>& a) const {
    return objective(assemble(a), ctx_.profile);
  }

  double screen(const std::vector<CMatrix>& a) const {
    return screening_objective(assemble(a), ctx_.profile);
  }

  void pin(std::vector<CMatrix>& a) const {
    if (!pin_phase_ || a.empty() || std::abs(a[0](0, 0)) == 0.0) return;
    const Complex c = std::conj(a[0](0, 0)) / std::abs(a[0](0, 0));
    for (auto& blk : a) blk *= c;
  }

  std::vector<CMatrix> project(const std::vector<CMatrix>& a) const {
    const CMatrix w = project_to_local(assemble(a), ctx_.profile);
    std::vector<CMatrix> out;
    out.reserve(a.size());
    for (std::size_t b = 0; b < a.size(); ++b)
      out.push_back(nearest_unitary(xb_[b].adjoint() * w * ybh_[b].adjoint()));
    pin(out);
    return out;
  }

  // Runs projection steps while they improve the objective (strictly).
  void projection_burst(std::vector<CMatrix>& a, double& f, std::vector<double>& hist,
                        double target) const {
    int slow = 0;
    for (int s = 0; s < cfg_.projection_steps && f > target; ++s) {
      std::vector<CMatrix> next = project(a);
      const double fn = evaluate(next);
      hist.push_back(std::min(f, fn));
      if (!(fn < f)) break;
      const double gain = (f - fn) / f;
      a = std::move(next);
      f = fn;
      slow = gain < 1e-3 ? slow + 1 : 0;
      if (slow >= 5) break;
    }
  }

  void coordinate_sweep(std::vector<CMatrix>& a, double& f) const {
    CMatrix v = assemble(a);
    double fs = screening_objective(v, ctx_.profile);
    const int grid = std::max(3, cfg_.line_grid);
    const double h = kTwoPi / grid;
    for (std::size_t b = 0; b < a.size(); ++b) {
      for (std::size_t gi = 0; gi < gens_[b].size(); ++gi) {
        if (pin_phase_ && b == 0 && gi == 0) continue;
        const Generator& gen = gens_[b][gi];
        const CMatrix base = xb_[b] * a[b];
        const CMatrix c1 = base * gen.p * ybh_[b];
        const CMatrix c2 = Complex(0.0, 1.0) * (base * gen.g * ybh_[b]);
        auto eval = [&](double t) {
          const CMatrix vt = v + (std::cos(t) - 1.0) * c1 + std::sin(t) * c2;
          return screening_objective(vt, ctx_.profile);
        };
        double best_t = 0.0;
        double best_f = fs;
        for (int k = 1; k < grid; ++k) {
          const double t = k * h;
          const double ft = eval(t);
          if (ft < best_f) {
            best_f = ft;
            best_t = t;
          }
        }
        // Golden-section refinement inside the bracketing grid cell pair.
        constexpr double r = 0.6180339887498949;
        double lo = best_t - h, hi = best_t + h;
        double c = hi - r * (hi - lo), d = lo + r * (hi - lo);
        double fc = eval(c), fd = eval(d);
        for (int it = 0; it < cfg_.golden_iterations; ++it) {
          if (fc < fd) {
            hi = d; d = c; fd = fc;
            c = hi - r * (hi - lo); fc = eval(c);
          } else {
            lo = c; c = d; fc = fd;
            d = lo + r * (hi - lo); fd = eval(d);
          }
        }
        const double tg = fc < fd ? c : d;
        const double fg = std::min(fc, fd);
        if (fg < best_f) {
          best_f = fg;
          best_t = tg;
        }
        if (best_f < fs) {
          const CMatrix e = CMatrix::Identity(gen.g.rows(), gen.g.cols()) +
                            (std::cos(best_t) - 1.0) * gen.p +
                            Complex(0.0, std::sin(best_t)) * gen.g;
          a[b] = a[b] * e;
          v += (std::cos(best_t) - 1.0) * c1 + std::sin(best_t) * c2;
          fs = best_f;
        }
      }
    }
    pin(a);
    for (auto& blk : a) blk = nearest_unitary(blk);
    f = evaluate(a);
  }

  StartOutcome refine(std::vector<CMatrix> a) const {
    StartOutcome out;
    pin(a);
    double f = evaluate(a);
    out.history.push_back(f);
    const double polish = threshold_ * 1e-10;
    if (f < threshold_) out.success_without_refinement = true;
    for (int sweep = 0; sweep < cfg_.sweeps && f >= threshold_; ++sweep) {
      const double before = f;
      projection_burst(a, f, out.history, polish);
      if (f < threshold_) break;
      coordinate_sweep(a, f);
      out.history.push_back(f);
      if (f < threshold_) break;
      if (!(f < before * 0.99)) break;
    }
    if (f < threshold_) projection_burst(a, f, out.history, polish);
    out.success = f < threshold_;
    out.objective = f;
    out.blocks = std::move(a);
    return out;
  }

 private:
  const SearchContext& ctx_;
  const SearchConfig& cfg_;
  bool pin_phase_;
  std::vector<CMatrix> xb_;
  std::vector<CMatrix> ybh_;
  std::vector<std::vector<Generator>> gens_;
  double threshold_ = 0.0;
};

inline std::vector<CMatrix> phase_blocks(const DegeneracyProfile& prof,
                                         const std::vector<int>& quarter_turns) {
  std::vector<CMatrix> a;
  for (std::size_t b = 0; b < prof.blocks.size(); ++b) {
    const int n = prof.blocks[b].multiplicity;
    const Complex ph = std::polar(1.0, quarter_turns[b] * std::numbers::pi / 2.0);
    a.push_back(ph * CMatrix::Identity(n, n));
  }
  return a;
}

struct DiscreteSeed {
  std::vector<int> quarter_turns;
  double objective = 0.0;
};

// Greedy coordinate descent on the quarter-turn lattice (first block fixed).
inline DiscreteSeed discrete_descent(const BlockSearchEngine& engine,
                                     const DegeneracyProfile& prof, std::vector<int> q,
                                     int passes = 4) {
  double fq = engine.screen(phase_blocks(prof, q));
  for (int pass = 0; pass < passes && fq >= engine.threshold(); ++pass) {
    bool changed = false;
    for (std::size_t b = 1; b < q.size(); ++b) {
      for (int turn = 0; turn < 4; ++turn) {
        if (turn == q[b]) continue;
        std::vector<int> trial = q;
        trial[b] = turn;
        const double ft = engine.screen(phase_blocks(prof, trial));
        if (ft < fq) {
          fq = ft;
          q = std::move(trial);
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  fq = engine.evaluate(phase_blocks(prof, q));
  return {std::move(q), fq};
}

// Discrete starting points on the quarter-turn lattice: every block a multiple
// of the identity, the first pinned to phase 0. The lattice is enumerated when
// it has at most `count` points; otherwise the all-zero point and random
// lattice points are each pushed to a local minimum by discrete descent;
// coinciding minima are kept once.
inline std::vector<DiscreteSeed> discrete_seeds(const BlockSearchEngine& engine,
                                                const DegeneracyProfile& prof,
                                                int count, std::uint64_t seed) {
  const std::size_t nb = prof.blocks.size();
  std::vector<DiscreteSeed> out;
  if (count <= 0 || nb == 0) return out;
  std::set<std::vector<int>> seen;
  auto add = [&](DiscreteSeed s) {
    if (static_cast<int>(out.size()) < count && seen.insert(s.quarter_turns).second)
      out.push_back(std::move(s));
  };

  const double grid_size = std::pow(4.0, static_cast<double>(nb - 1));
  if (grid_size <= count) {
    std::vector<int> q(nb, 0);
    for (long long code = 0; code < static_cast<long long>(grid_size); ++code) {
      long long c = code;
      for (std::size_t b = 1; b < nb; ++b) {
        q[b] = static_cast<int>(c % 4);
        c /= 4;
      }
      add({q, engine.evaluate(phase_blocks(prof, q))});
    }
    return out;
  }

  std::vector<int> zero(nb, 0);
  add({zero, engine.evaluate(phase_blocks(prof, zero))});
  add(discrete_descent(engine, prof, zero));
  Rng rng(seed);
  std::uniform_int_distribution<int> quarter(0, 3);
  for (int attempt = 2; attempt < count; ++attempt) {
    std::vector<int> q(nb, 0);
    for (std::size_t b = 1; b < nb; ++b) q[b] = quarter(rng);
    add(discrete_descent(engine, prof, std::move(q)));
  }
  return out;
}

template <class Fn>
void parallel_for(int count, int threads, Fn&& fn) {
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  const int n = std::min(threads, count);
  for (int t = 0; t < n; ++t) {
    pool.emplace_back([&, t] {
      for (int i = t; i < count; i += n) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

/// Searches the block-diagonal coset X blockdiag(A) Y^dag for a decomposable
/// element. Starts are refined in order (discrete seeds ranked by objective,
/// then random restarts); the lowest-index success wins, so the result does
/// not depend on `threads`.
inline SearchResult block_search(const SearchContext& ctx, const SearchConfig& cfg) {
  const bool pin = ctx.degeneracy.non_degenerate();
  detail::BlockSearchEngine engine(ctx, cfg, pin);

  struct Start {
    std::vector<CMatrix> blocks;
    bool from_seed;
  };
  std::vector<Start> starts;
  {
    auto seeds = detail::discrete_seeds(engine, ctx.degeneracy, cfg.discrete_seeds,
                                        cfg.seed);
    std::stable_sort(seeds.begin(), seeds.end(), [](const auto& l, const auto& r) {
      return l.objective < r.objective;
    });
    for (const auto& sd : seeds)
      starts.push_back({detail::phase_blocks(ctx.degeneracy, sd.quarter_turns), true});
    for (int r = 0; r < cfg.restarts; ++r) {
      std::seed_seq sseq{static_cast<std::uint32_t>(cfg.seed),
                         static_cast<std::uint32_t>(cfg.seed >> 32),
                         static_cast<std::uint32_t>(r), 0x5eedu};
      std::mt19937_64 rng(sseq);
      std::vector<CMatrix> a;
      for (const auto& b : ctx.degeneracy.blocks)
        a.push_back(haar_unitary(b.multiplicity, rng));
      starts.push_back({std::move(a), false});
    }
  }

  SearchResult result;
  const int batch = std::max(1, cfg.threads);
  int iteration = 0;
  std::vector<detail::StartOutcome> outcomes(starts.size());
  for (std::size_t first = 0; first < starts.size(); first += batch) {
    const int n = static_cast<int>(std::min<std::size_t>(batch, starts.size() - first));
    detail::parallel_for(n, batch, [&](int i) {
      outcomes[first + i] = engine.refine(starts[first + i].blocks);
    });
    for (int i = 0; i < n; ++i) {
      const auto& oc = outcomes[first + i];
      for (double fv : oc.history) result.history.push_back({iteration++, fv});
      if (oc.objective < result.objective) {
        result.objective = oc.objective;
        result.blocks.blocks = oc.blocks;
        result.start_index = static_cast<int>(first) + i;
        result.stage = starts[first + i].from_seed
                           ? (oc.success_without_refinement ? "seed" : "descent")
                           : "restart";
      }
      if (oc.success) {
        result.found = true;
        break;
      }
    }
    if (result.found) break;
  }

  if (!result.blocks.blocks.empty() && pin) {
    std::vector<double> theta;
    for (const auto& b : result.blocks.blocks) theta.push_back(std::arg(b(0, 0)));
    result.phases = PhaseVector(theta);
  }
  return result;
}

/// Phase search over D = diag(exp(i theta)) for a non-degenerate spectrum.
inline SearchResult phase_search(const SearchContext& ctx, const SearchConfig& cfg) {
  if (!ctx.degeneracy.non_degenerate()) {
    throw std::invalid_argument("phase_search: spectrum is degenerate");
  }
  return block_search(ctx, cfg);
}

/// Full decision pipeline for two states on the same multipartite space.
inline Verdict check_equivalence(const DensityMatrix& rho, const DensityMatrix& rho_prime,
                                 const SearchConfig& cfg = {}) {
  if (!(rho.profile() == rho_prime.profile())) {
    throw ShapeError("check_equivalence: dimension profiles differ: " +
                     to_string(rho.profile()) + " vs " + to_string(rho_prime.profile()));
  }
  Verdict verdict;
  const Spectrum sx = eig_hermitian(rho.matrix());
  const Spectrum sy = eig_hermitian(rho_prime.matrix());
  verdict.spectral_distance = spectral_distance(sx, sy);
  if (!(verdict.spectral_distance <= cfg.tol_spectrum)) {
    verdict.status = Status::kInequivalentSpectrum;
    return verdict;
  }

  const double range = sx.eigenvalues.maxCoeff() - sx.eigenvalues.minCoeff();
  const double deg_tol = cfg.tol_degeneracy * (range > 0.0 ? range : 1.0);
  SearchContext ctx{sx.basis, sy.basis, rho.profile(), degeneracy_profile(sx, deg_tol)};
  verdict.degeneracy = ctx.degeneracy;
  if (degeneracy_profile(sy, deg_tol).sizes() != ctx.degeneracy.sizes()) {
    verdict.notes.push_back("degeneracy structure of the second state differs at this tolerance");
  }

  if (!ctx.degeneracy.non_degenerate()) {
    if (ctx.degeneracy.max_multiplicity() > cfg.max_block) {
      verdict.status = Status::kDegenerateUnsupported;
      verdict.notes.push_back("eigenvalue multiplicity " +
                              std::to_string(ctx.degeneracy.max_multiplicity()) +
                              " exceeds the supported block size " +
                              std::to_string(cfg.max_block));
      return verdict;
    }
    verdict.relies_on_degenerate_extension = true;
    verdict.notes.push_back(
        "degenerate spectrum: verdict uses the block-diagonal coset criterion");
  }

  SearchResult sr = block_search(ctx, cfg);
  verdict.objective_history = std::move(sr.history);
  verdict.objective = sr.objective;
  verdict.phases = sr.phases;
  verdict.stage = sr.stage;
  if (!sr.blocks.blocks.empty()) verdict.blocks = sr.blocks;
  if (sr.blocks.blocks.empty()) {
    verdict.status = Status::kNotFound;
    return verdict;
  }

  const CMatrix v = build_V0(ctx.x, ctx.y, ctx.degeneracy, sr.blocks);
  verdict.cut_reports = is_decomposable(v, ctx.profile, cfg.tol_rank).cuts;
  if (!sr.found) {
    verdict.status = Status::kNotFound;
    return verdict;
  }

  try {
    FactorSet fv = factor_full(v, ctx.profile, cfg.tol_rank);
    // rho' = V^dag rho V, so the witness factors are the adjoints.
    FactorSet witness;
    for (const auto& f : fv.factors) witness.factors.push_back(f.adjoint());
    witness.residual = fv.residual;
    const double residual = verify_witness(rho, rho_prime, witness);
    verdict.witness_residual = residual;
    if (residual <= kWitnessTol * std::max(1.0, rho.matrix().norm())) {
      verdict.status = Status::kEquivalent;
      verdict.witness = std::move(witness);
    } else {
      verdict.status = Status::kNotFound;
      verdict.notes.push_back("witness failed verification, residual " +
                              std::to_string(residual));
    }
  } catch (const NotDecomposable& e) {
    verdict.status = Status::kNotFound;
    verdict.notes.push_back(e.what());
  }
  return verdict;
}

}  // namespace luequiv

#endif  // LUEQUIV_EQUIVALENCE_HPP
