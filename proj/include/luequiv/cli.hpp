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

#ifndef LUEQUIV_CLI_HPP
#define LUEQUIV_CLI_HPP

#include <cstdint>
#include <cstdlib>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "luequiv/luequiv.hpp"
#include "luequiv/matrix_io.hpp"

namespace luequiv::cli {

// Exit codes are the machine contract of the tool.
enum ExitCode : int {
  kExitEquivalent = 0,
  kExitUsage = 1,
  kExitInequivalentSpectrum = 2,
  kExitNotFound = 3,
  kExitDegenerateUnsupported = 4,
  kExitNotDecomposable = 5,
};

inline int exit_code(Status s) {
  switch (s) {
    case Status::kEquivalent: return kExitEquivalent;
    case Status::kInequivalentSpectrum: return kExitInequivalentSpectrum;
    case Status::kNotFound: return kExitNotFound;
    case Status::kDegenerateUnsupported: return kExitDegenerateUnsupported;
  }
  return kExitUsage;
}

inline constexpr std::uint64_t kDefaultSeed = 1;

/// --seed, else LU_EQUIV_SEED, else kDefaultSeed.
inline std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("LU_EQUIV_SEED"); env && *env) {
    try {
      std::size_t pos = 0;
      const unsigned long long v = std::stoull(env, &pos);
      if (pos == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw ParseError(std::string("LU_EQUIV_SEED is not an unsigned integer: ") + env);
  }
  return kDefaultSeed;
}

inline std::vector<int> parse_dims(const std::string& text) {
  std::vector<int> dims;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    int d = 0;
    try {
      d = std::stoi(item, &pos);
    } catch (const std::exception&) {
      throw ParseError("bad dims '" + text + "'");
    }
    if (pos != item.size() || d < 1) throw ParseError("bad dims '" + text + "'");
    dims.push_back(d);
  }
  if (dims.size() < 2) throw ParseError("dims need at least two subsystems: '" + text + "'");
  return dims;
}

inline MatrixFile factor_file(const CMatrix& u, const std::string& label) {
  MatrixFile mf;
  mf.dims = {static_cast<int>(u.rows())};
  mf.data = u;
  mf.label = label;
  return mf;
}

inline void print_matrix(std::ostream& out, const CMatrix& m, const std::string& indent) {
  std::ostringstream row;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    row.str("");
    row << indent;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const Complex z = m(i, j);
      row << std::showpos << std::fixed << std::setprecision(6) << z.real() << z.imag()
          << "i" << std::noshowpos << (j + 1 < m.cols() ? "  " : "");
    }
    out << row.str() << "\n";
  }
}

inline nlohmann::json report_json(const RankOneReport& r, int cut) {
  return {{"cut", cut},
          {"sigma1", r.sigma1},
          {"sigma2", r.sigma2},
          {"ratio", r.ratio},
          {"is_rank_one", r.is_rank_one}};
}

inline nlohmann::json verdict_json(const Verdict& v, const std::vector<std::string>& warnings) {
  nlohmann::json j;
  j["status"] = to_string(v.status);
  j["exit_code"] = exit_code(v.status);
  j["spectral_distance"] = v.spectral_distance;
  nlohmann::json deg = nlohmann::json::array();
  for (const auto& b : v.degeneracy.blocks)
    deg.push_back({{"eigenvalue", b.eigenvalue}, {"multiplicity", b.multiplicity}});
  j["degeneracy"] = deg;
  j["relies_on_degenerate_extension"] = v.relies_on_degenerate_extension;
  j["objective"] = v.objective;
  j["stage"] = v.stage;
  j["phases"] = v.phases ? nlohmann::json(v.phases->theta) : nlohmann::json(nullptr);
  if (v.blocks) {
    nlohmann::json blocks = nlohmann::json::array();
    for (const auto& b : v.blocks->blocks) blocks.push_back(to_json(factor_file(b, "block")));
    j["blocks"] = blocks;
  } else {
    j["blocks"] = nullptr;
  }
  nlohmann::json cuts = nlohmann::json::array();
  for (std::size_t k = 0; k < v.cut_reports.size(); ++k)
    cuts.push_back(report_json(v.cut_reports[k], static_cast<int>(k) + 1));
  j["cuts"] = cuts;
  if (v.witness) {
    nlohmann::json factors = nlohmann::json::array();
    for (std::size_t k = 0; k < v.witness->factors.size(); ++k)
      factors.push_back(
          to_json(factor_file(v.witness->factors[k], "U" + std::to_string(k + 1))));
    j["witness"] = {{"factors", factors}, {"residual", v.witness_residual}};
  } else {
    j["witness"] = nullptr;
  }
  nlohmann::json hist = nlohmann::json::array();
  for (const auto& h : v.objective_history) hist.push_back({h.iteration, h.objective});
  j["history"] = hist;
  j["notes"] = v.notes;
  j["warnings"] = warnings;
  return j;
}

inline DensityMatrix load_density(const std::string& path, std::vector<std::string>& warnings) {
  MatrixFile mf = read_matrix_file(path);
  if (!mf.square_over_dims()) throw ParseError(path + ": density matrix must be square");
  std::vector<std::string> local;
  DensityMatrix rho = DensityMatrix::normalized(mf.data, DimProfile(mf.dims), &local);
  for (auto& w : local) warnings.push_back(path + ": " + w);
  return rho;
}

struct CheckOptions {
  std::string file_a;
  std::string file_b;
  SearchConfig config;
  std::optional<std::uint64_t> seed;
  bool json = false;
};

inline int cmd_check(const CheckOptions& opt, std::ostream& out, std::ostream& err) {
  std::vector<std::string> warnings;
  Verdict v;
  try {
    const DensityMatrix a = load_density(opt.file_a, warnings);
    const DensityMatrix b = load_density(opt.file_b, warnings);
    if (!(a.profile() == b.profile())) {
      err << "error: dims differ: " << to_string(a.profile()) << " vs "
          << to_string(b.profile()) << "\n";
      return kExitUsage;
    }
    SearchConfig cfg = opt.config;
    cfg.seed = resolve_seed(opt.seed);
    v = check_equivalence(a, b, cfg);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  for (const auto& w : warnings) err << "warning: " << w << "\n";

  if (opt.json) {
    out << verdict_json(v, warnings).dump(2) << "\n";
    return exit_code(v.status);
  }
  out << "verdict: " << to_string(v.status) << "\n";
  out << "spectral distance: " << v.spectral_distance << "\n";
  if (v.status == Status::kInequivalentSpectrum) return exit_code(v.status);
  out << "degeneracy: "
      << (v.degeneracy.non_degenerate() ? "non-degenerate"
                                        : "max multiplicity " +
                                              std::to_string(v.degeneracy.max_multiplicity()))
      << " (" << v.degeneracy.blocks.size() << " blocks)\n";
  if (v.relies_on_degenerate_extension) {
    out << "note: degenerate case, verdict relies on the block-diagonal (V0) extension of the "
           "criterion\n";
  }
  for (const auto& n : v.notes) out << "note: " << n << "\n";
  if (!v.objective_history.empty()) {
    out << "search: " << v.objective_history.size() << " steps, stage " << v.stage
        << ", first objective " << v.objective_history.front().objective << ", best "
        << v.objective << "\n";
  }
  for (std::size_t k = 0; k < v.cut_reports.size(); ++k) {
    out << "cut " << k + 1 << ": sigma2/sigma1 = " << v.cut_reports[k].ratio << "\n";
  }
  if (v.phases) {
    out << "phases:";
    for (double t : v.phases->theta) out << " " << std::setprecision(10) << t;
    out << std::setprecision(6) << "\n";
  }
  if (v.witness) {
    out << "witness residual: " << v.witness_residual << "\n";
    for (std::size_t k = 0; k < v.witness->factors.size(); ++k) {
      out << "U" << k + 1 << " =\n";
      print_matrix(out, v.witness->factors[k], "  ");
    }
  }
  return exit_code(v.status);
}

struct RealignOptions {
  std::string file;
  int cut = 1;
  std::string out_path;
  bool json = false;
};

inline int cmd_realign(const RealignOptions& opt, std::ostream& out, std::ostream& err) {
  MatrixFile result;
  RankOneReport rep;
  try {
    MatrixFile mf = read_matrix_file(opt.file);
    if (!mf.square_over_dims()) throw ParseError(opt.file + ": matrix must be square");
    const DimProfile profile(mf.dims);
    CutRealignment cr = realign(mf.data, profile, opt.cut);
    rep = rank_one_test(cr.matrix, 0.5);
    result.dims = mf.dims;
    result.data = std::move(cr.matrix);
    result.label = "realigned at cut " + std::to_string(opt.cut);
    if (!opt.out_path.empty()) write_matrix_file(opt.out_path, result);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (opt.json) {
    nlohmann::json j = report_json(rep, opt.cut);
    j.erase("is_rank_one");
    j["shape"] = {result.data.rows(), result.data.cols()};
    if (opt.out_path.empty()) j["matrix"] = to_json(result);
    out << j.dump(2) << "\n";
    return kExitEquivalent;
  }
  out << "cut " << opt.cut << ": " << result.data.rows() << "x" << result.data.cols()
      << " realigned matrix\n";
  out << "sigma1 = " << std::setprecision(17) << rep.sigma1 << "\nsigma2 = " << rep.sigma2
      << "\nsigma2/sigma1 = " << rep.ratio << std::setprecision(6) << "\n";
  if (opt.out_path.empty()) out << dump_matrix_file(result);
  return kExitEquivalent;
}

struct FactorOptions {
  std::string file;
  std::string out_prefix;
  double tol_rank = 1e-7;
  bool json = false;
};

inline int cmd_factor(const FactorOptions& opt, std::ostream& out, std::ostream& err) {
  MatrixFile mf;
  DecomposabilityReport rep;
  std::optional<FactorSet> fs;
  std::string failure;
  try {
    mf = read_matrix_file(opt.file);
    if (!mf.square_over_dims()) throw ParseError(opt.file + ": matrix must be square");
    const DimProfile profile(mf.dims);
    rep = is_decomposable(mf.data, profile, opt.tol_rank);
    if (rep.decomposable) {
      try {
        fs = factor_full(mf.data, profile, opt.tol_rank);
      } catch (const NotDecomposable& e) {
        failure = e.what();
      }
    }
    if (fs && !opt.out_prefix.empty()) {
      for (std::size_t k = 0; k < fs->factors.size(); ++k) {
        write_matrix_file(opt.out_prefix + "_factor_" + std::to_string(k + 1) + ".json",
                          factor_file(fs->factors[k], "U" + std::to_string(k + 1)));
      }
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  const int code = fs ? kExitEquivalent : kExitNotDecomposable;
  if (opt.json) {
    nlohmann::json j;
    j["decomposable"] = fs.has_value();
    nlohmann::json cuts = nlohmann::json::array();
    for (std::size_t k = 0; k < rep.cuts.size(); ++k)
      cuts.push_back(report_json(rep.cuts[k], static_cast<int>(k) + 1));
    j["cuts"] = cuts;
    j["failing_cut"] = rep.first_failing_cut();
    if (fs) {
      j["residual"] = fs->residual;
      nlohmann::json factors = nlohmann::json::array();
      for (std::size_t k = 0; k < fs->factors.size(); ++k)
        factors.push_back(to_json(factor_file(fs->factors[k], "U" + std::to_string(k + 1))));
      j["factors"] = factors;
    }
    if (!failure.empty()) j["error"] = failure;
    out << j.dump(2) << "\n";
    return code;
  }
  for (std::size_t k = 0; k < rep.cuts.size(); ++k) {
    out << "cut " << k + 1 << ": sigma2/sigma1 = " << rep.cuts[k].ratio
        << (rep.cuts[k].is_rank_one ? "" : "  (not rank one)") << "\n";
  }
  if (!fs) {
    if (rep.first_failing_cut() > 0) {
      out << "not decomposable: cut " << rep.first_failing_cut() << " fails with sigma2/sigma1 = "
          << rep.cuts[static_cast<std::size_t>(rep.first_failing_cut() - 1)].ratio << "\n";
    } else {
      out << "not decomposable: " << failure << "\n";
    }
    return code;
  }
  out << "decomposable into " << fs->factors.size() << " factors, residual " << fs->residual
      << "\n";
  for (std::size_t k = 0; k < fs->factors.size(); ++k) {
    out << "U" << k + 1 << " =\n";
    print_matrix(out, fs->factors[k], "  ");
  }
  return code;
}

struct GenOptions {
  std::string kind;
  std::string dims = "2,2,2";
  double a = 3.0, b = 5.0, c = 7.0;
  int degenerate = 1;  // multiplicity of one planted repeated eigenvalue
  std::optional<std::uint64_t> seed;
  std::string out_prefix;
};

inline int cmd_gen(const GenOptions& opt, std::ostream& out, std::ostream& err) {
  std::vector<std::string> written;
  try {
    if (opt.out_prefix.empty()) throw ParseError("gen: --out is required");
    const std::uint64_t seed = resolve_seed(opt.seed);
    auto emit = [&](const std::string& suffix, const CMatrix& m, const std::vector<int>& dims,
                    const std::string& label, std::optional<std::uint64_t> s) {
      MatrixFile mf{dims, m, label, s};
      const std::string path = opt.out_prefix + suffix;
      write_matrix_file(path, mf);
      written.push_back(path);
    };
    if (opt.kind == "pair-equivalent") {
      const DimProfile profile(parse_dims(opt.dims));
      oracle::PairSample ps = [&] {
        if (opt.degenerate <= 1) return oracle::make_equivalent_pair(profile, seed);
        Rng rng(seed ^ 0xde9e7e5a7eULL);
        return oracle::make_equivalent_pair(
            profile, seed,
            oracle::SpectrumSpec::planted(
                oracle::degenerate_spectrum(profile.total(), opt.degenerate, rng)));
      }();
      emit("_rho.json", ps.rho.matrix(), profile.dims(), "rho", seed);
      emit("_rho_prime.json", ps.rho_prime.matrix(), profile.dims(), "rho_prime", seed);
      for (std::size_t k = 0; k < ps.planted->factors.size(); ++k) {
        const CMatrix& u = ps.planted->factors[k];
        emit("_factor_" + std::to_string(k + 1) + ".json", u, {static_cast<int>(u.rows())},
             "planted U" + std::to_string(k + 1), seed);
      }
    } else if (opt.kind == "pair-spectrum-mismatch") {
      const DimProfile profile(parse_dims(opt.dims));
      oracle::PairSample ps = oracle::make_spectrum_mismatch_pair(profile, seed);
      emit("_rho.json", ps.rho.matrix(), profile.dims(), "rho", seed);
      emit("_rho_prime.json", ps.rho_prime.matrix(), profile.dims(), "rho_prime", seed);
    } else if (opt.kind == "paper-example") {
      oracle::PaperExample ex = oracle::paper_example(opt.a, opt.b, opt.c);
      for (const auto& w : ex.warnings) err << "warning: " << w << "\n";
      emit("_rho.json", ex.rho.matrix(), {2, 2, 2}, "rho", std::nullopt);
      emit("_rho_prime.json", ex.rho_prime.matrix(), {2, 2, 2}, "rho_prime", std::nullopt);
    } else {
      throw ParseError("gen: unknown kind '" + opt.kind + "'");
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  for (const auto& p : written) out << "wrote " << p << "\n";
  return kExitEquivalent;
}

/// Parses argv and dispatches to a subcommand.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Local-unitary equivalence of multipartite mixed states", "lu_equiv"};
  app.require_subcommand(1);

  CheckOptions check;
  std::uint64_t check_seed = 0;
  auto* sc = app.add_subcommand("check", "Decide local-unitary equivalence of two states");
  sc->add_option("file_a", check.file_a, "First density matrix file")->required();
  sc->add_option("file_b", check.file_b, "Second density matrix file")->required();
  sc->add_option("--tol-rank", check.config.tol_rank, "sigma2/sigma1 bound per cut")
      ->capture_default_str();
  sc->add_option("--tol-spec", check.config.tol_spectrum, "Eigenvalue agreement tolerance")
      ->capture_default_str();
  sc->add_option("--tol-degeneracy", check.config.tol_degeneracy,
                 "Degeneracy gap, relative to the spectral range")
      ->capture_default_str();
  sc->add_option("--seeds", check.config.discrete_seeds, "Discrete seeds")->capture_default_str();
  sc->add_option("--sweeps", check.config.sweeps, "Descent cycles per start")
      ->capture_default_str();
  sc->add_option("--restarts", check.config.restarts, "Random restarts")->capture_default_str();
  sc->add_option("--max-block", check.config.max_block, "Largest supported multiplicity")
      ->capture_default_str();
  sc->add_option("--threads", check.config.threads, "Parallel starts")->capture_default_str();
  auto* seed_opt = sc->add_option("--seed", check_seed, "RNG seed (default: LU_EQUIV_SEED or 1)");
  sc->add_flag("--json", check.json, "Emit the verdict as JSON");

  RealignOptions realign_opt;
  auto* sr = app.add_subcommand("realign", "Realign a matrix across a sequential cut");
  sr->add_option("file", realign_opt.file, "Matrix file")->required();
  sr->add_option("--cut", realign_opt.cut, "Cut k: subsystems 1..k | k+1..M")->required();
  sr->add_option("--out", realign_opt.out_path, "Write the realigned matrix here");
  sr->add_flag("--json", realign_opt.json, "Emit JSON");

  FactorOptions factor_opt;
  auto* sf = app.add_subcommand("factor", "Factor a unitary into local unitaries");
  sf->add_option("file", factor_opt.file, "Unitary matrix file")->required();
  sf->add_option("--out", factor_opt.out_prefix, "Write <prefix>_factor_k.json files");
  sf->add_option("--tol-rank", factor_opt.tol_rank, "sigma2/sigma1 bound per cut")
      ->capture_default_str();
  sf->add_flag("--json", factor_opt.json, "Emit JSON");

  GenOptions gen;
  std::uint64_t gen_seed = 0;
  auto* sg = app.add_subcommand("gen", "Generate fixture files");
  sg->add_option("kind", gen.kind, "pair-equivalent | pair-spectrum-mismatch | paper-example")
      ->required()
      ->check(CLI::IsMember({"pair-equivalent", "pair-spectrum-mismatch", "paper-example"}));
  sg->add_option("--dims", gen.dims, "Local dimensions, e.g. 2,2,2")->capture_default_str();
  sg->add_option("--a", gen.a, "paper-example parameter a")->capture_default_str();
  sg->add_option("--b", gen.b, "paper-example parameter b")->capture_default_str();
  sg->add_option("--c", gen.c, "paper-example parameter c")->capture_default_str();
  sg->add_option("--degenerate", gen.degenerate,
                 "pair-equivalent: plant one eigenvalue with this multiplicity");
  auto* gen_seed_opt = sg->add_option("--seed", gen_seed, "RNG seed (default: LU_EQUIV_SEED or 1)");
  sg->add_option("--out", gen.out_prefix, "Output path prefix")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  if (*sc) {
    if (*seed_opt) check.seed = check_seed;
    return cmd_check(check, out, err);
  }
  if (*sr) return cmd_realign(realign_opt, out, err);
  if (*sf) return cmd_factor(factor_opt, out, err);
  if (*sg) {
    if (*gen_seed_opt) gen.seed = gen_seed;
    return cmd_gen(gen, out, err);
  }
  return kExitUsage;
}

}  // namespace luequiv::cli

#endif  // LUEQUIV_CLI_HPP
