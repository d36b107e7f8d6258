#pragma once

// Command-line front end. run_cli is kept separate from main so the tests
// can drive it in-process.

#include <cstdlib>
#include <map>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pangles/pangles.hpp"

namespace pangles::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInternal = 1;
inline constexpr int kBadInput = 2;
inline constexpr int kDimension = 3;
inline constexpr int kNotSpd = 4;
inline constexpr int kSuiteFailed = 5;

/// Bad parameter detected by the front end itself.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::DimensionMismatch:
    case ErrorCode::NonSquare: return kDimension;
    case ErrorCode::NotSPD: return kNotSpd;
    default: return kBadInput;
  }
}

inline double default_tol() {
  const char* env = std::getenv("ANGLES_TOL");
  if (!env || !*env) return 1e-8;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(env, &used);
  } catch (const std::exception&) {
    throw UsageError(std::string("ANGLES_TOL is not a number: ") + env);
  }
  if (used != std::string(env).size() || !(v > 0.0)) throw UsageError(std::string("ANGLES_TOL must be > 0: ") + env);
  return v;
}

/// Shared matrix inputs.
struct Inputs {
  std::string f, g, weight;
};

inline InnerProductPtr load_inner_product(const std::string& weight, Index n) {
  if (weight.empty()) return InnerProduct::euclidean(n);
  const Matrix K = read_matrix(weight);
  if (K.rows() != K.cols()) throw Error(ErrorCode::NonSquare, "weight matrix is not square");
  if (K.rows() != n)
    throw Error(ErrorCode::DimensionMismatch, "weight matrix has dimension " + std::to_string(K.rows()) +
                                                  ", spanning sets have " + std::to_string(n) + " rows");
  try {
    return InnerProduct::weighted(K);
  } catch (const Error& e) {
    // Any failure to factor the weight is reported as an SPD failure.
    if (e.code() == ErrorCode::NotSymmetric || e.code() == ErrorCode::NotFinite)
      throw Error(ErrorCode::NotSPD, e.what());
    throw;
  }
}

inline std::pair<Subspace, Subspace> load_pair(const Inputs& in) {
  if (in.f.empty() || in.g.empty()) throw UsageError("--f and --g are required");
  const Matrix A = read_matrix(in.f);
  const Matrix B = read_matrix(in.g);
  if (A.rows() != B.rows())
    throw Error(ErrorCode::DimensionMismatch, "--f has " + std::to_string(A.rows()) + " rows, --g has " +
                                                  std::to_string(B.rows()));
  const InnerProductPtr ip = load_inner_product(in.weight, A.rows());
  return {Subspace::from_spanning(A, ip), Subspace::from_spanning(B, ip)};
}

inline json document(const char* command) { return {{"schema", kSchemaVersion}, {"command", command}}; }

inline void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

// ---------------------------------------------------------------------------
// Randomized suites for `check`.

using Rng = std::mt19937_64;

inline Matrix random_gaussian(Index r, Index c, Rng& rng) {
  std::normal_distribution<double> normal;
  Matrix A(r, c);
  for (Index j = 0; j < c; ++j)
    for (Index i = 0; i < r; ++i) A(i, j) = normal(rng);
  return A;
}

inline int random_int(int lo, int hi, Rng& rng) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// Random pair of proper subspaces; about a third share some columns so
/// that intersections occur.
inline std::pair<Subspace, Subspace> random_pair(int nmax, Rng& rng) {
  const int n = random_int(2, nmax, rng);
  const int kF = random_int(1, n - 1, rng);
  const int kG = random_int(1, n - 1, rng);
  Matrix A = random_gaussian(n, kF, rng);
  Matrix B = random_gaussian(n, kG, rng);
  if (random_int(0, 2, rng) == 0) {
    const int shared = random_int(1, std::min(kF, kG), rng);
    B.leftCols(shared) = A.leftCols(shared);
  }
  return {Subspace::from_spanning(A), Subspace::from_spanning(B)};
}

inline Matrix random_symmetric(Index n, Rng& rng) {
  const Matrix A = random_gaussian(n, n, rng);
  return 0.5 * (A + A.transpose());
}

inline void add_spectrum(CheckResult& r, const std::string& name, const SpectrumReport& s, double tol) {
  r.add(name + ": Hausdorff distance predicted vs computed", s.hausdorff, tol);
  r.add_flag(name + ": multiplicities match", s.multiplicities_match);
}

inline CheckResult run_suite(const std::string& suite, const Subspace& F, const Subspace& G, const Matrix* A,
                             double tol, Rng& rng) {
  const AngleOptions opt{tol, tol};
  CheckResult r;
  if (suite == "relations") {
    r.append(seven_relations_check(F, G, tol, opt));
    r.append(between_pairs_check(F, G, tol, opt));
    r.append(angle_characterization_of_gap(F, G, std::max(tol, 1e-9), opt));
  } else if (suite == "spectra") {
    add_spectrum(r, "P_G - P_F", spectrum_difference(F, G, tol, opt), tol);
    add_spectrum(r, "P_F + P_G", spectrum_sum(F, G, tol, opt), tol);
  } else {
    const Index n = F.ambient_dim();
    const OperatorSpec op = make_operator(A ? *A : random_symmetric(n, rng));
    const RitzReport rep = ritz_gap_bound_check(op, F, G);
    r.add("Ritz values: dist <= spread * gap", rep.hausdorff, rep.bound + 1e-10);
    const Vector f = random_gaussian(n, 1, rng).col(0);
    const Vector g = random_gaussian(n, 1, rng).col(0);
    r.append(rayleigh_bound_check(op, f, g));
  }
  return r;
}

struct SuiteTally {
  int runs = 0;
  int failures = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
};

// ---------------------------------------------------------------------------

inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Principal angles between subspaces: angles, projector algebra, Ritz bounds and "
               "alternating-projection solvers"};
  app.name("pangles");
  app.require_subcommand(1);

  Inputs in;
  double tol = 0.0;
  bool tol_given = false;
  auto add_pair = [&](CLI::App* sc, bool weight) {
    sc->add_option("--f", in.f, "spanning set of F (CSV or .json)");
    sc->add_option("--g", in.g, "spanning set of G (CSV or .json)");
    if (weight) sc->add_option("--weight", in.weight, "SPD Gram matrix of the inner product");
  };
  auto add_tol = [&](CLI::App* sc) {
    sc->add_option_function<double>("--tol", [&](double v) {
      tol = v;
      tol_given = true;
    }, "tolerance (default 1e-8 or ANGLES_TOL)");
  };

  CLI::App* angles = app.add_subcommand("angles", "angle sets, gap and Friedrichs values of a pair");
  add_pair(angles, true);
  add_tol(angles);

  std::string suite;
  int trials = 100;
  unsigned long long seed = 1;
  int nmax = 12;
  std::string a_path;
  CLI::App* check = app.add_subcommand("check", "verify identity suites on a pair or on random pairs");
  add_pair(check, true);
  add_tol(check);
  check->add_option("--suite", suite, "relations | spectra | ritz")
      ->required()
      ->check(CLI::IsMember({"relations", "spectra", "ritz"}));
  check->add_option("--trials", trials, "random trials when no pair is given")->check(CLI::PositiveNumber);
  check->add_option("--seed", seed, "base seed; trial i uses seed + i");
  check->add_option("--max-dim", nmax, "largest ambient dimension of random trials")->check(CLI::Range(2, 200));
  check->add_option("--a", a_path, "symmetric operator for the ritz suite");

  CLI::App* spectra = app.add_subcommand("spectra", "spectra of P_G - P_F and P_F + P_G");
  add_pair(spectra, true);
  add_tol(spectra);

  CLI::App* polar = app.add_subcommand("polar", "orthogonal W with W P_F W^T = P_G");
  add_pair(polar, true);
  add_tol(polar);

  std::optional<double> lo, hi;
  CLI::App* principal = app.add_subcommand("principal", "principal vectors, or invariant pair for an angle range");
  add_pair(principal, true);
  add_tol(principal);
  principal->add_option("--lo", lo, "smallest selected angle");
  principal->add_option("--hi", hi, "largest selected angle (< pi/2)");

  bool invariant = false;
  CLI::App* ritz = app.add_subcommand("ritz", "Ritz values of A on F and G with the gap bound");
  add_pair(ritz, false);
  add_tol(ritz);
  ritz->add_option("--a", a_path, "symmetric operator")->required();
  ritz->add_flag("--invariant", invariant, "F is an extremal invariant subspace; use the gap^2 bound");

  std::string variant = "mult", method = "cg", format = "json", e0_path;
  double solver_tol = 1e-10;
  int max_iter = 1000;
  auto add_solver = [&](CLI::App* sc) {
    sc->add_option("--variant", variant, "mult | add")->check(CLI::IsMember({"mult", "add"}));
    sc->add_option("--method", method, "cg | richardson")->check(CLI::IsMember({"cg", "richardson"}));
    sc->add_option("--tol", solver_tol, "relative residual tolerance")->check(CLI::PositiveNumber);
    sc->add_option("--max-iter", max_iter, "iteration limit")->check(CLI::NonNegativeNumber);
    sc->add_option("--seed", seed, "seed of the random start vector");
    sc->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  };
  CLI::App* altproj = app.add_subcommand("altproj", "solve A e = 0 for the alternating-projection operators");
  add_pair(altproj, true);
  add_solver(altproj);
  altproj->add_option("--e0", e0_path, "start vector (column); default: seeded random vector projected onto F");

  double alpha = 0.6, beta = 0.4;
  int n = 10;
  CLI::App* ddm = app.add_subcommand("ddm", "one-dimensional overlapping domain decomposition experiment");
  ddm->add_option("--alpha", alpha, "right end of the overlap");
  ddm->add_option("--beta", beta, "left end of the overlap");
  ddm->add_option("--n", n, "uniform intervals before inserting alpha and beta");
  add_solver(ddm);

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::Success&) {
    out << app.help();
    if (!app.get_subcommands().empty()) out << app.get_subcommands().front()->help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "pangles: " << e.what() << '\n';
    return kBadInput;
  }

  try {
    if (!tol_given) tol = default_tol();
    if (!(tol > 0.0)) throw UsageError("--tol must be > 0");
    const AngleOptions opt{tol, tol};

    if (angles->parsed()) {
      const auto [F, G] = load_pair(in);
      json j = document("angles");
      j["tol"] = tol;
      j["report"] = angle_report(F, G, opt);
      emit(out, j);
      return kOk;
    }

    if (spectra->parsed()) {
      const auto [F, G] = load_pair(in);
      json j = document("spectra");
      j["difference"] = spectrum_difference(F, G, tol, opt);
      j["sum"] = spectrum_sum(F, G, tol, opt);
      emit(out, j);
      return kOk;
    }

    if (polar->parsed()) {
      const auto [F, G] = load_pair(in);
      const PolarW w = polar_w(F, G, tol);
      json j = document("polar");
      j["polar"] = w;
      j["checks"] = unitary_equivalence_check(F, G, w.W, tol);
      emit(out, j);
      return kOk;
    }

    if (principal->parsed()) {
      const auto [F, G] = load_pair(in);
      json j = document("principal");
      if (lo || hi) {
        const InvariantPair p = principal_invariant_pair(F, G, lo.value_or(0.0), hi.value_or(0.0), tol, opt);
        j["invariant_pair"] = p;
      } else {
        json pairs = json::array();
        for (const PrincipalPair& p : principal_pairs(F, G, opt)) {
          json e = p;
          e["residual"] = principal_pair_residual(F, G, p);
          pairs.push_back(std::move(e));
        }
        j["pairs"] = std::move(pairs);
      }
      emit(out, j);
      return kOk;
    }

    if (ritz->parsed()) {
      const auto [F, G] = load_pair(in);
      const Matrix A = read_matrix(a_path);
      if (A.rows() != A.cols()) throw Error(ErrorCode::NonSquare, "--a is not square");
      if (A.rows() != F.ambient_dim()) throw Error(ErrorCode::DimensionMismatch, "--a does not match --f and --g");
      const OperatorSpec op = make_operator(A);
      json j = document("ritz");
      j["report"] = invariant ? ritz_invariant_bound_check(op, F, G, tol) : ritz_gap_bound_check(op, F, G);
      emit(out, j);
      return kOk;
    }

    if (check->parsed()) {
      std::map<std::string, SuiteTally> tally;
      int failed = 0;
      int runs = 0;
      auto record = [&](const CheckResult& r) {
        ++runs;
        if (!r.pass()) ++failed;
        for (const CheckItem& item : r.items) {
          SuiteTally& t = tally[item.name];
          ++t.runs;
          if (!item.pass) ++t.failures;
          t.worst_margin = std::min(t.worst_margin, item.limit - item.value);
        }
      };
      if (!in.f.empty() || !in.g.empty()) {
        const auto [F, G] = load_pair(in);
        Matrix A;
        if (!a_path.empty()) {
          A = read_matrix(a_path);
          if (A.rows() != F.ambient_dim()) throw Error(ErrorCode::DimensionMismatch, "--a does not match the pair");
        }
        Rng rng(seed);
        record(run_suite(suite, F, G, a_path.empty() ? nullptr : &A, tol, rng));
      } else {
        for (int t = 0; t < trials; ++t) {
          Rng rng(seed + static_cast<unsigned long long>(t));
          const auto [F, G] = random_pair(nmax, rng);
          record(run_suite(suite, F, G, nullptr, tol, rng));
        }
      }
      json items = json::array();
      for (const auto& [name, t] : tally)
        items.push_back({{"name", name}, {"runs", t.runs}, {"failures", t.failures}, {"worst_margin", t.worst_margin},
                         {"pass", t.failures == 0}});
      json j = document("check");
      j["suite"] = suite;
      j["seed"] = seed;
      j["runs"] = runs;
      j["failed_runs"] = failed;
      j["pass"] = failed == 0;
      j["tol"] = tol;
      j["theorems"] = std::move(items);
      emit(out, j);
      if (failed > 0) {
        err << "pangles: " << failed << " of " << runs << " runs failed\n";
        return kSuiteFailed;
      }
      return kOk;
    }

    const Variant v = variant == "mult" ? Variant::Multiplicative : Variant::Additive;
    const Method m = method == "cg" ? Method::CG : Method::Richardson;

    if (altproj->parsed()) {
      const auto [F, G] = load_pair(in);
      Vector e0;
      if (!e0_path.empty()) {
        const Matrix E = read_matrix(e0_path);
        if (E.cols() != 1) throw UsageError("--e0 must be a single column");
        e0 = E.col(0);
      } else {
        Rng rng(seed);
        e0 = projector(F) * random_gaussian(F.ambient_dim(), 1, rng).col(0);
      }
      const SolveTrace t = solve({v, F, G, e0}, solver_tol, max_iter, m);
      if (format == "csv") {
        out << trace_csv(t);
      } else {
        json j = document("altproj");
        j["variant"] = variant;
        j["method"] = method;
        j["tol"] = solver_tol;
        j["result"] = t;
        emit(out, j);
      }
      return kOk;
    }

    // ddm
    if (n < 4) throw UsageError("--n must be at least 4");
    const DdmSpaces s = assemble(uniform_config(alpha, beta, n));
    const DdmSummary summary = summarize(s, {solver_tol, max_iter, 50, seed});
    const DdmRun run = run_experiment(s, m, v, solver_tol, max_iter, std::nullopt, seed);
    if (format == "csv") {
      out << ddm_summary_csv(summary);
    } else {
      json j = document("ddm");
      j["config"] = {{"alpha", alpha}, {"beta", beta}, {"n", n}, {"variant", variant}, {"method", method},
                     {"tol", solver_tol}, {"seed", seed}};
      j["summary"] = summary;
      j["run"] = {{"iterations_to_tol", optional_json(run.trace.iterations_to_tol)},
                  {"iterations", run.trace.iterations},
                  {"spectrum", run.spectrum},
                  {"predicted_spectrum", run.predicted},
                  {"spectrum_mismatch", run.spectrum_mismatch},
                  {"null_dim", run.null_dim},
                  {"trace", run.trace}};
      emit(out, j);
    }
    return kOk;
  } catch (const UsageError& e) {
    err << "pangles: " << e.what() << '\n';
    return kBadInput;
  } catch (const Error& e) {
    err << "pangles: " << to_string(e.code()) << ": " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "pangles: internal error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace pangles::cli
