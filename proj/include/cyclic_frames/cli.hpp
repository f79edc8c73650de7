#pragma once

// Command-line surface: construct / analyze / dual / tight / erasure / verify.
// Every verb prints one JSON document on stdout (or a flattened table with
// --pretty). Exit codes: 0 success, 1 usage or data error, 2 verification failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cyclic.hpp"
#include "dynamical.hpp"
#include "erasure.hpp"
#include "error.hpp"
#include "frame.hpp"
#include "io.hpp"
#include "numerics.hpp"

namespace cyclic_frames::cli {

using io::Json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitVerificationFailed = 2;

/// FRAMES_TOL if set and parseable, otherwise the library default.
inline double default_tolerance() {
  if (const char* env = std::getenv("FRAMES_TOL")) {
    try {
      std::size_t used = 0;
      const double v = std::stod(env, &used);
      if (used == std::string(env).size() && v > 0.0 && std::isfinite(v)) return v;
    } catch (const std::exception&) {
    }
    throw FrameError(ErrorKind::InvalidArgument, std::string("FRAMES_TOL is not a positive number: ") + env);
  }
  return kDefaultTol;
}

// ---------------------------------------------------------------------------
// Report builders shared by the verbs

/// Full classification of a frame: bounds and shape, dynamical detection,
/// windows, kernel shift test and spectral diagnosis.
inline Json analyze_frame(const Frame& f, double tol) {
  Json j;
  const AnalysisReport report = classify(f, tol);
  j["analysis"] = io::to_json(report);
  Json dyn;
  dyn["detected"] = false;
  j["kernel_shift_invariant"] = nullptr;
  j["cyclic"] = nullptr;
  if (!report.is_frame) {
    j["dynamical"] = std::move(dyn);
    return j;
  }
  const double residual = kernel_shift_residual(f, tol);
  j["kernel_shift_invariant"] = residual <= tol;
  j["kernel_shift_residual"] = residual;
  if (const std::optional<DynamicalSystem> sys = detect_dynamical(f, tol)) {
    dyn["detected"] = true;
    dyn["system"] = io::to_json(*sys);
    dyn["windows"] = io::to_json(window_report(*sys, tol));
    j["cyclic"] = io::to_json(diagnose(sys->op, sys->seed, sys->n, tol));
  }
  j["dynamical"] = std::move(dyn);
  return j;
}

/// Frame JSON plus the generating system and the analysis of the constructed frame.
inline Json construction_document(const Frame& f, const DynamicalSystem& sys, double tol) {
  Json j = io::to_json(f);
  j["system"] = io::to_json(sys);
  j["report"] = analyze_frame(f, tol);
  return j;
}

struct Check {
  std::string name;
  bool passed = false;
  double value = 0.0;
};

/// Runs every invariant that applies to the frame. The frame is cyclic-checked
/// through both the direct route and the kernel shift route.
inline Json verify_frame(const Frame& f, double tol, std::uint64_t seed, bool* all_passed) {
  std::vector<Check> checks;
  auto add = [&](std::string name, bool ok, double value = 0.0) { checks.push_back({std::move(name), ok, value}); };
  const std::size_t d = f.dimension();
  const std::size_t n = f.size();
  const double root_d = std::sqrt(static_cast<double>(d));
  const Matrix eye = Matrix::identity(d);
  Json info;

  const AnalysisReport report = classify(f, tol);
  add("is_frame", report.is_frame, report.bounds.lower);
  add("report_consistency", (!report.is_parseval || report.is_tight) && (!report.is_equiangular || report.is_uniform));
  if (report.is_frame) {
    const Frame dual = canonical_dual(f, tol);
    const double dual_res = frobenius_distance(duality_product(f, dual), eye);
    add("canonical_dual_identity", dual_res <= tol * root_d, dual_res);

    const Frame tight = canonical_tight(f, tol);
    add("canonical_tight_is_parseval", classify(tight, tol).is_parseval);

    const DynamicalDual dyn_dual = dynamical_dual(f, tol);
    const double dyn_res = frobenius_distance(duality_product(dyn_dual.permuted, dyn_dual.dual), eye);
    add("dynamical_dual_identity", dyn_res <= tol * root_d, dyn_res);
    std::size_t zeros = 0;
    for (std::size_t k = 0; k < n; ++k) zeros += norm2(dyn_dual.dual.vector(k)) == 0.0 ? 1 : 0;
    add("dynamical_dual_zero_padding", zeros == n - d, static_cast<double>(zeros));
    if (n > d) {
      const WindowReport w = window_report(dyn_dual.dual_system, tol);
      bool dichotomy = w.window_is_basis.front() && !w.operator_surjective;
      for (std::size_t l = 1; l < w.window_is_basis.size(); ++l) dichotomy = dichotomy && !w.window_is_basis[l];
      add("dual_window_dichotomy", dichotomy);
    }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    Vector signal(d);
    for (auto& z : signal) z = {gauss(rng), gauss(rng)};
    const Vector coeffs = f.synthesis().adjoint() * signal;
    const Vector rebuilt = reconstruct_after_erasure(f, {}, coeffs, tol);
    const double rec_err = norm2(subtract(rebuilt, signal)) / norm2(signal);
    add("reconstruction", rec_err <= tol * root_d, rec_err);

    const ErasureReport er = erasure_analysis(f, 1, {}, tol);
    const Frame parseval = er.tightened ? canonical_tight(f, tol) : f;
    double rank_one = 0.0;
    for (const ErasureEntry& e : er.sweep) {
      const double sq = std::pow(norm2(parseval.vector(e.indices.front())), 2);
      rank_one = std::max(rank_one, std::abs(e.error - sq));
    }
    add("one_erasure_equals_squared_norm", rank_one <= tol, rank_one);

    const double kernel_res = kernel_shift_residual(f, tol);
    const bool kernel_invariant = kernel_res <= tol;
    const std::optional<DynamicalSystem> sys = detect_dynamical(f, tol);
    const bool cyclic = sys && is_cyclic(sys->op, n, tol);
    info["dynamical"] = sys.has_value();
    info["cyclic"] = cyclic;
    info["kernel_shift_residual"] = kernel_res;
    add("kernel_shift_matches_cyclicity", kernel_invariant == cyclic, kernel_res);
    if (sys) {
      add("first_window_is_basis", numerical_rank(f.synthesis().columns(0, d), tol) == d);
      const double mismatch = frobenius_distance(orbit(*sys).synthesis(), f.synthesis());
      add("orbit_reproduces_frame", mismatch <= tol * (1.0 + frobenius_norm(f.synthesis())), mismatch);
    }
    if (cyclic) {
      const WindowReport w = window_report(*sys, tol);
      bool all_windows = w.operator_surjective;
      for (bool b : w.window_is_basis) all_windows = all_windows && b;
      add("cyclic_windows_full_rank", all_windows);

      const CyclicReport diag = diagnose(sys->op, sys->seed, n, tol);
      add("spectral_characterization", diag.characterization_holds);
      add("minimal_period_divides_n", diag.minimal_period && n % *diag.minimal_period == 0,
          diag.minimal_period ? static_cast<double>(*diag.minimal_period) : 0.0);
      if (diag.eigen_order_lcm && diag.minimal_period) {
        add("minimal_period_matches_eigen_orders", *diag.eigen_order_lcm == *diag.minimal_period);
      }

      const NormBoundCheck nb = norm_bound_check(*sys, tol);
      add("operator_norm_bounds", nb.holds(), nb.op_norm);
      const ConjugationCheck cc = conjugation_check(*sys, tol);
      add("conjugation_identity", cc.holds, cc.residual);

      try {
        const DynamicalSystem tight_sys = canonical_tight_cyclic(*sys, tol);
        const double unitary_res = frobenius_distance(tight_sys.op.adjoint() * tight_sys.op, eye);
        add("tightened_operator_unitary", unitary_res <= tol * root_d, unitary_res);
        const EquiangularityCriterion crit = equiangularity_criterion(*sys, tol);
        add("equiangularity_criterion_agrees", crit.agrees_with_gram);
        info["equiangular_after_tightening"] = crit.constant;
      } catch (const FrameError& e) {
        add(std::string("canonical_tight_cyclic: ") + e.what(), false);
      }
      if (report.is_tight) {
        add("tight_cyclic_is_uniform", report.is_uniform);
        const double unitary_res = frobenius_distance(sys->op.adjoint() * sys->op, eye);
        add("tight_cyclic_operator_unitary", unitary_res <= tol * root_d, unitary_res);
      }
    }
  }

  bool passed = true;
  Json arr = Json::array();
  for (const Check& c : checks) {
    passed = passed && c.passed;
    arr.push_back(Json{{"name", c.name}, {"passed", c.passed}, {"value", c.value}});
  }
  *all_passed = passed;
  Json j;
  j["passed"] = passed;
  j["checks"] = std::move(arr);
  j["info"] = std::move(info);
  return j;
}

// ---------------------------------------------------------------------------
// Output helpers

namespace detail {
inline void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& rows) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), rows);
  } else if (j.is_array() && !io::detail::is_flat(j)) {
    for (std::size_t k = 0; k < j.size(); ++k) flatten(j[k], prefix + "[" + std::to_string(k + 1) + "]", rows);
  } else {
    rows.emplace_back(prefix, j.dump());
  }
}
}  // namespace detail

/// Two-column key/value table.
inline std::string render_pretty(const Json& j) {
  std::vector<std::pair<std::string, std::string>> rows;
  detail::flatten(j, "", rows);
  std::size_t width = 0;
  for (const auto& [k, v] : rows) width = std::max(width, k.size());
  std::ostringstream out;
  for (const auto& [k, v] : rows) out << k << std::string(width - k.size() + 2, ' ') << v << "\n";
  return out.str();
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FrameError(ErrorKind::InvalidArgument, path + ": cannot open file");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FrameError(ErrorKind::InvalidArgument, path + ": " + e.what());
  }
}

inline Frame read_frame_file(const std::string& path) {
  const Json j = read_json_file(path);
  try {
    return io::frame_from_json(j);
  } catch (const FrameError& e) {
    throw FrameError(e.kind(), path + ": " + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw FrameError(ErrorKind::InvalidArgument, path + ": " + e.what());
  }
}

inline std::vector<std::size_t> parse_index_list(const std::string& text, std::size_t upper, const char* flag) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    long long v = -1;
    try {
      v = std::stoll(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size() || v < 1 || static_cast<std::size_t>(v) > upper) {
      throw FrameError(ErrorKind::InvalidArgument,
                       std::string(flag) + ": '" + tok + "' is not an index in 1.." + std::to_string(upper));
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Entry point

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Construct, analyze and transform dynamical and cyclic frames"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<double> tol_flag;
  bool pretty = false;
  std::uint64_t seed = 0;
  app.add_option("--tol", tol_flag, "Numerical tolerance (overrides FRAMES_TOL)")->check(CLI::PositiveNumber);
  app.add_flag("--pretty", pretty, "Print a key/value table instead of JSON");
  app.add_option("--seed", seed, "Seed for randomized probes");

  auto* construct = app.add_subcommand("construct", "Build a cyclic frame");
  construct->require_subcommand(1);
  std::size_t d = 0, n = 0;
  std::string m_list, f1_list, a_list, u_list;
  auto* simplex = construct->add_subcommand("simplex", "Standard basis plus minus their sum");
  simplex->add_option("--d", d, "Dimension")->required()->check(CLI::PositiveNumber);
  auto* roots = construct->add_subcommand("roots", "Diagonal roots-of-unity operator");
  roots->add_option("--n", n, "Frame length")->required()->check(CLI::PositiveNumber);
  roots->add_option("--d", d, "Dimension")->required()->check(CLI::PositiveNumber);
  roots->add_option("--m", m_list, "Root indices m1,...,mD in 1..n")->required();
  roots->add_option("--f1", f1_list, "Seed coordinates (default all ones)");
  roots->add_option("--u", u_list, "Row-major conjugator U (d*d complex entries)");
  auto* circ = construct->add_subcommand("circulant", "Complement of a circulant range");
  circ->add_option("--n", n, "Frame length")->required()->check(CLI::PositiveNumber);
  circ->add_option("--d", d, "Dimension")->required()->check(CLI::PositiveNumber);
  circ->add_option("--a", a_list, "Spectrum a with exactly n-d nonzero entries")->required();

  std::string path;
  auto* analyze = app.add_subcommand("analyze", "Classify a frame file");
  analyze->add_option("frame", path, "Frame JSON file")->required();
  auto* dual = app.add_subcommand("dual", "Zero-padded dynamical dual and canonical dual");
  dual->add_option("frame", path, "Frame JSON file")->required();
  auto* tight = app.add_subcommand("tight", "Canonical tight frame");
  tight->add_option("frame", path, "Frame JSON file")->required();
  auto* erasure = app.add_subcommand("erasure", "Erasure error sweep");
  erasure->add_option("frame", path, "Frame JSON file")->required();
  std::size_t max_m = 1;
  std::string erase_list;
  bool csv = false;
  erasure->add_option("--m", max_m, "Largest erasure size (1 or 2)")->check(CLI::Range(1, 2));
  erasure->add_option("--erase", erase_list, "Indices to erase for the headline error (1-based)");
  erasure->add_flag("--csv", csv, "Print the worst-case table as CSV");
  auto* verify = app.add_subcommand("verify", "Run the invariant suite on a frame file");
  verify->add_option("frame", path, "Frame JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitDataError;
  }

  auto emit = [&](const Json& j) { out << (pretty ? render_pretty(j) : io::dump(j)); };

  try {
    const double tol = tol_flag ? *tol_flag : default_tolerance();

    if (*construct) {
      if (*simplex) {
        const DynamicalSystem sys = simplex_frame(Matrix::identity(d), tol);
        emit(construction_document(orbit(sys), sys, tol));
      } else if (*roots) {
        std::vector<std::size_t> indices = parse_index_list(m_list, n, "--m");
        if (indices.size() != d) throw FrameError(ErrorKind::InvalidArgument, "--m: expected d root indices");
        Vector f1 = f1_list.empty() ? Vector(d, 1.0) : io::parse_complex_list(f1_list);
        if (f1.size() != d) throw FrameError(ErrorKind::InvalidArgument, "--f1: expected d coordinates");
        std::optional<Matrix> u;
        if (!u_list.empty()) {
          Vector entries = io::parse_complex_list(u_list);
          if (entries.size() != d * d) throw FrameError(ErrorKind::InvalidArgument, "--u: expected d*d entries");
          u = Matrix(d, d, std::move(entries));
        }
        const RootsFrame rf = roots_frame(n, indices, f1, u, tol);
        Json doc = construction_document(orbit(rf.system), rf.system, tol);
        doc["period"] = rf.period;
        doc["primitive_root"] = rf.primitive_root;
        doc["minimal"] = rf.minimal;
        emit(doc);
      } else if (*circ) {
        const Vector a = io::parse_complex_list(a_list);
        if (a.size() != n) throw FrameError(ErrorKind::InvalidArgument, "--a: expected n entries");
        const CirculantFrame cf = circulant_frame(a, d, tol);
        Json doc = construction_document(cf.frame, cf.system, tol);
        doc["circulant"] = io::matrix_to_json(cf.circulant);
        Json kernel = Json::array();
        for (std::size_t k = 0; k < cf.range.cols(); ++k) kernel.push_back(io::to_json(cf.range.column(k)));
        doc["kernel_basis"] = std::move(kernel);
        emit(doc);
      }
      return kExitOk;
    }

    const Frame frame = read_frame_file(path);
    if (*analyze) {
      emit(analyze_frame(frame, tol));
    } else if (*dual) {
      const DynamicalDual dd = dynamical_dual(frame, tol);
      Json j;
      j["permutation"] = io::indices_to_json(dd.permutation);
      j["permuted"] = io::to_json(dd.permuted);
      j["dual"] = io::to_json(dd.dual);
      j["dual_system"] = io::to_json(dd.dual_system);
      j["duality_residual"] =
          frobenius_distance(duality_product(dd.permuted, dd.dual), Matrix::identity(frame.dimension()));
      j["canonical_dual"] = io::to_json(canonical_dual(frame, tol));
      emit(j);
    } else if (*tight) {
      const std::optional<DynamicalSystem> sys = detect_dynamical(frame, tol);
      if (sys && is_cyclic(sys->op, sys->n, tol)) {
        const DynamicalSystem t = canonical_tight_cyclic(*sys, tol);
        emit(construction_document(orbit(t), t, tol));
      } else {
        const Frame t = canonical_tight(frame, tol);
        Json j = io::to_json(t);
        j["report"] = analyze_frame(t, tol);
        emit(j);
      }
    } else if (*erasure) {
      const std::vector<std::size_t> one_based =
          erase_list.empty() ? std::vector<std::size_t>{} : parse_index_list(erase_list, frame.size(), "--erase");
      std::vector<std::size_t> erased;
      for (std::size_t k : one_based) erased.push_back(k - 1);
      const ErasureReport r = erasure_analysis(frame, max_m, erased, tol);
      if (csv) {
        out << io::worst_case_csv(r);
      } else {
        emit(io::to_json(r));
      }
    } else if (*verify) {
      bool passed = false;
      emit(verify_frame(frame, tol, seed, &passed));
      return passed ? kExitOk : kExitVerificationFailed;
    }
    return kExitOk;
  } catch (const FrameError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDataError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << (path.empty() ? std::string() : path + ": ") << e.what() << "\n";
    return kExitDataError;
  }
}

}  // namespace cyclic_frames::cli
