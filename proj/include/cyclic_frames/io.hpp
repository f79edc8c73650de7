#pragma once

// JSON and CSV encodings of frames, systems and reports, plus the textual
// complex-list syntax used on the command line ("0,1,0,0", "1+2i,-i").
//
// Frame JSON:  {"d": D, "n": N, "vectors": [[[re, im] x D] x N]}
// System JSON: {"n": N, "f1": [[re, im] x D], "T": [[re, im] x D*D]}  (T row-major)
// Floats are written as %.16e, i.e. 17 significant digits, so files round-trip bit-exactly.

#include <cctype>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cyclic.hpp"
#include "dynamical.hpp"
#include "erasure.hpp"
#include "error.hpp"
#include "frame.hpp"
#include "numerics.hpp"

namespace cyclic_frames::io {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Serialisation with fixed 17-digit floats

namespace detail {
inline bool is_scalar(const Json& j) { return !j.is_object() && !j.is_array(); }

inline void write_scalar(std::string& out, const Json& j) {
  if (j.is_number_float()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", j.get<double>());
    out += buf;
  } else {
    out += j.dump();
  }
}

inline bool is_flat(const Json& j) {
  if (!j.is_array()) return false;
  for (const Json& e : j) {
    if (is_scalar(e)) continue;
    if (!e.is_array()) return false;
    for (const Json& x : e)
      if (!is_scalar(x)) return false;
  }
  return true;
}

inline void write(std::string& out, const Json& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) out += ",\n";
      first = false;
      out += pad + Json(it.key()).dump() + ": ";
      write(out, it.value(), indent, depth + 1);
    }
    out += "\n" + close_pad + "}";
  } else if (j.is_array()) {
    if (j.empty()) {
      out += "[]";
      return;
    }
    if (is_flat(j) && j.size() <= 16) {
      out += "[";
      for (std::size_t k = 0; k < j.size(); ++k) {
        if (k) out += ", ";
        write(out, j[k], indent, depth + 1);
      }
      out += "]";
      return;
    }
    out += "[\n";
    for (std::size_t k = 0; k < j.size(); ++k) {
      if (k) out += ",\n";
      out += pad;
      write(out, j[k], indent, depth + 1);
    }
    out += "\n" + close_pad + "]";
  } else {
    write_scalar(out, j);
  }
}
}  // namespace detail

inline std::string dump(const Json& j, int indent = 2) {
  std::string out;
  detail::write(out, j, indent, 0);
  out += "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Scalars, vectors, matrices

inline Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Json to_json(std::span<const Complex> v) {
  Json a = Json::array();
  for (Complex z : v) a.push_back(to_json(z));
  return a;
}

inline Complex complex_from_json(const Json& j, std::string_view where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw FrameError(ErrorKind::InvalidArgument, std::string(where) + ": expected [re, im]");
  }
  const Complex z{j[0].get<double>(), j[1].get<double>()};
  if (!is_finite(z)) throw FrameError(ErrorKind::InvalidArgument, std::string(where) + ": non-finite value");
  return z;
}

inline Vector vector_from_json(const Json& j, std::string_view where) {
  if (!j.is_array()) throw FrameError(ErrorKind::InvalidArgument, std::string(where) + ": expected an array");
  Vector v;
  v.reserve(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    v.push_back(complex_from_json(j[k], std::string(where) + "[" + std::to_string(k) + "]"));
  }
  return v;
}

/// Row-major flat list of entries.
inline Json matrix_to_json(const Matrix& m) { return to_json(m.entries()); }

/// Accepts the flat row-major form or a nested list of rows.
inline Matrix matrix_from_json(const Json& j, std::size_t rows, std::size_t cols, std::string_view where) {
  if (!j.is_array()) throw FrameError(ErrorKind::InvalidArgument, std::string(where) + ": expected an array");
  Vector flat;
  if (j.size() == rows && rows > 0 && j[0].is_array() && j[0].size() == cols &&
      (j[0].empty() || j[0][0].is_array())) {
    for (std::size_t i = 0; i < rows; ++i) {
      Vector row = vector_from_json(j[i], std::string(where) + "[" + std::to_string(i) + "]");
      if (row.size() != cols) throw FrameError(ErrorKind::InvalidArgument, std::string(where) + ": ragged rows");
      flat.insert(flat.end(), row.begin(), row.end());
    }
  } else {
    flat = vector_from_json(j, where);
  }
  if (flat.size() != rows * cols) {
    throw FrameError(ErrorKind::InvalidArgument, std::string(where) + ": expected " + std::to_string(rows * cols) +
                                                     " entries, got " + std::to_string(flat.size()));
  }
  return Matrix(rows, cols, std::move(flat));
}

// ---------------------------------------------------------------------------
// Frames and systems

inline Json to_json(const Frame& f) {
  Json j;
  j["d"] = f.dimension();
  j["n"] = f.size();
  Json vectors = Json::array();
  for (std::size_t k = 0; k < f.size(); ++k) vectors.push_back(to_json(f.vector(k)));
  j["vectors"] = std::move(vectors);
  return j;
}

inline Frame frame_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("d") || !j.contains("n") || !j.contains("vectors")) {
    throw FrameError(ErrorKind::InvalidArgument, "frame JSON needs fields d, n, vectors");
  }
  const auto d = j["d"].get<std::size_t>();
  const auto n = j["n"].get<std::size_t>();
  const Json& vectors = j["vectors"];
  if (!vectors.is_array() || vectors.size() != n) {
    throw FrameError(ErrorKind::InvalidArgument, "frame JSON: vectors must hold n entries");
  }
  std::vector<Vector> cols;
  for (std::size_t k = 0; k < n; ++k) {
    Vector v = vector_from_json(vectors[k], "vectors[" + std::to_string(k) + "]");
    if (v.size() != d) {
      throw FrameError(ErrorKind::InvalidArgument, "frame JSON: vector " + std::to_string(k + 1) + " has length " +
                                                       std::to_string(v.size()) + ", expected d = " + std::to_string(d));
    }
    cols.push_back(std::move(v));
  }
  return Frame::from_vectors(cols);
}

inline Json to_json(const DynamicalSystem& s) {
  Json j;
  j["n"] = s.n;
  j["f1"] = to_json(s.seed);
  j["T"] = matrix_to_json(s.op);
  return j;
}

inline DynamicalSystem system_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("f1") || !j.contains("T")) {
    throw FrameError(ErrorKind::InvalidArgument, "system JSON needs fields n, f1, T");
  }
  Vector seed = vector_from_json(j["f1"], "f1");
  const std::size_t d = seed.size();
  if (d == 0) throw FrameError(ErrorKind::InvalidArgument, "system JSON: empty f1");
  return DynamicalSystem{matrix_from_json(j["T"], d, d, "T"), std::move(seed), j["n"].get<std::size_t>()};
}

// ---------------------------------------------------------------------------
// Reports

inline Json indices_to_json(std::span<const std::size_t> idx) {
  Json a = Json::array();
  for (std::size_t k : idx) a.push_back(k + 1);
  return a;
}

inline Json to_json(const FrameBounds& b) { return Json{{"lower", b.lower}, {"upper", b.upper}}; }

inline Json to_json(const AnalysisReport& r) {
  Json j;
  j["bounds"] = to_json(r.bounds);
  j["is_frame"] = r.is_frame;
  j["is_tight"] = r.is_tight;
  j["is_parseval"] = r.is_parseval;
  j["is_uniform"] = r.is_uniform;
  j["common_norm"] = r.common_norm;
  j["is_equiangular"] = r.is_equiangular;
  j["common_modulus"] = r.common_modulus;
  j["gram_offdiag_moduli"] = Json{{"min", r.gram_offdiag_moduli.min},
                                  {"max", r.gram_offdiag_moduli.max},
                                  {"mean", r.gram_offdiag_moduli.mean}};
  return j;
}

inline Json optional_to_json(const std::optional<std::size_t>& v) { return v ? Json(*v) : Json(nullptr); }

inline Json to_json(const CyclicReport& r) {
  Json j;
  j["n"] = r.n;
  j["is_cyclic"] = r.is_cyclic;
  j["minimal_period"] = optional_to_json(r.minimal_period);
  j["eigen_order_lcm"] = optional_to_json(r.eigen_order_lcm);
  j["eigenvalues_converged"] = r.eigenvalues_converged;
  j["eigenvalues"] = to_json(r.eigenvalues);
  j["eigenvalue_separation"] = to_string(r.separation);
  j["distinct_eigenvalues"] = r.distinct_eigenvalues;
  j["diagonalizable"] = r.diagonalizable;
  j["eigenvector_condition"] = std::isfinite(r.eigenvector_condition) ? Json(r.eigenvector_condition) : Json(nullptr);
  j["all_roots_of_unity"] = r.all_roots_of_unity;
  j["primitive_root_present"] = r.primitive_root_present;
  j["seed_coordinates"] = to_json(r.seed_coordinates);
  j["seed_coordinates_nonzero"] = r.seed_coordinates_nonzero;
  j["orbit_is_frame"] = r.orbit_is_frame;
  j["orbit_lower_bound"] = r.orbit_lower_bound;
  j["characterization_holds"] = r.characterization_holds;
  j["failing_clauses"] = r.failing_clauses;
  return j;
}

inline Json to_json(const WindowReport& w) {
  Json j;
  j["window_is_basis"] = w.window_is_basis;
  j["operator_surjective"] = w.operator_surjective;
  return j;
}

inline Json to_json(const ErasureReport& r) {
  Json j;
  j["erased_indices"] = indices_to_json(r.erased_indices);
  j["survivor_is_frame"] = r.survivor_is_frame;
  j["survivor_bounds"] = to_json(r.survivor_bounds);
  j["error_norm"] = r.error_norm;
  j["tightened"] = r.tightened;
  Json worst = Json::array();
  for (const WorstCase& w : r.worst_case_by_size) {
    worst.push_back(Json{{"m", w.m}, {"argmax", indices_to_json(w.argmax)}, {"error", w.error}, {"min_error", w.min_error}});
  }
  j["worst_case_by_size"] = std::move(worst);
  Json sweep = Json::array();
  for (const ErasureEntry& e : r.sweep) {
    sweep.push_back(Json{{"indices", indices_to_json(e.indices)}, {"error", e.error}, {"survivor_is_frame", e.survivor_is_frame}});
  }
  j["sweep"] = std::move(sweep);
  return j;
}

/// Worst-case table: m, argmax set (1-based, ';'-separated), error.
inline std::string worst_case_csv(const ErasureReport& r) {
  std::string out = "m,argmax_set,error\n";
  for (const WorstCase& w : r.worst_case_by_size) {
    std::string set;
    for (std::size_t k = 0; k < w.argmax.size(); ++k) set += (k ? ";" : "") + std::to_string(w.argmax[k] + 1);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", w.error);
    out += std::to_string(w.m) + "," + set + "," + buf + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Complex list syntax

/// One token: "re", "re+imi", "re-imi", "imi", "i", "-i".
inline Complex parse_complex(std::string_view token) {
  std::string t;
  for (char c : token)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) throw FrameError(ErrorKind::InvalidArgument, "empty complex token");

  auto to_double = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || !std::isfinite(v)) {
      throw FrameError(ErrorKind::InvalidArgument, "cannot parse complex token '" + std::string(token) + "'");
    }
    return v;
  };

  if (t.back() != 'i' && t.back() != 'j') return {to_double(t), 0.0};
  t.pop_back();
  // Split at the last sign that is not a leading sign or an exponent sign.
  std::size_t split = std::string::npos;
  for (std::size_t k = t.size(); k-- > 1;) {
    if ((t[k] == '+' || t[k] == '-') && t[k - 1] != 'e' && t[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  const std::string re = split == std::string::npos ? "" : t.substr(0, split);
  std::string im = split == std::string::npos ? t : t.substr(split);
  if (im.empty() || im == "+") im = "1";
  if (im == "-") im = "-1";
  return {re.empty() ? 0.0 : to_double(re), to_double(im)};
}

inline Vector parse_complex_list(std::string_view text) {
  Vector out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::size_t end = comma == std::string_view::npos ? text.size() : comma;
    out.push_back(parse_complex(text.substr(start, end - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace cyclic_frames::io
