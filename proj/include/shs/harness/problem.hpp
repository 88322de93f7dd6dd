#pragma once

// Problem files: a JSON object
//   {"dim": n, "A": M, "T": M, "S": M, "epsilon": e,
//    "label": str?, "tolerances": {...}?, "grid": {...}?}
// where each matrix M is row-major and each entry a [re, im] pair.

#include <cmath>
#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "shs/densela.hpp"
#include "shs/error.hpp"
#include "shs/ortho.hpp"
#include "shs/semispace.hpp"

namespace shs {

struct ProblemFile {
  std::size_t dim = 0;
  CMatrix A, T, S;
  double epsilon = 0.0;
  std::optional<std::string> label;
  std::optional<Tolerances> tolerances;
  std::optional<GridSpec> grid;

  friend bool operator==(const ProblemFile&, const ProblemFile&) = default;
};

namespace detail {

using ojson = nlohmann::ordered_json;

[[noreturn]] inline void invalid(const std::string& field, const std::string& why) {
  throw Error(Errc::ValidationError, field + ": " + why);
}

inline double finite_number(const ojson& j, const std::string& field) {
  if (!j.is_number()) invalid(field, "expected a finite number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) invalid(field, "expected a finite number");
  return v;
}

inline std::size_t count_field(const ojson& j, const std::string& field, std::size_t min_value) {
  if (!j.is_number_integer() || j.get<long long>() < static_cast<long long>(min_value)) {
    invalid(field, "expected an integer >= " + std::to_string(min_value));
  }
  return j.get<std::size_t>();
}

inline double positive_field(const ojson& j, const std::string& field) {
  const double v = finite_number(j, field);
  if (!(v > 0.0)) invalid(field, "expected a positive number");
  return v;
}

inline ojson matrix_to_json(const CMatrix& m) {
  ojson rows = ojson::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    ojson row = ojson::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(ojson::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline CMatrix matrix_from_json(const ojson& j, const std::string& field, std::size_t dim) {
  if (!j.is_array() || j.size() != dim) invalid(field, "expected " + std::to_string(dim) + " rows");
  CMatrix m(dim, dim);
  for (std::size_t r = 0; r < dim; ++r) {
    const std::string rf = field + "[" + std::to_string(r) + "]";
    const ojson& row = j[r];
    if (!row.is_array() || row.size() != dim) invalid(rf, "expected " + std::to_string(dim) + " entries");
    for (std::size_t c = 0; c < dim; ++c) {
      const std::string ef = rf + "[" + std::to_string(c) + "]";
      const ojson& e = row[c];
      if (!e.is_array() || e.size() != 2) invalid(ef, "expected a [re, im] pair");
      m(r, c) = {finite_number(e[0], ef + ".re"), finite_number(e[1], ef + ".im")};
    }
  }
  return m;
}

inline ojson tolerances_to_json(const Tolerances& t) {
  return ojson{{"rank_tol", t.rank_tol}, {"tol", t.tol}, {"cluster_tol", t.cluster_tol},
               {"decision_tol", t.decision_tol}};
}

inline Tolerances tolerances_from_json(const ojson& j) {
  if (!j.is_object()) invalid("tolerances", "expected an object");
  Tolerances t;
  for (const auto& [key, value] : j.items()) {
    const std::string f = "tolerances." + key;
    if (key == "rank_tol") t.rank_tol = positive_field(value, f);
    else if (key == "tol") t.tol = positive_field(value, f);
    else if (key == "cluster_tol") t.cluster_tol = positive_field(value, f);
    else if (key == "decision_tol") t.decision_tol = positive_field(value, f);
    else invalid(f, "unknown field");
  }
  return t;
}

inline ojson grid_to_json(const GridSpec& g) {
  return ojson{{"radius_lo", g.radius_lo},      {"radius_hi", g.radius_hi},
               {"radii", g.radii},              {"angles", g.angles},
               {"descent_steps", g.descent_steps}, {"radius_samples", g.radius_samples}};
}

inline GridSpec grid_from_json(const ojson& j) {
  if (!j.is_object()) invalid("grid", "expected an object");
  GridSpec g;
  for (const auto& [key, value] : j.items()) {
    const std::string f = "grid." + key;
    if (key == "radius_lo") g.radius_lo = positive_field(value, f);
    else if (key == "radius_hi") g.radius_hi = positive_field(value, f);
    else if (key == "radii") g.radii = count_field(value, f, 2);
    else if (key == "angles") g.angles = count_field(value, f, 1);
    else if (key == "descent_steps") g.descent_steps = count_field(value, f, 0);
    else if (key == "radius_samples") g.radius_samples = count_field(value, f, 8);
    else invalid(f, "unknown field");
  }
  if (!(g.radius_lo < g.radius_hi)) invalid("grid", "radius_lo must be below radius_hi");
  return g;
}

}  // namespace detail

inline nlohmann::ordered_json problem_to_json(const ProblemFile& p) {
  detail::ojson j;
  j["dim"] = p.dim;
  if (p.label) j["label"] = *p.label;
  j["epsilon"] = p.epsilon;
  j["A"] = detail::matrix_to_json(p.A);
  j["T"] = detail::matrix_to_json(p.T);
  j["S"] = detail::matrix_to_json(p.S);
  if (p.tolerances) j["tolerances"] = detail::tolerances_to_json(*p.tolerances);
  if (p.grid) j["grid"] = detail::grid_to_json(*p.grid);
  return j;
}

inline ProblemFile problem_from_json(const nlohmann::ordered_json& j) {
  using detail::invalid;
  if (!j.is_object()) invalid("<root>", "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (key != "dim" && key != "A" && key != "T" && key != "S" && key != "epsilon" && key != "label" &&
        key != "tolerances" && key != "grid") {
      invalid(key, "unknown field");
    }
  }
  for (const char* key : {"dim", "A", "T", "S", "epsilon"}) {
    if (!j.contains(key)) invalid(key, "missing required field");
  }
  ProblemFile p;
  p.dim = detail::count_field(j["dim"], "dim", 1);
  p.A = detail::matrix_from_json(j["A"], "A", p.dim);
  p.T = detail::matrix_from_json(j["T"], "T", p.dim);
  p.S = detail::matrix_from_json(j["S"], "S", p.dim);
  p.epsilon = detail::finite_number(j["epsilon"], "epsilon");
  if (!(p.epsilon >= 0.0 && p.epsilon < 1.0)) invalid("epsilon", "must lie in [0, 1)");
  if (j.contains("label")) {
    if (!j["label"].is_string()) invalid("label", "expected a string");
    p.label = j["label"].get<std::string>();
  }
  if (j.contains("tolerances")) p.tolerances = detail::tolerances_from_json(j["tolerances"]);
  if (j.contains("grid")) p.grid = detail::grid_from_json(j["grid"]);
  return p;
}

inline ProblemFile parse_problem(std::string_view text) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::ParseError, e.what());
  } catch (const nlohmann::json::out_of_range& e) {
    // Literals such as 1e999 overflow to a non-finite value.
    throw Error(Errc::ValidationError, std::string("non-finite number: ") + e.what());
  }
  return problem_from_json(j);
}

inline std::string dump_problem(const ProblemFile& p) { return problem_to_json(p).dump(2) + "\n"; }

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot write " + path);
  out << text;
  if (!out) throw Error(Errc::IoError, "write failed for " + path);
}

inline ProblemFile load_problem(const std::string& path) { return parse_problem(read_text_file(path)); }

inline void save_problem(const std::string& path, const ProblemFile& p) {
  write_text_file(path, dump_problem(p));
}

inline Tolerances effective_tolerances(const ProblemFile& p) { return p.tolerances.value_or(Tolerances{}); }
inline GridSpec effective_grid(const ProblemFile& p) { return p.grid.value_or(GridSpec{}); }

}  // namespace shs
