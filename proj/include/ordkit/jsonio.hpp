#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "ordkit/finitegroup.hpp"
#include "ordkit/galdim.hpp"
#include "ordkit/heckecomb.hpp"
#include "ordkit/localalg.hpp"
#include "ordkit/report.hpp"
#include "ordkit/rootdata.hpp"

// JSON bindings for every externally visible structure, plus the canonical
// dump used for byte-stable reports. nlohmann::json stores object keys
// sorted, so dump() is deterministic as long as we never emit timestamps.

namespace ordkit {

using Json = nlohmann::json;

inline std::string canonical_json(const Json& j) { return j.dump(2) + "\n"; }

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

namespace detail {
inline std::optional<long long> opt_ll(const Json& j, const std::string& key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<long long>();
}
}  // namespace detail

// --------------------------------------------------------------------------
// Root data.
// --------------------------------------------------------------------------

inline Json datum_to_json(const RootDatum& d) {
  Json j;
  j["rank"] = d.rank;
  j["roots"] = d.roots;
  j["coroots"] = d.coroots;
  j["simple"] = d.simple;
  j["dims"] = d.dims;
  return j;
}

inline RootDatum datum_from_json(const Json& j) {
  RootDatum d;
  try {
    d.rank = j.at("rank").get<int>();
    d.roots = j.at("roots").get<std::vector<Vec>>();
    d.coroots = j.at("coroots").get<std::vector<Vec>>();
    d.simple = j.at("simple").get<std::vector<int>>();
    if (j.contains("dims")) d.dims = j.at("dims").get<std::vector<long long>>();
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("root datum JSON: ") + e.what());
  }
  d.torus_rank = d.rank;
  d.name = j.value("name", "custom");
  finalize(d);
  return d;
}

// --------------------------------------------------------------------------
// Polynomials. Accepted forms: a grammar string ("3*X1^2 - X2"), or an array
// of terms where a term is either a grammar string or [coeff, [exponents]]
// with coeff an integer or an exact-rational string.
// --------------------------------------------------------------------------

template <class F>
Poly<F> poly_from_json(const F& k, const Json& j, int nvars) {
  if (j.is_string()) return parse_poly(k, j.get<std::string>(), nvars);
  if (!j.is_array()) throw std::invalid_argument("polynomial JSON must be a string or an array of terms");
  Poly<F> out{nvars, {}};
  for (const auto& term : j) {
    if (term.is_string()) {
      out = poly_add(k, out, parse_poly(k, term.get<std::string>(), nvars));
      continue;
    }
    if (!term.is_array() || term.size() != 2 || !term.at(1).is_array())
      throw std::invalid_argument("polynomial term must be a string or [coeff, [exponents]]");
    typename F::Elem coeff;
    if (term.at(0).is_number_integer())
      coeff = k.from_int(term.at(0).get<long long>());
    else if (term.at(0).is_string())
      coeff = k.from_string(term.at(0).get<std::string>());
    else
      throw std::invalid_argument("polynomial coefficient must be an integer or a rational string");
    auto exps = term.at(1).get<std::vector<int>>();
    if (static_cast<int>(exps.size()) > nvars) throw std::invalid_argument("exponent vector longer than the variable count");
    exps.resize(static_cast<std::size_t>(nvars), 0);
    poly_add_term(k, out, exps, coeff);
  }
  return out;
}

template <class F>
std::vector<Poly<F>> gens_from_json(const F& k, const Json& j, int nvars) {
  if (!j.is_array()) throw std::invalid_argument("generator list JSON must be an array");
  std::vector<Poly<F>> out;
  for (const auto& g : j) out.push_back(poly_from_json(k, g, nvars));
  return out;
}

template <class F>
Json poly_to_json(const F& k, const Poly<F>& f) {
  Json terms = Json::array();
  for (const auto& [e, c] : f.terms) terms.push_back(Json::array({k.str(c), e}));
  return terms;
}

// --------------------------------------------------------------------------
// Reports.
// --------------------------------------------------------------------------

inline std::string failure_summary(const Report& rep) {
  const Check* c = rep.first_failure();
  if (!c) return "all checks passed";
  return c->detail.empty() ? c->name : c->name + ": " + c->detail;
}

inline Json report_to_json(const Report& rep) {
  Json j;
  j["title"] = rep.title;
  j["status"] = rep.ok() ? "pass" : "fail";
  Json checks = Json::array();
  for (const auto& c : rep.checks) {
    Json jc;
    jc["name"] = c.name;
    jc["pass"] = c.pass;
    jc["detail"] = c.detail;
    checks.push_back(jc);
  }
  j["checks"] = checks;
  return j;
}

// Markdown is rendered from the JSON object, never assembled independently.
inline std::string report_markdown(const Json& j) {
  std::string md = "# " + j.value("title", std::string("report")) + "\n\n";
  md += "status: **" + j.value("status", std::string("?")) + "**\n\n";
  if (j.contains("checks"))
    for (const auto& c : j.at("checks")) {
      md += std::string("- [") + (c.value("pass", c.value("verdict", false)) ? "x" : " ") + "] " +
            c.value("name", std::string("?"));
      std::string detail = c.value("detail", c.value("witness", std::string("")));
      if (!detail.empty()) md += " — " + detail;
      md += "\n";
    }
  return md;
}

// --------------------------------------------------------------------------
// Module-specific payloads.
// --------------------------------------------------------------------------

inline Json count_report_to_json(const CosetCountReport& r) {
  Json j;
  j["lambda"] = r.lambda;
  j["prime"] = r.prime;
  j["predicted"] = r.predicted.str();
  j["oracle_count"] = r.oracle_count ? Json(r.oracle_count->str()) : Json(nullptr);
  j["match"] = r.match;
  return j;
}

inline Json repset_to_json(const CosetRepSet& r) {
  Json j;
  j["lambda"] = r.lambda;
  j["prime"] = r.prime;
  j["slot_root"] = r.slot_root;
  j["slot_modulus"] = r.slot_modulus;
  j["reps"] = r.reps;
  return j;
}

template <class F>
Json ext_report_to_json(const F& k, const ExtReport<F>& rep) {
  Json j;
  j["field"] = k.name();
  j["dims"] = rep.dims;
  Json a = Json::array();
  for (const auto& row : rep.linear_part_matrix) {
    Json jr = Json::array();
    for (const auto& x : row) jr.push_back(k.str(x));
    a.push_back(jr);
  }
  j["linear_part_matrix"] = a;
  Json mats = Json::array();
  for (const auto& mat : rep.action_matrices) {
    Json jm = Json::array();
    for (const auto& row : mat) {
      Json jr = Json::array();
      for (const auto& x : row) jr.push_back(k.str(x));
      jm.push_back(jr);
    }
    mats.push_back(jm);
  }
  j["action_matrices"] = mats;
  j["generated_over_bottom"] = rep.generated_over_bottom;
  j["failing_degree"] = rep.failing_degree ? Json(*rep.failing_degree) : Json(nullptr);
  j["note"] = rep.note;
  return j;
}

inline Json degree_table_to_json(const DegreeTable& t) {
  Json j;
  Json table = Json::object();
  for (const auto& [deg, dim] : t.table) table[std::to_string(deg)] = dim;
  j["table"] = table;
  j["multiplicity"] = t.multiplicity;
  j["pattern_matches"] = t.pattern_matches;
  return j;
}

inline Json modmatrix_to_json(const ModMatrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.n; ++i) {
    Json row = Json::array();
    for (int jx = 0; jx < m.n; ++jx) row.push_back(m.at(i, jx));
    rows.push_back(row);
  }
  return Json{{"n", m.n}, {"mod", m.mod}, {"rows", rows}};
}

// --------------------------------------------------------------------------
// Dimension ledgers.
// --------------------------------------------------------------------------

inline Json ledger_to_json(const DimLedger& led) {
  Json j;
  j["l0"] = led.l0;
  j["r"] = led.r;
  j["dim_LieG"] = led.dim_LieG;
  j["dim_LieB"] = led.dim_LieB;
  j["dim_LieU"] = led.dim_LieU;
  j["dim_LieT"] = led.dim_LieT;
  Json locals = Json::array();
  for (const auto& loc : led.locals) {
    Json jl;
    jl["place"] = loc.place;
    if (loc.h0) jl["h0"] = *loc.h0;
    if (loc.h1) jl["h1"] = *loc.h1;
    if (loc.h2) jl["h2"] = *loc.h2;
    if (loc.t) jl["t"] = *loc.t;
    jl["dimV"] = loc.dimV;
    jl["degF"] = loc.degF;
    locals.push_back(jl);
  }
  j["locals"] = locals;
  auto put = [&](const char* key, const std::optional<long long>& v) {
    if (v) j[key] = *v;
  };
  put("h0_V", led.h0_V);
  put("h0_Vdual1", led.h0_Vdual1);
  put("selmer", led.selmer);
  put("dual_selmer", led.dual_selmer);
  put("ordinary_tangent", led.ordinary_tangent);
  put("coker_psi", led.coker_psi);
  put("q0", led.q0);
  put("d", led.d);
  return j;
}

// Structural parse only: identity checking is the auditor's job, so an
// inconsistent ledger still parses and gets a failing report.
inline DimLedger ledger_from_json(const Json& j) {
  DimLedger led;
  try {
    led.l0 = j.at("l0").get<long long>();
    led.r = j.at("r").get<long long>();
    led.dim_LieG = j.at("dim_LieG").get<long long>();
    led.dim_LieB = j.at("dim_LieB").get<long long>();
    led.dim_LieU = j.at("dim_LieU").get<long long>();
    led.dim_LieT = j.at("dim_LieT").get<long long>();
    for (const auto& jl : j.value("locals", Json::array())) {
      LocalDatum loc;
      loc.place = jl.at("place").get<std::string>();
      loc.h0 = detail::opt_ll(jl, "h0");
      loc.h1 = detail::opt_ll(jl, "h1");
      loc.h2 = detail::opt_ll(jl, "h2");
      loc.t = detail::opt_ll(jl, "t");
      loc.dimV = jl.value("dimV", 0LL);
      loc.degF = jl.value("degF", 1LL);
      led.locals.push_back(loc);
    }
    led.h0_V = detail::opt_ll(j, "h0_V");
    led.h0_Vdual1 = detail::opt_ll(j, "h0_Vdual1");
    led.selmer = detail::opt_ll(j, "selmer");
    led.dual_selmer = detail::opt_ll(j, "dual_selmer");
    led.ordinary_tangent = detail::opt_ll(j, "ordinary_tangent");
    led.coker_psi = detail::opt_ll(j, "coker_psi");
    led.q0 = detail::opt_ll(j, "q0");
    led.d = detail::opt_ll(j, "d");
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("ledger JSON: ") + e.what());
  }
  return led;
}

}  // namespace ordkit
