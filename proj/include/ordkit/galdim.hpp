#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ordkit/report.hpp"
#include "ordkit/rootdata.hpp"

// Dimension bookkeeping for ordinary deformation data. Every quantity here is
// an abstract nonnegative integer supplied by the caller or derived from a
// root datum; the engine verifies the arithmetic between them and never
// computes any actual cohomology. Reports repeat that caveat in their title.

namespace ordkit {

struct LieDims {
  long long r = 0;      // torus rank
  long long dim_u = 0;  // unipotent radical
  long long dim_t = 0;  // torus
  long long dim_b = 0;  // Borel
  long long dim_g = 0;  // whole group
};

inline LieDims lie_dims(const RootDatum& d) {
  if (!d.finalized) throw std::invalid_argument("lie_dims: datum not finalized");
  LieDims out;
  out.r = d.rank;
  for (int i : d.positive) out.dim_u += d.dims[static_cast<std::size_t>(i)];
  out.dim_t = d.rank;
  out.dim_b = out.dim_t + out.dim_u;
  out.dim_g = out.dim_b + out.dim_u;
  return out;
}

namespace detail {
inline void require_nonneg(long long v, const std::string& what) {
  if (v < 0) throw std::invalid_argument(what + " must be nonnegative");
}
}  // namespace detail

// --------------------------------------------------------------------------
// Ledger types. Optional fields mean "not supplied"; identities are enforced
// only between supplied fields.
// --------------------------------------------------------------------------

struct LocalDatum {
  std::string place;  // "p", "infinity", or a generic label
  std::optional<long long> h0, h1, h2;
  std::optional<long long> t;  // tangent dimension of the chosen condition
  long long dimV = 0;
  long long degF = 1;  // local degree; 1 throughout current scope

  void validate() const {
    for (const auto& v : {h0, h1, h2, t})
      if (v && *v < 0) throw std::invalid_argument("local datum at " + place + ": negative dimension");
    detail::require_nonneg(dimV, "local datum at " + place + ": dimV");
    if (degF < 1) throw std::invalid_argument("local datum at " + place + ": degF must be >= 1");
    if (h0 && h1 && h2 && *h1 != *h2 + degF * dimV + *h0)
      throw std::invalid_argument("local datum at " + place + ": Euler characteristic identity fails");
  }
};

struct DimLedger {
  long long l0 = 0;
  long long r = 0;
  long long dim_LieG = 0, dim_LieB = 0, dim_LieU = 0, dim_LieT = 0;
  std::vector<LocalDatum> locals;
  std::optional<long long> h0_V, h0_Vdual1;
  std::optional<long long> selmer, dual_selmer;
  std::optional<long long> ordinary_tangent, coker_psi;
  std::optional<long long> q0, d;

  void validate() const {
    detail::require_nonneg(l0, "ledger: l0");
    detail::require_nonneg(r, "ledger: r");
    if (dim_LieB != dim_LieT + dim_LieU) throw std::invalid_argument("ledger: dim Lie B != dim Lie T + dim Lie U");
    if (dim_LieG != dim_LieB + dim_LieU) throw std::invalid_argument("ledger: dim Lie G != dim Lie B + dim Lie U");
    for (const auto& loc : locals) loc.validate();
    if (d) {
      if ((*d - l0) % 2 != 0) throw std::invalid_argument("ledger: d - l0 must be even for q0 to be integral");
      if (q0 && *q0 != (*d - l0) / 2) throw std::invalid_argument("ledger: q0 != (d - l0)/2");
    }
  }
};

// Ledger skeleton with the Lie-theoretic dimensions filled in from a datum.
inline DimLedger ledger_from_datum(const RootDatum& datum, long long l0) {
  detail::require_nonneg(l0, "l0");
  LieDims ld = lie_dims(datum);
  DimLedger out;
  out.l0 = l0;
  out.r = ld.r;
  out.dim_LieG = ld.dim_g;
  out.dim_LieB = ld.dim_b;
  out.dim_LieU = ld.dim_u;
  out.dim_LieT = ld.dim_t;
  return out;
}

// --------------------------------------------------------------------------
// Formula primitives.
// --------------------------------------------------------------------------

inline long long local_euler_h1(long long h0, long long h2, long long degF, long long dimV) {
  detail::require_nonneg(h0, "h0");
  detail::require_nonneg(h2, "h2");
  detail::require_nonneg(degF, "degF");
  detail::require_nonneg(dimV, "dimV");
  return h2 + degF * dimV + h0;
}

inline long long h1f_dim(long long h0, long long degF, long long neg_weights) {
  detail::require_nonneg(h0, "h0");
  detail::require_nonneg(degF, "degF");
  detail::require_nonneg(neg_weights, "neg_weights");
  return h0 + degF * neg_weights;
}

// dim of H^1/H^1_f on the Borel: computed through the Euler-characteristic
// route (h1 with V = Lie B, minus the finite part counted by the negative
// weights dim U) and asserted against the closed form r.
inline long long borel_quotient_rank(const RootDatum& datum) {
  LieDims ld = lie_dims(datum);
  long long via_euler = local_euler_h1(0, 0, 1, ld.dim_b) - h1f_dim(0, 1, ld.dim_u);
  if (via_euler != ld.r) throw std::logic_error("borel_quotient_rank: Euler route disagrees with the rank");
  return ld.r;
}

// Signed global difference h0_V - h0_V*(1) + sum_q (t_q - h0_q). When both
// Selmer dimensions are present the difference must match them.
inline long long greenberg_wiles(const DimLedger& ledger) {
  if (!ledger.h0_V || !ledger.h0_Vdual1) throw std::invalid_argument("greenberg_wiles: global h0 fields missing");
  long long diff = *ledger.h0_V - *ledger.h0_Vdual1;
  for (const auto& loc : ledger.locals) {
    if (!loc.t || !loc.h0) throw std::invalid_argument("greenberg_wiles: local datum at " + loc.place + " missing t or h0");
    diff += *loc.t - *loc.h0;
  }
  if (ledger.selmer && ledger.dual_selmer && *ledger.selmer - *ledger.dual_selmer != diff)
    throw std::invalid_argument("greenberg_wiles: selmer difference does not match the ledger");
  return diff;
}

// Crystalline-at-p ledger: t - h0 is dim U at p, -(dim U + l0) at infinity
// (the oddness count), and 0 at a generic place; global h0 terms vanish.
inline DimLedger crystalline_ledger(const RootDatum& datum, long long l0) {
  DimLedger led = ledger_from_datum(datum, l0);
  led.h0_V = 0;
  led.h0_Vdual1 = 0;
  LocalDatum at_p;
  at_p.place = "p";
  at_p.h0 = 0;
  at_p.t = led.dim_LieU;
  LocalDatum at_inf;
  at_inf.place = "infinity";
  at_inf.h0 = led.dim_LieU + l0;
  at_inf.t = 0;
  LocalDatum generic;
  generic.place = "q(generic)";
  generic.h0 = 0;
  generic.t = 0;  // h2 = 0 at a generic place, so the tangent matches h0
  led.locals = {at_p, at_inf, generic};
  return led;
}

// Offset dual_selmer - selmer, recomputed through the Greenberg-Wiles
// difference of the crystalline ledger rather than returned as a constant.
inline long long dual_selmer_offset(const RootDatum& datum, long long l0) {
  detail::require_nonneg(l0, "l0");
  return -greenberg_wiles(crystalline_ledger(datum, l0));
}

inline long long ordinary_tangent_dim(const RootDatum& datum, long long h0_LieG_at_p) {
  detail::require_nonneg(h0_LieG_at_p, "h0");
  return lie_dims(datum).dim_b + h0_LieG_at_p;
}

inline long long smoothness_dim(const RootDatum& datum, long long l0) {
  detail::require_nonneg(l0, "l0");
  LieDims ld = lie_dims(datum);
  if (l0 > ld.r) throw std::invalid_argument("smoothness_dim: l0 exceeds the rank");
  long long via_lie = ld.dim_b - ld.dim_u - l0;
  if (via_lie != ld.r - l0) throw std::logic_error("smoothness_dim: Lie route disagrees with r - l0");
  return via_lie;
}

inline Report poitou_tate_consistency(long long a, long long b, long long r, long long d, long long e) {
  for (long long v : {a, b, r, d, e}) detail::require_nonneg(v, "poitou_tate_consistency: dimension");
  Report rep;
  rep.title = "Poitou-Tate consistency (abstract dimension arithmetic; no cohomology computed)";
  long long alt = a - b + r - d + e;
  rep.add("alternating sum vanishes", alt == 0,
          std::to_string(a) + " - " + std::to_string(b) + " + " + std::to_string(r) + " - " + std::to_string(d) +
              " + " + std::to_string(e) + " = " + std::to_string(alt));
  return rep;
}

inline long long coker_psi_dim(long long t_Lambda, long long h1_ord, long long ker_psi) {
  detail::require_nonneg(t_Lambda, "t_Lambda");
  detail::require_nonneg(h1_ord, "h1_ord");
  detail::require_nonneg(ker_psi, "ker_psi");
  if (ker_psi > h1_ord) throw std::invalid_argument("coker_psi_dim: kernel exceeds h1_ord");
  long long out = t_Lambda - (h1_ord - ker_psi);
  if (out < 0) throw std::invalid_argument("coker_psi_dim: negative result, ledger inconsistent");
  return out;
}

inline long long leopoldt_h1(long long r2, long long defect) {
  detail::require_nonneg(r2, "r2");
  detail::require_nonneg(defect, "defect");
  return 1 + r2 + defect;
}

// --------------------------------------------------------------------------
// Hodge-Tate weight profiles.
// --------------------------------------------------------------------------

struct HTProfile {
  std::map<long long, long long> weights;  // weight -> multiplicity

  long long total() const {
    long long out = 0;
    for (const auto& [w, m] : weights) out += m;
    return out;
  }
  long long negative_count() const {
    long long out = 0;
    for (const auto& [w, m] : weights)
      if (w < 0) out += m;
    return out;
  }
};

// Weight 0 on the torus, -<chi, alpha> on each positive root space and the
// negated value opposite; chi must be strictly dominant so that the weights
// on the unipotent radical all land strictly below zero.
inline HTProfile ht_profile(const RootDatum& datum, const Vec& chi) {
  if (!is_strictly_dominant(datum, chi)) throw std::invalid_argument("ht_profile: chi is not strictly dominant");
  LieDims ld = lie_dims(datum);
  HTProfile out;
  out.weights[0] += ld.r;
  for (int i : datum.positive) {
    long long pair = pairing(chi, datum.root(i));
    out.weights[-pair] += datum.dims[static_cast<std::size_t>(i)];
    out.weights[pair] += datum.dims[static_cast<std::size_t>(i)];
  }
  if (out.negative_count() != ld.dim_u) throw std::logic_error("ht_profile: negative count != dim U");
  if (out.total() != ld.dim_g) throw std::logic_error("ht_profile: total multiplicity != dim G");
  return out;
}

// --------------------------------------------------------------------------
// Ledger audit: every identity between supplied fields, as pass/fail lines.
// --------------------------------------------------------------------------

inline Report dimension_audit(const DimLedger& led) {
  Report rep;
  rep.title = "dimension audit (abstract dimension arithmetic; no cohomology computed)";
  rep.add("Lie algebra additivity",
          led.dim_LieB == led.dim_LieT + led.dim_LieU && led.dim_LieG == led.dim_LieB + led.dim_LieU,
          "B = T + U and G = B + U on " + std::to_string(led.dim_LieG) + "/" + std::to_string(led.dim_LieB) + "/" +
              std::to_string(led.dim_LieU) + "/" + std::to_string(led.dim_LieT));
  rep.add("torus rank", led.dim_LieT == led.r,
          "dim Lie T = " + std::to_string(led.dim_LieT) + ", r = " + std::to_string(led.r));
  rep.add("l0 within range", led.l0 >= 0 && led.l0 <= led.r,
          "l0 = " + std::to_string(led.l0) + ", r = " + std::to_string(led.r));
  rep.add("smoothness dimension", led.dim_LieB - led.dim_LieU - led.l0 == led.r - led.l0,
          "both routes give " + std::to_string(led.r - led.l0));
  for (const auto& loc : led.locals) {
    if (!(loc.h0 && loc.h1 && loc.h2)) continue;
    long long expect = *loc.h2 + loc.degF * loc.dimV + *loc.h0;
    rep.add("local Euler characteristic at " + loc.place, *loc.h1 == expect,
            "h1 = " + std::to_string(*loc.h1) + ", h2 + degF*dimV + h0 = " + std::to_string(expect));
  }
  bool gw_ready = led.h0_V && led.h0_Vdual1;
  for (const auto& loc : led.locals) gw_ready = gw_ready && loc.t && loc.h0;
  if (gw_ready) {
    long long diff = *led.h0_V - *led.h0_Vdual1;
    for (const auto& loc : led.locals) diff += *loc.t - *loc.h0;
    if (led.selmer && led.dual_selmer)
      rep.add("Greenberg-Wiles ledger", *led.selmer - *led.dual_selmer == diff,
              "selmer - dual_selmer = " + std::to_string(*led.selmer - *led.dual_selmer) + ", ledger difference = " +
                  std::to_string(diff));
    else
      rep.add("Greenberg-Wiles ledger", true,
              "difference = " + std::to_string(diff) + " (Selmer dimensions not supplied)");
  }
  if (led.d) {
    bool even = (*led.d - led.l0) % 2 == 0;
    bool q0ok = !led.q0 || (even && *led.q0 == (*led.d - led.l0) / 2);
    rep.add("middle degree q0", even && q0ok,
            "d = " + std::to_string(*led.d) + ", l0 = " + std::to_string(led.l0) +
                (led.q0 ? ", q0 = " + std::to_string(*led.q0) : ""));
  }
  if (led.ordinary_tangent) {
    for (const auto& loc : led.locals) {
      if (loc.place != "p" || !loc.h0) continue;
      rep.add("ordinary tangent dimension", *led.ordinary_tangent == led.dim_LieB + *loc.h0,
              "tangent = " + std::to_string(*led.ordinary_tangent) + ", dim Lie B + h0_p = " +
                  std::to_string(led.dim_LieB + *loc.h0));
    }
  }
  return rep;
}

}  // namespace ordkit
