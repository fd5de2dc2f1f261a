#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ordkit/numeric.hpp"
#include "ordkit/report.hpp"
#include "ordkit/rootdata.hpp"

namespace ordkit {

inline bool is_prime(long long p) {
  if (p < 2) return false;
  for (long long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

// Height of a root = sum of its coefficients over the simple roots. Used to
// fix the enumeration order of the positive roots (nondecreasing height).
inline long long root_height(const RootDatum& d, int root_index) {
  std::vector<Vec> simples;
  for (int s : d.simple) simples.push_back(d.roots[static_cast<std::size_t>(s)]);
  auto sol = detail::solve_in_simple_basis(simples, d.roots[static_cast<std::size_t>(root_index)]);
  if (!sol) throw std::logic_error("root_height: root outside simple span");
  Rat h(0);
  for (const auto& x : *sol) h += x;
  return static_cast<long long>(boost::multiprecision::numerator(h));
}

inline std::vector<int> positive_roots_by_height(const RootDatum& d) {
  std::vector<int> order = d.positive;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return root_height(d, a) < root_height(d, b);
  });
  return order;
}

// |C xi C / C| = p^{deg lambda}, as an exact big integer.
inline Int coset_count(const RootDatum& d, const Vec& lambda, long long p) {
  if (!is_prime(p)) throw std::invalid_argument("coset_count: p must be prime");
  return ipow(Int(p), static_cast<unsigned long long>(deg_coweight(d, lambda)));
}

// Abstract residue tuples for X(lambda) = prod over positive roots of
// U_alpha(Z_p)/U_alpha(p^{<lambda,alpha>} Z_p): one residue slot per positive
// root per unit of d_alpha, residue in [0, p^{<lambda,alpha>}). Realization
// as matrices is finitegroup's job; these tuples do not depend on C, b or c.
struct CosetRepSet {
  Vec lambda;
  long long prime = 0;
  std::vector<int> slot_root;           // root index per slot
  std::vector<long long> slot_modulus;  // p^{<lambda,alpha>} per slot
  std::vector<std::vector<long long>> reps;  // lexicographic order
};

inline CosetRepSet coset_representatives(const RootDatum& d, const Vec& lambda, long long p,
                                         long long max_reps = 1000000) {
  Int count = coset_count(d, lambda, p);
  if (count > max_reps)
    throw std::invalid_argument("coset_representatives: p^deg = " + count.str() +
                                " exceeds the enumeration bound " + std::to_string(max_reps));
  CosetRepSet out;
  out.lambda = lambda;
  out.prime = p;
  for (int i : positive_roots_by_height(d)) {
    long long k = pairing(lambda, d.roots[static_cast<std::size_t>(i)]);
    if (k == 0) continue;  // trivial residue set: contributes no slot
    for (long long copy = 0; copy < d.dims[static_cast<std::size_t>(i)]; ++copy) {
      out.slot_root.push_back(i);
      out.slot_modulus.push_back(llpow(p, static_cast<unsigned>(k)));
    }
  }
  std::vector<long long> cur(out.slot_root.size(), 0);
  for (;;) {
    out.reps.push_back(cur);
    std::size_t pos = cur.size();
    while (pos > 0 && ++cur[pos - 1] == out.slot_modulus[pos - 1]) cur[--pos] = 0;
    if (pos == 0) break;
  }
  if (Int(static_cast<long long>(out.reps.size())) != count)
    throw std::logic_error("coset_representatives: enumeration / count mismatch");
  return out;
}

// Predicted count p^{deg lambda} next to an (optional) exhaustive count from
// the finite oracle; `match` records agreement and defaults to true when no
// oracle value is attached.
struct CosetCountReport {
  Vec lambda;
  long long prime = 0;
  Int predicted = 0;
  std::optional<Int> oracle_count;
  bool match = true;
};

inline CosetCountReport make_count_report(const RootDatum& d, const Vec& lambda, long long p,
                                          std::optional<Int> oracle = std::nullopt) {
  CosetCountReport r;
  r.lambda = lambda;
  r.prime = p;
  r.predicted = coset_count(d, lambda, p);
  r.oracle_count = std::move(oracle);
  r.match = !r.oracle_count || *r.oracle_count == r.predicted;
  return r;
}

// deg additivity and count multiplicativity for a dominant pair; failures are
// reported, not raised. The finite set-level check C xi C xi' C = C xi xi' C
// is delegated to finitegroup by the audit pipeline.
inline Report product_identity_check(const RootDatum& d, const Vec& a, const Vec& b, long long p) {
  Report rep;
  rep.title = "product identity " + vec_str(a) + " * " + vec_str(b) + " at p=" + std::to_string(p);
  bool dom_a = is_dominant(d, a, false), dom_b = is_dominant(d, b, false);
  rep.add("dominance precondition", dom_a && dom_b,
          dom_a && dom_b ? "" : std::string("non-dominant input ") + (dom_a ? vec_str(b) : vec_str(a)));
  if (!(dom_a && dom_b)) return rep;
  Vec s = a;
  for (std::size_t i = 0; i < s.size(); ++i) s[i] += b[i];
  long long da = deg_coweight(d, a), db = deg_coweight(d, b), ds = deg_coweight(d, s);
  rep.add("deg additivity", ds == da + db,
          "deg" + vec_str(s) + "=" + std::to_string(ds) + " vs " + std::to_string(da) + "+" + std::to_string(db));
  Int ca = coset_count(d, a, p), cb = coset_count(d, b, p), cs = coset_count(d, s, p);
  rep.add("count multiplicativity", cs == ca * cb,
          cs.str() + " vs " + ca.str() + "*" + cb.str());
  return rep;
}

}  // namespace ordkit
