#pragma once

// Exhaustive finite verification layer: images of the congruence subgroups
// I(b,c) of GL_n(Z_p) inside GL_n(Z/p^K), double cosets I xi I with
// xi = diag(p^{lambda_i}), and homomorphism functionals on the pro-p torus
// quotient T_b. Everything here is exact integer arithmetic at an explicit
// working modulus p^K, with the precision bookkeeping spelled out at each
// division site. Enumeration sizes are guarded, never trusted.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ordkit/heckecomb.hpp"
#include "ordkit/numeric.hpp"
#include "ordkit/report.hpp"
#include "ordkit/rootdata.hpp"

namespace ordkit {

struct Guards {
  long long max_group_order = 1000000;
  long long max_orbit = 100000;
};

// Square matrix over Z/mod, entries reduced into [0, mod).
struct ModMatrix {
  int n = 0;
  long long mod = 0;
  std::vector<long long> e;  // row-major

  long long& at(int i, int j) { return e[static_cast<std::size_t>(i * n + j)]; }
  long long at(int i, int j) const { return e[static_cast<std::size_t>(i * n + j)]; }
  bool operator==(const ModMatrix& o) const { return n == o.n && mod == o.mod && e == o.e; }
  bool operator<(const ModMatrix& o) const { return e < o.e; }
};

inline ModMatrix mod_identity(int n, long long mod) {
  ModMatrix m;
  m.n = n;
  m.mod = mod;
  m.e.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1 % mod;
  return m;
}

inline ModMatrix mod_from_rows(const IMat& rows, long long mod) {
  ModMatrix m;
  m.n = static_cast<int>(rows.size());
  m.mod = mod;
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != m.n) throw std::invalid_argument("mod_from_rows: not square");
    for (long long x : r) m.e.push_back(((x % mod) + mod) % mod);
  }
  return m;
}

inline ModMatrix mod_mul(const ModMatrix& a, const ModMatrix& b) {
  if (a.n != b.n || a.mod != b.mod) throw std::invalid_argument("mod_mul: shape/modulus mismatch");
  ModMatrix c;
  c.n = a.n;
  c.mod = a.mod;
  c.e.assign(a.e.size(), 0);
  for (int i = 0; i < a.n; ++i)
    for (int k = 0; k < a.n; ++k) {
      if (a.at(i, k) == 0) continue;
      Int aik = a.at(i, k);
      for (int j = 0; j < a.n; ++j) {
        Int v = Int(c.at(i, j)) + aik * b.at(k, j);
        c.at(i, j) = static_cast<long long>(v % a.mod);
      }
    }
  return c;
}

inline ModMatrix mod_reduce(const ModMatrix& a, long long newmod) {
  if (a.mod % newmod != 0) throw std::invalid_argument("mod_reduce: new modulus must divide old");
  ModMatrix c = a;
  c.mod = newmod;
  for (auto& x : c.e) x %= newmod;
  return c;
}

// Exact integer determinant of the canonical lift (entries in [0, mod)).
inline Int lift_det(const ModMatrix& a) {
  std::vector<int> idx(static_cast<std::size_t>(a.n));
  for (int i = 0; i < a.n; ++i) idx[static_cast<std::size_t>(i)] = i;
  // Laplace over permutations is fine for n <= 4; dimensions here are tiny.
  Int total = 0;
  std::sort(idx.begin(), idx.end());
  do {
    int inv = 0;
    for (int i = 0; i < a.n; ++i)
      for (int j = i + 1; j < a.n; ++j)
        if (idx[static_cast<std::size_t>(i)] > idx[static_cast<std::size_t>(j)]) ++inv;
    Int term = (inv % 2 == 0) ? 1 : -1;
    for (int i = 0; i < a.n; ++i) term *= a.at(i, idx[static_cast<std::size_t>(i)]);
    total += term;
  } while (std::next_permutation(idx.begin(), idx.end()));
  return total;
}

// Adjugate of the canonical lift, exact over Z: adj(A) * A = det(A) * Id.
inline std::vector<std::vector<Int>> lift_adjugate(const ModMatrix& a) {
  int n = a.n;
  std::vector<std::vector<Int>> adj(static_cast<std::size_t>(n), std::vector<Int>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      ModMatrix minor;
      minor.n = n - 1;
      minor.mod = a.mod;
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
          if (r != j && c != i) minor.e.push_back(a.at(r, c));
      Int cof = (minor.n == 0) ? Int(1) : lift_det(minor);
      adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = (((i + j) % 2 == 0) ? cof : -cof);
    }
  return adj;
}

inline bool is_unit_mod_p(long long x, long long p) { return ((x % p) + p) % p != 0; }

// ---------------------------------------------------------------------------
// The congruence subgroup I(b,c): g integral, det a unit, g upper-triangular
// mod p^c, and mod p^b lying in (scalars) x (upper unitriangular), i.e. all
// diagonal entries congruent to each other mod p^b. Requires 1 <= b <= c.
// ---------------------------------------------------------------------------

struct GroupSpec {
  int n = 2;
  long long p = 2;
  int b = 1;
  int c = 1;

  void validate() const {
    if (n < 2) throw std::invalid_argument("GroupSpec: n >= 2 required");
    if (!is_prime(p)) throw std::invalid_argument("GroupSpec: p must be prime");
    if (!(1 <= b && b <= c)) throw std::invalid_argument("GroupSpec: need 1 <= b <= c");
  }
  std::string str() const {
    return "I(" + std::to_string(b) + "," + std::to_string(c) + ") in GL_" + std::to_string(n) +
           "(Z_" + std::to_string(p) + ")";
  }
};

inline bool in_subgroup(const GroupSpec& s, const ModMatrix& g) {
  s.validate();
  if (g.n != s.n) throw std::invalid_argument("in_subgroup: dimension mismatch");
  long long pb = llpow(s.p, static_cast<unsigned>(s.b));
  long long pc = llpow(s.p, static_cast<unsigned>(s.c));
  if (g.mod % pc != 0) throw std::invalid_argument("in_subgroup: modulus below p^c, predicate undecidable");
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      if (i > j && g.at(i, j) % pc != 0) return false;
  for (int i = 1; i < g.n; ++i)
    if ((g.at(i, i) - g.at(0, 0)) % pb != 0) return false;
  Int det = lift_det(g);
  return det % s.p != 0;
}

// Closed-form order of the image of I(b,c) in GL_n(Z/p^K), K >= c:
//   p^{K u} * p^{(K-c) u} * phi(p^K) * p^{(K-b)(n-1)},  u = n(n-1)/2.
inline Int subgroup_order(const GroupSpec& s, int K) {
  s.validate();
  if (K < s.c) throw std::invalid_argument("subgroup_order: K >= c required");
  long long u = static_cast<long long>(s.n) * (s.n - 1) / 2;
  Int P(s.p);
  Int order = ipow(P, static_cast<unsigned long long>(K * u));
  order *= ipow(P, static_cast<unsigned long long>((K - s.c) * u));
  order *= ipow(P, static_cast<unsigned long long>(K - 1)) * (s.p - 1);  // phi(p^K)
  order *= ipow(P, static_cast<unsigned long long>((K - s.b) * (s.n - 1)));
  return order;
}

// LDU data at the matrix's own modulus: g = lower * diag * upper with lower
// unitriangular supported on p^c (checked by the caller when relevant), diag
// invertible, upper unitriangular. Unique, hence a membership certificate.
struct LDUFactors {
  ModMatrix lower, diag, upper;
  bool ok = false;
  std::string reason;
};

inline LDUFactors ldu_factorize(const ModMatrix& g, long long p) {
  LDUFactors f;
  int n = g.n;
  long long mod = g.mod;
  ModMatrix a = g;
  f.lower = mod_identity(n, mod);
  f.upper = mod_identity(n, mod);
  f.diag = mod_identity(n, mod);
  for (int k = 0; k < n; ++k) {
    long long piv = a.at(k, k);
    if (!is_unit_mod_p(piv, p)) {
      f.reason = "pivot " + std::to_string(k) + " not a unit";
      return f;
    }
    long long inv = inv_mod(piv, mod);
    for (int i = k + 1; i < n; ++i) {
      Int m = Int(a.at(i, k)) * inv % mod;
      long long mm = static_cast<long long>(m);
      f.lower.at(i, k) = mm;
      for (int j = k; j < n; ++j) {
        Int v = Int(a.at(i, j)) - Int(mm) * a.at(k, j);
        a.at(i, j) = static_cast<long long>(((v % mod) + mod) % mod);
      }
    }
    f.diag.at(k, k) = a.at(k, k);
  }
  // a is now upper triangular with unit diagonal; upper = diag^{-1} * a.
  for (int i = 0; i < n; ++i) {
    long long inv = inv_mod(f.diag.at(i, i), mod);
    for (int j = i + 1; j < n; ++j) {
      Int v = Int(a.at(i, j)) * inv % mod;
      f.upper.at(i, j) = static_cast<long long>(v);
    }
  }
  ModMatrix check = mod_mul(f.lower, mod_mul(f.diag, f.upper));
  if (!(check == g)) {
    f.reason = "recomposition mismatch";
    return f;
  }
  f.ok = true;
  return f;
}

// Generators of the image of I(b,c) mod p^K: elementary matrices for the
// upper root groups, p^c-scaled ones for the lower root groups, generators
// of the unit group as scalars, and per-slot 1 + p^b unit generators.
inline std::vector<long long> unit_group_generators(long long p, long long mod) {
  if (mod <= 2) return {};
  if (p == 2) {
    if (mod == 4) return {3};
    return {mod - 1, 5};
  }
  long long phi = mod / p * (p - 1);
  std::vector<long long> qs;
  long long tmp = phi;
  for (long long q = 2; q * q <= tmp; ++q)
    if (tmp % q == 0) {
      qs.push_back(q);
      while (tmp % q == 0) tmp /= q;
    }
  if (tmp > 1) qs.push_back(tmp);
  for (long long g = 2; g < mod; ++g) {
    if (g % p == 0) continue;
    bool primitive = true;
    for (long long q : qs)
      if (pow_mod(g, phi / q, mod) == 1) {
        primitive = false;
        break;
      }
    if (primitive) return {g};
  }
  throw std::logic_error("unit_group_generators: no primitive root found");
}

inline std::vector<long long> one_plus_pb_generators(long long p, int b, long long mod) {
  // Generators of the kernel of (Z/p^K)^* -> (Z/p^b)^* ... shifted: we need
  // the subgroup {u : u = 1 mod p^b}. For p odd it is cyclic on 1 + p^b; for
  // p = 2, b = 1 it is the full odd-unit group; for p = 2, b >= 2 cyclic.
  long long pb = llpow(p, static_cast<unsigned>(b));
  if (pb >= mod) return {};
  if (p == 2 && b == 1) return unit_group_generators(p, mod);
  return {(1 + pb) % mod};
}

inline std::vector<ModMatrix> subgroup_generators(const GroupSpec& s, int K) {
  s.validate();
  if (K < s.c) throw std::invalid_argument("subgroup_generators: K >= c required");
  long long mod = llpow(s.p, static_cast<unsigned>(K));
  long long pc = llpow(s.p, static_cast<unsigned>(s.c));
  std::vector<ModMatrix> gens;
  for (int i = 0; i < s.n; ++i)
    for (int j = 0; j < s.n; ++j) {
      if (i == j) continue;
      long long val = (i < j) ? 1 : pc % mod;
      if (val == 0) continue;
      ModMatrix m = mod_identity(s.n, mod);
      m.at(i, j) = val;
      gens.push_back(m);
    }
  for (long long u : unit_group_generators(s.p, mod)) {
    ModMatrix m = mod_identity(s.n, mod);
    for (int i = 0; i < s.n; ++i) m.at(i, i) = u;
    gens.push_back(m);
  }
  for (int slot = 1; slot < s.n; ++slot)
    for (long long u : one_plus_pb_generators(s.p, s.b, mod)) {
      ModMatrix m = mod_identity(s.n, mod);
      m.at(slot, slot) = u;
      gens.push_back(m);
    }
  for (const auto& g : gens)
    if (!in_subgroup(s, g)) throw std::logic_error("subgroup_generators: generator fails membership");
  return gens;
}

// Exhaustive enumeration of the image of I(b,c) in GL_n(Z/p^K) via the
// unique factorization U^-(p^c) * T_b * U^+. Verifies the closed-form order,
// pairwise distinctness, membership of every element, closure under inverse
// (exhaustive) and product (sampled), then returns the elements sorted.
inline std::vector<ModMatrix> enumerate_subgroup(const GroupSpec& s, int K,
                                                 const Guards& guards = Guards()) {
  s.validate();
  Int order = subgroup_order(s, K);
  if (order > guards.max_group_order)
    throw std::invalid_argument("enumerate_subgroup: order " + order.str() + " exceeds guard " +
                                std::to_string(guards.max_group_order));
  long long mod = llpow(s.p, static_cast<unsigned>(K));
  long long pb = llpow(s.p, static_cast<unsigned>(s.b));
  long long pc = llpow(s.p, static_cast<unsigned>(s.c));
  int n = s.n;

  // Strictly-lower entry patterns (multiples of p^c) and strictly-upper ones.
  std::vector<std::pair<int, int>> upper_slots, lower_slots;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i < j) upper_slots.emplace_back(i, j);
      if (i > j) lower_slots.emplace_back(i, j);
    }

  std::vector<ModMatrix> lowers, uppers, tori;
  {
    std::vector<long long> cur(lower_slots.size(), 0);
    long long count = mod / pc;  // choices per lower slot
    for (;;) {
      ModMatrix m = mod_identity(n, mod);
      for (std::size_t t = 0; t < lower_slots.size(); ++t)
        m.at(lower_slots[t].first, lower_slots[t].second) = cur[t] * pc % mod;
      lowers.push_back(m);
      std::size_t pos = cur.size();
      while (pos > 0 && ++cur[pos - 1] == count) cur[--pos] = 0;
      if (pos == 0) break;
    }
  }
  {
    std::vector<long long> cur(upper_slots.size(), 0);
    for (;;) {
      ModMatrix m = mod_identity(n, mod);
      for (std::size_t t = 0; t < upper_slots.size(); ++t)
        m.at(upper_slots[t].first, upper_slots[t].second) = cur[t];
      uppers.push_back(m);
      std::size_t pos = cur.size();
      while (pos > 0 && ++cur[pos - 1] == mod) cur[--pos] = 0;
      if (pos == 0) break;
    }
  }
  {
    // d_0 any unit; d_i = d_0 * (1 + p^b t_i).
    std::vector<long long> units;
    for (long long u = 1; u < mod; ++u)
      if (is_unit_mod_p(u, s.p)) units.push_back(u);
    long long ratios = mod / pb;
    std::vector<long long> cur(static_cast<std::size_t>(n - 1), 0);
    for (long long d0 : units) {
      std::fill(cur.begin(), cur.end(), 0);
      for (;;) {
        ModMatrix m = mod_identity(n, mod);
        m.at(0, 0) = d0;
        for (int i = 1; i < n; ++i) {
          Int v = Int(d0) * ((1 + pb * cur[static_cast<std::size_t>(i - 1)]) % mod) % mod;
          m.at(i, i) = static_cast<long long>(v);
        }
        tori.push_back(m);
        std::size_t pos = cur.size();
        while (pos > 0 && ++cur[pos - 1] == ratios) cur[--pos] = 0;
        if (pos == 0) break;
      }
    }
  }

  std::vector<ModMatrix> all;
  all.reserve(static_cast<std::size_t>(order));
  for (const auto& l : lowers)
    for (const auto& t : tori) {
      ModMatrix lt = mod_mul(l, t);
      for (const auto& u : uppers) all.push_back(mod_mul(lt, u));
    }
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end())
    throw std::logic_error("enumerate_subgroup: factorization produced duplicates");
  if (Int(static_cast<long long>(all.size())) != order)
    throw std::logic_error("enumerate_subgroup: size disagrees with closed form");
  for (const auto& g : all)
    if (!in_subgroup(s, g)) throw std::logic_error("enumerate_subgroup: element fails membership predicate");

  // Closure: inverses exhaustively (adjugate over the lift), products sampled.
  for (const auto& g : all) {
    Int det = lift_det(g);
    long long d = static_cast<long long>(((det % mod) + mod) % mod);
    long long dinv = inv_mod(d, mod);
    auto adj = lift_adjugate(g);
    ModMatrix inv;
    inv.n = n;
    inv.mod = mod;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Int v = adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] % mod * dinv % mod;
        inv.e.push_back(static_cast<long long>(((v % mod) + mod) % mod));
      }
    if (!in_subgroup(s, inv)) throw std::logic_error("enumerate_subgroup: not closed under inverse");
  }
  std::mt19937_64 rng(0x0fdc0de5u);
  std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
  for (int t = 0; t < 1000; ++t)
    if (!in_subgroup(s, mod_mul(all[pick(rng)], all[pick(rng)])))
      throw std::logic_error("enumerate_subgroup: not closed under product");
  return all;
}

// ---------------------------------------------------------------------------
// Double cosets I(b,c) xi I(b,c), xi = diag(p^{lambda_i}), lambda dominant
// with nonnegative entries (shift by a central cocharacter first otherwise).
// ---------------------------------------------------------------------------

inline void require_nonneg_dominant(const Vec& lambda) {
  for (std::size_t i = 0; i + 1 < lambda.size(); ++i)
    if (lambda[i] < lambda[i + 1])
      throw std::invalid_argument("lambda must be dominant (nonincreasing) for GL_n");
  for (long long x : lambda)
    if (x < 0)
      throw std::invalid_argument("lambda must be nonnegative; apply a central shift first");
}

inline long long lambda_valuation(const Vec& lambda) {
  long long v = 0;
  for (long long x : lambda) v += x;
  return v;
}

inline ModMatrix lambda_matrix(const Vec& lambda, long long p, long long mod) {
  ModMatrix m = mod_identity(static_cast<int>(lambda.size()), mod);
  for (std::size_t i = 0; i < lambda.size(); ++i)
    m.at(static_cast<int>(i), static_cast<int>(i)) = llpow(p, static_cast<unsigned>(lambda[i])) % mod;
  return m;
}

// Decide g1 * C == g2 * C for g1, g2 with unit-times-p^v determinants, both
// held mod p^K. h = g1^{-1} g2 = adj(g1) g2 / det(g1); integrality of the
// division plus membership of h mod p^{K-v} decides the question, provided
// K - v >= c so the membership predicate has enough precision (asserted).
inline bool coset_equal(const GroupSpec& s, const ModMatrix& g1, const ModMatrix& g2) {
  if (g1.mod != g2.mod || g1.n != g2.n) throw std::invalid_argument("coset_equal: mismatched inputs");
  long long mod = g1.mod;
  Int d1 = lift_det(g1), d2 = lift_det(g2);
  Int m1 = ((d1 % mod) + mod) % mod, m2 = ((d2 % mod) + mod) % mod;
  if (m1 == 0 || m2 == 0) throw std::invalid_argument("coset_equal: determinant vanishes at working modulus");
  auto [v1, u1] = p_valuation(static_cast<long long>(m1), s.p);
  long long v2 = p_valuation(static_cast<long long>(m2), s.p).first;
  if (v1 != v2) return false;
  long long pv = llpow(s.p, static_cast<unsigned>(v1));
  long long quot_mod = mod / pv;
  long long pc = llpow(s.p, static_cast<unsigned>(s.c));
  if (quot_mod % pc != 0)
    throw std::logic_error("coset_equal: working modulus too small for the membership test");
  auto adj = lift_adjugate(g1);
  ModMatrix h;
  h.n = g1.n;
  h.mod = quot_mod;
  long long uinv = inv_mod(static_cast<long long>(u1 % quot_mod), quot_mod);
  for (int i = 0; i < g1.n; ++i)
    for (int j = 0; j < g1.n; ++j) {
      Int acc = 0;
      for (int k = 0; k < g1.n; ++k)
        acc += adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] * g2.at(k, j);
      acc = ((acc % mod) + mod) % mod;  // adj(g1) g2 = det(g1) h, known mod p^K
      if (acc % pv != 0) return false;  // h not p-integral
      Int red = acc / pv % quot_mod * uinv % quot_mod;
      h.e.push_back(static_cast<long long>(red));
    }
  return in_subgroup(s, h);
}

struct DoubleCosetResult {
  Int count = 0;
  int working_exponent = 0;                // K: cosets held mod p^K
  std::vector<ModMatrix> left_reps;        // eta_i xi, one per coset in C xi C / C
};

// Orbit of the coset xi C under left multiplication by generators of C,
// computed at working modulus p^K with K = c + v(det xi) + 1 so every
// coset-equality test has the precision it needs.
inline DoubleCosetResult double_coset_count(const GroupSpec& s, const Vec& lambda,
                                            const Guards& guards = Guards()) {
  s.validate();
  if (static_cast<int>(lambda.size()) != s.n)
    throw std::invalid_argument("double_coset_count: lambda length != n");
  require_nonneg_dominant(lambda);
  long long v = lambda_valuation(lambda);
  int K = s.c + static_cast<int>(v) + 1;
  long long mod = llpow(s.p, static_cast<unsigned>(K));
  DoubleCosetResult res;
  res.working_exponent = K;
  auto gens = subgroup_generators(s, K);
  std::vector<ModMatrix> orbit{lambda_matrix(lambda, s.p, mod)};
  for (std::size_t head = 0; head < orbit.size(); ++head) {
    ModMatrix cur = orbit[head];  // copy: orbit may reallocate below
    for (const auto& g : gens) {
      ModMatrix cand = mod_mul(g, cur);
      bool known = false;
      for (const auto& o : orbit)
        if (coset_equal(s, o, cand)) {
          known = true;
          break;
        }
      if (!known) {
        if (static_cast<long long>(orbit.size()) >= guards.max_orbit)
          throw std::invalid_argument("double_coset_count: orbit exceeds guard");
        orbit.push_back(cand);
      }
    }
  }
  res.count = static_cast<long long>(orbit.size());
  res.left_reps = std::move(orbit);
  return res;
}

// Realize an abstract residue tuple as u * xi: product of elementary
// matrices e_{i,j}(x) over the positive-root slots in the tuple's own order.
inline ModMatrix realize_rep(const RootDatum& d, const CosetRepSet& reps,
                             const std::vector<long long>& tuple, long long mod) {
  int n = static_cast<int>(reps.lambda.size());
  ModMatrix u = mod_identity(n, mod);
  for (std::size_t t = 0; t < tuple.size(); ++t) {
    const Vec& root = d.roots[static_cast<std::size_t>(reps.slot_root[t])];
    int ri = -1, rj = -1;  // root e_i - e_j for GL_n
    for (int k = 0; k < n; ++k) {
      if (root[static_cast<std::size_t>(k)] == 1) ri = k;
      if (root[static_cast<std::size_t>(k)] == -1) rj = k;
    }
    if (ri < 0 || rj < 0) throw std::invalid_argument("realize_rep: root is not of GL_n shape");
    ModMatrix el = mod_identity(n, mod);
    el.at(ri, rj) = tuple[t] % mod;
    u = mod_mul(u, el);
  }
  return mod_mul(u, lambda_matrix(reps.lambda, reps.prime, mod));
}

// The explicit representative formula: tuples -> matrices is a bijection
// onto C xi C / C. Checked by pairwise distinctness plus mutual coverage
// against the independently computed orbit.
inline Report verify_rep_formula(const RootDatum& d, const GroupSpec& s, const Vec& lambda,
                                 const Guards& guards = Guards()) {
  Report rep;
  rep.title = "representative formula for " + s.str() + ", lambda=" + vec_str(lambda);
  auto orbit = double_coset_count(s, lambda, guards);
  long long mod = llpow(s.p, static_cast<unsigned>(orbit.working_exponent));
  auto abstract = coset_representatives(d, lambda, s.p);
  std::vector<ModMatrix> realized;
  for (const auto& tup : abstract.reps) realized.push_back(realize_rep(d, abstract, tup, mod));

  bool distinct = true;
  std::string det;
  for (std::size_t i = 0; i < realized.size() && distinct; ++i)
    for (std::size_t j = i + 1; j < realized.size(); ++j)
      if (coset_equal(s, realized[i], realized[j])) {
        distinct = false;
        det = "tuples " + std::to_string(i) + " and " + std::to_string(j) + " collide";
        break;
      }
  rep.add("realized representatives pairwise distinct", distinct, det);
  rep.add("cardinality matches p^deg", Int(static_cast<long long>(realized.size())) == orbit.count,
          std::to_string(realized.size()) + " vs " + orbit.count.str());
  bool covered = true;
  std::string cdet;
  for (std::size_t i = 0; i < orbit.left_reps.size(); ++i) {
    bool hit = false;
    for (const auto& r : realized)
      if (coset_equal(s, r, orbit.left_reps[i])) {
        hit = true;
        break;
      }
    if (!hit) {
      covered = false;
      cdet = "orbit coset " + std::to_string(i) + " not realized";
      break;
    }
  }
  rep.add("every coset realized by a tuple", covered, cdet);
  return rep;
}

namespace detail {
inline void dedupe_cosets(const GroupSpec& s, std::vector<ModMatrix>& v) {
  std::vector<ModMatrix> out;
  for (const auto& m : v) {
    bool known = false;
    for (const auto& o : out)
      if (coset_equal(s, o, m)) {
        known = true;
        break;
      }
    if (!known) out.push_back(m);
  }
  v = std::move(out);
}
}  // namespace detail

// Set identity C xi C * C xi' C = C (xi xi') C, via left-coset rep lists at a
// common working modulus.
inline Report verify_semigroup(const GroupSpec& s, const Vec& la, const Vec& lb,
                               const Guards& guards = Guards()) {
  Report rep;
  rep.title = "semigroup identity " + vec_str(la) + " * " + vec_str(lb) + " for " + s.str();
  Vec sum = la;
  for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += lb[i];
  long long vtot = lambda_valuation(sum);
  int K = s.c + static_cast<int>(vtot) + 1;
  long long mod = llpow(s.p, static_cast<unsigned>(K));

  auto lift_reps = [&](const Vec& lam) {
    auto r = double_coset_count(s, lam, guards);
    std::vector<ModMatrix> out;
    // Recompute the orbit at the common modulus: rerun BFS at precision K.
    auto gens = subgroup_generators(s, K);
    std::vector<ModMatrix> orbit{lambda_matrix(lam, s.p, mod)};
    for (std::size_t head = 0; head < orbit.size(); ++head) {
      ModMatrix cur = orbit[head];
      for (const auto& g : gens) {
        ModMatrix cand = mod_mul(g, cur);
        bool known = false;
        for (const auto& o : orbit)
          if (coset_equal(s, o, cand)) {
            known = true;
            break;
          }
        if (!known) orbit.push_back(cand);
      }
    }
    if (Int(static_cast<long long>(orbit.size())) != r.count)
      throw std::logic_error("verify_semigroup: orbit size changed with precision");
    return orbit;
  };

  auto reps_a = lift_reps(la), reps_b = lift_reps(lb), reps_sum = lift_reps(sum);
  std::vector<ModMatrix> product;
  for (const auto& x : reps_a)
    for (const auto& y : reps_b) product.push_back(mod_mul(x, y));
  detail::dedupe_cosets(s, product);

  rep.add("product coset count equals p^{deg(sum)}",
          product.size() == reps_sum.size(),
          std::to_string(product.size()) + " vs " + std::to_string(reps_sum.size()));
  bool lr = true, rl = true;
  for (const auto& m : product) {
    bool hit = false;
    for (const auto& o : reps_sum)
      if (coset_equal(s, o, m)) {
        hit = true;
        break;
      }
    if (!hit) lr = false;
  }
  for (const auto& o : reps_sum) {
    bool hit = false;
    for (const auto& m : product)
      if (coset_equal(s, o, m)) {
        hit = true;
        break;
      }
    if (!hit) rl = false;
  }
  rep.add("product cosets lie in C(xi xi')C", lr, "");
  rep.add("C(xi xi')C covered by product cosets", rl, "");
  return rep;
}

// Factorization of the normalizer-level identity: the coset lists of
// I(b,c) xi I(b,c) and I(b,c-1) xi I(b,c) (as subsets of G/I(b,c)) coincide
// when c-1 >= b and lambda is strictly dominant. Strictness is essential:
// conjugation by xi must push U^-(p^{c-1}) into U^-(p^c), which requires
// <lambda, alpha> >= 1 on every positive root. For weakly dominant lambda
// (e.g. central ones) the identity is false, so such input is rejected.
inline Report verify_up_factorization(int n, long long p, int b, int c, const Vec& lambda,
                                      const Guards& guards = Guards()) {
  if (c - 1 < b) throw std::invalid_argument("verify_up_factorization: need c-1 >= b");
  GroupSpec tight{n, p, b, c};
  GroupSpec loose{n, p, b, c - 1};
  tight.validate();
  loose.validate();
  Report rep;
  rep.title = "U_p factorization at " + tight.str() + ", lambda=" + vec_str(lambda);
  require_nonneg_dominant(lambda);
  for (std::size_t i = 0; i + 1 < lambda.size(); ++i)
    if (lambda[i] == lambda[i + 1])
      throw std::invalid_argument("verify_up_factorization: lambda must be strictly dominant");
  long long v = lambda_valuation(lambda);
  int K = c + static_cast<int>(v) + 1;
  long long mod = llpow(p, static_cast<unsigned>(K));

  auto orbit_under = [&](const GroupSpec& gen_group) {
    auto gens = subgroup_generators(gen_group, K);
    std::vector<ModMatrix> orbit{lambda_matrix(lambda, p, mod)};
    for (std::size_t head = 0; head < orbit.size(); ++head) {
      ModMatrix cur = orbit[head];
      for (const auto& g : gens) {
        ModMatrix cand = mod_mul(g, cur);
        bool known = false;
        for (const auto& o : orbit)
          if (coset_equal(tight, o, cand)) {
            known = true;
            break;
          }
        if (!known) {
          if (static_cast<long long>(orbit.size()) >= guards.max_orbit)
            throw std::invalid_argument("verify_up_factorization: orbit exceeds guard");
          orbit.push_back(cand);
        }
      }
    }
    return orbit;
  };

  auto tight_orbit = orbit_under(tight);
  auto loose_orbit = orbit_under(loose);
  rep.add("orbit sizes agree", tight_orbit.size() == loose_orbit.size(),
          std::to_string(tight_orbit.size()) + " vs " + std::to_string(loose_orbit.size()));
  bool sub = true;
  for (const auto& m : loose_orbit) {
    bool hit = false;
    for (const auto& o : tight_orbit)
      if (coset_equal(tight, o, m)) {
        hit = true;
        break;
      }
    if (!hit) sub = false;
  }
  rep.add("I(b,c-1) xi I(b,c) contained in I(b,c) xi I(b,c)", sub, "");
  return rep;
}

// ---------------------------------------------------------------------------
// The torus quotient T_b = (1 + pZ/p^b)^n and homomorphisms into Z/p^m.
// ---------------------------------------------------------------------------

struct DiamondQuotient {
  int n = 2;
  long long p = 2;
  int b = 1;
  long long mod = 0;  // p^b

  DiamondQuotient(int n_, long long p_, int b_) : n(n_), p(p_), b(b_) {
    if (n < 1 || b < 1 || !is_prime(p)) throw std::invalid_argument("DiamondQuotient: bad parameters");
    mod = llpow(p, static_cast<unsigned>(b));
  }
  Int order() const { return ipow(Int(p), static_cast<unsigned long long>((b - 1) * n)); }
  std::vector<std::vector<long long>> elements() const {
    long long per = llpow(p, static_cast<unsigned>(b - 1));
    std::vector<std::vector<long long>> out;
    std::vector<long long> cur(static_cast<std::size_t>(n), 0);
    for (;;) {
      std::vector<long long> el;
      for (long long t : cur) el.push_back((1 + p * t) % mod);
      out.push_back(el);
      std::size_t pos = cur.size();
      while (pos > 0 && ++cur[pos - 1] == per) cur[--pos] = 0;
      if (pos == 0) break;
    }
    return out;
  }
  std::vector<long long> mul(const std::vector<long long>& x, const std::vector<long long>& y) const {
    std::vector<long long> z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      z[i] = static_cast<long long>(Int(x[i]) * y[i] % mod);
    return z;
  }
};

// Discrete log in <1+p> inside (Z/p^b)^*: brute force over the p^{b-1} powers.
inline long long dlog_one_plus_p(long long x, long long p, int b) {
  long long mod = llpow(p, static_cast<unsigned>(b));
  long long g = (1 + p) % mod;
  long long cur = 1 % mod, count = llpow(p, static_cast<unsigned>(b - 1));
  for (long long e = 0; e < count; ++e) {
    if (cur == ((x % mod) + mod) % mod) return e;
    cur = static_cast<long long>(Int(cur) * g % mod);
  }
  throw std::invalid_argument("dlog_one_plus_p: element not in <1+p>");
}

// A homomorphism T_b -> Z/p^m, stored by its values on the generators
// 1 + p e_i. Well-definedness forces p^{b-1} * v_i = 0 in Z/p^m.
struct TorusHom {
  int n = 2;
  long long p = 2;
  int b = 1;
  int m = 1;
  std::vector<long long> vals;  // in [0, p^m)

  long long modulus() const { return llpow(p, static_cast<unsigned>(m)); }
  long long eval(const std::vector<long long>& tuple) const {
    long long mm = modulus();
    Int acc = 0;
    for (std::size_t i = 0; i < tuple.size(); ++i)
      acc += Int(dlog_one_plus_p(tuple[i], p, b)) * vals[i];
    return static_cast<long long>(((acc % mm) + mm) % mm);
  }
  bool operator==(const TorusHom& o) const { return vals == o.vals; }
};

inline TorusHom hom_add(const TorusHom& a, const TorusHom& b) {
  TorusHom c = a;
  long long mm = a.modulus();
  for (std::size_t i = 0; i < c.vals.size(); ++i) c.vals[i] = (c.vals[i] + b.vals[i]) % mm;
  return c;
}

// Hom(T_b, Z/p^m) via the presentation Z^n --diag(p^{b-1})--> Z^n -> T_b -> 0
// (invariant factors all p^{b-1}): admissible values are the multiples of
// p^m / gcd(p^{b-1}, p^m) in each slot. Order prod_i gcd(p^{b-1}, p^m).
inline std::vector<TorusHom> hom_group(int n, long long p, int b, int m) {
  if (n < 1 || b < 1 || m < 1) throw std::invalid_argument("hom_group: bad parameters");
  long long pm = llpow(p, static_cast<unsigned>(m));
  long long g = llpow(p, static_cast<unsigned>(std::min(b - 1, m)));  // gcd(p^{b-1}, p^m)
  long long step = pm / g;
  std::vector<TorusHom> out;
  std::vector<long long> cur(static_cast<std::size_t>(n), 0);
  for (;;) {
    TorusHom h;
    h.n = n;
    h.p = p;
    h.b = b;
    h.m = m;
    for (long long t : cur) h.vals.push_back(t * step % pm);
    out.push_back(h);
    std::size_t pos = cur.size();
    while (pos > 0 && ++cur[pos - 1] == g) cur[--pos] = 0;
    if (pos == 0) break;
  }
  return out;
}

// Project a unit of Z/p^b onto its 1+p part: u -> u^t with t = 1 mod p^{b-1}
// and t = 0 mod (p-1). For p = 2 this needs b <= 2 (the 2-adic unit group
// only splits that far); callers get an exception otherwise.
inline long long project_to_principal_units(long long u, long long p, int b) {
  long long mod = llpow(p, static_cast<unsigned>(b));
  if (b == 1) return 1 % mod;
  if (p == 2) {
    if (b > 2) throw std::invalid_argument("project_to_principal_units: p=2 requires b <= 2");
    return ((u % mod) + mod) % mod;  // odd units mod 4: 1 or 3 = 1 + 2
  }
  long long pbm1 = llpow(p, static_cast<unsigned>(b - 1));
  long long t = (p - 1) * inv_mod(p - 1, pbm1);  // 0 mod p-1 and 1 mod p^{b-1}
  return pow_mod(((u % mod) + mod) % mod, t, mod);
}

// Evaluate a torus functional on a congruence-subgroup element: LDU-extract
// the diagonal, project each entry onto its principal-unit part mod p^b, and
// feed the resulting T_b tuple to the homomorphism.
inline long long eval_hom_on_matrix(const TorusHom& F, const ModMatrix& g) {
  long long pb = llpow(F.p, static_cast<unsigned>(F.b));
  if (g.mod % pb != 0)
    throw std::invalid_argument("eval_hom_on_matrix: matrix modulus below p^b");
  auto f = ldu_factorize(g, F.p);
  if (!f.ok) throw std::invalid_argument("eval_hom_on_matrix: LDU failed: " + f.reason);
  std::vector<long long> tuple;
  for (int i = 0; i < g.n; ++i)
    tuple.push_back(project_to_principal_units(f.diag.at(i, i) % pb, F.p, F.b));
  return F.eval(tuple);
}

struct ConjugationCheckResult {
  Report report;
  long long intersection_size = 0;         // |lambda^{-1} I lambda cap I| at level N
  std::optional<ModMatrix> witness;        // first violating g, if any
};

// For every g in the image of I(b,c) mod p^{N+B} whose conjugate
// lambda^{-1} g lambda is integral and lands back in I(b,c) mod p^N, check
// F(lambda^{-1} g lambda) = F(g). B = max lambda_i - min lambda_i bounds the
// precision loss of the conjugation, so conjugates are exact mod p^N.
inline ConjugationCheckResult diamond_conjugation_check_fn(
    const GroupSpec& s, int N, const Vec& lambda,
    const std::function<long long(const ModMatrix&)>& F, const std::string& label,
    const Guards& guards = Guards()) {
  s.validate();
  if (N < s.c) throw std::invalid_argument("diamond_conjugation_check: N >= c required");
  require_nonneg_dominant(lambda);
  long long lo = *std::min_element(lambda.begin(), lambda.end());
  long long hi = *std::max_element(lambda.begin(), lambda.end());
  int B = static_cast<int>(hi - lo);
  int M = N + B;
  long long small = llpow(s.p, static_cast<unsigned>(N));

  ConjugationCheckResult out;
  out.report.title = "conjugation invariance of " + label + " under lambda=" + vec_str(lambda) +
                     " on " + s.str() + " at level " + std::to_string(N);
  auto elements = enumerate_subgroup(s, M, guards);
  bool all_ok = true;
  std::string detail;
  for (const auto& g : elements) {
    // conj_{ij} = g_{ij} p^{lambda_j - lambda_i}; entries that divide lose
    // precision, so the conjugate is only well defined mod p^{M - B} = p^N.
    ModMatrix conj;
    conj.n = g.n;
    conj.mod = small;
    bool integral = true;
    for (int i = 0; i < g.n && integral; ++i)
      for (int j = 0; j < g.n; ++j) {
        long long shift = lambda[static_cast<std::size_t>(j)] - lambda[static_cast<std::size_t>(i)];
        long long val = g.at(i, j);
        if (shift >= 0) {
          Int v = Int(val) * llpow(s.p, static_cast<unsigned>(shift)) % small;
          conj.e.push_back(static_cast<long long>(v));
        } else {
          long long div = llpow(s.p, static_cast<unsigned>(-shift));
          if (val % div != 0) {
            integral = false;
            break;
          }
          conj.e.push_back(val / div % small);
        }
      }
    if (!integral) continue;
    if (!in_subgroup(s, conj)) continue;
    ++out.intersection_size;
    ModMatrix gsmall = mod_reduce(g, small);
    long long lhs = F(conj), rhs = F(gsmall);
    if (lhs != rhs && all_ok) {
      all_ok = false;
      detail = "witness with F(conj)=" + std::to_string(lhs) + ", F(g)=" + std::to_string(rhs);
      out.witness = gsmall;
    }
  }
  out.report.add("intersection nonempty", out.intersection_size > 0,
                 std::to_string(out.intersection_size) + " elements checked");
  out.report.add("F(lambda^-1 g lambda) = F(g) on the intersection", all_ok, detail);
  return out;
}

inline ConjugationCheckResult diamond_conjugation_check(const GroupSpec& s, int N, const Vec& lambda,
                                                        const TorusHom& F,
                                                        const Guards& guards = Guards()) {
  return diamond_conjugation_check_fn(
      s, N, lambda, [&](const ModMatrix& g) { return eval_hom_on_matrix(F, g); },
      "torus functional", guards);
}

}  // namespace ordkit
