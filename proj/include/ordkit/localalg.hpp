#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ordkit/field.hpp"
#include "ordkit/linalg.hpp"
#include "ordkit/poly.hpp"
#include "ordkit/report.hpp"

// Local algebra over k[[X_1..X_r]] at desk scale: Koszul complexes on a
// sequence of generators in the maximal ideal, Ext dimensions against the
// residue field, and the exterior-algebra action on them. Everything is
// plain polynomial linear algebra over an exact field.

namespace ordkit {

template <class F>
struct PolyRing {
  F field;
  int num_vars = 1;
};

template <class F>
struct LocalSequence {
  PolyRing<F> ring;
  std::vector<Poly<F>> gens;
};

namespace detail {

template <class F>
void check_sequence(const LocalSequence<F>& seq) {
  const F& k = seq.ring.field;
  if (seq.ring.num_vars < 1) throw std::invalid_argument("local sequence: need at least one variable");
  for (const auto& f : seq.gens) {
    if (f.nvars != seq.ring.num_vars) throw std::invalid_argument("local sequence: generator arity mismatch");
    if (!k.is_zero(poly_constant_term(k, f)))
      throw std::invalid_argument("local sequence: generator has nonzero constant term");
  }
}

inline long long binom_ll(int n, int r) {
  if (r < 0 || r > n) return 0;
  long long out = 1;
  for (int i = 0; i < r; ++i) out = out * (n - i) / (i + 1);
  return out;
}

}  // namespace detail

// All r-subsets of {0..n-1} in lexicographic order; position lookups below
// rely on that order.
inline std::vector<std::vector<int>> index_subsets(int n, int r) {
  std::vector<std::vector<int>> out;
  if (r < 0 || r > n) return out;
  std::vector<int> cur(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) cur[static_cast<std::size_t>(i)] = i;
  for (;;) {
    out.push_back(cur);
    int i = r - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - r + i) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < r; ++j) cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

inline int subset_position(const std::vector<std::vector<int>>& list, const std::vector<int>& s) {
  auto it = std::lower_bound(list.begin(), list.end(), s);
  if (it == list.end() || *it != s) throw std::logic_error("subset_position: subset not in list");
  return static_cast<int>(it - list.begin());
}

// --------------------------------------------------------------------------
// Linear parts.
// --------------------------------------------------------------------------

template <class F>
std::vector<typename F::Elem> linear_part(const F& k, const Poly<F>& f) {
  if (!k.is_zero(poly_constant_term(k, f))) throw std::invalid_argument("linear_part: nonzero constant term");
  std::vector<typename F::Elem> out(static_cast<std::size_t>(f.nvars), k.zero());
  for (const auto& [e, c] : f.terms) {
    if (total_degree(e) != 1) continue;
    for (std::size_t j = 0; j < e.size(); ++j)
      if (e[j] == 1) out[j] = c;
  }
  return out;
}

template <class F>
FMat<F> linear_part_matrix(const LocalSequence<F>& seq) {
  detail::check_sequence(seq);
  FMat<F> rows;
  for (const auto& f : seq.gens) rows.push_back(linear_part(seq.ring.field, f));
  return rows;
}

template <class F>
bool is_part_of_regular_system(const LocalSequence<F>& seq) {
  detail::check_sequence(seq);
  const int n = static_cast<int>(seq.gens.size());
  if (n == 0) throw std::invalid_argument("is_part_of_regular_system: empty sequence");
  if (n > seq.ring.num_vars) throw std::invalid_argument("is_part_of_regular_system: more generators than variables");
  return field_matrix_rank(seq.ring.field, linear_part_matrix(seq)) == n;
}

// --------------------------------------------------------------------------
// Koszul complex on the generators.
// --------------------------------------------------------------------------

// differentials[d] maps exterior degree d+1 to degree d: a C(n,d) x C(n,d+1)
// matrix of polynomials; basis of degree i is index_subsets(n, i), and
// d(e_S) = sum_t (-1)^t f_{S[t]} e_{S minus S[t]}.
template <class F>
struct KoszulComplex {
  int n = 0;
  int nvars = 0;
  std::vector<std::vector<std::vector<Poly<F>>>> differentials;
};

template <class F>
KoszulComplex<F> build_koszul_complex(const LocalSequence<F>& seq) {
  detail::check_sequence(seq);
  const F& k = seq.ring.field;
  const int n = static_cast<int>(seq.gens.size());
  const int r = seq.ring.num_vars;
  KoszulComplex<F> kc;
  kc.n = n;
  kc.nvars = r;
  for (int d = 0; d < n; ++d) {
    auto src = index_subsets(n, d + 1);
    auto dst = index_subsets(n, d);
    std::vector<std::vector<Poly<F>>> mat(dst.size(), std::vector<Poly<F>>(src.size(), poly_zero(k, r)));
    for (std::size_t col = 0; col < src.size(); ++col) {
      const auto& S = src[col];
      for (std::size_t t = 0; t < S.size(); ++t) {
        std::vector<int> rest = S;
        rest.erase(rest.begin() + static_cast<long>(t));
        int row = subset_position(dst, rest);
        Poly<F> entry = seq.gens[static_cast<std::size_t>(S[t])];
        if (t % 2 == 1) entry = poly_scale(k, entry, k.neg(k.one()));
        mat[static_cast<std::size_t>(row)][col] = poly_add(k, mat[static_cast<std::size_t>(row)][col], entry);
      }
    }
    kc.differentials.push_back(std::move(mat));
  }
  // d∘d = 0, checked exactly at the polynomial level.
  for (int d = 0; d + 1 < n; ++d) {
    const auto& hi = kc.differentials[static_cast<std::size_t>(d + 1)];  // deg d+2 -> d+1
    const auto& lo = kc.differentials[static_cast<std::size_t>(d)];      // deg d+1 -> d
    for (std::size_t row = 0; row < lo.size(); ++row)
      for (std::size_t col = 0; col < hi.front().size(); ++col) {
        Poly<F> acc = poly_zero(k, r);
        for (std::size_t mid = 0; mid < hi.size(); ++mid)
          acc = poly_add(k, acc, poly_mul(k, lo[row][mid], hi[mid][col]));
        if (!poly_is_zero(acc)) throw std::logic_error("Koszul differentials do not compose to zero");
      }
  }
  return kc;
}

// dim_k Ext^i(R/(f_1..f_n), k) for i = 0..n, computed from Hom(K_•, k) by
// generic rank bookkeeping. Because every generator lies in m the reduced
// differentials vanish and the answer is C(n,i); that closed form is
// asserted, not assumed.
template <class F>
std::vector<long long> koszul_ext_dims(const LocalSequence<F>& seq) {
  const F& k = seq.ring.field;
  KoszulComplex<F> kc = build_koszul_complex(seq);
  const int n = kc.n;
  // rank of the reduced differential deg d+1 -> deg d, for d = 0..n-1
  std::vector<int> red_rank(static_cast<std::size_t>(n), 0);
  for (int d = 0; d < n; ++d) {
    FMat<F> rows;
    for (const auto& prow : kc.differentials[static_cast<std::size_t>(d)]) {
      std::vector<typename F::Elem> row;
      for (const auto& entry : prow) row.push_back(poly_constant_term(k, entry));
      rows.push_back(std::move(row));
    }
    red_rank[static_cast<std::size_t>(d)] = rows.empty() ? 0 : field_matrix_rank(k, rows);
  }
  // Hom(-,k) flips arrows; rank is transpose-invariant, so
  // dim H^i = C(n,i) - rank(delta^{i-1}) - rank(delta^i) with
  // delta^i = reduced differential (i+1 -> i) transposed.
  std::vector<long long> dims;
  for (int i = 0; i <= n; ++i) {
    long long total = detail::binom_ll(n, i);
    long long into = (i >= 1) ? red_rank[static_cast<std::size_t>(i - 1)] : 0;
    long long outof = (i < n) ? red_rank[static_cast<std::size_t>(i)] : 0;
    long long h = total - into - outof;
    if (h != total) throw std::logic_error("koszul_ext_dims: reduced differential unexpectedly nonzero");
    dims.push_back(h);
  }
  return dims;
}

// --------------------------------------------------------------------------
// Ext classes and the exterior action.
// --------------------------------------------------------------------------

// Element of Hom(∧^degree k^n, k), coordinates against index_subsets(n, degree).
template <class F>
struct ExtClass {
  int degree = 0;
  std::vector<typename F::Elem> coords;
};

template <class F>
ExtClass<F> ext_zero_class(const F& k, int n, int degree) {
  return ExtClass<F>{degree, std::vector<typename F::Elem>(static_cast<std::size_t>(detail::binom_ll(n, degree)), k.zero())};
}

template <class F>
bool ext_class_equal(const F& k, const ExtClass<F>& a, const ExtClass<F>& b) {
  if (a.degree != b.degree || a.coords.size() != b.coords.size()) return false;
  for (std::size_t i = 0; i < a.coords.size(); ++i)
    if (!k.eq(a.coords[i], b.coords[i])) return false;
  return true;
}

template <class F>
bool ext_class_is_zero(const F& k, const ExtClass<F>& a) {
  for (const auto& c : a.coords)
    if (!k.is_zero(c)) return false;
  return true;
}

// Exterior product of dual forms on k^n via the shuffle formula:
// (w ∧ c)(e_S) = sum over position-subsets T of S, |T| = deg w, of
// sign(T) w(S[T]) c(S \ S[T]) with sign(T) = (-1)^{sum (p_t - t)}.
template <class F>
ExtClass<F> ext_class_wedge(const F& k, int n, const ExtClass<F>& w, const ExtClass<F>& c) {
  const int a = w.degree, b = c.degree;
  ExtClass<F> out = ext_zero_class(k, n, a + b);
  if (a + b > n) return out;
  auto big = index_subsets(n, a + b);
  auto lista = index_subsets(n, a);
  auto listb = index_subsets(n, b);
  auto positions = index_subsets(a + b, a);
  for (std::size_t si = 0; si < big.size(); ++si) {
    const auto& S = big[si];
    auto acc = k.zero();
    for (const auto& pos : positions) {
      std::vector<int> T, U;
      std::vector<bool> used(S.size(), false);
      int parity = 0;
      for (std::size_t t = 0; t < pos.size(); ++t) {
        T.push_back(S[static_cast<std::size_t>(pos[t])]);
        used[static_cast<std::size_t>(pos[t])] = true;
        parity += pos[t] - static_cast<int>(t);
      }
      for (std::size_t u = 0; u < S.size(); ++u)
        if (!used[u]) U.push_back(S[u]);
      auto term = k.mul(w.coords[static_cast<std::size_t>(subset_position(lista, T))],
                        c.coords[static_cast<std::size_t>(subset_position(listb, U))]);
      acc = (parity % 2 == 0) ? k.add(acc, term) : k.sub(acc, term);
    }
    out.coords[si] = acc;
  }
  return out;
}

// --------------------------------------------------------------------------
// Canonical division f = sum_j a_j X_j and the Yoneda action.
// --------------------------------------------------------------------------

// a[i][j] with f_i = sum_j a[i][j] X_j: each monomial is assigned to its
// smallest-index dividing variable, or to the first dividing variable in
// var_order when one is supplied (used to check division independence).
template <class F>
std::vector<std::vector<Poly<F>>> division_matrix(const LocalSequence<F>& seq,
                                                  const std::vector<int>* var_order = nullptr) {
  detail::check_sequence(seq);
  const F& k = seq.ring.field;
  const int r = seq.ring.num_vars;
  std::vector<int> order;
  if (var_order) {
    order = *var_order;
    std::vector<int> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (int j = 0; j < r; ++j)
      if (sorted[static_cast<std::size_t>(j)] != j) throw std::invalid_argument("division_matrix: var_order is not a permutation");
  } else {
    for (int j = 0; j < r; ++j) order.push_back(j);
  }
  std::vector<std::vector<Poly<F>>> a;
  for (const auto& f : seq.gens) {
    std::vector<Poly<F>> row(static_cast<std::size_t>(r), poly_zero(k, r));
    for (const auto& [e, c] : f.terms) {
      int target = -1;
      for (int j : order)
        if (e[static_cast<std::size_t>(j)] > 0) {
          target = j;
          break;
        }
      if (target < 0) throw std::logic_error("division_matrix: constant term slipped through validation");
      Expo q = e;
      --q[static_cast<std::size_t>(target)];
      poly_add_term(k, row[static_cast<std::size_t>(target)], q, c);
    }
    a.push_back(std::move(row));
  }
  return a;
}

// Action of a dual vector eta in (k^r)^∨ on an Ext class, raising the degree
// by one. Computed two ways and cross-checked on every call:
//   (a) divide each generator as f_i = sum a_{ij} X_j, push eta through the
//       chain map ∧•(a_{ij}) and reduce mod m;
//   (b) closed form: wedge with A·eta where A is the linear-part matrix.
template <class F>
ExtClass<F> yoneda_action(const LocalSequence<F>& seq, const std::vector<typename F::Elem>& eta,
                          const ExtClass<F>& cls, const std::vector<int>* var_order = nullptr) {
  detail::check_sequence(seq);
  const F& k = seq.ring.field;
  const int n = static_cast<int>(seq.gens.size());
  const int r = seq.ring.num_vars;
  if (static_cast<int>(eta.size()) != r) throw std::invalid_argument("yoneda_action: eta has wrong length");
  if (cls.degree < 0 || cls.degree > n) throw std::invalid_argument("yoneda_action: class degree out of range");
  if (static_cast<long long>(cls.coords.size()) != detail::binom_ll(n, cls.degree))
    throw std::invalid_argument("yoneda_action: class has wrong coordinate count");

  // route (a): chain map from the division, reduced mod m
  auto a = division_matrix(seq, var_order);
  std::vector<typename F::Elem> v_chain;
  for (int i = 0; i < n; ++i) {
    Poly<F> acc = poly_zero(k, r);
    for (int j = 0; j < r; ++j)
      acc = poly_add(k, acc, poly_scale(k, a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], eta[static_cast<std::size_t>(j)]));
    v_chain.push_back(poly_constant_term(k, acc));
  }
  // route (b): linear parts directly
  FMat<F> A = linear_part_matrix(seq);
  std::vector<typename F::Elem> v_direct;
  for (int i = 0; i < n; ++i) {
    auto acc = k.zero();
    for (int j = 0; j < r; ++j)
      acc = k.add(acc, k.mul(A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], eta[static_cast<std::size_t>(j)]));
    v_direct.push_back(acc);
  }
  for (int i = 0; i < n; ++i)
    if (!k.eq(v_chain[static_cast<std::size_t>(i)], v_direct[static_cast<std::size_t>(i)]))
      throw std::logic_error("yoneda_action: chain-map and closed-form routes disagree");

  ExtClass<F> one_form{1, v_chain};
  return ext_class_wedge(k, n, one_form, cls);
}

// --------------------------------------------------------------------------
// Generation over the bottom degree.
// --------------------------------------------------------------------------

namespace detail {

// Exact determinant of a small polynomial matrix by cofactor expansion;
// sizes here are at most 3x3 so this is cheap and keeps the arithmetic exact.
template <class F>
Poly<F> poly_det(const F& k, const std::vector<std::vector<Poly<F>>>& m) {
  const std::size_t n = m.size();
  if (n == 0) throw std::invalid_argument("poly_det: empty matrix");
  const int nvars = m.front().front().nvars;
  if (n == 1) return m[0][0];
  Poly<F> acc = poly_zero(k, nvars);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::vector<Poly<F>>> sub;
    for (std::size_t row = 1; row < n; ++row) {
      std::vector<Poly<F>> srow;
      for (std::size_t col = 0; col < n; ++col)
        if (col != j) srow.push_back(m[row][col]);
      sub.push_back(std::move(srow));
    }
    Poly<F> term = poly_mul(k, m[0][j], poly_det(k, sub));
    if (j % 2 == 1) term = poly_scale(k, term, k.neg(k.one()));
    acc = poly_add(k, acc, term);
  }
  return acc;
}

}  // namespace detail

template <class F>
struct ExtReport {
  std::vector<long long> dims;
  FMat<F> linear_part_matrix;           // n x r
  std::vector<FMat<F>> action_matrices;  // [i-1]: C(n,i) x C(r,i), i = 1..n
  bool generated_over_bottom = false;
  std::optional<int> failing_degree;
  std::string note;
};

// Verdict on whether the degree-one action generates everything above the
// bottom degree. The degree-one matrix and its exterior powers are computed
// through the division route (polynomial minors, then reduction mod m) and
// cross-checked against numeric minors of the linear-part matrix.
template <class F>
ExtReport<F> generation_verdict(const LocalSequence<F>& seq) {
  detail::check_sequence(seq);
  const F& k = seq.ring.field;
  const int n = static_cast<int>(seq.gens.size());
  const int r = seq.ring.num_vars;
  ExtReport<F> rep;
  rep.dims = koszul_ext_dims(seq);
  rep.linear_part_matrix = linear_part_matrix(seq);

  auto a = division_matrix(seq);
  for (int i = 1; i <= n; ++i) {
    auto rows_s = index_subsets(n, i);
    auto cols_t = index_subsets(r, i);
    FMat<F> mat;
    for (const auto& S : rows_s) {
      std::vector<typename F::Elem> row;
      for (const auto& T : cols_t) {
        // polynomial minor of the division matrix, reduced mod m
        std::vector<std::vector<Poly<F>>> sub;
        for (int si : S) {
          std::vector<Poly<F>> prow;
          for (int tj : T) prow.push_back(a[static_cast<std::size_t>(si)][static_cast<std::size_t>(tj)]);
          sub.push_back(std::move(prow));
        }
        Poly<F> minor = detail::poly_det(k, sub);
        auto reduced = poly_constant_term(k, minor);
        // numeric minor of the linear-part matrix must agree
        FMat<F> nsub;
        for (int si : S) {
          std::vector<typename F::Elem> nrow;
          for (int tj : T) nrow.push_back(rep.linear_part_matrix[static_cast<std::size_t>(si)][static_cast<std::size_t>(tj)]);
          nsub.push_back(std::move(nrow));
        }
        if (!k.eq(reduced, field_matrix_det(k, nsub)))
          throw std::logic_error("generation_verdict: minor routes disagree");
        row.push_back(reduced);
      }
      mat.push_back(std::move(row));
    }
    rep.action_matrices.push_back(std::move(mat));
  }

  int degree_one_rank = n == 0 ? 0 : field_matrix_rank(k, rep.action_matrices.empty() ? FMat<F>{} : rep.action_matrices.front());
  rep.generated_over_bottom = (degree_one_rank == n);
  if (!rep.generated_over_bottom) rep.failing_degree = 1;
  rep.note =
      "surjectivity of the degree-one action map implies surjectivity of every "
      "exterior power; a failure is therefore always reported in degree 1";
  return rep;
}

// --------------------------------------------------------------------------
// Bounded-degree regularity probe.
// --------------------------------------------------------------------------

namespace detail {

template <class F>
std::vector<Expo> monomials_up_to(const F&, int nvars, int bound) {
  std::vector<Expo> out;
  Expo cur(static_cast<std::size_t>(nvars), 0);
  for (;;) {
    if (total_degree(cur) <= bound) out.push_back(cur);
    std::size_t pos = cur.size();
    while (pos > 0 && ++cur[pos - 1] > bound) cur[--pos] = 0;
    if (pos == 0) break;
  }
  std::sort(out.begin(), out.end(), [](const Expo& a, const Expo& b) {
    int da = total_degree(a), db = total_degree(b);
    return da != db ? da < db : a < b;
  });
  return out;
}

template <class F>
std::string describe_cycle(const F& k, int nvars, const std::vector<typename F::Elem>& cycle,
                           const std::vector<Expo>& mons) {
  const std::size_t per = mons.size();
  std::string out;
  for (std::size_t i = 0; i * per < cycle.size(); ++i) {
    Poly<F> g{nvars, {}};
    for (std::size_t m = 0; m < per; ++m) poly_add_term(k, g, mons[m], cycle[i * per + m]);
    if (!out.empty()) out += ", ";
    out += "g" + std::to_string(i + 1) + " = " + poly_str(k, g);
  }
  return out;
}

}  // namespace detail

// Three-route regularity check: certify via independent linear parts, or via
// distinct pure variable powers, or search for a non-Koszul syzygy among
// coefficient tuples of total degree <= D (boundaries taken up to degree
// D + max generator degree). The bounded search refutes regularity when a
// witness appears; absence of a witness is evidence, not proof, and every
// report says so.
template <class F>
Report graded_regularity_probe(const LocalSequence<F>& seq, int degree_bound) {
  detail::check_sequence(seq);
  const F& k = seq.ring.field;
  const int n = static_cast<int>(seq.gens.size());
  const int r = seq.ring.num_vars;
  if (n == 0) throw std::invalid_argument("graded_regularity_probe: empty sequence");
  int maxdeg = 0;
  for (const auto& f : seq.gens) maxdeg = std::max(maxdeg, poly_total_degree(f));
  if (degree_bound < maxdeg) throw std::invalid_argument("graded_regularity_probe: degree bound below generator degree");

  Report rep;
  rep.title = "graded regularity probe";
  const std::string scope_note =
      "certificates are proofs; the bounded-degree search only rules out witnesses up to the stated degree";

  if (n <= r && field_matrix_rank(k, linear_part_matrix(seq)) == n) {
    rep.add("linear-part certificate", true, "linear parts are independent, so the sequence extends to a regular system");
    rep.add("probe scope", true, scope_note);
    return rep;
  }

  bool pure = true;
  std::vector<int> used_vars;
  for (const auto& f : seq.gens) {
    if (f.terms.size() != 1) {
      pure = false;
      break;
    }
    const Expo& e = f.terms.begin()->first;
    int var = -1;
    for (std::size_t j = 0; j < e.size(); ++j) {
      if (e[j] == 0) continue;
      if (var >= 0) {
        var = -2;
        break;
      }
      var = static_cast<int>(j);
    }
    if (var < 0) {
      pure = false;
      break;
    }
    used_vars.push_back(var);
  }
  if (pure) {
    std::sort(used_vars.begin(), used_vars.end());
    pure = std::adjacent_find(used_vars.begin(), used_vars.end()) == used_vars.end();
  }
  if (pure) {
    rep.add("monomial certificate", true, "distinct pure variable powers form a regular sequence");
    rep.add("probe scope", true, scope_note);
    return rep;
  }

  // Bounded H_1: cycles with coefficients of degree <= D against Koszul
  // boundaries h (f_i e_j - f_j e_i), both embedded in components of degree
  // <= D + maxdeg.
  const int D = degree_bound;
  auto small_mons = detail::monomials_up_to(k, r, D);
  auto big_mons = detail::monomials_up_to(k, r, D + maxdeg);
  std::map<Expo, std::size_t> big_pos;
  for (std::size_t i = 0; i < big_mons.size(); ++i) big_pos[big_mons[i]] = i;

  // constraint matrix: rows = target monomials, cols = (gen index, small monomial)
  const std::size_t ncols = static_cast<std::size_t>(n) * small_mons.size();
  FMat<F> constraint(big_mons.size(), std::vector<typename F::Elem>(ncols, k.zero()));
  for (int i = 0; i < n; ++i)
    for (std::size_t m = 0; m < small_mons.size(); ++m) {
      Poly<F> prod = poly_mul_mono(k, seq.gens[static_cast<std::size_t>(i)], small_mons[m], k.one());
      for (const auto& [e, c] : prod.terms)
        constraint[big_pos.at(e)][static_cast<std::size_t>(i) * small_mons.size() + m] = c;
    }
  FMat<F> cycles = field_matrix_nullspace(k, constraint, static_cast<int>(ncols));

  // boundary vectors, components written against big_mons
  const std::size_t comp_cols = static_cast<std::size_t>(n) * big_mons.size();
  auto embed = [&](int gen, const Poly<F>& g, std::vector<typename F::Elem>& vec) {
    for (const auto& [e, c] : g.terms)
      vec[static_cast<std::size_t>(gen) * big_mons.size() + big_pos.at(e)] = k.add(vec[static_cast<std::size_t>(gen) * big_mons.size() + big_pos.at(e)], c);
  };
  FMat<F> boundaries;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      int pair_deg = std::max(poly_total_degree(seq.gens[static_cast<std::size_t>(i)]),
                              poly_total_degree(seq.gens[static_cast<std::size_t>(j)]));
      for (const auto& h : big_mons) {
        if (total_degree(h) + pair_deg > D + maxdeg) continue;
        std::vector<typename F::Elem> vec(comp_cols, k.zero());
        // d(h e_i ∧ e_j) = h f_i e_j - h f_j e_i
        embed(j, poly_mul_mono(k, seq.gens[static_cast<std::size_t>(i)], h, k.one()), vec);
        embed(i, poly_mul_mono(k, seq.gens[static_cast<std::size_t>(j)], h, k.neg(k.one())), vec);
        boundaries.push_back(std::move(vec));
      }
    }

  std::optional<std::string> witness;
  for (const auto& cyc : cycles) {
    std::vector<typename F::Elem> embedded(comp_cols, k.zero());
    for (int i = 0; i < n; ++i) {
      Poly<F> g{r, {}};
      for (std::size_t m = 0; m < small_mons.size(); ++m)
        poly_add_term(k, g, small_mons[m], cyc[static_cast<std::size_t>(i) * small_mons.size() + m]);
      embed(i, g, embedded);
    }
    if (!field_in_span(k, boundaries, embedded)) {
      witness = detail::describe_cycle(k, r, cyc, small_mons);
      break;
    }
  }

  if (witness)
    rep.add("bounded-degree first Koszul homology", false, "witness cycle not a Koszul boundary: " + *witness);
  else
    rep.add("bounded-degree first Koszul homology", true,
            "no obstruction up to degree " + std::to_string(D));
  rep.add("probe scope", true, scope_note);
  return rep;
}

// --------------------------------------------------------------------------
// Cohomological degree placement.
// --------------------------------------------------------------------------

struct DegreeTable {
  std::map<int, long long> table;  // cohomological degree -> dimension
  long long multiplicity = 1;      // bottom dimension
  bool pattern_matches = false;    // dims[i] == multiplicity * C(l0, i)
};

inline DegreeTable cohomology_degree_map(int l0, int q0, const std::vector<long long>& dims) {
  if (l0 < 0) throw std::invalid_argument("cohomology_degree_map: negative l0");
  if (static_cast<int>(dims.size()) != l0 + 1)
    throw std::invalid_argument("cohomology_degree_map: dims length must be l0 + 1");
  DegreeTable out;
  out.multiplicity = dims[0];
  out.pattern_matches = true;
  for (int i = 0; i <= l0; ++i) {
    out.table[q0 + i] = dims[static_cast<std::size_t>(i)];
    if (dims[static_cast<std::size_t>(i)] != out.multiplicity * detail::binom_ll(l0, i)) out.pattern_matches = false;
  }
  return out;
}

}  // namespace ordkit
