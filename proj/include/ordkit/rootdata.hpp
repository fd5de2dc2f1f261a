#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ordkit/numeric.hpp"
#include "ordkit/report.hpp"

namespace ordkit {

inline std::string vec_str(const Vec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s + ")";
}

// Split root datum: character lattice X^* and cocharacter lattice X_* of rank
// `rank`, identified with Z^rank so that the perfect pairing is the dot
// product. `roots` live in X^*, `coroots` in X_* (parallel arrays), `dims[i]`
// is the dimension d_alpha of the root subgroup (1 for the split presets).
struct RootDatum {
  int rank = 0;
  std::vector<Vec> roots;
  std::vector<Vec> coroots;
  std::vector<int> simple;        // indices into roots
  std::vector<long long> dims;    // d_alpha, parallel to roots
  int torus_rank = 0;
  std::string name;

  // Filled by finalize():
  std::vector<int> positive;      // indices of positive roots
  std::vector<int> negation;      // negation[i] = index of -roots[i]
  bool finalized = false;

  const Vec& root(int i) const { return roots.at(i); }
  const Vec& coroot(int i) const { return coroots.at(i); }

  int root_index(const Vec& a) const {
    for (std::size_t i = 0; i < roots.size(); ++i)
      if (roots[i] == a) return static_cast<int>(i);
    return -1;
  }
};

inline long long pairing(const Vec& cocharacter, const Vec& character) {
  return dot(cocharacter, character);
}

namespace detail {

// Solve S x = target exactly over Q, where the columns of S are the simple
// roots. Simple roots are linearly independent, so a solution is unique when
// it exists. Returns std::nullopt when the system is inconsistent.
inline std::optional<std::vector<Rat>> solve_in_simple_basis(const std::vector<Vec>& simples,
                                                             const Vec& target) {
  std::size_t rows = target.size(), cols = simples.size();
  std::vector<std::vector<Rat>> m(rows, std::vector<Rat>(cols + 1));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) m[i][j] = simples[j][i];
    m[i][cols] = target[i];
  }
  std::vector<long long> pivot_col(rows, -1);
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t sel = rank;
    while (sel < rows && m[sel][col] == 0) ++sel;
    if (sel == rows) continue;
    std::swap(m[sel], m[rank]);
    Rat inv = m[rank][col];
    for (auto& x : m[rank]) x /= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == rank || m[i][col] == 0) continue;
      Rat f = m[i][col];
      for (std::size_t j = col; j <= cols; ++j) m[i][j] -= f * m[rank][j];
    }
    pivot_col[rank] = static_cast<long long>(col);
    ++rank;
  }
  for (std::size_t i = rank; i < rows; ++i)
    if (m[i][cols] != 0) return std::nullopt;  // inconsistent
  std::vector<Rat> x(cols, Rat(0));
  for (std::size_t i = 0; i < rank; ++i) x[static_cast<std::size_t>(pivot_col[i])] = m[i][cols];
  return x;
}

}  // namespace detail

// Computes positive roots and negation table, and verifies the type
// invariants. Throws std::invalid_argument on a malformed datum.
inline void finalize(RootDatum& d) {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("RootDatum: " + msg); };
  if (d.rank <= 0) fail("rank must be positive");
  if (d.roots.size() != d.coroots.size()) fail("roots and coroots must be parallel lists");
  if (d.roots.empty()) fail("no roots");
  if (d.dims.empty()) d.dims.assign(d.roots.size(), 1);
  if (d.dims.size() != d.roots.size()) fail("dims must be parallel to roots");
  for (auto v : d.dims)
    if (v <= 0) fail("d_alpha must be positive");
  for (const auto& a : d.roots)
    if (a.size() != static_cast<std::size_t>(d.rank)) fail("root of wrong rank");
  for (const auto& a : d.coroots)
    if (a.size() != static_cast<std::size_t>(d.rank)) fail("coroot of wrong rank");
  if (d.torus_rank == 0) d.torus_rank = d.rank;

  // <alpha^vee, alpha> = 2 and distinctness.
  std::set<Vec> seen;
  for (std::size_t i = 0; i < d.roots.size(); ++i) {
    if (pairing(d.coroots[i], d.roots[i]) != 2)
      fail("pairing(coroot, root) != 2 at " + vec_str(d.roots[i]));
    if (!seen.insert(d.roots[i]).second) fail("duplicate root " + vec_str(d.roots[i]));
  }

  // +/- pairs with matching dims, matching coroots.
  d.negation.assign(d.roots.size(), -1);
  for (std::size_t i = 0; i < d.roots.size(); ++i) {
    Vec neg = d.roots[i];
    for (auto& x : neg) x = -x;
    int j = d.root_index(neg);
    if (j < 0) fail("root set not symmetric: missing " + vec_str(neg));
    d.negation[i] = j;
    if (d.dims[i] != d.dims[static_cast<std::size_t>(j)]) fail("d_alpha != d_{-alpha}");
    Vec negco = d.coroots[i];
    for (auto& x : negco) x = -x;
    if (d.coroots[static_cast<std::size_t>(j)] != negco) fail("coroot(-alpha) != -coroot(alpha)");
  }

  if (d.simple.empty()) fail("no simple roots given");
  for (int s : d.simple)
    if (s < 0 || static_cast<std::size_t>(s) >= d.roots.size()) fail("simple index out of range");

  // Closure of the root set under simple reflections.
  for (int s : d.simple) {
    const Vec& as = d.roots[static_cast<std::size_t>(s)];
    const Vec& cs = d.coroots[static_cast<std::size_t>(s)];
    for (const auto& a : d.roots) {
      Vec im = a;
      long long k = pairing(cs, a);
      for (int t = 0; t < d.rank; ++t) im[static_cast<std::size_t>(t)] -= k * as[static_cast<std::size_t>(t)];
      if (d.root_index(im) < 0)
        fail("roots not closed under reflection at " + vec_str(as) + " applied to " + vec_str(a));
    }
  }

  // Positivity: each root must be a nonnegative or nonpositive integer
  // combination of the simple roots.
  std::vector<Vec> simples;
  for (int s : d.simple) simples.push_back(d.roots[static_cast<std::size_t>(s)]);
  d.positive.clear();
  for (std::size_t i = 0; i < d.roots.size(); ++i) {
    auto sol = detail::solve_in_simple_basis(simples, d.roots[i]);
    if (!sol) fail("root " + vec_str(d.roots[i]) + " not in the span of simple roots");
    bool nonneg = true, nonpos = true;
    for (const auto& x : *sol) {
      using boost::multiprecision::denominator;
      if (denominator(x) != 1) fail("root " + vec_str(d.roots[i]) + " not an integer combination of simples");
      if (x > 0) nonpos = false;
      if (x < 0) nonneg = false;
    }
    if (nonneg == nonpos) fail("root " + vec_str(d.roots[i]) + " neither positive nor negative");
    if (nonneg) d.positive.push_back(static_cast<int>(i));
  }
  if (2 * d.positive.size() != d.roots.size()) fail("positive roots are not half of all roots");
  for (int s : d.simple)
    if (std::find(d.positive.begin(), d.positive.end(), s) == d.positive.end())
      fail("simple root not positive");
  d.finalized = true;
}

// Presets. GL_n uses X^* = Z^n with roots e_i - e_j. SL_n uses the weight
// lattice in the basis of fundamental weights (simple roots are the columns of
// the Cartan matrix, simple coroots the dual basis). Sp_4 is type C2.
inline RootDatum build_preset(const std::string& which, int n) {
  RootDatum d;
  auto e = [](int rank, int i) { Vec v(static_cast<std::size_t>(rank), 0); v[static_cast<std::size_t>(i)] = 1; return v; };
  if (which == "GL") {
    if (n < 2) throw std::invalid_argument("build_preset: GL_n needs n >= 2");
    d.rank = d.torus_rank = n;
    d.name = "GL" + std::to_string(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        Vec a(static_cast<std::size_t>(n), 0);
        a[static_cast<std::size_t>(i)] = 1;
        a[static_cast<std::size_t>(j)] = -1;
        d.roots.push_back(a);
        d.coroots.push_back(a);
        if (j == i + 1) d.simple.push_back(static_cast<int>(d.roots.size()) - 1);
      }
  } else if (which == "SL") {
    if (n < 2) throw std::invalid_argument("build_preset: SL_n needs n >= 2");
    int r = n - 1;
    d.rank = d.torus_rank = r;
    d.name = "SL" + std::to_string(n);
    // Seed with the simple pairs, then close under simple reflections.
    std::vector<std::pair<Vec, Vec>> rts;
    for (int j = 0; j < r; ++j) {
      Vec a(static_cast<std::size_t>(r), 0);
      for (int i = 0; i < r; ++i) {
        if (i == j) a[static_cast<std::size_t>(i)] = 2;
        else if (i == j - 1 || i == j + 1) a[static_cast<std::size_t>(i)] = -1;
      }
      rts.emplace_back(a, e(r, j));
    }
    std::vector<std::pair<Vec, Vec>> simple_pairs = rts;
    std::set<Vec> have;
    for (auto& p : rts) have.insert(p.first);
    for (std::size_t head = 0; head < rts.size(); ++head) {
      auto cur = rts[head];
      for (const auto& [as, cs] : simple_pairs) {
        long long k1 = dot(cs, cur.first);
        Vec na = cur.first, nc = cur.second;
        for (int t = 0; t < r; ++t) na[static_cast<std::size_t>(t)] -= k1 * as[static_cast<std::size_t>(t)];
        long long k2 = dot(cur.second, as);
        for (int t = 0; t < r; ++t) nc[static_cast<std::size_t>(t)] -= k2 * cs[static_cast<std::size_t>(t)];
        if (!have.count(na)) {
          have.insert(na);
          rts.emplace_back(na, nc);
        }
      }
      if (rts.size() > 10000) throw std::runtime_error("build_preset: root closure exceeded bound");
    }
    for (std::size_t i = 0; i < rts.size(); ++i) {
      d.roots.push_back(rts[i].first);
      d.coroots.push_back(rts[i].second);
      if (i < static_cast<std::size_t>(r)) d.simple.push_back(static_cast<int>(i));
    }
  } else if (which == "Sp") {
    if (n != 4) throw std::invalid_argument("build_preset: only Sp_4 is provided");
    d.rank = d.torus_rank = 2;
    d.name = "Sp4";
    auto add = [&](Vec a, Vec c) {
      d.roots.push_back(a);
      d.coroots.push_back(c);
      Vec na = a, ncv = c;
      for (auto& x : na) x = -x;
      for (auto& x : ncv) x = -x;
      d.roots.push_back(na);
      d.coroots.push_back(ncv);
    };
    add({1, -1}, {1, -1});  // short simple
    add({0, 2}, {0, 1});    // long simple
    add({1, 1}, {1, 1});
    add({2, 0}, {1, 0});
    d.simple = {0, 2};
  } else {
    throw std::invalid_argument("build_preset: unknown preset '" + which + "'");
  }
  d.dims.assign(d.roots.size(), 1);
  finalize(d);
  return d;
}

// ---------------------------------------------------------------------------
// Weyl group

struct WeylElement {
  IMat on_char;    // action on X^*
  IMat on_cochar;  // contragredient action on X_*
  std::vector<int> word;  // one shortest word in simple reflections
};

inline std::vector<WeylElement> weyl_group(const RootDatum& d, std::size_t bound = 10000) {
  std::size_t n = static_cast<std::size_t>(d.rank);
  std::vector<WeylElement> out;
  std::set<IMat> seen;
  WeylElement id{mat_identity(n), mat_identity(n), {}};
  out.push_back(id);
  seen.insert(id.on_char);

  std::vector<WeylElement> gens;
  for (std::size_t g = 0; g < d.simple.size(); ++g) {
    const Vec& a = d.roots[static_cast<std::size_t>(d.simple[g])];
    const Vec& c = d.coroots[static_cast<std::size_t>(d.simple[g])];
    IMat mc(n, Vec(n, 0)), mco(n, Vec(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        mc[i][j] = (i == j ? 1 : 0) - a[i] * c[j];
        mco[i][j] = (i == j ? 1 : 0) - c[i] * a[j];
      }
    gens.push_back({mc, mco, {static_cast<int>(g)}});
  }

  for (std::size_t head = 0; head < out.size(); ++head) {
    WeylElement cur = out[head];  // copy: out may reallocate
    for (const auto& g : gens) {
      IMat nc = mat_mul(g.on_char, cur.on_char);
      if (seen.count(nc)) continue;
      WeylElement nxt;
      nxt.on_char = nc;
      nxt.on_cochar = mat_mul(g.on_cochar, cur.on_cochar);
      nxt.word = cur.word;
      nxt.word.push_back(g.word[0]);
      seen.insert(nc);
      out.push_back(std::move(nxt));
      if (out.size() > bound)
        throw std::runtime_error("weyl_group: closure exceeded safety bound of " + std::to_string(bound));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dominance and deg

inline bool is_dominant(const RootDatum& d, const Vec& lambda, bool strict) {
  for (int i : d.positive) {
    long long v = pairing(lambda, d.roots[static_cast<std::size_t>(i)]);
    if (strict ? v <= 0 : v < 0) return false;
  }
  return true;
}

inline bool is_strictly_dominant(const RootDatum& d, const Vec& lambda) {
  return is_dominant(d, lambda, true);
}

// deg(lambda) = sum over positive roots of <lambda, alpha> d_alpha. This is the
// sign convention that makes |C xi C / C| = p^{deg} literally true.
inline long long deg_coweight(const RootDatum& d, const Vec& lambda) {
  if (!is_dominant(d, lambda, false))
    throw std::invalid_argument("deg_coweight: " + vec_str(lambda) + " is not dominant");
  long long s = 0;
  for (int i : d.positive)
    s += pairing(lambda, d.roots[static_cast<std::size_t>(i)]) * d.dims[static_cast<std::size_t>(i)];
  return s;
}

// ---------------------------------------------------------------------------
// alpha^* and the discriminant

struct AlphaStar {
  long long m_alpha = 0;
  Vec star;  // m_alpha * coroot(alpha), an element of X_*
};

inline AlphaStar alpha_star(const RootDatum& d, const Vec& alpha) {
  int i = d.root_index(alpha);
  if (i < 0) throw std::invalid_argument("alpha_star: " + vec_str(alpha) + " is not a root");
  long long g = 0;
  for (long long x : alpha) g = std::gcd(g, std::abs(x));
  AlphaStar r;
  r.m_alpha = g;  // largest m with alpha/m still in the lattice
  r.star = d.coroots[static_cast<std::size_t>(i)];
  for (auto& x : r.star) x *= g;
  return r;
}

// Elements of the group algebra Z[X_*(T)], written as finite maps
// lattice point -> coefficient (no zero coefficients stored).
using GroupAlgebraElement = std::map<Vec, Int>;

inline GroupAlgebraElement ga_mul(const GroupAlgebraElement& a, const GroupAlgebraElement& b) {
  GroupAlgebraElement c;
  for (const auto& [va, ca] : a)
    for (const auto& [vb, cb] : b) {
      Vec v = va;
      for (std::size_t i = 0; i < v.size(); ++i) v[i] += vb[i];
      Int& slot = c[v];
      slot += ca * cb;
      if (slot == 0) c.erase(v);
    }
  return c;
}

inline GroupAlgebraElement ga_apply(const IMat& on_cochar, const GroupAlgebraElement& a) {
  GroupAlgebraElement out;
  for (const auto& [v, coeff] : a) out[mat_apply(on_cochar, v)] += coeff;
  for (auto it = out.begin(); it != out.end();)
    it = (it->second == 0) ? out.erase(it) : std::next(it);
  return out;
}

// f = prod over all roots of (1 - e^{alpha^*}); Weyl-invariant.
inline GroupAlgebraElement discriminant(const RootDatum& d) {
  GroupAlgebraElement f{{Vec(static_cast<std::size_t>(d.rank), 0), Int(1)}};
  for (const auto& a : d.roots) {
    GroupAlgebraElement factor{{Vec(static_cast<std::size_t>(d.rank), 0), Int(1)}};
    factor[alpha_star(d, a).star] -= 1;
    f = ga_mul(f, factor);
  }
  return f;
}

// ---------------------------------------------------------------------------
// Unramified characters and strong regularity

// chi: T(Q_p) -> E^*, unramified, recorded by its exact rational values on the
// standard basis of X_*(T) and extended multiplicatively.
struct UnramifiedCharacter {
  std::vector<Rat> values;

  Rat value(const Vec& cochar) const {
    if (cochar.size() != values.size())
      throw std::invalid_argument("UnramifiedCharacter: rank mismatch");
    Rat r(1);
    for (std::size_t i = 0; i < cochar.size(); ++i) r *= rat_pow(values[i], cochar[i]);
    return r;
  }
};

struct StrongRegularityReport {
  bool reflection_test = false;  // chi(alpha^*) != 1 for all roots
  bool stabilizer_test = false;  // only the identity Weyl element fixes chi
  std::string reflection_witness;
  std::string stabilizer_witness;
  bool agree() const { return reflection_test == stabilizer_test; }
};

inline StrongRegularityReport is_strongly_regular(const RootDatum& d, const UnramifiedCharacter& chi) {
  for (const auto& v : chi.values)
    if (v == 0) throw std::invalid_argument("is_strongly_regular: character value 0");
  StrongRegularityReport rep;
  rep.reflection_test = true;
  for (const auto& a : d.roots) {
    if (chi.value(alpha_star(d, a).star) == 1) {
      rep.reflection_test = false;
      rep.reflection_witness = "chi(alpha^*) = 1 at alpha = " + vec_str(a);
      break;
    }
  }
  rep.stabilizer_test = true;
  for (const auto& w : weyl_group(d)) {
    if (w.word.empty()) continue;
    bool fixes = true;
    for (int i = 0; i < d.rank && fixes; ++i) {
      Vec ei(static_cast<std::size_t>(d.rank), 0);
      ei[static_cast<std::size_t>(i)] = 1;
      if (chi.value(mat_apply(w.on_cochar, ei)) != chi.value(ei)) fixes = false;
    }
    if (fixes) {
      rep.stabilizer_test = false;
      std::string word;
      for (int s : w.word) word += std::to_string(s);
      rep.stabilizer_witness = "chi fixed by Weyl word s[" + word + "]";
      break;
    }
  }
  return rep;
}

}  // namespace ordkit
