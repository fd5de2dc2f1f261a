#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ordkit/field.hpp"

namespace ordkit {

// Default total-degree cap for power-series style manipulation of
// polynomials (see poly_truncate). Plain polynomial arithmetic is exact and
// never truncates on its own.
inline constexpr int kDefaultTruncation = 12;

// Exponent vector, one slot per variable, nonnegative entries.
using Expo = std::vector<int>;

inline int total_degree(const Expo& e) {
  int d = 0;
  for (int x : e) d += x;
  return d;
}

// Sparse polynomial over the field context F. Invariant: no zero
// coefficients are stored, every exponent vector has length nvars.
template <class F>
struct Poly {
  int nvars = 0;
  std::map<Expo, typename F::Elem> terms;
};

template <class F>
Poly<F> poly_zero(const F&, int nvars) {
  return Poly<F>{nvars, {}};
}

template <class F>
void poly_add_term(const F& k, Poly<F>& p, const Expo& e, const typename F::Elem& c) {
  if (static_cast<int>(e.size()) != p.nvars) throw std::invalid_argument("poly term: wrong arity");
  for (int x : e)
    if (x < 0) throw std::invalid_argument("poly term: negative exponent");
  auto it = p.terms.find(e);
  if (it == p.terms.end()) {
    if (!k.is_zero(c)) p.terms.emplace(e, c);
    return;
  }
  it->second = k.add(it->second, c);
  if (k.is_zero(it->second)) p.terms.erase(it);
}

template <class F>
Poly<F> poly_add(const F& k, const Poly<F>& a, const Poly<F>& b) {
  Poly<F> out = a;
  for (const auto& [e, c] : b.terms) poly_add_term(k, out, e, c);
  return out;
}

template <class F>
Poly<F> poly_scale(const F& k, const Poly<F>& a, const typename F::Elem& c) {
  Poly<F> out{a.nvars, {}};
  if (k.is_zero(c)) return out;
  for (const auto& [e, v] : a.terms) out.terms.emplace(e, k.mul(v, c));
  return out;
}

template <class F>
Poly<F> poly_sub(const F& k, const Poly<F>& a, const Poly<F>& b) {
  return poly_add(k, a, poly_scale(k, b, k.neg(k.one())));
}

template <class F>
Poly<F> poly_mul(const F& k, const Poly<F>& a, const Poly<F>& b) {
  if (a.nvars != b.nvars) throw std::invalid_argument("poly_mul: arity mismatch");
  Poly<F> out{a.nvars, {}};
  for (const auto& [ea, ca] : a.terms)
    for (const auto& [eb, cb] : b.terms) {
      Expo e = ea;
      for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
      poly_add_term(k, out, e, k.mul(ca, cb));
    }
  return out;
}

// Multiply a polynomial by a single monomial c * X^e.
template <class F>
Poly<F> poly_mul_mono(const F& k, const Poly<F>& a, const Expo& e, const typename F::Elem& c) {
  Poly<F> out{a.nvars, {}};
  if (k.is_zero(c)) return out;
  for (const auto& [ea, ca] : a.terms) {
    Expo s = ea;
    for (std::size_t i = 0; i < s.size(); ++i) s[i] += e[i];
    out.terms.emplace(s, k.mul(ca, c));
  }
  return out;
}

// Drop every term of total degree > bound (power-series truncation).
template <class F>
Poly<F> poly_truncate(const Poly<F>& a, int bound) {
  Poly<F> out{a.nvars, {}};
  for (const auto& [e, c] : a.terms)
    if (total_degree(e) <= bound) out.terms.emplace(e, c);
  return out;
}

template <class F>
bool poly_is_zero(const Poly<F>& a) {
  return a.terms.empty();
}

template <class F>
typename F::Elem poly_constant_term(const F& k, const Poly<F>& a) {
  auto it = a.terms.find(Expo(static_cast<std::size_t>(a.nvars), 0));
  return it == a.terms.end() ? k.zero() : it->second;
}

template <class F>
int poly_total_degree(const Poly<F>& a) {
  int d = 0;
  for (const auto& [e, c] : a.terms) d = std::max(d, total_degree(e));
  return d;
}

template <class F>
bool poly_equal(const F& k, const Poly<F>& a, const Poly<F>& b) {
  return poly_is_zero(poly_sub(k, a, b));
}

// Render with deterministic (map) term order: "3*X1^2 + 1/2*X2 - 1".
template <class F>
std::string poly_str(const F& k, const Poly<F>& a) {
  if (a.terms.empty()) return "0";
  std::string out;
  for (const auto& [e, c] : a.terms) {
    if (!out.empty()) out += " + ";
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += "X" + std::to_string(i + 1);
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    if (mono.empty())
      out += k.str(c);
    else if (k.eq(c, k.one()))
      out += mono;
    else
      out += k.str(c) + "*" + mono;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parsing. Two interchangeable formats:
//   string grammar:  terms joined by +/-, each term a '*'-joined product of
//                    an optional coefficient literal (integer or a/b) and
//                    variable factors "X<k>" or "X<k>^<e>" ("X" = "X1");
//   structured:      list of [coefficient, [exponents]] pairs, handled by
//                    the JSON layer and fed through poly_add_term.
// ---------------------------------------------------------------------------

namespace detail {
inline bool is_coeff_char(char c) { return (c >= '0' && c <= '9') || c == '/' || c == '.'; }
}  // namespace detail

template <class F>
Poly<F> parse_poly(const F& k, const std::string& text, int nvars) {
  Poly<F> out{nvars, {}};
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw std::invalid_argument("parse_poly: empty input");

  std::size_t pos = 0;
  while (pos < s.size()) {
    bool negative = false;
    while (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
      if (s[pos] == '-') negative = !negative;
      ++pos;
    }
    if (pos >= s.size()) throw std::invalid_argument("parse_poly: dangling sign");
    std::size_t end = pos;
    while (end < s.size() && s[end] != '+' && s[end] != '-') ++end;
    std::string term = s.substr(pos, end - pos);
    pos = end;

    typename F::Elem coeff = k.one();
    Expo expo(static_cast<std::size_t>(nvars), 0);
    std::size_t t = 0;
    bool saw_factor = false;
    while (t < term.size()) {
      std::size_t fe = term.find('*', t);
      if (fe == std::string::npos) fe = term.size();
      std::string factor = term.substr(t, fe - t);
      t = fe + 1;
      if (factor.empty()) throw std::invalid_argument("parse_poly: empty factor in '" + term + "'");
      if (factor[0] == 'X' || factor[0] == 'x') {
        std::size_t caret = factor.find('^');
        std::string var = factor.substr(1, caret == std::string::npos ? std::string::npos : caret - 1);
        int index = var.empty() ? 1 : std::stoi(var);
        if (index < 1 || index > nvars)
          throw std::invalid_argument("parse_poly: variable X" + std::to_string(index) +
                                      " out of range for " + std::to_string(nvars) + " vars");
        int e = 1;
        if (caret != std::string::npos) {
          e = std::stoi(factor.substr(caret + 1));
          if (e < 0) throw std::invalid_argument("parse_poly: negative exponent");
        }
        expo[static_cast<std::size_t>(index - 1)] += e;
      } else if (detail::is_coeff_char(factor[0])) {
        if (factor.find('.') != std::string::npos)
          throw std::invalid_argument("parse_poly: decimal literals not supported, use a/b");
        coeff = k.mul(coeff, k.from_string(factor));
      } else {
        throw std::invalid_argument("parse_poly: unexpected factor '" + factor + "'");
      }
      saw_factor = true;
    }
    if (!saw_factor) throw std::invalid_argument("parse_poly: empty term");
    if (negative) coeff = k.neg(coeff);
    poly_add_term(k, out, expo, coeff);
  }
  return out;
}

}  // namespace ordkit
