#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace ordkit {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Lattice vectors (characters/cocharacters) and small integer matrices.
using Vec = std::vector<long long>;
using IMat = std::vector<Vec>;

inline Int ipow(const Int& base, unsigned long long e) {
  Int r = 1, b = base;
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

// Overflow-checked power for the fixed-width paths (matrix entries, moduli).
inline long long llpow(long long base, unsigned e) {
  long long r = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (base != 0 && r > std::numeric_limits<long long>::max() / std::abs(base))
      throw std::overflow_error("llpow overflow: " + std::to_string(base) + "^" + std::to_string(e));
    r *= base;
  }
  return r;
}

inline Int binomial(long long n, long long k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  Int r = 1;
  for (long long i = 0; i < k; ++i) {
    r *= (n - i);
    r /= (i + 1);
  }
  return r;
}

inline Rat rat_pow(const Rat& x, long long e) {
  using boost::multiprecision::numerator;
  using boost::multiprecision::denominator;
  if (e == 0) return Rat(1);
  if (x == 0) {
    if (e < 0) throw std::domain_error("rat_pow: 0 to a negative power");
    return Rat(0);
  }
  Int n = numerator(x), d = denominator(x);
  unsigned long long a = static_cast<unsigned long long>(e < 0 ? -e : e);
  Int np = ipow(n, a), dp = ipow(d, a);
  if (e < 0) std::swap(np, dp);
  if (dp < 0) {
    np = -np;
    dp = -dp;
  }
  return Rat(np, dp);
}

inline long long dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("dot: rank mismatch (" + std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  long long s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Vec mat_apply(const IMat& m, const Vec& x) {
  Vec y(m.size(), 0);
  for (std::size_t i = 0; i < m.size(); ++i) y[i] = dot(m[i], x);
  return y;
}

inline IMat mat_mul(const IMat& a, const IMat& b) {
  std::size_t n = a.size();
  IMat c(n, Vec(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      long long aik = a[i][k];
      if (aik == 0) continue;
      for (std::size_t j = 0; j < n; ++j) c[i][j] += aik * b[k][j];
    }
  return c;
}

inline IMat mat_identity(std::size_t n) {
  IMat m(n, Vec(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

// x = a^{-1} mod m for gcd(a,m)=1, via extended Euclid.
inline long long inv_mod(long long a, long long m) {
  long long r0 = m, r1 = ((a % m) + m) % m, s0 = 0, s1 = 1;
  while (r1 != 0) {
    long long q = r0 / r1;
    long long r2 = r0 - q * r1, s2 = s0 - q * s1;
    r0 = r1; r1 = r2; s0 = s1; s1 = s2;
  }
  if (r0 != 1) throw std::domain_error("inv_mod: not invertible");
  return ((s0 % m) + m) % m;
}

inline long long pow_mod(long long b, long long e, long long m) {
  long long r = 1 % m;
  b = ((b % m) + m) % m;
  while (e > 0) {
    if (e & 1) r = (r * b) % m;
    b = (b * b) % m;
    e >>= 1;
  }
  return r;
}

// p-adic valuation of a nonzero big integer; returns (v, unit part).
inline std::pair<long long, Int> p_valuation(Int x, long long p) {
  if (x == 0) throw std::domain_error("p_valuation of zero");
  long long v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return {v, x};
}

}  // namespace ordkit
