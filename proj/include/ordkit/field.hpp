#pragma once

#include <stdexcept>
#include <string>

#include "ordkit/numeric.hpp"

namespace ordkit {

// Exact coefficient fields as context objects, so the prime of F_p can be a
// runtime value while polynomial code stays generic over the field type.

struct QField {
  using Elem = Rat;

  Elem zero() const { return Rat(0); }
  Elem one() const { return Rat(1); }
  Elem add(const Elem& a, const Elem& b) const { return a + b; }
  Elem sub(const Elem& a, const Elem& b) const { return a - b; }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  Elem neg(const Elem& a) const { return -a; }
  Elem inv(const Elem& a) const {
    if (a == 0) throw std::domain_error("QField: division by zero");
    return Rat(1) / a;
  }
  Elem from_int(long long n) const { return Rat(n); }
  Elem from_string(const std::string& s) const { return Rat(s); }
  bool is_zero(const Elem& a) const { return a == 0; }
  bool eq(const Elem& a, const Elem& b) const { return a == b; }
  std::string str(const Elem& a) const { return a.str(); }
  std::string name() const { return "Q"; }
};

struct FpField {
  long long p = 2;
  using Elem = long long;  // reduced into [0, p)

  explicit FpField(long long prime) : p(prime) {
    if (p < 2) throw std::invalid_argument("FpField: p must be a prime >= 2");
    for (long long d = 2; d * d <= p; ++d)
      if (p % d == 0) throw std::invalid_argument("FpField: p must be prime");
  }
  Elem zero() const { return 0; }
  Elem one() const { return 1 % p; }
  Elem add(Elem a, Elem b) const { return (a + b) % p; }
  Elem sub(Elem a, Elem b) const { return ((a - b) % p + p) % p; }
  Elem mul(Elem a, Elem b) const { return (a * b) % p; }
  Elem neg(Elem a) const { return (p - a % p) % p; }
  Elem inv(Elem a) const {
    if (a % p == 0) throw std::domain_error("FpField: division by zero");
    return inv_mod(a, p);
  }
  Elem from_int(long long n) const { return ((n % p) + p) % p; }
  Elem from_string(const std::string& s) const {
    // Rational literals are accepted and reduced, e.g. "1/2" in F_5 is 3.
    auto slash = s.find('/');
    if (slash == std::string::npos) return from_int(std::stoll(s));
    return mul(from_int(std::stoll(s.substr(0, slash))),
               inv(from_int(std::stoll(s.substr(slash + 1)))));
  }
  bool is_zero(Elem a) const { return a % p == 0; }
  bool eq(Elem a, Elem b) const { return ((a - b) % p + p) % p == 0; }
  std::string str(Elem a) const { return std::to_string(((a % p) + p) % p); }
  std::string name() const { return "F" + std::to_string(p); }
};

}  // namespace ordkit
