#pragma once
// Exact root of unity zeta_ord^exp in lowest terms: ord >= 1, 0 <= exp < ord,
// gcd reduced so equal values have equal representation.

#include <stdexcept>
#include <string>

#include "tamecorr/common.hpp"
#include "tamecorr/cyclotomic.hpp"

namespace tamecorr {

struct RootOfUnity {
  long long ord = 1;
  long long exp = 0;

  RootOfUnity() = default;
  RootOfUnity(long long order, long long exponent) {
    if (order <= 0) throw std::invalid_argument("RootOfUnity: order <= 0");
    exponent = mod_ll(exponent, order);
    long long g = gcd_ll(order, exponent == 0 ? order : exponent);
    ord = order / g;
    exp = exponent / g;
  }

  static RootOfUnity one() { return RootOfUnity(); }
  static RootOfUnity minus_one() { return RootOfUnity(2, 1); }

  bool is_one() const { return ord == 1; }
  long long order() const { return ord; }

  friend RootOfUnity operator*(const RootOfUnity& a, const RootOfUnity& b) {
    long long m = lcm_ll(a.ord, b.ord);
    return RootOfUnity(m, mod_ll(a.exp * (m / a.ord) + b.exp * (m / b.ord), m));
  }
  RootOfUnity pow(long long k) const {
    return RootOfUnity(ord, mod_ll(mod_ll(k, ord) * exp, ord));
  }
  RootOfUnity inverse() const { return RootOfUnity(ord, ord - exp); }
  friend bool operator==(const RootOfUnity& a, const RootOfUnity& b) {
    return a.ord == b.ord && a.exp == b.exp;
  }
  friend bool operator!=(const RootOfUnity& a, const RootOfUnity& b) { return !(a == b); }
  bool operator<(const RootOfUnity& o) const {
    return ord != o.ord ? ord < o.ord : exp < o.exp;
  }

  int as_sign() const {
    if (ord == 1) return 1;
    if (ord == 2) return -1;
    throw std::logic_error("as_sign: order > 2");
  }
  static RootOfUnity from_sign(int s) {
    if (s == 1) return one();
    if (s == -1) return minus_one();
    throw std::invalid_argument("from_sign: not +-1");
  }

  Cyclotomic to_cyclotomic() const { return Cyclotomic::root_of_unity(ord, exp); }
  std::string str() const {
    if (ord == 1) return "1";
    if (ord == 2) return "-1";
    return "zeta" + std::to_string(ord) + "^" + std::to_string(exp);
  }
};

}  // namespace tamecorr
