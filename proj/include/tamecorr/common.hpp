#pragma once
// Shared integer utilities. All arithmetic that can overflow 64 bits goes
// through boost::multiprecision; everything else stays machine-width.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace tamecorr {

using BigInt = boost::multiprecision::cpp_int;

inline long long gcd_ll(long long a, long long b) { return std::gcd(a, b); }
inline long long lcm_ll(long long a, long long b) { return std::lcm(a, b); }

// a mod m normalized to [0, m)
inline long long mod_ll(long long a, long long m) {
  long long r = a % m;
  return r < 0 ? r + m : r;
}

inline long long mulmod_ll(long long a, long long b, long long m) {
  return (long long)((__int128)a * b % m);
}

inline long long powmod_ll(long long b, long long e, long long m) {
  if (m == 1) return 0;
  long long r = 1;
  b = mod_ll(b, m);
  for (; e > 0; e >>= 1) {
    if (e & 1) r = mulmod_ll(r, b, m);
    b = mulmod_ll(b, b, m);
  }
  return r;
}

// extended gcd: returns g, sets x,y with a*x + b*y = g
inline long long egcd_ll(long long a, long long b, long long& x, long long& y) {
  if (b == 0) { x = 1; y = 0; return a; }
  long long x1, y1;
  long long g = egcd_ll(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

inline long long invmod_ll(long long a, long long m) {
  long long x, y;
  long long g = egcd_ll(mod_ll(a, m), m, x, y);
  if (g != 1) throw std::invalid_argument("invmod: not coprime");
  return mod_ll(x, m);
}

// multiplicative order of a mod m; requires gcd(a,m)=1
inline long long mult_order_ll(long long a, long long m) {
  if (m == 1) return 1;
  if (gcd_ll(mod_ll(a, m), m) != 1) throw std::invalid_argument("mult_order: not a unit");
  long long v = mod_ll(a, m), o = 1;
  while (v != 1) { v = mulmod_ll(v, a, m); ++o; }
  return o;
}

inline long long pow_ll(long long b, int e) {
  long long r = 1;
  while (e-- > 0) r *= b;
  return r;
}

inline BigInt pow_big(long long b, long long e) {
  BigInt r = 1, x = b;
  for (; e > 0; e >>= 1) {
    if (e & 1) r *= x;
    x *= x;
  }
  return r;
}

// Euler phi for small n
inline long long euler_phi(long long n) {
  long long r = n;
  for (long long p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      r -= r / p;
    }
  if (n > 1) r -= r / n;
  return r;
}

inline std::vector<long long> divisors_of(long long n) {
  std::vector<long long> lo, hi;
  for (long long d = 1; d * d <= n; ++d)
    if (n % d == 0) {
      lo.push_back(d);
      if (d != n / d) hi.push_back(n / d);
    }
  for (auto it = hi.rbegin(); it != hi.rend(); ++it) lo.push_back(*it);
  return lo;
}

inline bool is_prime_ll(long long n) {
  if (n < 2) return false;
  for (long long p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

// Moebius function for small n
inline int moebius(long long n) {
  int r = 1;
  for (long long p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      r = -r;
    }
  if (n > 1) r = -r;
  return r;
}

}  // namespace tamecorr
