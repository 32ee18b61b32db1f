#pragma once
// Exact arithmetic in cyclotomic rings Z[zeta_N] (and their fraction fields as
// needed via exact integer division). An element carries an explicit conductor
// N and phi(N) integer coordinates on the power basis zeta_N^i, 0 <= i < phi(N),
// reduced modulo the N-th cyclotomic polynomial. Elements of different
// conductors compare and combine through the embedding into Z[zeta_lcm].
//
// The representation on the power basis is unique, so equality is coefficient
// equality after embedding, and an element is a rational integer exactly when
// all coordinates above the constant one vanish.

#include <optional>
#include <utility>

#include "tamecorr/common.hpp"

namespace tamecorr {

class Cyclotomic {
 public:
  // zero at conductor 1
  Cyclotomic() : n_(1), c_(1, BigInt(0)) {}
  // rational integer at conductor 1
  explicit Cyclotomic(const BigInt& v) : n_(1), c_(1, v) {}
  explicit Cyclotomic(long long v) : n_(1), c_(1, BigInt(v)) {}

  // zeta_N^k
  static Cyclotomic root_of_unity(long long n, long long k);
  static Cyclotomic zero() { return Cyclotomic(); }
  static Cyclotomic one() { return Cyclotomic(BigInt(1)); }

  long long conductor() const { return n_; }
  const std::vector<BigInt>& coeffs() const { return c_; }

  bool is_zero() const;
  // true iff the element is a rational integer; writes it to *out if non-null
  bool is_integer(BigInt* out = nullptr) const;

  // image under zeta_N -> zeta_N^j, for gcd(j, N) = 1 (identity when N <= 2)
  Cyclotomic galois(long long j) const;
  // complex conjugation, = galois(N-1)
  Cyclotomic conj() const { return galois(n_ - 1 <= 0 ? 1 : n_ - 1); }

  // re-express at conductor m, which must be a multiple of the current one
  Cyclotomic embedded(long long m) const;

  Cyclotomic operator-() const;
  Cyclotomic& operator+=(const Cyclotomic& o);
  Cyclotomic& operator-=(const Cyclotomic& o);
  Cyclotomic& operator*=(const Cyclotomic& o);
  friend Cyclotomic operator+(Cyclotomic a, const Cyclotomic& b) { return a += b; }
  friend Cyclotomic operator-(Cyclotomic a, const Cyclotomic& b) { return a -= b; }
  friend Cyclotomic operator*(Cyclotomic a, const Cyclotomic& b) { return a *= b; }
  friend bool operator==(const Cyclotomic& a, const Cyclotomic& b);
  friend bool operator!=(const Cyclotomic& a, const Cyclotomic& b) { return !(a == b); }

  Cyclotomic pow(long long e) const;

  // exact division by a nonzero integer; throws if any coordinate is not divisible
  Cyclotomic divide_exact(const BigInt& d) const;

  // smallest-conductor root-of-unity recognition: if the element equals
  // zeta_M^k for some M (within the roots of unity of Q(zeta_N), so
  // M | lcm(2, N)), returns (M, k) with M minimal and 0 <= k < M, gcd(k,M)=1
  // unless the value is 1 (returns (1,0)) or -1 (returns (2,1)).
  std::optional<std::pair<long long, long long>> as_root_of_unity() const;

  // deterministic text form, e.g. "z8[0,1,0,1]" or plain integer "-2"
  std::string str() const;

  // drop to the smallest conductor among divisors of n_ that can carry the
  // value exactly (used to keep integers at conductor 1 and products small)
  Cyclotomic reduced() const;

 private:
  long long n_;               // conductor
  std::vector<BigInt> c_;     // phi(n_) coordinates on zeta^0..zeta^{phi-1}

  Cyclotomic(long long n, std::vector<BigInt> c) : n_(n), c_(std::move(c)) {}
  friend struct CycloTables;
};

// Cyclotomic polynomial Phi_n as monic integer polynomial, low-to-high coefficients.
std::vector<BigInt> cyclotomic_polynomial(long long n);

}  // namespace tamecorr
