#pragma once
// Concrete models of the fields F_{p^k}. Elements are packed integers
// 0 <= x < p^k encoding polynomials sum a_i t^i (a_i = base-p digit i) modulo a
// distinguished irreducible: the one whose coefficient tuple, read from the
// constant term as the least significant digit, packs to the smallest integer.
// The distinguished generator of the unit group is the smallest packed value
// of maximal order. Both choices are deterministic, so models agree across
// runs and processes.
//
// Discrete logarithms use full exp/log tables, built only when p^k is small
// enough; larger fields still support ring operations directly.

#include <memory>

#include "tamecorr/common.hpp"

namespace tamecorr {

class FiniteField {
 public:
  static std::shared_ptr<const FiniteField> get(int p, int k);

  int p;
  int k;
  long long q;                 // p^k
  std::vector<int> modulus;    // c_0..c_{k-1}: t^k = -(c_0 + c_1 t + ... )
  long long generator;         // packed, order q-1

  bool has_tables() const { return !exp_.empty(); }

  long long add(long long a, long long b) const;
  long long neg(long long a) const;
  long long sub(long long a, long long b) const { return add(a, neg(b)); }
  long long mul(long long a, long long b) const;
  long long inv(long long a) const;
  long long pow(long long a, long long e) const;
  long long frobenius(long long a) const { return pow(a, p); }

  // dlog(x) in [0, q-1) with generator^dlog(x) = x; defined on all nonzero x
  long long dlog(long long a) const;
  long long exp(long long e) const;  // generator^e, e arbitrary (reduced mod q-1)
  long long element_order(long long a) const;

  // absolute trace to F_p, returned in [0, p)
  int abs_trace(long long a) const;

  // monic minimal polynomial of a over F_p, low-to-high, in {0..p-1}
  std::vector<int> minpoly_over_prime(long long a) const;

  // field embedding of the model F_{p^j} (j | k) into this model, as a table
  // indexed by packed elements of the small model; the image of the small
  // model's distinguished generator is the smallest-packed root of its minimal
  // polynomial in this model, which pins the embedding uniquely among the j
  // conjugate choices.
  std::vector<long long> embedding_from(const FiniteField& small) const;

 private:
  std::vector<long long> exp_;  // size q-1 when built
  std::vector<long long> log_;  // size q when built

  FiniteField() = default;
  long long mul_direct(long long a, long long b) const;
};

}  // namespace tamecorr
