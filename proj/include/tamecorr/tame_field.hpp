#pragma once
// Finite models of tame local-field extensions.
//
// Everything is taken modulo 1-units, so the multiplicative group of a field
// E with residue cardinality q_E collapses to the torus Z x Z/(q_E - 1):
// (v, a) stands for pi_E^v zeta_E^a. An extension spec pins one distinguished
// prime by the relation pi_E^e = zeta_E^u pi_F. Compatible root-of-unity
// generators in towers: zeta_L = zeta_E^{(q_E-1)/(q_L-1)}.

#include <string>
#include <vector>

#include "tamecorr/common.hpp"
#include "tamecorr/group_model.hpp"

namespace tamecorr {

struct FieldSkeleton {
  long long p = 2;
  long long f0 = 1;
  long long q = 2;  // p^f0
  static FieldSkeleton make(long long p, long long f0);
  friend bool operator==(const FieldSkeleton& a, const FieldSkeleton& b) {
    return a.p == b.p && a.f0 == b.f0;
  }
};

struct TameExtensionSpec {
  FieldSkeleton base;
  long long e = 1, f = 1, u = 0;  // pi_E^e = zeta_E^u pi_F
  long long qE = 2;               // q^f

  long long torus_mod() const { return qE - 1; }
  long long degree() const { return e * f; }
  std::string str() const;
  static TameExtensionSpec parse(const std::string& line);
  friend bool operator==(const TameExtensionSpec& a, const TameExtensionSpec& b) {
    return a.base == b.base && a.e == b.e && a.f == b.f && a.u == b.u;
  }
};

TameExtensionSpec make_extension(const FieldSkeleton& base, long long e, long long f,
                                 long long u);
TameExtensionSpec trivial_extension(const FieldSkeleton& base);

struct TameTorusElem {
  long long v = 0;
  long long a = 0;
  friend bool operator==(const TameTorusElem& x, const TameTorusElem& y) {
    return x.v == y.v && x.a == y.a;
  }
};

inline TameTorusElem torus_mul(const TameExtensionSpec& E, const TameTorusElem& x,
                               const TameTorusElem& y) {
  return {x.v + y.v, mod_ll(x.a + y.a, E.torus_mod())};
}
TameTorusElem torus_pow(const TameExtensionSpec& E, const TameTorusElem& x, long long k);
// the class of pi_F in E's torus: pi_F = pi_E^e zeta_E^{-u}
inline TameTorusElem base_prime_in(const TameExtensionSpec& E) {
  return {E.e, mod_ll(-E.u, E.torus_mod())};
}
// the class of zeta_F in E's torus
inline TameTorusElem base_zeta_in(const TameExtensionSpec& E) {
  long long M = E.torus_mod();
  return {0, mod_ll(M / (E.base.q - 1), M)};
}

struct TorusMorphism {
  TameExtensionSpec source, target;
  TameTorusElem pi_image;  // image of pi_source, in target coordinates
  long long zeta_mult = 1;  // zeta_source -> zeta_target^{zeta_mult}

  TameTorusElem apply(const TameTorusElem& x) const;
  TorusMorphism then(const TorusMorphism& next) const;  // apply this, then next
  static TorusMorphism identity(const TameExtensionSpec& E);
  friend bool operator==(const TorusMorphism& a, const TorusMorphism& b);
};

TorusMorphism make_torus_morphism(const TameExtensionSpec& source,
                                  const TameExtensionSpec& target,
                                  const TameTorusElem& pi_image, long long zeta_mult);

// Aut(E|F): candidates zeta -> zeta^{q^i}, pi -> zeta^j pi, filtered by
// compatibility with pi^e = zeta^u pi_F. Closed under composition.
std::vector<TorusMorphism> aut_group(const TameExtensionSpec& E);
// inverse of an automorphism (source == target, prime valuation preserved)
TorusMorphism aut_inverse(const TorusMorphism& s);

// Sub-extension with ramification eL, residue degree fL: picks the canonical
// prime pi_L = pi_E^{e/eL} zeta_E^t with smallest t >= 0 making the Krasner
// parameter integral. `inclusion` embeds L's torus in E's.
struct SubExtension {
  TameExtensionSpec field;
  TorusMorphism inclusion;
  long long t = 0;
};
SubExtension sub_extension(const TameExtensionSpec& E, long long eL, long long fL);
std::vector<std::pair<long long, long long>> sub_extension_params(const TameExtensionSpec& E);

// Arithmetic norm N_{E/L} into the sub-extension's torus; norm_map_to_base is
// N_{E/F}. Unramified steps: N(zeta) = zeta^{1+q+...+q^{f-1}} (= zeta_L in
// target coordinates), N(pi_L) = pi_L^f. Totally tame steps: N(zeta) = zeta^e,
// N(pi_E) = (-1)^{e+1} zeta^u pi_L.
TorusMorphism norm_map(const TameExtensionSpec& E, const SubExtension& L);
TorusMorphism norm_map_to_base(const TameExtensionSpec& E);

// Subgroups of the torus Z x Z/M in Hermite form {(x*d, x*b + y*g)}: d >= 0,
// g | M, 0 <= b < g (b = 0 when d = 0).
struct TorusSubgroup {
  long long M = 1, d = 0, b = 0, g = 1;
  friend bool operator==(const TorusSubgroup& s, const TorusSubgroup& t) {
    return s.M == t.M && s.d == t.d && s.b == t.b && s.g == t.g;
  }
};
TorusSubgroup torus_subgroup(long long M, const std::vector<TameTorusElem>& gens);
bool subgroup_contains(const TorusSubgroup& S, const TameTorusElem& x);
TorusSubgroup subgroup_intersect(const TorusSubgroup& S, const TorusSubgroup& T);

// For every intermediate L: the embedded copy of C_L = <pi_L, mu_L> in E's
// torus, with the certificate that it equals C_E intersected with the embedded
// L-torus and is compatible with the base prime.
struct ComplementaryCertificate {
  SubExtension sub;
  TorusSubgroup embedded;   // <incl(pi_L), incl(zeta_L)>
  bool intersection_ok = false;  // C_E cap L = C_L
  bool base_prime_ok = false;    // incl(pi_L)^{eL} zeta^{-uL} = pi_F's class
};
std::vector<ComplementaryCertificate> complementary_data(const TameExtensionSpec& E);

// Metacyclic quotient of the tame Weil group: <s, t | s^N = 1, t s t^{-1} = s^q,
// t^R = 1>, elements (a mod N, b mod R) indexed a + N*b, law
// (a1,b1)(a2,b2) = (a1 + q^{b1} a2, b1 + b2). R = 0 picks the minimal
// exponent ord_N(q).
FiniteGroupModel tame_weil_model(const FieldSkeleton& F, long long N, long long R = 0);

// Weil model adapted to E/F: N = lcm(e, q-1), R the smallest multiple of
// lcm(ord_N(q), f) admitting a prime of E of the form zeta_T^y pi_T^{N/e},
// plus the subgroup of elements fixing E.
struct WeilModelData {
  FieldSkeleton F;
  long long N = 1, R = 1;
  BigInt y = 0;  // pi_E = zeta_T^y pi_T^{N/e}
  FiniteGroupModel W;
  std::vector<int> stab_E;  // sorted subgroup fixing E

  int elem(long long a, long long b) const;
  long long coord_a(int g) const { return g % N; }
  long long coord_b(int g) const { return g / N; }
};
WeilModelData weil_model_for(const TameExtensionSpec& E);

// sign of g acting by left multiplication on the left cosets of H (sorted)
int coset_permutation_sign(const FiniteGroupModel& G, const std::vector<int>& H, int g);
// same, but for cosets of K inside the subgroup `ambient` (g must normalize
// nothing in particular, only map ambient-cosets to ambient-cosets)
int coset_permutation_sign_within(const FiniteGroupModel& G, const std::vector<int>& ambient,
                                  const std::vector<int>& K, int g);

// Discriminant character of E/F on the base torus: the determinant of the
// coset permutation representation in the Weil model, pushed to F^x by
// sending the identity-coset Frobenius t to pi_F and s^{N/(q-1)} to the
// distinguished residue generator. Order <= 2 on units.
struct DiscriminantCharacter {
  long long q = 2;        // base residue cardinality
  long long unit_exp = 0; // 0 or (q-1)/2, exponent against zeta_{q-1}
  int prime_sign = 1;     // value at pi_F
  int eval_sign(const TameTorusElem& x) const;  // on the base torus, values +-1
  bool is_unramified() const { return unit_exp == 0; }
};
DiscriminantCharacter discriminant_character(const TameExtensionSpec& E);

}  // namespace tamecorr
