#pragma once
// Finite-order smooth characters of a tame torus, trivial on 1-units.
//
// A character is a unit part a (exponent against the distinguished residue
// generator, mod q_E - 1) plus a prime value (root of unity): its value at
// the torus element (v, b) is primeValue^v * zeta_{q_E-1}^{a b}. Galois acts
// on the right by precomposition with the inverse automorphism.

#include <string>
#include <vector>

#include "tamecorr/cyclotomic.hpp"
#include "tamecorr/root_of_unity.hpp"
#include "tamecorr/tame_field.hpp"

namespace tamecorr {

struct TameCharacter {
  TameExtensionSpec field;
  long long a = 0;  // 0 <= a < q_E - 1
  RootOfUnity prime_value;

  RootOfUnity value_at(const TameTorusElem& x) const;
  bool is_trivial() const { return a == 0 && prime_value.is_one(); }
  long long order() const;
  std::string str() const;  // "char a=.. pv_ord=.. pv_exp=.."
  static TameCharacter parse(const std::string& line, const TameExtensionSpec& E);

  friend bool operator==(const TameCharacter& x, const TameCharacter& y) {
    return x.field == y.field && x.a == y.a && x.prime_value == y.prime_value;
  }
  friend bool operator!=(const TameCharacter& x, const TameCharacter& y) { return !(x == y); }
};

TameCharacter make_character(const TameExtensionSpec& E, long long a,
                             const RootOfUnity& prime_value);
TameCharacter trivial_character(const TameExtensionSpec& E);
// pointwise product / inverse (same field)
TameCharacter char_mul(const TameCharacter& x, const TameCharacter& y);
TameCharacter char_inverse(const TameCharacter& x);
// (a, prime value order, exponent) ordering used for all printed lists
bool char_less(const TameCharacter& x, const TameCharacter& y);

// field_of_x names the torus the caller believes x lives in; mismatch throws.
Cyclotomic evaluate(const TameCharacter& chi, const TameExtensionSpec& field_of_x,
                    const TameTorusElem& x);

// chi over m's target pulled back to a character of m's source: chi . m
TameCharacter pullback(const TameCharacter& chi, const TorusMorphism& m);

// chi over L composed with the norm N_{E/L}; L must be the canonical
// sub-extension of E with its parameters.
TameCharacter compose_with_norm(const TameCharacter& chi, const TameExtensionSpec& E);

// chi^delta = chi . delta^{-1}; right action for the diagrammatic product.
TameCharacter galois_act(const TameCharacter& chi, const TorusMorphism& delta);

// stabilizer of chi in Delta is trivial; Delta must be composition-closed
bool is_regular(const TameCharacter& chi, const std::vector<TorusMorphism>& Delta);

struct CharacterOrbit {
  std::vector<TorusMorphism> acting;
  std::vector<TameCharacter> members;  // sorted by char_less, distinct
};

// All Delta-regular characters with prime value of order dividing
// pv_order_divides, grouped into Delta-orbits. The enumeration domain must be
// action-closed (it always is when Delta fixes the prime, or when
// q_E - 1 divides the bound); otherwise this throws.
std::vector<CharacterOrbit> regular_orbits(const TameExtensionSpec& E,
                                           const std::vector<TorusMorphism>& Delta,
                                           long long pv_order_divides);

// unramified characters killed by m: cyclic of order exactly m
std::vector<TameCharacter> x0_subgroup(const TameExtensionSpec& E, long long m);

// automorphisms of Em restricting to the identity on the canonical copy of E
std::vector<TorusMorphism> relative_galois(const TameExtensionSpec& Em,
                                           const TameExtensionSpec& E);

// (Em/base, zeta) with Em/E unramified: zeta regular under Gal(Em/E).
// dim_one flags that the datum's generic fibre is a character (required).
bool admissible_pair_check(const TameExtensionSpec& Em, const TameExtensionSpec& E,
                           const TameCharacter& zeta, bool dim_one = true);

// the order <= 2 discriminant data as a character of the base torus
TameCharacter discriminant_as_character(const DiscriminantCharacter& d,
                                        const FieldSkeleton& F);

}  // namespace tamecorr
