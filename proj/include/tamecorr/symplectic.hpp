#pragma once
// Symplectic F_p-modules for a finite abelian operator group C of order prime
// to p: classification into tagged irreducible summands, concrete matrix
// models, fixed-point functor, and the sign invariants t0, t1, t.
//
// Modules are kept in canonical form: every summand is (orbit-representative
// character, form tag), a hyperbolic plane over a character whose inverse is
// a Frobenius twist of itself is rewritten as two anisotropic summands, and
// the summand list is sorted. Two modules are isometric iff their canonical
// forms are equal; decompose/synthesize move between this form and explicit
// matrices.

#include <optional>
#include <string>
#include <vector>

#include "tamecorr/root_of_unity.hpp"

namespace tamecorr {

// Character of C = prod Z/n_i, stored by its values at the factor generators.
struct BarCharacter {
  std::vector<long long> factor_orders;
  std::vector<RootOfUnity> vals;  // vals[i] has order dividing factor_orders[i]

  long long order() const;  // lcm of the value orders
  RootOfUnity value_at(const std::vector<long long>& x) const;
  bool is_trivial() const { return order() == 1; }
  BarCharacter power(long long k) const;  // pointwise k-th power
  BarCharacter frobenius(long long p) const { return power(p); }
  BarCharacter inverse() const { return power(-1); }
  // degree over F_p of the field generated by the values: ord of p mod order()
  long long degree(long long p) const;
  // e_i with vals[i] = zeta_N^{e_i}, N = order()
  std::vector<long long> exponents() const;

  friend bool operator==(const BarCharacter& a, const BarCharacter& b) {
    return a.factor_orders == b.factor_orders && a.vals == b.vals;
  }
  friend bool operator!=(const BarCharacter& a, const BarCharacter& b) { return !(a == b); }
};

// chi(g_i) = zeta_N^{exps[i]}; each value's order must divide factor_orders[i]
BarCharacter bar_character(const std::vector<long long>& factor_orders, long long N,
                           const std::vector<long long>& exps);
BarCharacter trivial_bar_character(const std::vector<long long>& factor_orders);

// chi^{-1} = chi^{p^j} != chi for some j: exactly the characters whose
// irreducible module carries an invariant nondegenerate alternating form
bool anisotropic_capable(const BarCharacter& chi, long long p);

// lex-least exponent vector over the Frobenius orbit of chi, optionally
// folding in the orbit of chi^{-1}
BarCharacter orbit_representative(const BarCharacter& chi, long long p, bool up_to_inverse);

enum class FormType { hyperbolic, anisotropic };

struct Summand {
  BarCharacter chi;
  FormType type = FormType::hyperbolic;
};

long long summand_dim(const Summand& s, long long p);
// (dim, type, order, exponents): the order used for printed summand lists
bool summand_less(const Summand& a, const Summand& b, long long p);

// Canonical-form symplectic module with optional marked data: a distinguished
// subgroup mu of C and up to two marked elements used by the sign-identity
// check.
struct SymplecticModule {
  long long p = 0;
  std::vector<long long> factor_orders;
  std::vector<std::vector<long long>> mu_gens;
  std::optional<std::vector<long long>> pi;
  std::optional<std::vector<long long>> pi_alpha;
  std::vector<Summand> summands;

  long long dim() const;
  // "p3.C4x6.mu(2,0)(0,3).pi(1,2).pia(1,5).Sh:N4:2,0+a:N6:1,1"; zero module ".S0"
  std::string str() const;
  static SymplecticModule parse(const std::string& literal);

  friend bool operator==(const SymplecticModule& a, const SymplecticModule& b);
  friend bool operator!=(const SymplecticModule& a, const SymplecticModule& b) {
    return !(a == b);
  }
};

// Validates and canonicalizes: orbit representatives, hyperbolic-over-capable
// rewritten as two anisotropic summands, sorted summands, normalized markings.
SymplecticModule make_module(long long p, const std::vector<long long>& factor_orders,
                             const std::vector<Summand>& summands,
                             const std::vector<std::vector<long long>>& mu_gens = {},
                             const std::optional<std::vector<long long>>& pi = std::nullopt,
                             const std::optional<std::vector<long long>>& pi_alpha = std::nullopt);

SymplecticModule zero_module(long long p, const std::vector<long long>& factor_orders);
// H(V_chi); two anisotropic summands when chi is anisotropic-capable
SymplecticModule hyperbolic_module(long long p, const std::vector<long long>& factor_orders,
                                   const BarCharacter& chi);
// the irreducible module V_chi with its invariant form; chi must be capable
SymplecticModule anisotropic_module(long long p, const std::vector<long long>& factor_orders,
                                    const BarCharacter& chi);
// same p, factor orders and markings required
SymplecticModule direct_sum(const SymplecticModule& a, const SymplecticModule& b);
// H of the underlying linear module of M (form forgotten)
SymplecticModule hyperbolic_of(const SymplecticModule& M);

// summands on which every generator of D acts trivially; markings preserved
SymplecticModule fixed_points(const SymplecticModule& M,
                              const std::vector<std::vector<long long>>& d_gens);

// M as a module over C' = <gens>, presented on the product of the <g_j>;
// markings dropped
SymplecticModule restrict_module(const SymplecticModule& M,
                                 const std::vector<std::vector<long long>>& gens);

// --- concrete matrix models -------------------------------------------------

struct ConcreteSymplecticSpace {
  long long p = 0;
  long long dim = 0;
  std::vector<long long> factor_orders;
  std::vector<std::vector<long long>> gram;                 // dim x dim, alternating
  std::vector<std::vector<std::vector<long long>>> action;  // one matrix per factor

  std::string str() const;
  static ConcreteSymplecticSpace parse(const std::string& text);
};

// throws invalid_argument: "degenerate form", "action not form-preserving",
// non-commuting or wrong-order action, p not prime, order divisible by p
void validate_space(const ConcreteSymplecticSpace& S);

// canonical matrix model of the canonical form; validated before returning
ConcreteSymplecticSpace synthesize(const SymplecticModule& M);
// explicit H(V_chi) block regardless of capability (not canonical form)
ConcreteSymplecticSpace hyperbolic_space(long long p, const std::vector<long long>& factor_orders,
                                         const BarCharacter& chi);
// the canonical anisotropic model on V_chi; chi must be capable
ConcreteSymplecticSpace anisotropic_space(long long p, const std::vector<long long>& factor_orders,
                                          const BarCharacter& chi);
ConcreteSymplecticSpace space_direct_sum(const ConcreteSymplecticSpace& a,
                                         const ConcreteSymplecticSpace& b);
ConcreteSymplecticSpace negate_form(const ConcreteSymplecticSpace& S);

// classification of a concrete space; p must be in {2,3,5,7} and
// dim <= dim_bound
SymplecticModule decompose(const ConcreteSymplecticSpace& S, long long dim_bound = 8);

// matrix U with U^T G2 U = G1 and U A1_i = A2_i U, or nullopt when the spaces
// are not isometric; found via canonical forms, then verified exactly
std::optional<std::vector<std::vector<long long>>> find_isometry(
    const ConcreteSymplecticSpace& S1, const ConcreteSymplecticSpace& S2);

// exhaustive searches used by the structure checks (submodule = invariant
// subspace); both enumerate submodules built from cyclic closures
bool has_invariant_lagrangian(const ConcreteSymplecticSpace& S);
bool has_proper_nondegenerate_submodule(const ConcreteSymplecticSpace& S);

// --- sign invariants ---------------------------------------------------------

// per-irreducible-summand sign data, keyed by (p, form type, degree d, order N)
struct SignTableEntry {
  int t0 = +1;
  bool t1_nontrivial = false;
};
SignTableEntry sign_table_entry(long long p, FormType type, long long d, long long N);

struct TInvariants {
  int t0 = +1;
  std::vector<int> t1_gen_values;  // t1 at each supplied generator
  bool t1_trivial = true;
  int t = 0;  // t0 * t1(generator of the image) when the image is cyclic, else 0
};

// invariants of M as a module over C' = <gens>; gens given as exponent tuples
TInvariants t_invariants(const SymplecticModule& M,
                         const std::vector<std::vector<long long>>& cprime_gens);
// t1 of M over <gens> evaluated at x; x must lie in <gens>
int t1_value_at(const SymplecticModule& M, const std::vector<std::vector<long long>>& cprime_gens,
                const std::vector<long long>& x);
int t0_of(const SymplecticModule& M, const std::vector<std::vector<long long>>& cprime_gens);
// t over the cyclic group generated by one element
int t_of(const SymplecticModule& M, const std::vector<long long>& c);

// the marked-module identity: with r = pi_alpha - pi (must lie in <mu>),
//   t_<pi_alpha>(M) * t0_mu(fix_<pi_alpha>(M)) * t1_mu(M)(r)
//     == t_<pi>(M) * t0_mu(fix_<pi>(M))
bool signs_lemma_check(const SymplecticModule& M);

// --- subgroup helpers --------------------------------------------------------

long long element_order_in(const std::vector<long long>& orders, const std::vector<long long>& x);
// all elements of <gens> inside prod Z/n_i, sorted; throws past a size cap
std::vector<std::vector<long long>> subgroup_elements(
    const std::vector<long long>& orders, const std::vector<std::vector<long long>>& gens);
bool subgroup_contains(const std::vector<long long>& orders,
                       const std::vector<std::vector<long long>>& gens,
                       const std::vector<long long>& x);

}  // namespace tamecorr
