#pragma once
// Coprime operator groups acting on small finite groups, and the fixed-point
// character correspondence with its sign.
//
// An abelian group A acts on a group model G by automorphisms, with
// gcd(|A|, |G|) = 1. For cyclic A, every A-fixed irreducible character rho of
// G extends to A x| G in |A| ways; exactly one extension has trivial
// determinant on A. Evaluating that extension on the coset a.G^A picks out a
// unique irreducible character of the fixed-point subgroup G^A and a sign
// eps = +-1, exactly:   eps * (corresponding character)(h) = ext(a h)   for
// all h in G^A. The map rho -> corresponding character is a bijection from
// A-fixed irreducibles of G onto irreducibles of G^A; the implementation
// verifies bijectivity and match uniqueness and throws otherwise. For
// non-cyclic abelian A the correspondence is the composite over the cyclic
// factors in listed order, with the signs multiplying along the chain.
//
// All character values are exact cyclotomics; there are no tolerances.

#include <string>
#include <vector>

#include "tamecorr/char_table.hpp"
#include "tamecorr/group_model.hpp"
#include "tamecorr/symplectic.hpp"

namespace tamecorr {

// abelian operator group given by cyclic factors; generator images are
// permutations of the target's element indices
struct OperatorAction {
  std::vector<long long> factor_orders;
  FiniteGroupModel target;
  std::vector<std::vector<int>> gen_perms;  // one permutation per factor
};

// validates shape, that each generator permutation is an automorphism whose
// order divides its factor order and is coprime to |G|, and that the
// generators commute.
// errors (invalid_argument): "generator count mismatch", "not a permutation",
// "action not by automorphisms", "generator order does not divide factor
// order", "operator order not coprime", "generators do not commute"
OperatorAction make_operator_action(std::vector<long long> factor_orders, FiniteGroupModel target,
                                    std::vector<std::vector<int>> gen_perms);

// image of x under the word with the given generator exponents
int act(const OperatorAction& A, const std::vector<long long>& exps, int x);

// sorted indices of elements fixed by every generator
std::vector<int> fixed_point_set(const OperatorAction& A);

// A x| G with elements (a, g) indexed as a_index * |G| + g; the copy of A
// conjugates the copy of G by the given action. Throws "operator bound
// exceeded" past the bound.
FiniteGroupModel semidirect_product(const OperatorAction& A, long long bound = 3000);

// embedding indices into semidirect_product(A): the A-part generator tuple
// exps paired with g
int semidirect_index(const OperatorAction& A, const std::vector<long long>& exps, int g);

struct GlaubermanRecord {
  int rho;      // row of table_g: an A-fixed irreducible of G
  int rho_ext;  // row of table_prod: its unique extension with det trivial on A
  int rho_a;    // row of table_fixed: the corresponding irreducible of G^A
  int eps;      // +1 or -1
};

struct GlaubermanResult {
  FiniteGroupModel prod;             // A x| G (cyclic A only)
  FiniteGroupModel fixed;            // G^A as its own model
  std::vector<int> fixed_to_parent;  // element map G^A -> G
  CharacterTable table_g, table_fixed, table_prod;
  std::vector<GlaubermanRecord> records;  // one per A-fixed row of table_g
};

// the correspondence for cyclic A (exactly one factor). Verifies internally
// that the coset match is unique per character and that the produced map is a
// bijection onto Irr(G^A); a failure of either is a logic_error. cache_dir,
// when non-empty, caches the three character tables.
GlaubermanResult glauberman_map(const OperatorAction& A, long long bound = 3000,
                                const std::string& cache_dir = "");

// composite correspondence over the cyclic factors in listed order: the pair
// maps A-fixed rows of Irr(G) to rows of Irr(G^A) with the accumulated sign
struct ChainResult {
  FiniteGroupModel fixed;
  std::vector<int> fixed_to_parent;
  CharacterTable table_g, table_fixed;
  std::vector<std::pair<int, int>> pairs;  // (row of table_g, row of table_fixed)
  std::vector<int> eps;                    // per pair, product over the chain
};
ChainResult glauberman_chain(const OperatorAction& A, long long bound = 3000,
                             const std::string& cache_dir = "");

// chain independence through the subgroup B = prod <c_i^{k_i}>, given by one
// divisor k_i of each factor order: compares the direct chain on A against
// B first, then A/B = prod C_{k_i} on the B-fixed subgroup.
// errors: "subgroup spec invalid" when some k_i does not divide its order
bool transitivity_check(const OperatorAction& A, const std::vector<long long>& k,
                        long long bound = 3000, const std::string& cache_dir = "");

// product of cyclic groups as an explicit model, elements in mixed-radix
// order of the exponent tuples
FiniteGroupModel abelian_group_model(const std::vector<long long>& orders);

// the operator realization of a symplectic module: the group of order
// p^(1+dim) and exponent p built on the space (p odd), center of order p,
// with the space's operator group acting through the given matrices and
// fixing the center pointwise. Element (v, z) has index vcode * p + z.
// At p = 2 the group is the central product fixed by the upper-triangular
// splitting of the form; lifting the action needs the squaring form
// preserved, and the whole p = 2 route is experimental.
// errors: "degenerate form" via validation, "action does not lift at p=2"
struct HeisenbergRealization {
  FiniteGroupModel group;
  OperatorAction action;
  bool experimental = false;  // true exactly when p = 2
};
HeisenbergRealization heisenberg_group(const ConcreteSymplecticSpace& S);

// the common sign of the maximal-degree records of glauberman_map on
// heisenberg_group(S) with A the full operator group of S (which must act
// through a cyclic image); throws logic_error if the big records disagree
int heisenberg_sign(const ConcreteSymplecticSpace& S, long long bound = 3000,
                    const std::string& cache_dir = "");

}  // namespace tamecorr
