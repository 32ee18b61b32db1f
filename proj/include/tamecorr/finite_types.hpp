#pragma once
// Cuspidal data over the residue field. A type parameter is a regular
// character of the unramified degree-n torus; its attached cuspidal character
// of GL_n(k_F) is pinned on regular elliptic classes by an explicit
// alternating trace. The census builds small GL_n(F_q) models outright,
// extracts their cuspidal characters from the exact table oracle, and
// certifies the parameter <-> cuspidal bijection value by value.

#include <memory>

#include "tamecorr/char_table.hpp"
#include "tamecorr/finite_field.hpp"
#include "tamecorr/tame_character.hpp"

namespace tamecorr {

struct CuspidalTypeParam {
  int n = 1;
  FieldSkeleton base;
  TameCharacter phi;  // over the unramified degree-n extension, regular
};

// validates that phi lives on the unramified degree-n torus over F and has
// trivial Galois stabilizer
CuspidalTypeParam make_cuspidal_param(int n, const FieldSkeleton& F, const TameCharacter& phi);

// same rank and base, Galois-conjugate characters
bool params_equivalent(const CuspidalTypeParam& a, const CuspidalTypeParam& b);

// (-1)^(n-1) phi(z) sum over Galois of phi^delta(zeta): the cuspidal
// character's value on the elliptic class of z*zeta. z is a base torus
// element; zeta must be a regular unit of the big torus (v = 0), anything
// else is rejected.
Cyclotomic green_trace(const CuspidalTypeParam& param, const TameTorusElem& z,
                       const TameTorusElem& zeta);

// Explicit GL_n over a small coefficient field. Matrices are n*n packed
// field codes in row-major order; element ids follow the lexicographic order
// of the full entry tuple, which makes every derived artifact reproducible.
struct GlModel {
  int n = 1;
  std::shared_ptr<const FiniteField> coeff;
  FiniteGroupModel group;
  std::vector<std::vector<long long>> mats;  // id -> entries
  std::vector<int> borel;                    // sorted ids of upper-triangular elements
  std::vector<int> code_to_id;               // packed entry tuple -> id, -1 if singular

  int id_of(const std::vector<long long>& mat) const;  // throws on singular input
};

// ranks 1..3; throws if the group order exceeds the bound
GlModel gl_model(int n, const std::shared_ptr<const FiniteField>& coeff,
                 long long bound = 2000);

struct CensusResult {
  int n = 1;
  long long q = 2;
  long long group_order = 1;
  std::vector<long long> cuspidal_degrees;  // sorted ascending
  int cuspidal_count = 0;
  int orbit_count = 0;  // regular character orbits of the degree-n torus
  // every cuspidal matches exactly one orbit on all regular elliptic
  // classes, distinct cuspidals match distinct orbits, and the counts agree
  bool traces_match = false;
};

// Identifies the cuspidal rows of the oracle table (expected degree plus
// vanishing inner products against every character induced from the
// upper-triangular subgroup), counts regular torus character orbits, and
// checks the oracle values on regular elliptic classes against green_trace.
CensusResult cuspidal_census(int n, long long q, long long bound = 2000);

}  // namespace tamecorr
