#pragma once
// Exact character tables of small finite groups.
//
// The table is computed modulo a prime l = 1 (mod exponent(G)) with l > |G|:
// common eigenvectors of the class-sum matrices give the central characters,
// degrees lift uniquely because d^2 <= |G| < l, and each value lifts through
// eigenvalue multiplicities of rho(g), which are plain integers below l. The
// result is fully exact (Cyclotomic values), verified by row orthogonality
// and the degree-square sum before it is returned.
//
// Rows are sorted by (degree, lexicographic value strings), columns follow
// the group model's class order, so tables are bit-identical across runs.

#include <string>
#include <vector>

#include "tamecorr/cyclotomic.hpp"
#include "tamecorr/group_model.hpp"

namespace tamecorr {

struct CharacterTable {
  std::string group_name;
  long long order = 1;
  int k = 1;  // number of classes = number of irreducibles
  std::vector<long long> degrees;
  std::vector<std::vector<Cyclotomic>> rows;  // rows[i][j]: value on class j

  // header line, then one line per irreducible: degree, conductor,
  // coefficient lists (one bracket group per class, embedded at the row's
  // common conductor)
  std::string serialize() const;
  static CharacterTable deserialize(const std::string& text);
};

CharacterTable dixon_character_table(const FiniteGroupModel& G, long long bound = 2000);

// exact consistency: shape matches G, identity column = degrees,
// sum of degree squares = |G|, exact row orthogonality
bool verify_character_table(const FiniteGroupModel& G, const CharacterTable& T);

// load from path when present and valid for G; otherwise compute, rewrite the
// file (single writer: temp file + rename), and return the fresh table
CharacterTable character_table_cached(const FiniteGroupModel& G, const std::string& path,
                                      long long bound = 2000);

// "<name>.txt" with non-alphanumerics flattened to '_'
std::string table_cache_filename(const std::string& group_name);

}  // namespace tamecorr
