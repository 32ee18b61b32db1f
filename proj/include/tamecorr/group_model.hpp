#pragma once
// Explicit finite groups: a dense multiplication table over element indices
// 0..n-1, plus derived structure (orders, conjugacy classes, exponent).
// Intended scale is a few thousand elements; indices fit uint16.
//
// Class ordering is canonical: the identity class first, the rest sorted by
// (element order of the class, class size, smallest member index). Together
// with deterministic element indexing from the builders, every derived
// artifact (character tables, cache files, reports) is reproducible bit for
// bit.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tamecorr/common.hpp"

namespace tamecorr {

struct FiniteGroupModel {
  std::string name;
  int n = 0;
  int id = 0;
  std::vector<uint16_t> mul;   // n*n row-major
  std::vector<uint16_t> inv;
  std::vector<int> elem_order;
  std::vector<int> class_of;
  std::vector<std::vector<int>> classes;  // members ascending
  long long exponent = 1;

  int mulE(int a, int b) const { return mul[(size_t)a * n + b]; }
  int invE(int a) const { return inv[(size_t)a]; }
  int powE(int a, long long k) const;
  int conj(int g, int x) const { return mulE(mulE(x, g), invE(x)); }  // x g x^{-1}
  bool is_abelian() const;
  int num_classes() const { return (int)classes.size(); }
  int class_rep(int c) const { return classes[(size_t)c][0]; }

  // law(a,b) must be a total group law on 0..n-1; associativity is checked
  // exhaustively up to 512 elements, on deterministic samples beyond that
  static FiniteGroupModel from_law(std::string name, int n,
                                   const std::function<int(int, int)>& law);

  std::vector<int> closure(std::vector<int> gens) const;  // sorted subgroup
  bool is_subgroup(const std::vector<int>& sorted_elems) const;
  bool is_normal(const std::vector<int>& sorted_elems) const;
  std::vector<int> center() const;

  // subgroup as its own model; second return maps sub indices to parent indices
  std::pair<FiniteGroupModel, std::vector<int>> subgroup_model(
      const std::vector<int>& sorted_elems, std::string name) const;

  // transfer homomorphism G^ab -> H^ab evaluated at g, for H of index t:
  // returns the product over cosets of the H-components, as an element of H
  // (well defined modulo [H,H]; callers evaluate abelian characters on it)
  int transfer(const std::vector<int>& sorted_subgroup, int g) const;
};

}  // namespace tamecorr
