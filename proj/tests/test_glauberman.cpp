#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cstdlib>
#include <vector>

#include "doctest.h"
#include "tamecorr/glauberman.hpp"
#include "tamecorr/symplectic.hpp"

using namespace tamecorr;

namespace {

using Perm = std::vector<int>;

// permutation of Z/n sending x to a*x + 0 (multiplication action)
Perm mult_perm(int n, int a) {
  Perm p(n);
  for (int i = 0; i < n; ++i) p[i] = (int)(((long long)a * i) % n);
  return p;
}

FiniteGroupModel cyclic(int n) { return abelian_group_model({n}); }

// 2x2 integer matrices mod p acting on C_p x C_p
Perm plane_perm(int p, int a, int b, int c, int d) {
  Perm perm(p * p);
  for (int x = 0; x < p; ++x)
    for (int y = 0; y < p; ++y) {
      int nx = (a * x + b * y) % p, ny = (c * x + d * y) % p;
      perm[x + p * y] = nx + p * ny;
    }
  return perm;
}

ConcreteSymplecticSpace std_plane_c4() {
  // order-4 rotation on the standard symplectic plane over F_3
  ConcreteSymplecticSpace S;
  S.p = 3;
  S.dim = 2;
  S.factor_orders = {4};
  S.gram = {{0, 1}, {2, 0}};
  S.action = {{{0, 1}, {2, 0}}};
  return S;
}

BarCharacter full_chi(long long N) {
  return N == 1 ? trivial_bar_character({1}) : bar_character({N}, N, {1});
}

int order_count(const FiniteGroupModel& G, long long k) {
  int c = 0;
  for (int g = 0; g < G.n; ++g)
    if (G.elem_order[g] == k) ++c;
  return c;
}

}  // namespace

TEST_CASE("operator actions validate their input") {
  FiniteGroupModel c3 = cyclic(3);

  // inversion on C_3 has order 2
  OperatorAction inv = make_operator_action({2}, c3, {mult_perm(3, 2)});
  CHECK(inv.factor_orders == std::vector<long long>{2});

  // wrong generator count
  CHECK_THROWS_WITH_AS((void)make_operator_action({2, 2}, cyclic(3), {mult_perm(3, 2)}),
                       "generator count mismatch", std::invalid_argument);
  // not a permutation
  CHECK_THROWS_WITH_AS((void)make_operator_action({2}, cyclic(3), {{0, 0, 1}}),
                       "not a permutation", std::invalid_argument);
  // permutation that is no automorphism: swap 0 and 1 in C_3
  CHECK_THROWS_WITH_AS((void)make_operator_action({2}, cyclic(3), {{1, 0, 2}}),
                       "action not by automorphisms", std::invalid_argument);
  // inversion has order 2, not 3
  CHECK_THROWS_WITH_AS((void)make_operator_action({3}, cyclic(3), {mult_perm(3, 2)}),
                       "generator order does not divide factor order", std::invalid_argument);
  // |A| = 3 shares a factor with |C_3|
  CHECK_THROWS_WITH_AS((void)make_operator_action({3}, cyclic(3), {mult_perm(3, 1)}),
                       "operator order not coprime", std::invalid_argument);
  // diag(1,2) and the swap matrix do not commute on C_7 x C_7
  CHECK_THROWS_WITH_AS((void)make_operator_action({3, 2}, abelian_group_model({7, 7}),
                                                  {plane_perm(7, 1, 0, 0, 2),
                                                   plane_perm(7, 0, 1, 1, 0)}),
                       "generators do not commute", std::invalid_argument);
}

TEST_CASE("semidirect products realize the expected groups") {
  // C_2 inverting C_3 gives the symmetric group on three letters
  OperatorAction inv = make_operator_action({2}, cyclic(3), {mult_perm(3, 2)});
  FiniteGroupModel s3 = semidirect_product(inv);
  CHECK(s3.n == 6);
  CHECK_FALSE(s3.is_abelian());
  CHECK(s3.exponent == 6);
  CHECK(order_count(s3, 2) == 3);

  // trivial action gives the direct product
  OperatorAction triv = make_operator_action({2}, cyclic(3), {mult_perm(3, 1)});
  FiniteGroupModel c6 = semidirect_product(triv);
  CHECK(c6.n == 6);
  CHECK(c6.is_abelian());

  // order-4 rotation acting on the exponent-3 Heisenberg group
  HeisenbergRealization h = heisenberg_group(std_plane_c4());
  CHECK(h.group.n == 27);
  CHECK(h.group.exponent == 3);
  CHECK_FALSE(h.experimental);
  FiniteGroupModel big = semidirect_product(h.action);
  CHECK(big.n == 108);

  // doubling one coordinate of C5^3 has order 4, which divides 24
  std::vector<int> dbl(125);
  for (int i = 0; i < 125; ++i) dbl[i] = i - i % 5 + (2 * i) % 5;
  OperatorAction wide = make_operator_action({24}, abelian_group_model({5, 5, 5}), {dbl});
  // 24 * 125 = 3000 passes; tighter bound rejects
  CHECK(semidirect_product(wide).n == 3000);
  CHECK_THROWS_WITH_AS((void)semidirect_product(wide, 2999), "operator bound exceeded",
                       std::invalid_argument);
}

TEST_CASE("fixed points of an operator action form the expected subgroup") {
  OperatorAction inv = make_operator_action({2}, cyclic(3), {mult_perm(3, 2)});
  CHECK(fixed_point_set(inv) == std::vector<int>{0});

  // diag(1,2) on C_7 x C_7 fixes the first factor pointwise
  OperatorAction a = make_operator_action({3}, abelian_group_model({7, 7}),
                                          {plane_perm(7, 1, 0, 0, 2)});
  CHECK(fixed_point_set(a).size() == 7);
}

TEST_CASE("fixed-point correspondence on abelian targets is the character restriction") {
  // C_3 acting on C_7 x C_7 through diag(1,2); 2 has order 3 mod 7
  OperatorAction a = make_operator_action({3}, abelian_group_model({7, 7}),
                                          {plane_perm(7, 1, 0, 0, 2)});
  GlaubermanResult r = glauberman_map(a);
  CHECK(r.fixed.n == 7);
  CHECK(r.records.size() == 7);
  for (const auto& rec : r.records) {
    CHECK(rec.eps == 1);  // linear characters extend with sign +1
    CHECK(r.table_g.degrees[rec.rho] == 1);
  }
  // distinct fixed rows map to distinct targets
  std::vector<int> images;
  for (const auto& rec : r.records) images.push_back(rec.rho_a);
  std::sort(images.begin(), images.end());
  CHECK(std::adjacent_find(images.begin(), images.end()) == images.end());

  // C_4 on C_5 x C_5 through diag(1,2); 2 has order 4 mod 5
  OperatorAction b = make_operator_action({4}, abelian_group_model({5, 5}),
                                          {plane_perm(5, 1, 0, 0, 2)});
  GlaubermanResult s = glauberman_map(b);
  CHECK(s.fixed.n == 5);
  CHECK(s.records.size() == 5);
  for (const auto& rec : s.records) CHECK(rec.eps == 1);

  // non-cyclic operator groups are rejected by the single-step map
  OperatorAction two = make_operator_action({2, 2}, abelian_group_model({5, 5}),
                                            {plane_perm(5, 4, 0, 0, 1),
                                             plane_perm(5, 1, 0, 0, 4)});
  CHECK_THROWS_WITH_AS((void)glauberman_map(two), "operator group not cyclic",
                       std::invalid_argument);
}

TEST_CASE("inversion on C_3 pairs the trivial character with sign +1") {
  OperatorAction inv = make_operator_action({2}, cyclic(3), {mult_perm(3, 2)});
  GlaubermanResult r = glauberman_map(inv);
  CHECK(r.fixed.n == 1);
  REQUIRE(r.records.size() == 1);
  CHECK(r.table_g.degrees[r.records[0].rho] == 1);
  CHECK(r.records[0].eps == 1);
}

TEST_CASE("degree-3 characters of the extraspecial group match their central characters") {
  HeisenbergRealization h = heisenberg_group(std_plane_c4());
  GlaubermanResult r = glauberman_map(h.action);

  // fixed subgroup is the centre: the three central elements
  CHECK(r.fixed.n == 3);

  int deg3 = 0;
  for (const auto& rec : r.records) {
    if (r.table_g.degrees[rec.rho] != 3) continue;
    ++deg3;
    // the sign of both degree-3 rows is the module invariant of the plane
    CHECK(rec.eps == t_of(anisotropic_module(3, {4}, full_chi(4)), {1}));
    // the matched character of the centre is the central character:
    // chi_rho(z) = 3 * eta(z) for each fixed element z
    for (int i = 0; i < r.fixed.n; ++i) {
      int z = r.fixed_to_parent[i];
      Cyclotomic lhs = r.table_g.rows[rec.rho][h.group.class_of[z]];
      Cyclotomic rhs = Cyclotomic(BigInt(3)) * r.table_fixed.rows[rec.rho_a][r.fixed.class_of[i]];
      CHECK(lhs == rhs);
    }
  }
  CHECK(deg3 == 2);
}

TEST_CASE("correspondence signs equal the sign table across the derivable range") {
  // every feasible irreducible pair and every divisor subgroup, against the
  // recorded correspondence signs; regenerate with tools/derive_sign_table
  struct Row {
    long long p;
    bool aniso;
    long long N;
    long long sub;  // subgroup order
    int sign;
  };
  static const Row rows[] = {
      {2, false, 1, 1, +1},  {2, false, 3, 3, +1},  {2, false, 3, 1, +1},
      {2, true, 3, 3, -1},   {2, true, 3, 1, +1},   {2, true, 5, 5, -1},
      {2, true, 5, 1, +1},   {2, false, 7, 7, +1},  {2, false, 7, 1, +1},
      {2, true, 9, 9, -1},   {2, true, 9, 3, -1},   {2, true, 9, 1, +1},
      {3, false, 1, 1, +1},  {3, false, 2, 2, -1},  {3, false, 2, 1, +1},
      {3, false, 4, 4, +1},  {3, false, 4, 2, +1},  {3, false, 4, 1, +1},
      {3, true, 4, 4, +1},   {3, true, 4, 2, -1},   {3, true, 4, 1, +1},
      {3, true, 5, 5, -1},   {3, true, 5, 1, +1},   {3, false, 8, 8, -1},
      {3, false, 8, 4, +1},  {3, false, 8, 2, +1},  {3, false, 8, 1, +1},
      {3, true, 10, 10, +1}, {3, true, 10, 5, -1},  {3, true, 10, 2, +1},
      {3, true, 10, 1, +1},  {5, false, 1, 1, +1},  {5, false, 2, 2, +1},
      {5, false, 2, 1, +1},  {5, true, 3, 3, -1},   {5, true, 3, 1, +1},
      {5, false, 4, 4, -1},  {5, false, 4, 2, +1},  {5, false, 4, 1, +1},
      {5, true, 6, 6, +1},   {5, true, 6, 3, -1},   {5, true, 6, 2, +1},
      {5, true, 6, 1, +1},   {7, false, 1, 1, +1},  {7, false, 2, 2, -1},
      {7, false, 2, 1, +1},  {7, false, 3, 3, +1},  {7, false, 3, 1, +1},
      {7, true, 4, 4, -1},   {7, true, 4, 2, -1},   {7, true, 4, 1, +1},
      {7, false, 6, 6, -1},  {7, false, 6, 3, +1},  {7, false, 6, 2, -1},
      {7, false, 6, 1, +1},  {7, true, 8, 8, +1},   {7, true, 8, 4, -1},
      {7, true, 8, 2, -1},   {7, true, 8, 1, +1},
  };
  for (const Row& r : rows) {
    CAPTURE(r.p);
    CAPTURE(r.N);
    CAPTURE(r.sub);
    BarCharacter chi = full_chi(r.N);
    SymplecticModule M = r.aniso ? anisotropic_module(r.p, {r.N}, chi)
                                 : hyperbolic_module(r.p, {r.N}, chi);
    CHECK(t_of(M, {r.N / r.sub}) == r.sign);
  }

  // live recomputation of a cross-section, one instance per prime
  auto live = [](long long p, bool aniso, long long N, long long sub) {
    SymplecticModule M = aniso ? anisotropic_module(p, {N}, full_chi(N))
                               : hyperbolic_module(p, {N}, full_chi(N));
    ConcreteSymplecticSpace S = synthesize(M);
    ConcreteSymplecticSpace Sj = S;
    Sj.factor_orders = {sub};
    if (sub < N) {
      // replace the generator matrix by its power
      long long step = N / sub;
      std::vector<std::vector<long long>> R(S.dim, std::vector<long long>(S.dim, 0));
      for (long long i = 0; i < S.dim; ++i) R[i][i] = 1;
      for (long long s = 0; s < step; ++s) {
        std::vector<std::vector<long long>> T(S.dim, std::vector<long long>(S.dim, 0));
        for (long long i = 0; i < S.dim; ++i)
          for (long long k = 0; k < S.dim; ++k)
            for (long long j = 0; j < S.dim; ++j)
              T[i][j] = (T[i][j] + R[i][k] * S.action[0][k][j]) % S.p;
        R = T;
      }
      Sj.action = {R};
    }
    return heisenberg_sign(Sj);
  };
  CHECK(live(3, true, 4, 4) == +1);
  CHECK(live(3, true, 4, 2) == -1);
  CHECK(live(5, true, 6, 6) == +1);
  CHECK(live(7, false, 2, 2) == -1);
  CHECK(live(2, true, 3, 3) == -1);
}

TEST_CASE("the sign is not a function of the fixed-point subgroup alone") {
  // both actions fix exactly the centre C_3, with opposite signs
  SymplecticModule plane = hyperbolic_module(3, {2}, full_chi(2));
  SymplecticModule rot = anisotropic_module(3, {4}, full_chi(4));
  ConcreteSymplecticSpace S2 = synthesize(plane), S4 = synthesize(rot);
  HeisenbergRealization h2 = heisenberg_group(S2), h4 = heisenberg_group(S4);
  CHECK(fixed_point_set(h2.action).size() == 3);
  CHECK(fixed_point_set(h4.action).size() == 3);
  CHECK(heisenberg_sign(S2) == -1);
  CHECK(heisenberg_sign(S4) == +1);
}

TEST_CASE("chains through operator subgroups compose transitively") {
  // B = A and B = 1 are degenerate checks of the chain identity
  HeisenbergRealization h = heisenberg_group(std_plane_c4());
  CHECK(transitivity_check(h.action, {1}));
  CHECK(transitivity_check(h.action, {4}));
  // proper subgroup C_2 of C_4
  CHECK(transitivity_check(h.action, {2}));
  CHECK_THROWS_WITH_AS((void)transitivity_check(h.action, {3}), "subgroup spec invalid",
                       std::invalid_argument);

  // Klein four-group acting on the exponent-3 Heisenberg group of the
  // four-dimensional space: block involutions -I + I and I + -I
  SymplecticModule two = direct_sum(hyperbolic_module(3, {2, 2}, bar_character({2, 2}, 2, {1, 0})),
                                    hyperbolic_module(3, {2, 2}, bar_character({2, 2}, 2, {0, 1})));
  ConcreteSymplecticSpace S = synthesize(two);
  REQUIRE(S.dim == 4);
  HeisenbergRealization h4 = heisenberg_group(S);
  CHECK(h4.group.n == 243);
  CHECK(semidirect_product(h4.action).n == 972);
  CHECK(transitivity_check(h4.action, {1, 2}));
  CHECK(transitivity_check(h4.action, {2, 1}));
  CHECK(transitivity_check(h4.action, {2, 2}));

  // chain across both factors agrees with the two-step composite by the
  // check above; the direct chain also matches the single-factor map on
  // the diagonal subgroup
  ChainResult chain = glauberman_chain(h4.action);
  for (int e : chain.eps) CHECK((e == 1 || e == -1));
}

TEST_CASE("heisenberg realizations have the expected structure") {
  // zero-dimensional space: the centre alone
  ConcreteSymplecticSpace Z;
  Z.p = 3;
  Z.dim = 0;
  Z.factor_orders = {1};
  Z.action = {{}};
  HeisenbergRealization hz = heisenberg_group(Z);
  CHECK(hz.group.n == 3);
  CHECK(hz.group.is_abelian());

  // dim 4 at p = 3: order 3^5, exponent 3
  SymplecticModule M = hyperbolic_module(3, {4}, full_chi(4));
  HeisenbergRealization h4 = heisenberg_group(synthesize(M));
  CHECK(h4.group.n == 243);
  CHECK(h4.group.exponent == 3);
  CHECK_FALSE(h4.group.is_abelian());

  // p = 2 realizations are central products, flagged experimental; the
  // order-3 action forces the quaternion form (one involution), while the
  // trivial action keeps the split form (five involutions)
  SymplecticModule q = anisotropic_module(2, {3}, full_chi(3));
  HeisenbergRealization hq = heisenberg_group(synthesize(q));
  CHECK(hq.experimental);
  CHECK(hq.group.n == 8);
  CHECK(order_count(hq.group, 2) == 1);

  ConcreteSymplecticSpace Sd = synthesize(q);
  Sd.factor_orders = {1};
  Sd.action = {{{1, 0}, {0, 1}}};
  HeisenbergRealization hd = heisenberg_group(Sd);
  CHECK(hd.group.n == 8);
  CHECK(order_count(hd.group, 2) == 5);
}
