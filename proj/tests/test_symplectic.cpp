#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "doctest.h"
#include "tamecorr/finite_field.hpp"
#include "tamecorr/symplectic.hpp"

using namespace tamecorr;

namespace {

using Vec = std::vector<long long>;
using Mat = std::vector<Vec>;

BarCharacter chi_of(const std::vector<long long>& orders, long long N, const Vec& exps) {
  return bar_character(orders, N, exps);
}

// multiplication by the order-N element exp((q-1)/N) of F_9 on the basis 1, t
ConcreteSymplecticSpace f9_mult_space(long long N) {
  auto F = FiniteField::get(3, 2);
  long long g = F->exp((F->q - 1) / N);
  ConcreteSymplecticSpace S;
  S.p = 3;
  S.dim = 2;
  S.factor_orders = {N};
  S.gram = {{0, 1}, {2, 0}};
  Mat A(2, Vec(2, 0));
  for (int j = 0; j < 2; ++j) {
    long long img = F->mul(g, j == 0 ? 1 : 3);
    A[0][j] = img % 3;
    A[1][j] = img / 3;
  }
  S.action = {A};
  validate_space(S);
  return S;
}

ConcreteSymplecticSpace trivial_plane(long long p, const std::vector<long long>& orders) {
  ConcreteSymplecticSpace S;
  S.p = p;
  S.dim = 2;
  S.factor_orders = orders;
  S.gram = {{0, 1}, {p - 1, 0}};
  for (size_t i = 0; i < orders.size(); ++i) S.action.push_back({{1, 0}, {0, 1}});
  validate_space(S);
  return S;
}

}  // namespace

TEST_CASE("character arithmetic and orbit structure") {
  BarCharacter c = chi_of({4, 6}, 12, {3, 2});
  CHECK(c.order() == 12);
  CHECK(c.value_at({1, 0}) == RootOfUnity(4, 1));
  CHECK(c.value_at({0, 1}) == RootOfUnity(6, 1));
  CHECK(c.value_at({1, 3}) == RootOfUnity(4, 3));
  CHECK(c.power(12).is_trivial());
  CHECK(c.inverse().value_at({1, 0}) == RootOfUnity(4, 3));
  CHECK(c.exponents() == Vec{3, 2});
  CHECK(c.degree(5) == 2);
  CHECK(trivial_bar_character({4, 6}).is_trivial());
  CHECK_THROWS_AS(chi_of({4}, 8, {1}), std::invalid_argument);
  CHECK_THROWS_AS(chi_of({4}, 4, {1, 0}), std::invalid_argument);

  // -1 a power of p mod N marks the characters carrying an invariant form
  CHECK(anisotropic_capable(chi_of({4}, 4, {1}), 3));
  CHECK_FALSE(anisotropic_capable(chi_of({8}, 8, {1}), 3));
  CHECK(anisotropic_capable(chi_of({3}, 3, {1}), 5));
  CHECK(anisotropic_capable(chi_of({8}, 8, {1}), 7));
  CHECK(anisotropic_capable(chi_of({7}, 7, {1}), 3));
  CHECK(chi_of({7}, 7, {1}).degree(3) == 6);
  CHECK_FALSE(anisotropic_capable(chi_of({4}, 4, {1}), 5));
  CHECK_FALSE(anisotropic_capable(chi_of({2}, 2, {1}), 3));

  BarCharacter e3 = chi_of({8}, 8, {3});
  CHECK(orbit_representative(e3, 3, false).exponents() == Vec{1});
  BarCharacter e7 = chi_of({8}, 8, {7});
  CHECK(orbit_representative(e7, 3, false).exponents() == Vec{5});
  CHECK(orbit_representative(e7, 3, true).exponents() == Vec{1});
}

TEST_CASE("hyperbolic modules of the basic characters") {
  SymplecticModule h1 = hyperbolic_module(3, {1}, trivial_bar_character({1}));
  CHECK(h1.dim() == 2);
  REQUIRE(h1.summands.size() == 1);
  CHECK(h1.summands[0].type == FormType::hyperbolic);

  SymplecticModule h2 = hyperbolic_module(3, {2}, chi_of({2}, 2, {1}));
  CHECK(h2.dim() == 2);
  CHECK(h2.summands[0].type == FormType::hyperbolic);

  SymplecticModule h8 = hyperbolic_module(3, {8}, chi_of({8}, 8, {1}));
  CHECK(h8.dim() == 4);
  REQUIRE(h8.summands.size() == 1);
  CHECK(h8.summands[0].type == FormType::hyperbolic);

  // over a character with an invariant form the plane splits into two copies
  SymplecticModule h4 = hyperbolic_module(3, {4}, chi_of({4}, 4, {1}));
  CHECK(h4.dim() == 4);
  REQUIRE(h4.summands.size() == 2);
  CHECK(h4.summands[0].type == FormType::anisotropic);
  CHECK(h4.summands[1].type == FormType::anisotropic);
  CHECK(h4.summands[0].chi == h4.summands[1].chi);

  // storage is canonical: inverse and Frobenius shifts land on one literal
  CHECK(anisotropic_module(3, {4}, chi_of({4}, 4, {3})) ==
        anisotropic_module(3, {4}, chi_of({4}, 4, {1})));
  CHECK(hyperbolic_module(5, {4}, chi_of({4}, 4, {3})) ==
        hyperbolic_module(5, {4}, chi_of({4}, 4, {1})));
  CHECK_THROWS_AS(anisotropic_module(3, {8}, chi_of({8}, 8, {1})), std::invalid_argument);
  CHECK_THROWS_WITH_AS(make_module(3, {6}, {}), "order divisible by p", std::invalid_argument);
}

TEST_CASE("decompose identifies the standard instances") {
  SymplecticModule triv = decompose(trivial_plane(3, {1}));
  CHECK(triv == hyperbolic_module(3, {1}, trivial_bar_character({1})));

  // multiplication by an order-4 element of F_9 under the standard form
  ConcreteSymplecticSpace S4 = f9_mult_space(4);
  SymplecticModule m4 = decompose(S4);
  CHECK(m4 == anisotropic_module(3, {4}, chi_of({4}, 4, {1})));
  CHECK_FALSE(has_invariant_lagrangian(S4));

  ConcreteSymplecticSpace D = space_direct_sum(trivial_plane(3, {4}), S4);
  SymplecticModule md = decompose(D);
  CHECK(md == make_module(3, {4},
                          {{trivial_bar_character({4}), FormType::hyperbolic},
                           {chi_of({4}, 4, {1}), FormType::anisotropic}}));
  CHECK(decompose(D).str() == md.str());

  CHECK_THROWS_WITH_AS(decompose(f9_mult_space(8)), "action not form-preserving",
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(decompose(trivial_plane(11, {1})), "p outside supported set",
                       std::invalid_argument);
}

TEST_CASE("space validation rejects malformed input") {
  ConcreteSymplecticSpace S = trivial_plane(3, {1});
  S.gram = {{0, 0}, {0, 0}};
  CHECK_THROWS_WITH_AS(validate_space(S), "degenerate form", std::invalid_argument);
  S.gram = {{0, 1}, {1, 0}};
  CHECK_THROWS_WITH_AS(validate_space(S), "form not alternating", std::invalid_argument);
  S = trivial_plane(3, {2});
  S.action[0] = {{2, 0}, {0, 1}};
  CHECK_THROWS_WITH_AS(validate_space(S), "action not form-preserving", std::invalid_argument);
  S = trivial_plane(3, {1});
  S.action[0] = {{1, 1}, {0, 1}};
  CHECK_THROWS_WITH_AS(validate_space(S), "action order mismatch", std::invalid_argument);
  ConcreteSymplecticSpace big = synthesize(hyperbolic_module(3, {11}, chi_of({11}, 11, {1})));
  CHECK(big.dim == 10);
  CHECK_THROWS_WITH_AS(decompose(big), "dimension exceeds brute-force bound",
                       std::invalid_argument);
}

TEST_CASE("decompose inverts synthesize") {
  std::vector<SymplecticModule> cases;
  cases.push_back(anisotropic_module(3, {4}, chi_of({4}, 4, {1})));
  cases.push_back(hyperbolic_module(3, {4}, trivial_bar_character({4})));
  cases.push_back(hyperbolic_module(3, {4}, chi_of({4}, 4, {2})));
  cases.push_back(direct_sum(cases[0], cases[1]));
  cases.push_back(direct_sum(cases[0], cases[0]));
  cases.push_back(hyperbolic_module(3, {8}, chi_of({8}, 8, {1})));
  cases.push_back(anisotropic_module(3, {8}, chi_of({8}, 8, {2})));
  cases.push_back(direct_sum(hyperbolic_module(3, {8}, chi_of({8}, 8, {1})),
                             anisotropic_module(3, {8}, chi_of({8}, 8, {2}))));
  cases.push_back(anisotropic_module(3, {4, 2}, chi_of({4, 2}, 4, {1, 2})));
  cases.push_back(make_module(3, {4, 2},
                              {{chi_of({4, 2}, 4, {1, 0}), FormType::anisotropic},
                               {chi_of({4, 2}, 2, {0, 1}), FormType::hyperbolic}}));
  cases.push_back(anisotropic_module(5, {3}, chi_of({3}, 3, {1})));
  cases.push_back(hyperbolic_module(5, {4}, chi_of({4}, 4, {1})));
  cases.push_back(anisotropic_module(5, {6}, chi_of({6}, 6, {1})));
  cases.push_back(hyperbolic_module(7, {3}, chi_of({3}, 3, {1})));
  cases.push_back(anisotropic_module(7, {4}, chi_of({4}, 4, {1})));
  cases.push_back(anisotropic_module(2, {3}, chi_of({3}, 3, {1})));
  cases.push_back(hyperbolic_module(2, {3}, trivial_bar_character({3})));
  cases.push_back(hyperbolic_module(2, {7}, chi_of({7}, 7, {1})));
  for (const SymplecticModule& M : cases) {
    CAPTURE(M.str());
    ConcreteSymplecticSpace S = synthesize(M);
    CHECK(S.dim == M.dim());
    SymplecticModule back = decompose(S);
    // markings live on the module, not the space
    SymplecticModule bare = make_module(M.p, M.factor_orders, M.summands);
    CHECK(back == bare);
  }
}

TEST_CASE("a form plus its negative is hyperbolic, with isometry exhibited") {
  std::vector<SymplecticModule> cases;
  cases.push_back(anisotropic_module(3, {4}, chi_of({4}, 4, {1})));
  cases.push_back(hyperbolic_module(3, {8}, chi_of({8}, 8, {1})));
  cases.push_back(hyperbolic_module(5, {4}, chi_of({4}, 4, {1})));
  cases.push_back(anisotropic_module(2, {3}, chi_of({3}, 3, {1})));
  cases.push_back(make_module(3, {4, 2},
                              {{chi_of({4, 2}, 4, {1, 0}), FormType::anisotropic},
                               {chi_of({4, 2}, 2, {0, 1}), FormType::hyperbolic}}));
  for (const SymplecticModule& M : cases) {
    CAPTURE(M.str());
    ConcreteSymplecticSpace S = synthesize(M);
    ConcreteSymplecticSpace D = space_direct_sum(S, negate_form(S));
    SymplecticModule HM = hyperbolic_of(M);
    CHECK(decompose(D) == make_module(M.p, M.factor_orders, HM.summands));
    auto iso = find_isometry(D, synthesize(HM));
    REQUIRE(iso.has_value());
    CHECK((long long)iso->size() == D.dim);
  }
}

TEST_CASE("hyperbolic spaces are isometric exactly for related characters") {
  // same dimension, p = 7: 1 and 7 share a Frobenius orbit, 9 is an inverse,
  // 3 is in neither orbit
  ConcreteSymplecticSpace H1 = hyperbolic_space(7, {16}, chi_of({16}, 16, {1}));
  ConcreteSymplecticSpace H7 = hyperbolic_space(7, {16}, chi_of({16}, 16, {7}));
  ConcreteSymplecticSpace H9 = hyperbolic_space(7, {16}, chi_of({16}, 16, {9}));
  ConcreteSymplecticSpace H3 = hyperbolic_space(7, {16}, chi_of({16}, 16, {3}));
  CHECK(find_isometry(H1, H7).has_value());
  CHECK(find_isometry(H1, H9).has_value());
  CHECK_FALSE(find_isometry(H1, H3).has_value());

  ConcreteSymplecticSpace G1 = hyperbolic_space(3, {8}, chi_of({8}, 8, {1}));
  CHECK(find_isometry(G1, hyperbolic_space(3, {8}, chi_of({8}, 8, {3}))).has_value());
  CHECK(find_isometry(G1, hyperbolic_space(3, {8}, chi_of({8}, 8, {7}))).has_value());
  CHECK_FALSE(find_isometry(G1, hyperbolic_space(3, {8}, chi_of({8}, 8, {2}))).has_value());
  CHECK_THROWS_AS(find_isometry(G1, hyperbolic_space(3, {4}, chi_of({4}, 4, {1}))),
                  std::invalid_argument);
}

TEST_CASE("plane splitting and invariant submodule searches") {
  // a plane over a character with an invariant form splits; otherwise not
  ConcreteSymplecticSpace split = hyperbolic_space(3, {4}, chi_of({4}, 4, {1}));
  CHECK(has_proper_nondegenerate_submodule(split));
  CHECK(has_invariant_lagrangian(split));
  ConcreteSymplecticSpace plain = hyperbolic_space(3, {8}, chi_of({8}, 8, {1}));
  CHECK_FALSE(has_proper_nondegenerate_submodule(plain));
  CHECK(has_invariant_lagrangian(plain));
  CHECK_FALSE(has_proper_nondegenerate_submodule(hyperbolic_space(3, {2}, chi_of({2}, 2, {1}))));
  ConcreteSymplecticSpace aniso = anisotropic_space(3, {4}, chi_of({4}, 4, {1}));
  CHECK_FALSE(has_invariant_lagrangian(aniso));
  CHECK_FALSE(has_proper_nondegenerate_submodule(aniso));
  CHECK(decompose(aniso) == anisotropic_module(3, {4}, chi_of({4}, 4, {1})));
}

TEST_CASE("fixed points keep exactly the summands the subgroup misses") {
  SymplecticModule M = make_module(3, {4, 2},
                                   {{chi_of({4, 2}, 2, {0, 1}), FormType::hyperbolic},
                                    {chi_of({4, 2}, 4, {1, 0}), FormType::anisotropic}});
  CHECK(fixed_points(M, {}) == M);
  CHECK(fixed_points(M, {{0, 0}}) == M);
  SymplecticModule part = fixed_points(M, {{0, 1}});
  REQUIRE(part.summands.size() == 1);
  CHECK(part.summands[0].type == FormType::anisotropic);
  CHECK(fixed_points(M, {{1, 0}, {0, 1}}).summands.empty());
  CHECK(fixed_points(M, {{1, 1}}).summands.empty());
  CHECK_THROWS_AS(fixed_points(M, {{1}}), std::invalid_argument);
}

TEST_CASE("sign table entries on computed instances") {
  CHECK(sign_table_entry(3, FormType::anisotropic, 2, 4).t0 == -1);
  CHECK(sign_table_entry(3, FormType::anisotropic, 2, 4).t1_nontrivial);
  CHECK(sign_table_entry(7, FormType::anisotropic, 2, 4).t0 == -1);
  CHECK_FALSE(sign_table_entry(7, FormType::anisotropic, 2, 4).t1_nontrivial);
  CHECK(sign_table_entry(7, FormType::anisotropic, 2, 8).t1_nontrivial);
  CHECK(sign_table_entry(5, FormType::anisotropic, 2, 6).t1_nontrivial);
  CHECK_FALSE(sign_table_entry(5, FormType::anisotropic, 2, 3).t1_nontrivial);
  CHECK(sign_table_entry(3, FormType::anisotropic, 4, 10).t1_nontrivial);
  CHECK_FALSE(sign_table_entry(3, FormType::anisotropic, 4, 5).t1_nontrivial);
  CHECK(sign_table_entry(3, FormType::hyperbolic, 1, 2).t0 == +1);
  CHECK(sign_table_entry(3, FormType::hyperbolic, 1, 2).t1_nontrivial);
  CHECK_FALSE(sign_table_entry(5, FormType::hyperbolic, 1, 2).t1_nontrivial);
  CHECK(sign_table_entry(7, FormType::hyperbolic, 1, 2).t1_nontrivial);
  CHECK(sign_table_entry(5, FormType::hyperbolic, 1, 4).t1_nontrivial);
  CHECK(sign_table_entry(3, FormType::hyperbolic, 2, 8).t1_nontrivial);
  CHECK_FALSE(sign_table_entry(7, FormType::hyperbolic, 1, 3).t1_nontrivial);
  CHECK(sign_table_entry(7, FormType::hyperbolic, 1, 6).t1_nontrivial);
  CHECK_FALSE(sign_table_entry(2, FormType::hyperbolic, 1, 1).t1_nontrivial);
  CHECK_FALSE(sign_table_entry(2, FormType::anisotropic, 2, 3).t1_nontrivial);
  CHECK(sign_table_entry(2, FormType::anisotropic, 2, 3).t0 == -1);
  CHECK_THROWS_AS(sign_table_entry(3, FormType::anisotropic, 1, 2), std::invalid_argument);
  CHECK_THROWS_AS(sign_table_entry(3, FormType::hyperbolic, 1, 4), std::invalid_argument);
  CHECK_THROWS_WITH_AS(sign_table_entry(3, FormType::hyperbolic, 1, 3), "order divisible by p",
                       std::invalid_argument);
}

TEST_CASE("t invariants on pinned instances") {
  SymplecticModule A = anisotropic_module(3, {4}, chi_of({4}, 4, {1}));
  TInvariants ta = t_invariants(A, {{1}});
  CHECK(ta.t0 == -1);
  CHECK_FALSE(ta.t1_trivial);
  CHECK(ta.t1_gen_values == std::vector<int>{-1});
  CHECK(ta.t == +1);
  CHECK(t_of(A, {1}) == +1);
  CHECK(t_of(A, {3}) == +1);  // generator independence within one image

  for (long long p : {3LL, 5LL, 7LL}) {
    SymplecticModule H = hyperbolic_module(p, {2}, chi_of({2}, 2, {1}));
    TInvariants th = t_invariants(H, {{1}});
    CHECK(th.t0 == +1);
    CHECK(th.t1_trivial == (p == 5));
    CHECK(th.t == (p == 5 ? +1 : -1));
  }

  TInvariants triv = t_invariants(A, {});
  CHECK(triv.t0 == +1);
  CHECK(triv.t1_trivial);
  CHECK(triv.t == +1);
  CHECK(t_of(A, {0}) == +1);

  // multiplicative over orthogonal sums
  SymplecticModule B = hyperbolic_module(3, {4}, chi_of({4}, 4, {2}));
  SymplecticModule AB = direct_sum(A, B);
  TInvariants tb = t_invariants(B, {{1}});
  TInvariants tab = t_invariants(AB, {{1}});
  CHECK(tab.t0 == ta.t0 * tb.t0);
  CHECK(tab.t1_gen_values[0] == ta.t1_gen_values[0] * tb.t1_gen_values[0]);

  // depends only on the image of the acting group
  SymplecticModule A8 = anisotropic_module(3, {8}, chi_of({8}, 8, {2}));
  TInvariants t8 = t_invariants(A8, {{1}});
  CHECK(t8.t0 == ta.t0);
  CHECK(t8.t1_gen_values == ta.t1_gen_values);
  CHECK(t8.t == ta.t);

  // p = 2 has no quadratic characters of the acting group
  SymplecticModule A2 = anisotropic_module(2, {3}, chi_of({3}, 3, {1}));
  TInvariants t2 = t_invariants(A2, {{1}});
  CHECK(t2.t0 == -1);
  CHECK(t2.t1_trivial);
  CHECK(t2.t == -1);

  // non-cyclic image leaves t unset
  SymplecticModule MM = make_module(3, {4, 4},
                                    {{chi_of({4, 4}, 4, {1, 0}), FormType::anisotropic},
                                     {chi_of({4, 4}, 4, {0, 1}), FormType::anisotropic}});
  TInvariants tm = t_invariants(MM, {{1, 0}, {0, 1}});
  CHECK(tm.t == 0);
  CHECK(tm.t0 == +1);
  CHECK_THROWS_AS(t1_value_at(A, {{2}}, {1}), std::invalid_argument);
}

TEST_CASE("restriction identity holds exactly when the subgroup fixes nothing") {
  std::vector<SymplecticModule> cases;
  cases.push_back(anisotropic_module(3, {4}, chi_of({4}, 4, {1})));
  cases.push_back(hyperbolic_module(3, {8}, chi_of({8}, 8, {1})));
  cases.push_back(anisotropic_module(3, {8}, chi_of({8}, 8, {2})));
  cases.push_back(anisotropic_module(5, {6}, chi_of({6}, 6, {1})));
  cases.push_back(anisotropic_module(7, {4}, chi_of({4}, 4, {1})));
  cases.push_back(direct_sum(cases[1], cases[2]));
  cases.push_back(hyperbolic_module(5, {4}, chi_of({4}, 4, {1})));
  long long checked = 0;
  for (const SymplecticModule& M : cases) {
    long long n = M.factor_orders[0];
    for (long long k = 1; k < n; ++k) {
      if (!fixed_points(M, {{k}}).summands.empty()) continue;
      CAPTURE(M.str());
      CAPTURE(k);
      CHECK(t_of(M, {k}) == t0_of(M, {{1}}) * t1_value_at(M, {{1}}, {k}));
      ++checked;
    }
  }
  CHECK(checked > 10);

  // with fixed points present the identity genuinely fails
  SymplecticModule A = anisotropic_module(3, {4}, chi_of({4}, 4, {1}));
  CHECK(fixed_points(A, {{0}}) == A);
  CHECK(t_of(A, {0}) != t0_of(A, {{1}}) * t1_value_at(A, {{1}}, {0}));
}

TEST_CASE("marked module sign comparison") {
  SymplecticModule M = anisotropic_module(3, {4}, chi_of({4}, 4, {1}));
  CHECK_THROWS_WITH_AS(signs_lemma_check(M), "marked elements missing", std::invalid_argument);
  M = make_module(3, {4}, M.summands, {}, Vec{0}, Vec{1});
  CHECK_THROWS_WITH_AS(signs_lemma_check(M), "markings inconsistent", std::invalid_argument);

  // trivial markings always balance
  M = make_module(3, {4}, M.summands, {}, Vec{0}, Vec{0});
  CHECK(signs_lemma_check(M));

  // the full comparison across small cyclic instances
  long long verified = 0;
  for (long long p : {3LL, 5LL}) {
    for (long long n : {2LL, 4LL, 6LL, 8LL}) {
      if (n % p == 0) continue;
      for (long long e = 1; e < n; ++e) {
        BarCharacter c = chi_of({n}, n, {e});
        std::vector<Summand> variants = {{c, FormType::hyperbolic}};
        if (anisotropic_capable(c, p)) variants.push_back({c, FormType::anisotropic});
        for (const Summand& s : variants) {
          for (long long m = 0; m < n; ++m) {
            for (long long b : {0LL, 1LL}) {
              SymplecticModule inst =
                  make_module(p, {n}, {s}, {{m}}, Vec{b}, Vec{(b + m) % n});
              CAPTURE(inst.str());
              CHECK(signs_lemma_check(inst));
              ++verified;
            }
          }
        }
      }
    }
  }
  CHECK(verified > 200);
}

TEST_CASE("module literals round trip") {
  SymplecticModule M = make_module(
      5, {4, 6}, {{chi_of({4, 6}, 12, {3, 2}), FormType::hyperbolic}},
      {{2, 0}, {0, 3}}, Vec{1, 2}, Vec{1, 5});
  std::string lit = M.str();
  CHECK(lit == "p5.C4x6.mu(0,3)(2,0).pi(1,2).pia(1,5).Sh:N12:3,2");
  CHECK(SymplecticModule::parse(lit) == M);

  SymplecticModule Z = zero_module(3, {4});
  CHECK(Z.str() == "p3.C4.S0");
  CHECK(SymplecticModule::parse("p3.C4.S0") == Z);

  SymplecticModule two = make_module(3, {4},
                                     {{chi_of({4}, 4, {1}), FormType::anisotropic},
                                      {trivial_bar_character({4}), FormType::hyperbolic}});
  CHECK(SymplecticModule::parse(two.str()) == two);

  CHECK_THROWS_AS(SymplecticModule::parse("p3.C4"), std::invalid_argument);
  CHECK_THROWS_AS(SymplecticModule::parse("p3.C4.X0"), std::invalid_argument);
  CHECK_THROWS_AS(SymplecticModule::parse("p3.C4.S0.pi(1)"), std::invalid_argument);
  CHECK_THROWS_AS(SymplecticModule::parse("p3.C4.Sh:N4"), std::invalid_argument);
  CHECK_THROWS_AS(SymplecticModule::parse("p4.C3.S0"), std::invalid_argument);
  CHECK_THROWS_AS(SymplecticModule::parse("p3.C6.S0"), std::invalid_argument);
  CHECK_THROWS_AS(SymplecticModule::parse("p3.C4.Sq:N4:1"), std::invalid_argument);
}

TEST_CASE("space text round trips") {
  ConcreteSymplecticSpace S = f9_mult_space(4);
  ConcreteSymplecticSpace back = ConcreteSymplecticSpace::parse(S.str());
  CHECK(back.str() == S.str());
  CHECK(back.gram == S.gram);
  CHECK(back.action == S.action);
  CHECK_THROWS_AS(ConcreteSymplecticSpace::parse("space p=3 dim=2"), std::invalid_argument);
  CHECK_THROWS_AS(ConcreteSymplecticSpace::parse("space p=3 dim=2 orders=4\ngram\n0 1\n2 0\n"),
                  std::invalid_argument);
  std::string bad = S.str();
  bad.replace(bad.find("0 1"), 3, "0 5");
  CHECK_THROWS_AS(ConcreteSymplecticSpace::parse(bad), std::invalid_argument);
}

TEST_CASE("abstract restriction matches concrete restriction") {
  struct Case {
    SymplecticModule M;
    long long k;
  };
  std::vector<Case> cases;
  cases.push_back({hyperbolic_module(3, {8}, chi_of({8}, 8, {1})), 2});
  cases.push_back({hyperbolic_module(3, {8}, chi_of({8}, 8, {1})), 4});
  cases.push_back({anisotropic_module(3, {4}, chi_of({4}, 4, {1})), 2});
  cases.push_back({anisotropic_module(3, {4}, chi_of({4}, 4, {1})), 3});
  cases.push_back({anisotropic_module(5, {6}, chi_of({6}, 6, {1})), 2});
  cases.push_back({anisotropic_module(5, {6}, chi_of({6}, 6, {1})), 3});
  cases.push_back({hyperbolic_module(5, {4}, chi_of({4}, 4, {1})), 2});
  cases.push_back({direct_sum(hyperbolic_module(3, {8}, chi_of({8}, 8, {1})),
                              anisotropic_module(3, {8}, chi_of({8}, 8, {2}))),
                   2});
  for (const Case& c : cases) {
    CAPTURE(c.M.str());
    CAPTURE(c.k);
    SymplecticModule abstract = restrict_module(c.M, {{c.k}});
    ConcreteSymplecticSpace S = synthesize(c.M);
    ConcreteSymplecticSpace R;
    R.p = S.p;
    R.dim = S.dim;
    R.factor_orders = {element_order_in(c.M.factor_orders, {c.k})};
    R.gram = S.gram;
    Mat A = S.action[0];
    Mat P(S.dim, Vec(S.dim, 0));
    for (long long i = 0; i < S.dim; ++i) P[i][i] = 1;
    for (long long t = 0; t < c.k; ++t) {
      Mat Q(S.dim, Vec(S.dim, 0));
      for (long long i = 0; i < S.dim; ++i)
        for (long long j = 0; j < S.dim; ++j)
          for (long long l = 0; l < S.dim; ++l) Q[i][j] = (Q[i][j] + P[i][l] * A[l][j]) % S.p;
      P = Q;
    }
    R.action = {P};
    validate_space(R);
    CHECK(decompose(R) == abstract);
  }

  // the two named restriction instances
  SymplecticModule H8 = hyperbolic_module(3, {8}, chi_of({8}, 8, {1}));
  SymplecticModule r1 = restrict_module(H8, {{2}});
  REQUIRE(r1.summands.size() == 2);
  CHECK(r1.summands[0].type == FormType::anisotropic);
  CHECK(r1.summands[1].type == FormType::anisotropic);
  CHECK(r1.summands[0].chi.order() == 4);
  SymplecticModule A4 = anisotropic_module(3, {4}, chi_of({4}, 4, {1}));
  SymplecticModule r2 = restrict_module(A4, {{2}});
  REQUIRE(r2.summands.size() == 1);
  CHECK(r2.summands[0].type == FormType::hyperbolic);
  CHECK(r2.summands[0].chi.order() == 2);
}
