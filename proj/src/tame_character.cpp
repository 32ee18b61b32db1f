#include "tamecorr/tame_character.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <sstream>
#include <stdexcept>

namespace tamecorr {

RootOfUnity TameCharacter::value_at(const TameTorusElem& x) const {
  long long M = field.torus_mod();
  return prime_value.pow(x.v) * RootOfUnity(M, mulmod_ll(a, mod_ll(x.a, M), M));
}

long long TameCharacter::order() const {
  long long M = field.torus_mod();
  long long unit_ord = M / gcd_ll(M, a == 0 ? M : a);
  return lcm_ll(unit_ord, prime_value.ord);
}

std::string TameCharacter::str() const {
  std::ostringstream os;
  os << "char a=" << a << " pv_ord=" << prime_value.ord << " pv_exp=" << prime_value.exp;
  return os.str();
}

TameCharacter TameCharacter::parse(const std::string& line, const TameExtensionSpec& E) {
  std::istringstream is(line);
  std::string tag;
  is >> tag;
  if (tag != "char") throw std::invalid_argument("character parse: expected 'char'");
  long long a = -1, pv_ord = -1, pv_exp = -1;
  bool have_a = false, have_exp = false;
  std::string kv;
  while (is >> kv) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("character parse: bad token " + kv);
    std::string key = kv.substr(0, eq);
    long long val = std::stoll(kv.substr(eq + 1));
    if (key == "a") { a = val; have_a = true; }
    else if (key == "pv_ord") pv_ord = val;
    else if (key == "pv_exp") { pv_exp = val; have_exp = true; }
    else throw std::invalid_argument("character parse: unknown key " + key);
  }
  if (!have_a || pv_ord < 0 || !have_exp)
    throw std::invalid_argument("character parse: missing key");
  if (pv_ord < 1) throw std::invalid_argument("character parse: pv_ord < 1");
  return make_character(E, a, RootOfUnity(pv_ord, pv_exp));
}

TameCharacter make_character(const TameExtensionSpec& E, long long a,
                             const RootOfUnity& prime_value) {
  TameCharacter c;
  c.field = E;
  c.a = mod_ll(a, E.torus_mod());
  c.prime_value = prime_value;
  return c;
}

TameCharacter trivial_character(const TameExtensionSpec& E) {
  return make_character(E, 0, RootOfUnity::one());
}

TameCharacter char_mul(const TameCharacter& x, const TameCharacter& y) {
  if (!(x.field == y.field)) throw std::invalid_argument("char_mul: field mismatch");
  return make_character(x.field, x.a + y.a, x.prime_value * y.prime_value);
}

TameCharacter char_inverse(const TameCharacter& x) {
  return make_character(x.field, -x.a, x.prime_value.inverse());
}

bool char_less(const TameCharacter& x, const TameCharacter& y) {
  if (x.a != y.a) return x.a < y.a;
  if (x.prime_value.ord != y.prime_value.ord) return x.prime_value.ord < y.prime_value.ord;
  return x.prime_value.exp < y.prime_value.exp;
}

Cyclotomic evaluate(const TameCharacter& chi, const TameExtensionSpec& field_of_x,
                    const TameTorusElem& x) {
  if (!(chi.field == field_of_x)) throw std::invalid_argument("evaluate: field mismatch");
  return chi.value_at(x).to_cyclotomic();
}

TameCharacter pullback(const TameCharacter& chi, const TorusMorphism& m) {
  if (!(chi.field == m.target))
    throw std::invalid_argument("pullback: character not over the morphism target");
  long long MS = m.source.torus_mod(), MT = m.target.torus_mod();
  // chi(m(zeta_S)) = zeta_MT^{a zm}; zm MS is divisible by MT, so this is
  // zeta_MS to the exponent a zm MS / MT
  long long k = mod_ll(m.zeta_mult * MS / MT, MS);
  long long a2 = mulmod_ll(chi.a, k, MS);
  RootOfUnity pv2 = chi.prime_value.pow(m.pi_image.v) *
                    RootOfUnity(MT, mulmod_ll(chi.a, mod_ll(m.pi_image.a, MT), MT));
  return make_character(m.source, a2, pv2);
}

TameCharacter compose_with_norm(const TameCharacter& chi, const TameExtensionSpec& E) {
  const TameExtensionSpec& L = chi.field;
  if (!(L.base == E.base) || E.e % L.e != 0 || E.f % L.f != 0)
    throw std::invalid_argument("compose_with_norm: not a sub-extension");
  SubExtension sub;
  try {
    sub = sub_extension(E, L.e, L.f);
  } catch (const std::exception&) {
    throw std::invalid_argument("compose_with_norm: not a sub-extension");
  }
  if (!(sub.field == L))
    throw std::invalid_argument("compose_with_norm: not a sub-extension");
  return pullback(chi, norm_map(E, sub));
}

TameCharacter galois_act(const TameCharacter& chi, const TorusMorphism& delta) {
  return pullback(chi, aut_inverse(delta));
}

namespace {

void check_automorphism_group(const TameExtensionSpec& E,
                              const std::vector<TorusMorphism>& Delta) {
  if (Delta.empty()) throw std::invalid_argument("automorphism list is empty");
  for (const auto& d : Delta)
    if (!(d.source == E) || !(d.target == E))
      throw std::invalid_argument("automorphism field mismatch");
  for (const auto& d1 : Delta)
    for (const auto& d2 : Delta) {
      TorusMorphism c = d1.then(d2);
      bool found = false;
      for (const auto& d : Delta)
        if (d == c) { found = true; break; }
      if (!found)
        throw std::invalid_argument("automorphism list not closed under composition");
    }
}

int stabilizer_size(const TameCharacter& chi, const std::vector<TorusMorphism>& Delta) {
  int fixed = 0;
  for (const auto& d : Delta)
    if (galois_act(chi, d) == chi) ++fixed;
  return fixed;
}

}  // namespace

bool is_regular(const TameCharacter& chi, const std::vector<TorusMorphism>& Delta) {
  check_automorphism_group(chi.field, Delta);
  return stabilizer_size(chi, Delta) == 1;
}

std::vector<CharacterOrbit> regular_orbits(const TameExtensionSpec& E,
                                           const std::vector<TorusMorphism>& Delta,
                                           long long pv_order_divides) {
  if (pv_order_divides < 1)
    throw std::invalid_argument("regular_orbits: prime value bound < 1");
  check_automorphism_group(E, Delta);

  std::vector<TameCharacter> regs;
  for (long long a = 0; a < E.torus_mod(); ++a)
    for (long long k = 0; k < pv_order_divides; ++k) {
      TameCharacter chi = make_character(E, a, RootOfUnity(pv_order_divides, k));
      if (stabilizer_size(chi, Delta) == 1) regs.push_back(chi);
    }
  std::sort(regs.begin(), regs.end(), char_less);

  long long distinct = 0;
  for (size_t i = 0; i < Delta.size(); ++i) {
    bool dup = false;
    for (size_t j = 0; j < i; ++j)
      if (Delta[i] == Delta[j]) { dup = true; break; }
    if (!dup) ++distinct;
  }

  auto key = [](const TameCharacter& c) {
    return std::array<long long, 3>{c.a, c.prime_value.ord, c.prime_value.exp};
  };
  std::set<std::array<long long, 3>> seen;
  std::vector<CharacterOrbit> out;
  for (const auto& chi : regs) {
    if (seen.count(key(chi))) continue;
    std::set<std::array<long long, 3>> okeys;
    std::vector<TameCharacter> members;
    for (const auto& d : Delta) {
      TameCharacter img = galois_act(chi, d);
      if (pv_order_divides % img.prime_value.ord != 0)
        throw std::invalid_argument(
            "regular_orbits: orbit leaves the enumeration domain; "
            "use a prime value bound divisible by q_E - 1");
      if (okeys.insert(key(img)).second) members.push_back(img);
    }
    if ((long long)members.size() != distinct)
      throw std::logic_error("regular_orbits: orbit size below the group order");
    std::sort(members.begin(), members.end(), char_less);
    seen.insert(okeys.begin(), okeys.end());
    out.push_back({Delta, std::move(members)});
  }
  return out;
}

std::vector<TameCharacter> x0_subgroup(const TameExtensionSpec& E, long long m) {
  if (m < 1) throw std::invalid_argument("x0_subgroup: m < 1");
  std::vector<TameCharacter> out;
  for (long long k = 0; k < m; ++k)
    out.push_back(make_character(E, 0, RootOfUnity(m, k)));
  std::sort(out.begin(), out.end(), char_less);
  return out;
}

std::vector<TorusMorphism> relative_galois(const TameExtensionSpec& Em,
                                           const TameExtensionSpec& E) {
  if (!(E.base == Em.base) || Em.e % E.e != 0 || Em.f % E.f != 0)
    throw std::invalid_argument("relative_galois: not a sub-extension");
  SubExtension sub;
  try {
    sub = sub_extension(Em, E.e, E.f);
  } catch (const std::exception&) {
    throw std::invalid_argument("relative_galois: not a sub-extension");
  }
  if (!(sub.field == E))
    throw std::invalid_argument("relative_galois: not a sub-extension");
  TameTorusElem pz = sub.inclusion.apply({0, 1});
  TameTorusElem pp = sub.inclusion.pi_image;
  std::vector<TorusMorphism> out;
  for (const auto& d : aut_group(Em))
    if (d.apply(pz) == pz && d.apply(pp) == pp) out.push_back(d);
  return out;
}

bool admissible_pair_check(const TameExtensionSpec& Em, const TameExtensionSpec& E,
                           const TameCharacter& zeta, bool dim_one) {
  if (!dim_one)
    throw std::invalid_argument("admissible_pair_check: datum not of dimension-1 type");
  if (!(zeta.field == Em))
    throw std::invalid_argument("admissible_pair_check: character not over the top field");
  if (Em.e != E.e)
    throw std::invalid_argument("admissible_pair_check: relative step not unramified");
  std::vector<TorusMorphism> Delta = relative_galois(Em, E);
  if ((long long)Delta.size() != Em.f / E.f)
    throw std::logic_error("admissible_pair_check: relative group has wrong order");
  return is_regular(zeta, Delta);
}

TameCharacter discriminant_as_character(const DiscriminantCharacter& d,
                                        const FieldSkeleton& F) {
  if (d.q != F.q)
    throw std::invalid_argument("discriminant_as_character: residue cardinality mismatch");
  return make_character(trivial_extension(F), d.unit_exp, RootOfUnity::from_sign(d.prime_sign));
}

}  // namespace tamecorr
