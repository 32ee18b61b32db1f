#include "tamecorr/tame_field.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace tamecorr {

namespace {

BigInt egcd_big(const BigInt& a, const BigInt& b, BigInt& x, BigInt& y) {
  if (b == 0) {
    x = 1;
    y = 0;
    return a;
  }
  BigInt x1, y1;
  BigInt g = egcd_big(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

BigInt invmod_big(const BigInt& a, const BigInt& m) {
  BigInt x, y;
  BigInt g = egcd_big(((a % m) + m) % m, m, x, y);
  if (g != 1) throw std::logic_error("invmod_big: not invertible");
  return ((x % m) + m) % m;
}

}  // namespace

FieldSkeleton FieldSkeleton::make(long long p, long long f0) {
  if (!is_prime_ll(p)) throw std::invalid_argument("FieldSkeleton: p not prime");
  if (f0 < 1 || f0 > 20) throw std::invalid_argument("FieldSkeleton: bad f0");
  FieldSkeleton F;
  F.p = p;
  F.f0 = f0;
  F.q = pow_ll(p, f0);
  return F;
}

std::string TameExtensionSpec::str() const {
  std::ostringstream os;
  os << "ext p=" << base.p << " f0=" << base.f0 << " e=" << e << " f=" << f << " u=" << u;
  return os.str();
}

TameExtensionSpec TameExtensionSpec::parse(const std::string& line) {
  std::istringstream is(line);
  std::string tag;
  is >> tag;
  if (tag != "ext") throw std::invalid_argument("extension parse: expected 'ext'");
  long long p = -1, f0 = -1, e = -1, f = -1, u = -1;
  std::string kv;
  while (is >> kv) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("extension parse: bad token " + kv);
    std::string key = kv.substr(0, eq);
    long long val = std::stoll(kv.substr(eq + 1));
    if (key == "p") p = val;
    else if (key == "f0") f0 = val;
    else if (key == "e") e = val;
    else if (key == "f") f = val;
    else if (key == "u") u = val;
    else throw std::invalid_argument("extension parse: unknown key " + key);
  }
  if (p < 0 || f0 < 0 || e < 0 || f < 0 || u < 0)
    throw std::invalid_argument("extension parse: missing key");
  return make_extension(FieldSkeleton::make(p, f0), e, f, u);
}

TameExtensionSpec make_extension(const FieldSkeleton& base, long long e, long long f,
                                 long long u) {
  if (e < 1 || f < 1) throw std::invalid_argument("make_extension: e,f >= 1 required");
  if (gcd_ll(e, base.p) != 1) throw std::invalid_argument("make_extension: p | e (wild)");
  TameExtensionSpec E;
  E.base = base;
  E.e = e;
  E.f = f;
  E.u = u;
  E.qE = pow_ll(base.q, f);
  if (u < 0 || u >= std::max(1LL, E.qE - 1))
    throw std::invalid_argument("make_extension: u out of range");
  return E;
}

TameExtensionSpec trivial_extension(const FieldSkeleton& base) {
  return make_extension(base, 1, 1, 0);
}

TameTorusElem torus_pow(const TameExtensionSpec& E, const TameTorusElem& x, long long k) {
  return {x.v * k, mod_ll(mulmod_ll(mod_ll(x.a, E.torus_mod()), mod_ll(k, E.torus_mod()),
                                    E.torus_mod()),
                          E.torus_mod())};
}

TameTorusElem TorusMorphism::apply(const TameTorusElem& x) const {
  long long MT = target.torus_mod();
  long long a = mod_ll(pi_image.a * x.v + zeta_mult * mod_ll(x.a, source.torus_mod()), MT);
  return {pi_image.v * x.v, a};
}

TorusMorphism TorusMorphism::identity(const TameExtensionSpec& E) {
  return make_torus_morphism(E, E, {1, 0}, 1);
}

TorusMorphism TorusMorphism::then(const TorusMorphism& next) const {
  if (!(target == next.source)) throw std::invalid_argument("then: morphisms not composable");
  return make_torus_morphism(source, next.target, next.apply(pi_image),
                             mod_ll(zeta_mult * next.zeta_mult, next.target.torus_mod()));
}

bool operator==(const TorusMorphism& a, const TorusMorphism& b) {
  return a.source == b.source && a.target == b.target && a.pi_image == b.pi_image &&
         a.zeta_mult == b.zeta_mult;
}

TorusMorphism make_torus_morphism(const TameExtensionSpec& source,
                                  const TameExtensionSpec& target,
                                  const TameTorusElem& pi_image, long long zeta_mult) {
  TorusMorphism m;
  m.source = source;
  m.target = target;
  long long MT = target.torus_mod();
  m.pi_image = {pi_image.v, mod_ll(pi_image.a, MT)};
  m.zeta_mult = mod_ll(zeta_mult, MT);
  // zeta_source must map to an element of order dividing ord(zeta_source)
  if (mod_ll(m.zeta_mult * source.torus_mod(), MT) != 0)
    throw std::invalid_argument("torus morphism: zeta image has wrong order");
  return m;
}

std::vector<TorusMorphism> aut_group(const TameExtensionSpec& E) {
  std::vector<TorusMorphism> out;
  long long M = E.torus_mod();
  for (long long i = 0; i < E.f; ++i) {
    long long qi = powmod_ll(E.base.q, i, M == 1 ? 1 : M);
    long long rhs = mod_ll(E.u * (qi - 1), M);
    for (long long j = 0; j < std::max(1LL, M); ++j) {
      if (M > 1 && mod_ll(j * E.e, M) != rhs) continue;
      out.push_back(make_torus_morphism(E, E, {1, j}, qi));
    }
  }
  return out;
}

TorusMorphism aut_inverse(const TorusMorphism& s) {
  if (!(s.source == s.target) || s.pi_image.v != 1)
    throw std::invalid_argument("aut_inverse: not an automorphism");
  long long M = s.source.torus_mod();
  long long zi = M == 1 ? 0 : invmod_ll(s.zeta_mult, M);
  long long j = mod_ll(-mulmod_ll(mod_ll(s.pi_image.a, M), zi, M), M);
  return make_torus_morphism(s.source, s.source, {1, j}, zi);
}

std::vector<std::pair<long long, long long>> sub_extension_params(const TameExtensionSpec& E) {
  std::vector<std::pair<long long, long long>> out;
  for (long long fL : divisors_of(E.f))
    for (long long eL : divisors_of(E.e)) {
      long long s = (E.qE - 1) / (pow_ll(E.base.q, fL) - 1);
      long long g = gcd_ll(eL, s);
      if (E.u % g == 0) out.emplace_back(eL, fL);
    }
  std::sort(out.begin(), out.end());
  return out;
}

SubExtension sub_extension(const TameExtensionSpec& E, long long eL, long long fL) {
  if (E.e % eL != 0 || E.f % fL != 0)
    throw std::invalid_argument("sub_extension: parameters do not divide");
  long long M = E.torus_mod();
  long long qL = pow_ll(E.base.q, fL);
  long long s = M / (qL - 1);
  // smallest t >= 0 with u + t*eL = 0 mod s
  long long g = gcd_ll(eL, s);
  if (E.u % g != 0)
    throw std::invalid_argument("sub_extension: no sub-extension with these parameters");
  long long t = 0;
  if (s > 1) {
    long long s1 = s / g;
    long long t0 = mod_ll(-(E.u / g) % s1 * invmod_ll(mod_ll(eL / g, s1), s1), s1);
    t = t0;
  }
  long long w = (E.u + t * eL) / s;
  long long uL = mod_ll(w, qL - 1);
  SubExtension L;
  L.field = make_extension(E.base, eL, fL, uL);
  L.t = t;
  L.inclusion = make_torus_morphism(L.field, E, {E.e / eL, t}, s);
  // pi_L^{eL} = zeta_L^{uL} pi_F must transport correctly
  TameTorusElem lhs = torus_pow(E, L.inclusion.pi_image, eL);
  TameTorusElem rhs = torus_mul(E, torus_pow(E, {0, s}, uL), base_prime_in(E));
  if (!(lhs == rhs)) throw std::logic_error("sub_extension: prime relation violated");
  return L;
}

TorusMorphism norm_map(const TameExtensionSpec& E, const SubExtension& L) {
  if (!(L.field.base == E.base) || E.e % L.field.e != 0 || E.f % L.field.f != 0)
    throw std::invalid_argument("norm_map: not a sub-extension");
  long long er = E.e / L.field.e;  // relative ramification
  long long fr = E.f / L.field.f;  // relative residue degree
  long long ML = L.field.torus_mod();
  // pi_E^{er} = zeta_E^{ur} pi_L with ur = -t
  long long ur = mod_ll(-L.t, E.torus_mod());
  long long a = ur;
  if (E.base.p % 2 == 1) a += (er + 1) * ((E.qE - 1) / 2);  // (-1)^{er+1} as a root of unity
  return make_torus_morphism(E, L.field, {fr, mod_ll(a, ML)}, mod_ll(er, ML));
}

TorusMorphism norm_map_to_base(const TameExtensionSpec& E) {
  SubExtension F = sub_extension(E, 1, 1);
  TorusMorphism n = norm_map(E, F);
  // re-express in the canonical base representative (prime pi_F itself):
  // F.field carries pi' = zeta_F^{uF} pi_F
  TameExtensionSpec base = trivial_extension(E.base);
  TorusMorphism adjust = make_torus_morphism(F.field, base, {1, F.field.u}, 1);
  return n.then(adjust);
}

TorusSubgroup torus_subgroup(long long M, const std::vector<TameTorusElem>& gens) {
  if (M < 1) throw std::invalid_argument("torus_subgroup: bad modulus");
  TorusSubgroup S;
  S.M = M;
  S.d = 0;
  S.b = 0;
  S.g = M;  // torsion part starts at {0} = <M>
  auto add_torsion = [&S](long long y) { S.g = gcd_ll(S.g, mod_ll(y, S.M)); };
  for (TameTorusElem gen : gens) {
    long long v = gen.v, a = gen.a;
    if (v < 0) {
      v = -v;
      a = -a;
    }
    a = mod_ll(a, M);
    if (v == 0) {
      add_torsion(a);
    } else if (S.d == 0) {
      S.d = v;
      S.b = a;
    } else {
      long long x, y;
      long long d2 = egcd_ll(S.d, v, x, y);
      long long b2 = mod_ll(x * S.b + y * a, M);
      add_torsion(S.b - (S.d / d2) * b2);
      add_torsion(a - (v / d2) * b2);
      S.d = d2;
      S.b = b2;
    }
  }
  if (S.g == 0) S.g = M;  // gcd chain stays a divisor of M; 0 only if M entered as 0
  S.b = S.d == 0 ? 0 : mod_ll(S.b, S.g);
  return S;
}

bool subgroup_contains(const TorusSubgroup& S, const TameTorusElem& x) {
  if (S.d == 0) return x.v == 0 && mod_ll(x.a, S.g) == 0;
  if (x.v % S.d != 0) return false;
  return mod_ll(x.a - (x.v / S.d) * S.b, S.g) == 0;
}

TorusSubgroup subgroup_intersect(const TorusSubgroup& S, const TorusSubgroup& T) {
  if (S.M != T.M) throw std::invalid_argument("subgroup_intersect: modulus mismatch");
  long long M = S.M;
  long long gI = lcm_ll(S.g, T.g);
  if (gI > M || M % gI != 0) gI = gcd_ll(gI, M);
  if (S.d == 0 || T.d == 0) {
    TorusSubgroup R;
    R.M = M;
    R.d = 0;
    R.b = 0;
    R.g = gI;
    return R;
  }
  long long D = lcm_ll(S.d, T.d);
  long long g0 = gcd_ll(S.g, T.g);
  long long c = mod_ll((D / S.d) * S.b - (D / T.d) * T.b, g0);
  long long tmin = g0 == 0 ? 1 : g0 / gcd_ll(g0, c == 0 ? g0 : c);
  long long dI = D * tmin;
  // y = (dI/S.d) S.b mod S.g  and  = (dI/T.d) T.b mod T.g : CRT
  long long c1 = mod_ll((dI / S.d) * S.b, S.g);
  long long c2 = mod_ll((dI / T.d) * T.b, T.g);
  long long gam = gcd_ll(S.g, T.g);
  if (mod_ll(c2 - c1, gam) != 0) throw std::logic_error("subgroup_intersect: CRT infeasible");
  long long k = S.g == 0 ? 0
                         : mod_ll(((c2 - c1) / gam) % (T.g / gam) *
                                      invmod_ll(mod_ll((S.g / gam), T.g / gam),
                                                T.g / gam == 0 ? 1 : T.g / gam),
                                  std::max(1LL, T.g / gam));
  long long y0 = mod_ll(c1 + S.g * k, lcm_ll(std::max(1LL, S.g), std::max(1LL, T.g)));
  std::vector<TameTorusElem> gens = {{dI, y0}, {0, gI}};
  return torus_subgroup(M, gens);
}

std::vector<ComplementaryCertificate> complementary_data(const TameExtensionSpec& E) {
  long long M = E.torus_mod();
  TorusSubgroup full = torus_subgroup(M, {{1, 0}, {0, 1}});
  std::vector<ComplementaryCertificate> out;
  for (auto [eL, fL] : sub_extension_params(E)) {
    ComplementaryCertificate c;
    c.sub = sub_extension(E, eL, fL);
    TameTorusElem piL = c.sub.inclusion.pi_image;
    TameTorusElem zetaL = {0, c.sub.inclusion.zeta_mult};
    c.embedded = torus_subgroup(M, {piL, zetaL});
    c.intersection_ok = subgroup_intersect(full, c.embedded) == c.embedded;
    TameTorusElem lhs = torus_mul(E, torus_pow(E, piL, eL),
                                  torus_pow(E, zetaL, -c.sub.field.u));
    c.base_prime_ok = lhs == base_prime_in(E);
    out.push_back(std::move(c));
  }
  return out;
}

FiniteGroupModel tame_weil_model(const FieldSkeleton& F, long long N, long long R) {
  if (N < 1) throw std::invalid_argument("tame_weil_model: N < 1");
  if (gcd_ll(N, F.p) != 1) throw std::invalid_argument("tame_weil_model: N not coprime to p");
  long long r = mult_order_ll(F.q, N);
  if (R == 0) R = r;
  if (R % r != 0) throw std::invalid_argument("tame_weil_model: R not a multiple of ord_N(q)");
  long long n = N * R;
  if (n > 4608) throw std::invalid_argument("tame_weil_model: group too large");
  std::vector<long long> qpow((size_t)R);
  qpow[0] = mod_ll(1, N);
  for (long long b = 1; b < R; ++b) qpow[(size_t)b] = mod_ll(qpow[(size_t)b - 1] * F.q, N);
  auto law = [N, R, qpow](int x, int y) {
    long long a1 = x % N, b1 = x / N, a2 = y % N, b2 = y / N;
    return (int)(mod_ll(a1 + qpow[(size_t)b1] * a2, N) + N * mod_ll(b1 + b2, R));
  };
  std::ostringstream nm;
  nm << "weil q" << F.q << " N" << N << " R" << R;
  return FiniteGroupModel::from_law(nm.str(), (int)n, law);
}

int WeilModelData::elem(long long a, long long b) const {
  return (int)(mod_ll(a, N) + N * mod_ll(b, R));
}

WeilModelData weil_model_for(const TameExtensionSpec& E) {
  WeilModelData md;
  md.F = E.base;
  long long q = E.base.q;
  md.N = lcm_ll(E.e, q - 1);
  long long r = mult_order_ll(q, md.N);
  long long L0 = lcm_ll(r, E.f);
  bool found = false;
  for (long long k = 1; k <= 64 && !found; ++k) {
    long long R = k * L0;
    if (md.N * R > 4608) break;
    BigInt Q = pow_big(q, R) - 1;
    BigInt S = Q / (pow_big(q, E.f) - 1);
    BigInt g = boost::multiprecision::gcd(BigInt(E.e), Q);
    if ((E.u * S) % g != 0) continue;
    BigInt Q1 = Q / g;
    BigInt y = ((E.u * S) / g) % Q1;
    y = (y * invmod_big(BigInt(E.e) / g, Q1)) % Q1;
    md.R = R;
    md.y = y;
    found = true;
  }
  if (!found) throw std::runtime_error("weil_model_for: no admissible truncation found");
  md.W = tame_weil_model(E.base, md.N, md.R);

  BigInt Q = pow_big(q, md.R) - 1;
  std::vector<BigInt> qb((size_t)md.R);
  for (long long b = 0; b < md.R; ++b) qb[(size_t)b] = pow_big(q, b);
  BigInt Qe = Q / E.e;  // e | N | q^R - 1
  for (long long b = 0; b < md.R; ++b) {
    if (b % E.f != 0) continue;
    for (long long a = 0; a < md.N; ++a) {
      BigInt val = (md.y * (qb[(size_t)b] - 1) + Qe * a) % Q;
      if (val == 0) md.stab_E.push_back(md.elem(a, b));
    }
  }
  std::sort(md.stab_E.begin(), md.stab_E.end());
  if ((long long)md.stab_E.size() * E.degree() != md.N * md.R)
    throw std::logic_error("weil_model_for: stabilizer has wrong index");
  if (!md.W.is_subgroup(md.stab_E))
    throw std::logic_error("weil_model_for: stabilizer not a subgroup");
  return md;
}

int coset_permutation_sign_within(const FiniteGroupModel& G, const std::vector<int>& ambient,
                                  const std::vector<int>& K, int h) {
  std::vector<int> coset_id((size_t)G.n, -1);
  std::vector<int> reps;
  for (int x : ambient) {
    if (coset_id[(size_t)x] >= 0) continue;
    int c = (int)reps.size();
    reps.push_back(x);
    for (int k : K) coset_id[(size_t)G.mulE(x, k)] = c;
  }
  int m = (int)reps.size();
  std::vector<int> perm((size_t)m);
  for (int c = 0; c < m; ++c) {
    int img = coset_id[(size_t)G.mulE(h, reps[(size_t)c])];
    if (img < 0) throw std::logic_error("coset permutation: image outside ambient");
    perm[(size_t)c] = img;
  }
  std::vector<char> seen((size_t)m, 0);
  int cycles = 0;
  for (int c = 0; c < m; ++c) {
    if (seen[(size_t)c]) continue;
    ++cycles;
    for (int x = c; !seen[(size_t)x]; x = perm[(size_t)x]) seen[(size_t)x] = 1;
  }
  return (m - cycles) % 2 == 0 ? 1 : -1;
}

int coset_permutation_sign(const FiniteGroupModel& G, const std::vector<int>& H, int g) {
  std::vector<int> all((size_t)G.n);
  for (int i = 0; i < G.n; ++i) all[(size_t)i] = i;
  return coset_permutation_sign_within(G, all, H, g);
}

int DiscriminantCharacter::eval_sign(const TameTorusElem& x) const {
  int s = 1;
  if (mod_ll(x.v, 2) == 1) s *= prime_sign;
  if (q > 2) {
    long long r = mod_ll(unit_exp * x.a, q - 1);
    if (r == (q - 1) / 2 && (q - 1) % 2 == 0) s = -s;
    else if (r != 0) throw std::logic_error("discriminant eval: value not +-1");
  }
  return s;
}

DiscriminantCharacter discriminant_character(const TameExtensionSpec& E) {
  WeilModelData md = weil_model_for(E);
  long long q = E.base.q;
  int dt = coset_permutation_sign(md.W, md.stab_E, md.elem(0, 1));
  int du = q == 2 ? 1 : coset_permutation_sign(md.W, md.stab_E, md.elem(md.N / (q - 1), 0));
  if (du == -1 && (q - 1) % 2 != 0)
    throw std::logic_error("discriminant_character: nontrivial unit part on odd mu");
  DiscriminantCharacter d;
  d.q = q;
  d.unit_exp = du == -1 ? (q - 1) / 2 : 0;
  // t fixes the model prime pi_T with pi_T^N = pi_F; the uniformizer whose
  // reciprocity element does that is -pi_F, so correct by the value at -1
  int corr = 1;
  if (du == -1 && mod_ll(d.unit_exp * ((q - 1) / 2), q - 1) == (q - 1) / 2) corr = -1;
  d.prime_sign = dt * corr;
  return d;
}

}  // namespace tamecorr
