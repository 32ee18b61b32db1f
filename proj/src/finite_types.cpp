#include "tamecorr/finite_types.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace tamecorr {

namespace {

TameExtensionSpec unramified_of_degree(const FieldSkeleton& F, int n) {
  return make_extension(F, 1, n, 0);
}

// the base torus sits inside E's torus with zeta_F = zeta_E^{M/(q-1)}
TorusMorphism base_inclusion(const TameExtensionSpec& E) {
  return make_torus_morphism(trivial_extension(E.base), E, base_prime_in(E),
                             E.torus_mod() / (E.base.q - 1));
}

bool is_identity_aut(const TorusMorphism& d) {
  return d == TorusMorphism::identity(d.source);
}

}  // namespace

CuspidalTypeParam make_cuspidal_param(int n, const FieldSkeleton& F,
                                      const TameCharacter& phi) {
  if (n < 1) throw std::invalid_argument("cuspidal param: rank must be positive");
  TameExtensionSpec E = unramified_of_degree(F, n);
  if (!(phi.field == E))
    throw std::invalid_argument("cuspidal param: character lives on the wrong torus");
  if (!is_regular(phi, aut_group(E)))
    throw std::invalid_argument("cuspidal param: character is not regular");
  return {n, F, phi};
}

bool params_equivalent(const CuspidalTypeParam& a, const CuspidalTypeParam& b) {
  if (a.n != b.n || !(a.base == b.base)) return false;
  for (const auto& d : aut_group(a.phi.field))
    if (galois_act(a.phi, d) == b.phi) return true;
  return false;
}

Cyclotomic green_trace(const CuspidalTypeParam& param, const TameTorusElem& z,
                       const TameTorusElem& zeta) {
  const TameExtensionSpec& E = param.phi.field;
  if (zeta.v != 0) throw std::invalid_argument("green_trace: zeta must be a unit");
  std::vector<TorusMorphism> Gamma = aut_group(E);
  for (const auto& d : Gamma)
    if (!is_identity_aut(d) && d.apply(zeta) == zeta)
      throw std::invalid_argument("green_trace: zeta is not regular");

  RootOfUnity at_z = param.phi.value_at(base_inclusion(E).apply(z));
  Cyclotomic sum;
  for (const auto& d : Gamma) sum += galois_act(param.phi, d).value_at(zeta).to_cyclotomic();
  Cyclotomic out = at_z.to_cyclotomic() * sum;
  if (param.n % 2 == 0) out = -out;
  return out.reduced();
}

int GlModel::id_of(const std::vector<long long>& mat) const {
  if ((int)mat.size() != n * n) throw std::invalid_argument("gl model: wrong matrix shape");
  long long code = 0;
  for (long long c : mat) {
    if (c < 0 || c >= coeff->q) throw std::invalid_argument("gl model: entry out of range");
    code = code * coeff->q + c;
  }
  int id = code_to_id[(size_t)code];
  if (id < 0) throw std::invalid_argument("gl model: matrix is singular");
  return id;
}

GlModel gl_model(int n, const std::shared_ptr<const FiniteField>& coeff, long long bound) {
  if (n < 1 || n > 3) throw std::invalid_argument("gl model: rank must be 1, 2 or 3");
  long long q = coeff->q;
  long long qn = pow_ll(q, n);
  long long order = 1;
  for (int i = 0; i < n; ++i) order *= qn - pow_ll(q, i);
  if (order > bound) throw std::invalid_argument("gl model: group order exceeds the bound");

  const FiniteField& K = *coeff;
  auto det = [&](const std::vector<long long>& m) {
    if (n == 1) return m[0];
    if (n == 2) return K.sub(K.mul(m[0], m[3]), K.mul(m[1], m[2]));
    long long t0 = K.mul(m[0], K.sub(K.mul(m[4], m[8]), K.mul(m[5], m[7])));
    long long t1 = K.mul(m[1], K.sub(K.mul(m[3], m[8]), K.mul(m[5], m[6])));
    long long t2 = K.mul(m[2], K.sub(K.mul(m[3], m[7]), K.mul(m[4], m[6])));
    return K.add(K.sub(t0, t1), t2);
  };

  long long total = pow_ll(q, n * n);
  std::vector<std::vector<long long>> mats;
  std::vector<int> code_to_id((size_t)total, -1);
  for (long long code = 0; code < total; ++code) {
    std::vector<long long> m((size_t)(n * n));
    long long c = code;
    for (int i = n * n - 1; i >= 0; --i) {
      m[(size_t)i] = c % q;
      c /= q;
    }
    if (det(m) != 0) {
      code_to_id[(size_t)code] = (int)mats.size();
      mats.push_back(std::move(m));
    }
  }
  if ((long long)mats.size() != order)
    throw std::logic_error("gl model: enumeration does not match the order formula");

  auto law = [&](int a, int b) {
    const auto& x = mats[(size_t)a];
    const auto& y = mats[(size_t)b];
    long long code = 0;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        long long s = 0;
        for (int t = 0; t < n; ++t)
          s = K.add(s, K.mul(x[(size_t)(r * n + t)], y[(size_t)(t * n + c)]));
        code = code * q + s;
      }
    return code_to_id[(size_t)code];
  };
  std::ostringstream name;
  name << "gl n=" << n << " q=" << q;
  FiniteGroupModel group = FiniteGroupModel::from_law(name.str(), (int)order, law);

  GlModel g;
  g.n = n;
  g.coeff = coeff;
  g.group = std::move(group);
  g.mats = std::move(mats);
  g.code_to_id = std::move(code_to_id);
  for (int id = 0; id < (int)g.mats.size(); ++id) {
    bool upper = true;
    for (int r = 0; r < n && upper; ++r)
      for (int c = 0; c < r; ++c)
        if (g.mats[(size_t)id][(size_t)(r * n + c)] != 0) { upper = false; break; }
    if (upper) g.borel.push_back(id);
  }
  return g;
}

namespace {

// multiplication matrices on the big field, viewed as an n-dimensional space
// over the coefficient field with basis 1, w, ..., w^{n-1} (w the big
// generator): connects unit-group exponents to conjugacy classes of the
// matrix model
struct EllipticClasses {
  const GlModel& gl;
  std::shared_ptr<const FiniteField> big;
  std::vector<long long> emb;              // coeff code -> big code
  std::vector<std::vector<long long>> ai;  // inverse basis matrix over F_p
  int D, p, f0;

  explicit EllipticClasses(const GlModel& g)
      : gl(g),
        big(FiniteField::get(g.coeff->p, g.coeff->k * g.n)),
        emb(big->embedding_from(*g.coeff)),
        D(g.coeff->k * g.n),
        p(g.coeff->p),
        f0(g.coeff->k) {
    // columns: base-p digits of w^i * emb(t^j), the F_p-basis of the space
    std::vector<std::vector<long long>> A((size_t)D, std::vector<long long>((size_t)D, 0));
    for (int i = 0; i < gl.n; ++i)
      for (int j = 0; j < f0; ++j) {
        long long x = big->mul(big->exp(i), emb[(size_t)pow_ll(p, j)]);
        for (int r = 0; r < D; ++r) {
          A[(size_t)r][(size_t)(i * f0 + j)] = x % p;
          x /= p;
        }
      }
    ai = invert(A);
  }

  std::vector<std::vector<long long>> invert(std::vector<std::vector<long long>> A) const {
    std::vector<std::vector<long long>> I((size_t)D, std::vector<long long>((size_t)D, 0));
    for (int i = 0; i < D; ++i) I[(size_t)i][(size_t)i] = 1;
    for (int c = 0; c < D; ++c) {
      int piv = c;
      while (piv < D && A[(size_t)piv][(size_t)c] == 0) ++piv;
      if (piv == D) throw std::logic_error("elliptic classes: basis is degenerate");
      std::swap(A[(size_t)c], A[(size_t)piv]);
      std::swap(I[(size_t)c], I[(size_t)piv]);
      long long iv = invmod_ll(A[(size_t)c][(size_t)c], p);
      for (int j = 0; j < D; ++j) {
        A[(size_t)c][(size_t)j] = A[(size_t)c][(size_t)j] * iv % p;
        I[(size_t)c][(size_t)j] = I[(size_t)c][(size_t)j] * iv % p;
      }
      for (int r = 0; r < D; ++r) {
        if (r == c) continue;
        long long f = A[(size_t)r][(size_t)c];
        if (f == 0) continue;
        for (int j = 0; j < D; ++j) {
          A[(size_t)r][(size_t)j] = mod_ll(A[(size_t)r][(size_t)j] - f * A[(size_t)c][(size_t)j], p);
          I[(size_t)r][(size_t)j] = mod_ll(I[(size_t)r][(size_t)j] - f * I[(size_t)c][(size_t)j], p);
        }
      }
    }
    return I;
  }

  // coefficient-field coordinates of a big-field element on the w-basis
  std::vector<long long> coords(long long x) const {
    std::vector<long long> dig((size_t)D);
    for (int r = 0; r < D; ++r) {
      dig[(size_t)r] = x % p;
      x /= p;
    }
    std::vector<long long> out((size_t)gl.n, 0);
    for (int i = 0; i < gl.n; ++i)
      for (int j = 0; j < f0; ++j) {
        long long s = 0;
        for (int r = 0; r < D; ++r) s += ai[(size_t)(i * f0 + j)][(size_t)r] * dig[(size_t)r];
        out[(size_t)i] += (s % p) * pow_ll(p, j);
      }
    return out;
  }

  // conjugacy class of multiplication by generator^b
  int class_of_power(long long b) const {
    long long g = big->exp(b);
    std::vector<long long> mat((size_t)(gl.n * gl.n));
    for (int i = 0; i < gl.n; ++i) {
      std::vector<long long> col = coords(big->mul(g, big->exp(i)));
      for (int r = 0; r < gl.n; ++r) mat[(size_t)(r * gl.n + i)] = col[(size_t)r];
    }
    return gl.group.class_of[(size_t)gl.id_of(mat)];
  }
};

}  // namespace

CensusResult cuspidal_census(int n, long long q, long long bound) {
  if (n < 1 || n > 3) throw std::invalid_argument("census: rank must be 1, 2 or 3");
  long long p = 0, t = q;
  for (long long d = 2; d * d <= q; ++d)
    if (q % d == 0) { p = d; break; }
  if (p == 0) p = q;
  int k = 0;
  while (t % p == 0) { t /= p; ++k; }
  if (t != 1 || q < 2) throw std::invalid_argument("census: q must be a prime power");

  auto coeff = FiniteField::get((int)p, k);
  GlModel gl = gl_model(n, coeff, bound);
  CharacterTable T = dixon_character_table(gl.group, bound);

  CensusResult res;
  res.n = n;
  res.q = q;
  res.group_order = gl.group.n;

  // cuspidal rows: expected degree, and zero inner product with every
  // character induced from the upper-triangular subgroup (vacuous at rank 1)
  long long expected = 1;
  for (int i = 1; i < n; ++i) expected *= pow_ll(q, i) - 1;
  std::vector<int> cuspidal_rows;
  std::vector<std::vector<long long>> inv_diag_logs;  // per borel element
  for (int id : gl.borel) {
    const auto& m = gl.mats[(size_t)gl.group.invE(id)];
    std::vector<long long> logs((size_t)n);
    for (int i = 0; i < n; ++i) logs[(size_t)i] = coeff->dlog(m[(size_t)(i * n + i)]);
    inv_diag_logs.push_back(std::move(logs));
  }
  long long nlambda = pow_ll(q - 1, n);
  for (int r = 0; r < T.k; ++r) {
    if (T.degrees[(size_t)r] != expected) continue;
    bool cusp = true;
    for (long long lam = 0; lam < nlambda && cusp && n > 1; ++lam) {
      std::vector<long long> l((size_t)n);
      long long c = lam;
      for (int i = 0; i < n; ++i) {
        l[(size_t)i] = c % (q - 1);
        c /= (q - 1);
      }
      Cyclotomic s;
      for (size_t bi = 0; bi < gl.borel.size(); ++bi) {
        long long e = 0;
        for (int i = 0; i < n; ++i) e += l[(size_t)i] * inv_diag_logs[bi][(size_t)i];
        int cls = gl.group.class_of[(size_t)gl.borel[bi]];
        s += T.rows[(size_t)r][(size_t)cls] *
             Cyclotomic::root_of_unity(q - 1, mod_ll(e, q - 1));
      }
      cusp = s.is_zero();
    }
    if (cusp) cuspidal_rows.push_back(r);
  }
  for (int r : cuspidal_rows) res.cuspidal_degrees.push_back(T.degrees[(size_t)r]);
  std::sort(res.cuspidal_degrees.begin(), res.cuspidal_degrees.end());
  res.cuspidal_count = (int)cuspidal_rows.size();

  // torus side: regular character orbits of the degree-n unramified torus
  FieldSkeleton F = FieldSkeleton::make(p, k);
  TameExtensionSpec E = unramified_of_degree(F, n);
  std::vector<CharacterOrbit> orbits = regular_orbits(E, aut_group(E), 1);
  res.orbit_count = (int)orbits.size();

  // regular unit exponents and their elliptic classes
  long long M = E.torus_mod();
  std::vector<long long> reg;
  for (long long b = 0; b < M; ++b) {
    bool ok = true;
    for (int i = 1; i < n && ok; ++i) ok = mod_ll(b * pow_ll(q, i), M) != mod_ll(b, M);
    if (ok) reg.push_back(b);
  }
  EllipticClasses ec(gl);
  std::vector<int> cls((size_t)reg.size());
  for (size_t i = 0; i < reg.size(); ++i) cls[i] = ec.class_of_power(reg[i]);

  // value tables: greens per orbit, oracle rows per cuspidal
  std::vector<std::vector<Cyclotomic>> greens;
  for (const auto& o : orbits) {
    CuspidalTypeParam par = make_cuspidal_param(n, F, o.members[0]);
    std::vector<Cyclotomic> row;
    for (long long b : reg) row.push_back(green_trace(par, {0, 0}, {0, b}));
    greens.push_back(std::move(row));
  }
  bool ok = res.cuspidal_count == res.orbit_count;
  std::vector<int> taken((size_t)orbits.size(), 0);
  for (int r : cuspidal_rows) {
    int matches = 0, which = -1;
    for (size_t o = 0; o < greens.size(); ++o) {
      bool all = true;
      for (size_t i = 0; i < reg.size() && all; ++i)
        all = T.rows[(size_t)r][(size_t)cls[i]] == greens[o][i];
      if (all) { ++matches; which = (int)o; }
    }
    if (matches != 1) { ok = false; break; }
    if (++taken[(size_t)which] > 1) { ok = false; break; }
  }
  res.traces_match = ok;
  return res;
}

}  // namespace tamecorr
