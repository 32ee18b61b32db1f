#include "tamecorr/symplectic.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "tamecorr/finite_field.hpp"

namespace tamecorr {

namespace {

using Vec = std::vector<long long>;
using Mat = std::vector<Vec>;

constexpr long long kGroupCap = 10000;     // operator-group size bound in decompose
constexpr long long kSubgroupCap = 1 << 20;
constexpr long long kSearchCap = 100000;   // submodule-search breadth bound

long long v2_ll(long long x) {
  long long v = 0;
  while (x % 2 == 0) { x /= 2; ++v; }
  return v;
}

// ---- dense linear algebra mod p ----

Mat mat_id(long long n) {
  Mat I(n, Vec(n, 0));
  for (long long i = 0; i < n; ++i) I[i][i] = 1;
  return I;
}

Mat mat_mul(const Mat& A, const Mat& B, long long p) {
  long long n = (long long)A.size();
  long long m = n == 0 ? 0 : (long long)B[0].size();
  long long k = (long long)B.size();
  Mat C(n, Vec(m, 0));
  for (long long i = 0; i < n; ++i)
    for (long long t = 0; t < k; ++t) {
      long long a = A[i][t];
      if (a == 0) continue;
      for (long long j = 0; j < m; ++j) C[i][j] = (C[i][j] + a * B[t][j]) % p;
    }
  return C;
}

Vec mat_vec(const Mat& A, const Vec& v, long long p) {
  long long n = (long long)A.size();
  Vec r(n, 0);
  for (long long i = 0; i < n; ++i) {
    long long s = 0;
    for (size_t j = 0; j < v.size(); ++j) s += A[i][j] * v[j] % p;
    r[i] = s % p;
  }
  return r;
}

Mat mat_transpose(const Mat& A) {
  long long n = (long long)A.size();
  long long m = n == 0 ? 0 : (long long)A[0].size();
  Mat T(m, Vec(n, 0));
  for (long long i = 0; i < n; ++i)
    for (long long j = 0; j < m; ++j) T[j][i] = A[i][j];
  return T;
}

Mat mat_pow(Mat A, long long e, long long p) {
  Mat R = mat_id((long long)A.size());
  while (e > 0) {
    if (e & 1) R = mat_mul(R, A, p);
    A = mat_mul(A, A, p);
    e >>= 1;
  }
  return R;
}

bool is_identity(const Mat& A) {
  for (size_t i = 0; i < A.size(); ++i)
    for (size_t j = 0; j < A.size(); ++j)
      if (A[i][j] != (i == j ? 1 : 0)) return false;
  return true;
}

// multiplicative order of A, or 0 if it exceeds cap
long long mat_order(const Mat& A, long long p, long long cap) {
  Mat P = A;
  for (long long o = 1; o <= cap; ++o) {
    if (is_identity(P)) return o;
    P = mat_mul(P, A, p);
  }
  return 0;
}

// reduced row echelon form in place; zero rows dropped; returns rank
long long rref(Mat& rows, long long p) {
  long long r = 0;
  long long cols = rows.empty() ? 0 : (long long)rows[0].size();
  for (long long c = 0; c < cols && r < (long long)rows.size(); ++c) {
    long long piv = -1;
    for (long long i = r; i < (long long)rows.size(); ++i)
      if (rows[i][c] != 0) { piv = i; break; }
    if (piv < 0) continue;
    std::swap(rows[r], rows[piv]);
    long long inv = invmod_ll(rows[r][c], p);
    for (long long j = 0; j < cols; ++j) rows[r][j] = rows[r][j] * inv % p;
    for (long long i = 0; i < (long long)rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      long long f = rows[i][c];
      for (long long j = 0; j < cols; ++j)
        rows[i][j] = mod_ll(rows[i][j] - f * rows[r][j], p);
    }
    ++r;
  }
  rows.resize(r);
  return r;
}

// reduce v against RREF rows; result is zero iff v lies in their span
Vec reduce_against(Vec v, const Mat& rows, long long p) {
  for (const Vec& row : rows) {
    long long lead = -1;
    for (size_t j = 0; j < row.size(); ++j)
      if (row[j] != 0) { lead = (long long)j; break; }
    if (lead < 0 || v[lead] == 0) continue;
    long long f = v[lead];
    for (size_t j = 0; j < v.size(); ++j) v[j] = mod_ll(v[j] - f * row[j], p);
  }
  return v;
}

bool vec_is_zero(const Vec& v) {
  for (long long x : v)
    if (x != 0) return false;
  return true;
}

bool subspace_contains_vec(const Mat& rows, const Vec& v, long long p) {
  return vec_is_zero(reduce_against(v, rows, p));
}

// RREF rows spanning the solution space of A x = 0
Mat kernel_basis(const Mat& A, long long p) {
  long long m = (long long)A.size();
  long long n = m == 0 ? 0 : (long long)A[0].size();
  if (n == 0) return {};
  Mat R = A;
  rref(R, p);
  std::vector<long long> pivot_col;
  std::vector<bool> is_pivot(n, false);
  for (const Vec& row : R)
    for (long long j = 0; j < n; ++j)
      if (row[j] != 0) { pivot_col.push_back(j); is_pivot[j] = true; break; }
  Mat K;
  for (long long f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    Vec x(n, 0);
    x[f] = 1;
    for (size_t r = 0; r < R.size(); ++r) x[pivot_col[r]] = mod_ll(-R[r][f], p);
    K.push_back(x);
  }
  rref(K, p);
  return K;
}

Mat mat_inverse(const Mat& A, long long p) {
  long long n = (long long)A.size();
  Mat W(n, Vec(2 * n, 0));
  for (long long i = 0; i < n; ++i) {
    for (long long j = 0; j < n; ++j) W[i][j] = A[i][j];
    W[i][n + i] = 1;
  }
  long long r = rref(W, p);
  if (r != n) throw std::logic_error("mat_inverse: singular");
  for (long long i = 0; i < n; ++i)
    for (long long j = 0; j < n; ++j)
      if (W[i][j] != (i == j ? 1 : 0)) throw std::logic_error("mat_inverse: singular");
  Mat I(n, Vec(n, 0));
  for (long long i = 0; i < n; ++i)
    for (long long j = 0; j < n; ++j) I[i][j] = W[i][n + j];
  return I;
}

long long mat_rank(Mat A, long long p) { return rref(A, p); }

// span of {a} cap span of {b}
Mat subspace_intersection(const Mat& a, const Mat& b, long long p) {
  if (a.empty() || b.empty()) return {};
  long long n = (long long)a[0].size();
  long long ka = (long long)a.size(), kb = (long long)b.size();
  Mat C(n, Vec(ka + kb, 0));
  for (long long t = 0; t < n; ++t) {
    for (long long i = 0; i < ka; ++i) C[t][i] = a[i][t];
    for (long long j = 0; j < kb; ++j) C[t][ka + j] = mod_ll(-b[j][t], p);
  }
  Mat K = kernel_basis(C, p);
  Mat out;
  for (const Vec& coef : K) {
    Vec v(n, 0);
    for (long long i = 0; i < ka; ++i)
      for (long long t = 0; t < n; ++t) v[t] = (v[t] + coef[i] * a[i][t]) % p;
    out.push_back(v);
  }
  rref(out, p);
  return out;
}

// {x : x^T G b = 0 for all basis rows b}
Mat orthogonal_complement(const Mat& basis, const Mat& G, long long p) {
  long long n = (long long)G.size();
  if (basis.empty()) return mat_id(n);
  Mat C;
  for (const Vec& b : basis) C.push_back(mat_vec(G, b, p));
  return kernel_basis(C, p);
}

long long form_eval(const Mat& G, const Vec& u, const Vec& v, long long p) {
  long long s = 0;
  for (size_t i = 0; i < u.size(); ++i) {
    if (u[i] == 0) continue;
    long long t = 0;
    for (size_t j = 0; j < v.size(); ++j) t += G[i][j] * v[j] % p;
    s = (s + u[i] % p * (t % p)) % p;
  }
  return mod_ll(s, p);
}

// deterministic enumeration of the nonzero vectors of a subspace
template <typename Fn>
void for_each_subspace_vector(const Mat& basis, long long p, Fn&& fn) {
  long long k = (long long)basis.size();
  if (k == 0) return;
  std::vector<long long> coef(k, 0);
  while (true) {
    long long t = k - 1;
    while (t >= 0 && coef[t] == p - 1) { coef[t] = 0; --t; }
    if (t < 0) return;
    ++coef[t];
    Vec v(basis[0].size(), 0);
    for (long long i = 0; i < k; ++i) {
      if (coef[i] == 0) continue;
      for (size_t j = 0; j < v.size(); ++j) v[j] = (v[j] + coef[i] * basis[i][j]) % p;
    }
    if (!fn(v)) return;
  }
}

// smallest C-invariant subspace containing v
Mat cyclic_closure(const Vec& v, const std::vector<Mat>& action, long long p) {
  Mat rows = {v};
  rref(rows, p);
  bool grew = true;
  while (grew) {
    grew = false;
    for (const Mat& A : action) {
      Mat next = rows;
      for (const Vec& r : rows) next.push_back(mat_vec(A, r, p));
      long long before = (long long)rows.size();
      rref(next, p);
      if ((long long)next.size() > before) {
        rows = next;
        grew = true;
      }
    }
  }
  return rows;
}

Vec digits_of(long long packed, long long p, long long k) {
  Vec d(k, 0);
  for (long long i = 0; i < k; ++i) {
    d[i] = packed % p;
    packed /= p;
  }
  return d;
}

// matrix of multiplication by g on F_{p^k} in the representation basis 1, t, ...
Mat mult_matrix(const FiniteField& F, long long g) {
  Mat M(F.k, Vec(F.k, 0));
  for (long long j = 0; j < F.k; ++j) {
    Vec col = digits_of(F.mul(g, pow_ll(F.p, (int)j)), F.p, F.k);
    for (long long i = 0; i < F.k; ++i) M[i][j] = col[i];
  }
  return M;
}

// order of p mod m, or 0 if it exceeds cap
long long ord_mod_capped(long long p, long long m, long long cap) {
  if (m == 1) return 1;
  long long v = mod_ll(p, m), o = 1;
  if (gcd_ll(v, m) != 1) return 0;
  while (v != 1) {
    v = mulmod_ll(v, p, m);
    if (++o > cap) return 0;
  }
  return o;
}

bool minus_one_is_power(long long p, long long N) {
  if (N <= 2) return false;
  long long v = mod_ll(p, N);
  while (true) {
    if (v == N - 1) return true;
    if (v == 1) return false;
    v = mulmod_ll(v, p, N);
  }
}

// monic irreducible over F_p with roots zeta_M^{a p^j}; coefficients in [0,p)
Vec coset_polynomial(long long p, long long M, long long a) {
  if (M == 1) return {mod_ll(-1, p), 1};
  long long s = mult_order_ll(p, M);
  auto F = FiniteField::get((int)p, (int)s);
  long long step = (F->q - 1) / M;
  std::vector<long long> poly = {1};  // packed field elements, low to high
  for (long long j = 0, e = mod_ll(a, M); j < s; ++j, e = mulmod_ll(e, p, M)) {
    long long root = F->exp(step * e);
    std::vector<long long> next(poly.size() + 1, 0);
    for (size_t t = 0; t < poly.size(); ++t) {
      next[t + 1] = F->add(next[t + 1], poly[t]);
      next[t] = F->sub(next[t], F->mul(root, poly[t]));
    }
    poly = next;
  }
  Vec out(poly.size());
  for (size_t t = 0; t < poly.size(); ++t) {
    if (poly[t] >= p) throw std::logic_error("coset polynomial not over the prime field");
    out[t] = poly[t];
  }
  return out;
}

Mat poly_eval(const Vec& coeffs, const Mat& B, long long p) {
  long long n = (long long)B.size();
  Mat X(n, Vec(n, 0));
  for (long long t = (long long)coeffs.size() - 1; t >= 0; --t) {
    X = mat_mul(X, B, p);
    for (long long i = 0; i < n; ++i) X[i][i] = (X[i][i] + coeffs[t]) % p;
  }
  return X;
}

Vec tuple_mod(Vec x, const std::vector<long long>& orders) {
  if (x.size() != orders.size()) throw std::invalid_argument("bad subgroup generator");
  for (size_t i = 0; i < x.size(); ++i) x[i] = mod_ll(x[i], orders[i]);
  return x;
}

}  // namespace

// ---- BarCharacter ----

long long BarCharacter::order() const {
  long long N = 1;
  for (const RootOfUnity& v : vals) N = lcm_ll(N, v.order());
  return N;
}

RootOfUnity BarCharacter::value_at(const std::vector<long long>& x) const {
  if (x.size() != factor_orders.size())
    throw std::invalid_argument("character argument has wrong length");
  RootOfUnity r = RootOfUnity::one();
  for (size_t i = 0; i < vals.size(); ++i) r = r * vals[i].pow(x[i]);
  return r;
}

BarCharacter BarCharacter::power(long long k) const {
  BarCharacter out = *this;
  for (RootOfUnity& v : out.vals) v = v.pow(k);
  return out;
}

long long BarCharacter::degree(long long p) const { return mult_order_ll(p, order()); }

std::vector<long long> BarCharacter::exponents() const {
  long long N = order();
  std::vector<long long> e(vals.size());
  for (size_t i = 0; i < vals.size(); ++i) e[i] = vals[i].exp * (N / vals[i].ord) % N;
  return e;
}

BarCharacter bar_character(const std::vector<long long>& factor_orders, long long N,
                           const std::vector<long long>& exps) {
  if (N < 1) throw std::invalid_argument("character order must be positive");
  if (exps.size() != factor_orders.size())
    throw std::invalid_argument("character exponent count mismatch");
  BarCharacter chi;
  chi.factor_orders = factor_orders;
  for (size_t i = 0; i < exps.size(); ++i) {
    RootOfUnity v(N, exps[i]);
    if (factor_orders[i] < 1 || factor_orders[i] % v.order() != 0)
      throw std::invalid_argument("character value order does not divide factor order");
    chi.vals.push_back(v);
  }
  return chi;
}

BarCharacter trivial_bar_character(const std::vector<long long>& factor_orders) {
  return bar_character(factor_orders, 1, std::vector<long long>(factor_orders.size(), 0));
}

bool anisotropic_capable(const BarCharacter& chi, long long p) {
  return minus_one_is_power(p, chi.order());
}

BarCharacter orbit_representative(const BarCharacter& chi, long long p, bool up_to_inverse) {
  std::vector<BarCharacter> orbit;
  BarCharacter cur = chi;
  do {
    orbit.push_back(cur);
    cur = cur.frobenius(p);
  } while (cur != chi);
  if (up_to_inverse) {
    BarCharacter inv = chi.inverse();
    cur = inv;
    do {
      orbit.push_back(cur);
      cur = cur.frobenius(p);
    } while (cur != inv);
  }
  const BarCharacter* best = &orbit[0];
  std::vector<long long> best_key = orbit[0].exponents();
  for (const BarCharacter& c : orbit) {
    std::vector<long long> key = c.exponents();
    if (key < best_key) {
      best_key = key;
      best = &c;
    }
  }
  return *best;
}

// ---- module construction ----

long long summand_dim(const Summand& s, long long p) {
  long long d = s.chi.degree(p);
  return s.type == FormType::hyperbolic ? 2 * d : d;
}

bool summand_less(const Summand& a, const Summand& b, long long p) {
  long long da = summand_dim(a, p), db = summand_dim(b, p);
  if (da != db) return da < db;
  int ta = a.type == FormType::anisotropic, tb = b.type == FormType::anisotropic;
  if (ta != tb) return ta < tb;
  long long na = a.chi.order(), nb = b.chi.order();
  if (na != nb) return na < nb;
  return a.chi.exponents() < b.chi.exponents();
}

long long SymplecticModule::dim() const {
  long long n = 0;
  for (const Summand& s : summands) n += summand_dim(s, p);
  return n;
}

bool operator==(const SymplecticModule& a, const SymplecticModule& b) {
  if (a.p != b.p || a.factor_orders != b.factor_orders || a.mu_gens != b.mu_gens ||
      a.pi != b.pi || a.pi_alpha != b.pi_alpha || a.summands.size() != b.summands.size())
    return false;
  for (size_t i = 0; i < a.summands.size(); ++i)
    if (a.summands[i].type != b.summands[i].type || a.summands[i].chi != b.summands[i].chi)
      return false;
  return true;
}

SymplecticModule make_module(long long p, const std::vector<long long>& factor_orders,
                             const std::vector<Summand>& summands,
                             const std::vector<std::vector<long long>>& mu_gens,
                             const std::optional<std::vector<long long>>& pi,
                             const std::optional<std::vector<long long>>& pi_alpha) {
  if (!is_prime_ll(p)) throw std::invalid_argument("p not prime");
  if (factor_orders.empty()) throw std::invalid_argument("operator group needs a factor");
  for (long long n : factor_orders) {
    if (n < 1) throw std::invalid_argument("factor order must be positive");
    if (n % p == 0) throw std::invalid_argument("order divisible by p");
  }
  SymplecticModule M;
  M.p = p;
  M.factor_orders = factor_orders;
  for (const std::vector<long long>& g : mu_gens) {
    Vec r = tuple_mod(g, factor_orders);
    if (!vec_is_zero(r)) M.mu_gens.push_back(r);
  }
  std::sort(M.mu_gens.begin(), M.mu_gens.end());
  M.mu_gens.erase(std::unique(M.mu_gens.begin(), M.mu_gens.end()), M.mu_gens.end());
  if (pi) M.pi = tuple_mod(*pi, factor_orders);
  if (pi_alpha) M.pi_alpha = tuple_mod(*pi_alpha, factor_orders);
  for (const Summand& s : summands) {
    if (s.chi.factor_orders != factor_orders)
      throw std::invalid_argument("summand character over wrong group");
    for (size_t i = 0; i < s.chi.vals.size(); ++i)
      if (factor_orders[i] % s.chi.vals[i].order() != 0)
        throw std::invalid_argument("character value order does not divide factor order");
    bool capable = anisotropic_capable(s.chi, p);
    if (s.type == FormType::anisotropic) {
      if (!capable) throw std::invalid_argument("anisotropic tag requires capable character");
      M.summands.push_back({orbit_representative(s.chi, p, false), FormType::anisotropic});
    } else if (capable) {
      // H(V) splits as two isometric anisotropic copies; store the split form
      Summand a{orbit_representative(s.chi, p, false), FormType::anisotropic};
      M.summands.push_back(a);
      M.summands.push_back(a);
    } else {
      M.summands.push_back({orbit_representative(s.chi, p, true), FormType::hyperbolic});
    }
  }
  std::sort(M.summands.begin(), M.summands.end(),
            [p](const Summand& x, const Summand& y) { return summand_less(x, y, p); });
  return M;
}

SymplecticModule zero_module(long long p, const std::vector<long long>& factor_orders) {
  return make_module(p, factor_orders, {});
}

SymplecticModule hyperbolic_module(long long p, const std::vector<long long>& factor_orders,
                                   const BarCharacter& chi) {
  return make_module(p, factor_orders, {Summand{chi, FormType::hyperbolic}});
}

SymplecticModule anisotropic_module(long long p, const std::vector<long long>& factor_orders,
                                    const BarCharacter& chi) {
  return make_module(p, factor_orders, {Summand{chi, FormType::anisotropic}});
}

SymplecticModule direct_sum(const SymplecticModule& a, const SymplecticModule& b) {
  if (a.p != b.p || a.factor_orders != b.factor_orders)
    throw std::invalid_argument("direct sum over different operator groups");
  if (a.mu_gens != b.mu_gens || a.pi != b.pi || a.pi_alpha != b.pi_alpha)
    throw std::invalid_argument("direct sum with different markings");
  std::vector<Summand> all = a.summands;
  all.insert(all.end(), b.summands.begin(), b.summands.end());
  return make_module(a.p, a.factor_orders, all, a.mu_gens, a.pi, a.pi_alpha);
}

SymplecticModule hyperbolic_of(const SymplecticModule& M) {
  std::vector<Summand> out;
  for (const Summand& s : M.summands) {
    out.push_back({s.chi, FormType::hyperbolic});
    if (s.type == FormType::hyperbolic)
      out.push_back({s.chi.inverse(), FormType::hyperbolic});
  }
  return make_module(M.p, M.factor_orders, out, M.mu_gens, M.pi, M.pi_alpha);
}

SymplecticModule fixed_points(const SymplecticModule& M,
                              const std::vector<std::vector<long long>>& d_gens) {
  std::vector<Vec> gens;
  for (const auto& g : d_gens) gens.push_back(tuple_mod(g, M.factor_orders));
  std::vector<Summand> kept;
  for (const Summand& s : M.summands) {
    bool fixed = true;
    for (const Vec& g : gens)
      if (!s.chi.value_at(g).is_one()) { fixed = false; break; }
    if (fixed) kept.push_back(s);
  }
  return make_module(M.p, M.factor_orders, kept, M.mu_gens, M.pi, M.pi_alpha);
}

// ---- restriction to a subgroup ----

namespace {

struct RestrictedRow {
  const Summand* s;
  long long count;
  FormType type;
  long long d, N;
};

std::vector<RestrictedRow> restricted_rows(const SymplecticModule& M,
                                           const std::vector<std::vector<long long>>& gens_in) {
  std::vector<Vec> gens;
  for (const auto& g : gens_in) gens.push_back(tuple_mod(g, M.factor_orders));
  std::vector<RestrictedRow> rows;
  for (const Summand& s : M.summands) {
    long long N = 1;
    for (const Vec& g : gens) N = lcm_ll(N, s.chi.value_at(g).order());
    long long d_chi = s.chi.degree(M.p);
    long long d = mult_order_ll(M.p, N);
    if (d_chi % d != 0) throw std::logic_error("restricted degree does not divide");
    long long e = d_chi / d;
    if (s.type == FormType::hyperbolic) {
      if (minus_one_is_power(M.p, N))
        rows.push_back({&s, 2 * e, FormType::anisotropic, d, N});
      else
        rows.push_back({&s, e, FormType::hyperbolic, d, N});
    } else {
      if (N <= 2)
        rows.push_back({&s, d_chi / 2, FormType::hyperbolic, 1, N});
      else {
        if (!minus_one_is_power(M.p, N))
          throw std::logic_error("anisotropic restriction lost capability");
        rows.push_back({&s, e, FormType::anisotropic, d, N});
      }
    }
  }
  return rows;
}

}  // namespace

SymplecticModule restrict_module(const SymplecticModule& M,
                                 const std::vector<std::vector<long long>>& gens_in) {
  std::vector<Vec> gens;
  for (const auto& g : gens_in) gens.push_back(tuple_mod(g, M.factor_orders));
  std::vector<long long> new_orders;
  for (const Vec& g : gens) new_orders.push_back(element_order_in(M.factor_orders, g));
  if (new_orders.empty()) new_orders.push_back(1);
  std::vector<RestrictedRow> rows = restricted_rows(M, gens);
  std::vector<Summand> out;
  for (const RestrictedRow& r : rows) {
    BarCharacter psi;
    psi.factor_orders = new_orders;
    for (const Vec& g : gens) psi.vals.push_back(r.s->chi.value_at(g));
    if (gens.empty()) psi = trivial_bar_character(new_orders);
    for (long long c = 0; c < r.count; ++c) out.push_back({psi, r.type});
  }
  return make_module(M.p, new_orders, out);
}

// ---- literal form ----

namespace {

std::string join_ll(const std::vector<long long>& v, const char* sep) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(v[i]);
  }
  return s;
}

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else
      cur += c;
  }
  out.push_back(cur);
  return out;
}

long long parse_ll_strict(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("bad module literal: empty number");
  for (char c : s)
    if (c < '0' || c > '9') throw std::invalid_argument("bad module literal: expected number");
  if (s.size() > 18) throw std::invalid_argument("bad module literal: number too large");
  return std::stoll(s);
}

Vec parse_tuple(const std::string& s) {
  Vec out;
  for (const std::string& part : split_on(s, ',')) out.push_back(parse_ll_strict(part));
  return out;
}

// "(1,2)(3,4)" -> tuples
std::vector<Vec> parse_tuple_groups(const std::string& s) {
  std::vector<Vec> out;
  size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '(') throw std::invalid_argument("bad module literal: expected (");
    size_t j = s.find(')', i);
    if (j == std::string::npos) throw std::invalid_argument("bad module literal: unclosed (");
    out.push_back(parse_tuple(s.substr(i + 1, j - i - 1)));
    i = j + 1;
  }
  if (out.empty()) throw std::invalid_argument("bad module literal: empty tuple list");
  return out;
}

}  // namespace

std::string SymplecticModule::str() const {
  std::string s = "p" + std::to_string(p) + ".C" + join_ll(factor_orders, "x");
  if (!mu_gens.empty()) {
    s += ".mu";
    for (const auto& g : mu_gens) s += "(" + join_ll(g, ",") + ")";
  }
  if (pi) s += ".pi(" + join_ll(*pi, ",") + ")";
  if (pi_alpha) s += ".pia(" + join_ll(*pi_alpha, ",") + ")";
  s += ".S";
  if (summands.empty()) {
    s += "0";
  } else {
    for (size_t i = 0; i < summands.size(); ++i) {
      if (i) s += "+";
      const Summand& sm = summands[i];
      s += sm.type == FormType::hyperbolic ? "h" : "a";
      s += ":N" + std::to_string(sm.chi.order()) + ":" + join_ll(sm.chi.exponents(), ",");
    }
  }
  return s;
}

SymplecticModule SymplecticModule::parse(const std::string& literal) {
  std::vector<std::string> seg = split_on(literal, '.');
  if (seg.size() < 3) throw std::invalid_argument("bad module literal: too few segments");
  size_t k = 0;
  if (seg[k].size() < 2 || seg[k][0] != 'p')
    throw std::invalid_argument("bad module literal: missing p");
  long long p = parse_ll_strict(seg[k].substr(1));
  ++k;
  if (seg[k].size() < 2 || seg[k][0] != 'C')
    throw std::invalid_argument("bad module literal: missing C");
  std::vector<long long> orders;
  for (const std::string& part : split_on(seg[k].substr(1), 'x'))
    orders.push_back(parse_ll_strict(part));
  ++k;
  std::vector<Vec> mu;
  std::optional<Vec> pi, pia;
  while (k < seg.size() && seg[k].size() >= 2 && seg[k][0] != 'S') {
    if (seg[k].rfind("mu(", 0) == 0 && mu.empty() && !pi && !pia)
      mu = parse_tuple_groups(seg[k].substr(2));
    else if (seg[k].rfind("pia(", 0) == 0 && !pia) {
      std::vector<Vec> g = parse_tuple_groups(seg[k].substr(3));
      if (g.size() != 1) throw std::invalid_argument("bad module literal: pia needs one tuple");
      pia = g[0];
    } else if (seg[k].rfind("pi(", 0) == 0 && !pi && !pia) {
      std::vector<Vec> g = parse_tuple_groups(seg[k].substr(2));
      if (g.size() != 1) throw std::invalid_argument("bad module literal: pi needs one tuple");
      pi = g[0];
    } else
      throw std::invalid_argument("bad module literal: unknown segment " + seg[k]);
    ++k;
  }
  if (k + 1 != seg.size() || seg[k].empty() || seg[k][0] != 'S')
    throw std::invalid_argument("bad module literal: missing summand segment");
  std::string body = seg[k].substr(1);
  std::vector<Summand> summands;
  if (body != "0") {
    for (const std::string& part : split_on(body, '+')) {
      std::vector<std::string> bits = split_on(part, ':');
      if (bits.size() != 3 || bits[0].size() != 1 || (bits[0] != "h" && bits[0] != "a") ||
          bits[1].size() < 2 || bits[1][0] != 'N')
        throw std::invalid_argument("bad module literal: malformed summand " + part);
      long long N = parse_ll_strict(bits[1].substr(1));
      Vec exps = parse_tuple(bits[2]);
      summands.push_back({bar_character(orders, N, exps),
                          bits[0] == "h" ? FormType::hyperbolic : FormType::anisotropic});
    }
  }
  return make_module(p, orders, summands, mu, pi, pia);
}

// ---- concrete spaces ----

std::string ConcreteSymplecticSpace::str() const {
  std::ostringstream os;
  os << "space p=" << p << " dim=" << dim << " orders=" << join_ll(factor_orders, ",") << "\n";
  os << "gram\n";
  for (const auto& row : gram) os << join_ll(row, " ") << "\n";
  for (const auto& A : action) {
    os << "action\n";
    for (const auto& row : A) os << join_ll(row, " ") << "\n";
  }
  return os.str();
}

namespace {

Vec parse_row(const std::string& line, long long dim, long long p) {
  std::istringstream is(line);
  Vec row;
  long long x;
  while (is >> x) {
    if (x < 0 || x >= p) throw std::invalid_argument("bad space text: entry out of range");
    row.push_back(x);
  }
  if ((long long)row.size() != dim) throw std::invalid_argument("bad space text: wrong row width");
  return row;
}

}  // namespace

ConcreteSymplecticSpace ConcreteSymplecticSpace::parse(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("bad space text: empty");
  std::istringstream head(line);
  std::string tok;
  ConcreteSymplecticSpace S;
  if (!(head >> tok) || tok != "space") throw std::invalid_argument("bad space text: header");
  if (!(head >> tok) || tok.rfind("p=", 0) != 0)
    throw std::invalid_argument("bad space text: missing p");
  S.p = parse_ll_strict(tok.substr(2));
  if (!(head >> tok) || tok.rfind("dim=", 0) != 0)
    throw std::invalid_argument("bad space text: missing dim");
  S.dim = parse_ll_strict(tok.substr(4));
  if (!(head >> tok) || tok.rfind("orders=", 0) != 0)
    throw std::invalid_argument("bad space text: missing orders");
  for (const std::string& part : split_on(tok.substr(7), ','))
    S.factor_orders.push_back(parse_ll_strict(part));
  if (head >> tok) throw std::invalid_argument("bad space text: trailing header tokens");
  if (!std::getline(is, line) || line != "gram")
    throw std::invalid_argument("bad space text: missing gram");
  for (long long i = 0; i < S.dim; ++i) {
    if (!std::getline(is, line)) throw std::invalid_argument("bad space text: short gram");
    S.gram.push_back(parse_row(line, S.dim, S.p));
  }
  for (size_t a = 0; a < S.factor_orders.size(); ++a) {
    if (!std::getline(is, line) || line != "action")
      throw std::invalid_argument("bad space text: missing action");
    Mat A;
    for (long long i = 0; i < S.dim; ++i) {
      if (!std::getline(is, line)) throw std::invalid_argument("bad space text: short action");
      A.push_back(parse_row(line, S.dim, S.p));
    }
    S.action.push_back(A);
  }
  while (std::getline(is, line))
    if (!line.empty()) throw std::invalid_argument("bad space text: trailing content");
  validate_space(S);
  return S;
}

void validate_space(const ConcreteSymplecticSpace& S) {
  if (!is_prime_ll(S.p)) throw std::invalid_argument("p not prime");
  if (S.dim < 0) throw std::invalid_argument("negative dimension");
  if (S.factor_orders.empty()) throw std::invalid_argument("operator group needs a factor");
  for (long long n : S.factor_orders) {
    if (n < 1) throw std::invalid_argument("factor order must be positive");
    if (n % S.p == 0) throw std::invalid_argument("order divisible by p");
  }
  auto check_mat = [&](const Mat& A) {
    if ((long long)A.size() != S.dim) throw std::invalid_argument("matrix size mismatch");
    for (const Vec& row : A) {
      if ((long long)row.size() != S.dim) throw std::invalid_argument("matrix size mismatch");
      for (long long x : row)
        if (x < 0 || x >= S.p) throw std::invalid_argument("matrix entry out of range");
    }
  };
  check_mat(S.gram);
  for (long long i = 0; i < S.dim; ++i) {
    if (S.gram[i][i] != 0) throw std::invalid_argument("form not alternating");
    for (long long j = 0; j < S.dim; ++j)
      if (S.gram[j][i] != mod_ll(-S.gram[i][j], S.p))
        throw std::invalid_argument("form not alternating");
  }
  if (mat_rank(S.gram, S.p) != S.dim) throw std::invalid_argument("degenerate form");
  if (S.action.size() != S.factor_orders.size())
    throw std::invalid_argument("action count mismatch");
  for (size_t i = 0; i < S.action.size(); ++i) {
    const Mat& A = S.action[i];
    check_mat(A);
    Mat AtGA = mat_mul(mat_mul(mat_transpose(A), S.gram, S.p), A, S.p);
    if (AtGA != S.gram) throw std::invalid_argument("action not form-preserving");
    if (!is_identity(mat_pow(A, S.factor_orders[i], S.p)))
      throw std::invalid_argument("action order mismatch");
    for (size_t j = 0; j < i; ++j)
      if (mat_mul(A, S.action[j], S.p) != mat_mul(S.action[j], A, S.p))
        throw std::invalid_argument("action not commuting");
  }
}

namespace {

void validate_chi_over(const BarCharacter& chi, long long p,
                       const std::vector<long long>& orders) {
  if (!is_prime_ll(p)) throw std::invalid_argument("p not prime");
  if (chi.factor_orders != orders)
    throw std::invalid_argument("character over wrong group");
  for (size_t i = 0; i < chi.vals.size(); ++i)
    if (orders[i] < 1 || orders[i] % chi.vals[i].order() != 0)
      throw std::invalid_argument("character value order does not divide factor order");
  for (long long n : orders)
    if (n % p == 0) throw std::invalid_argument("order divisible by p");
}

Mat block_diag(const Mat& A, const Mat& B) {
  long long n = (long long)A.size(), m = (long long)B.size();
  Mat C(n + m, Vec(n + m, 0));
  for (long long i = 0; i < n; ++i)
    for (long long j = 0; j < n; ++j) C[i][j] = A[i][j];
  for (long long i = 0; i < m; ++i)
    for (long long j = 0; j < m; ++j) C[n + i][n + j] = B[i][j];
  return C;
}

}  // namespace

ConcreteSymplecticSpace hyperbolic_space(long long p, const std::vector<long long>& factor_orders,
                                         const BarCharacter& chi) {
  validate_chi_over(chi, p, factor_orders);
  long long N = chi.order();
  long long d = chi.degree(p);
  auto F = FiniteField::get((int)p, (int)d);
  long long gamma = F->exp((F->q - 1) / N);
  std::vector<long long> exps = chi.exponents();
  ConcreteSymplecticSpace S;
  S.p = p;
  S.dim = 2 * d;
  S.factor_orders = factor_orders;
  S.gram.assign(S.dim, Vec(S.dim, 0));
  for (long long i = 0; i < d; ++i) {
    S.gram[i][d + i] = 1;
    S.gram[d + i][i] = p - 1;
  }
  for (size_t i = 0; i < factor_orders.size(); ++i) {
    Mat R = mult_matrix(*F, F->pow(gamma, exps[i]));
    S.action.push_back(block_diag(R, mat_transpose(mat_inverse(R, p))));
  }
  validate_space(S);
  return S;
}

ConcreteSymplecticSpace anisotropic_space(long long p, const std::vector<long long>& factor_orders,
                                          const BarCharacter& chi) {
  validate_chi_over(chi, p, factor_orders);
  if (!anisotropic_capable(chi, p))
    throw std::invalid_argument("anisotropic tag requires capable character");
  long long N = chi.order();
  long long d = chi.degree(p);
  long long e = d / 2;
  auto F = FiniteField::get((int)p, (int)d);
  long long gamma = F->exp((F->q - 1) / N);
  long long pe = pow_ll(p, (int)e);
  long long delta = 0;
  if (p == 2) {
    for (long long a = 1; a < F->q; ++a)
      if (F->add(a, F->pow(a, pe)) == 0) { delta = a; break; }
  } else {
    delta = F->pow(F->generator, (pe + 1) / 2);
  }
  if (delta == 0) throw std::logic_error("no twisting scalar found");
  ConcreteSymplecticSpace S;
  S.p = p;
  S.dim = d;
  S.factor_orders = factor_orders;
  S.gram.assign(d, Vec(d, 0));
  for (long long a = 0; a < d; ++a)
    for (long long b = 0; b < d; ++b) {
      long long u = pow_ll(p, (int)a);
      long long v = F->pow(pow_ll(p, (int)b), pe);
      S.gram[a][b] = F->abs_trace(F->mul(delta, F->mul(u, v)));
    }
  std::vector<long long> exps = chi.exponents();
  for (size_t i = 0; i < factor_orders.size(); ++i)
    S.action.push_back(mult_matrix(*F, F->pow(gamma, exps[i])));
  validate_space(S);
  return S;
}

ConcreteSymplecticSpace space_direct_sum(const ConcreteSymplecticSpace& a,
                                         const ConcreteSymplecticSpace& b) {
  if (a.p != b.p || a.factor_orders != b.factor_orders)
    throw std::invalid_argument("direct sum over different operator groups");
  ConcreteSymplecticSpace S;
  S.p = a.p;
  S.dim = a.dim + b.dim;
  S.factor_orders = a.factor_orders;
  S.gram = block_diag(a.gram, b.gram);
  for (size_t i = 0; i < a.action.size(); ++i)
    S.action.push_back(block_diag(a.action[i], b.action[i]));
  return S;
}

ConcreteSymplecticSpace negate_form(const ConcreteSymplecticSpace& S) {
  ConcreteSymplecticSpace T = S;
  for (auto& row : T.gram)
    for (auto& x : row) x = mod_ll(-x, S.p);
  return T;
}

ConcreteSymplecticSpace synthesize(const SymplecticModule& M) {
  ConcreteSymplecticSpace S;
  S.p = M.p;
  S.dim = 0;
  S.factor_orders = M.factor_orders;
  S.gram = {};
  S.action.assign(M.factor_orders.size(), Mat{});
  for (const Summand& sm : M.summands) {
    ConcreteSymplecticSpace block =
        sm.type == FormType::hyperbolic
            ? hyperbolic_space(M.p, M.factor_orders, sm.chi)
            : anisotropic_space(M.p, M.factor_orders, sm.chi);
    S = space_direct_sum(S, block);
  }
  validate_space(S);
  return S;
}

// ---- decomposition ----

namespace {

struct PieceData {
  Mat basis;  // RREF rows, ambient coordinates
  BarCharacter chi;
  long long N = 1, d = 1, mult = 0;
  Vec cstar;
  Mat acstar;  // ambient matrix of the element cstar
};

// restriction of ambient A to the span of basis rows, in basis coordinates
Mat restrict_operator(const Mat& A, const Mat& basis, long long p) {
  long long k = (long long)basis.size();
  if (k == 0) return {};
  long long n = (long long)basis[0].size();
  Mat W(n, Vec(2 * k, 0));
  for (long long j = 0; j < k; ++j) {
    Vec img = mat_vec(A, basis[j], p);
    for (long long t = 0; t < n; ++t) {
      W[t][j + k] = img[t];
      W[t][j] = basis[j][t];
    }
  }
  // solve basis^T * X = images columnwise
  Mat R = W;
  rref(R, p);
  Mat X(k, Vec(k, 0));
  for (long long r = 0; r < (long long)R.size(); ++r) {
    long long lead = -1;
    for (long long j = 0; j < k; ++j)
      if (R[r][j] != 0) { lead = j; break; }
    if (lead < 0) {
      for (long long j = 0; j < k; ++j)
        if (R[r][k + j] != 0) throw std::logic_error("subspace not invariant");
      continue;
    }
    for (long long j = 0; j < k; ++j) X[lead][j] = R[r][k + j];
  }
  return X;
}

Vec lift_to_ambient(const Vec& coords, const Mat& basis, long long p) {
  Vec v(basis.empty() ? 0 : basis[0].size(), 0);
  for (size_t i = 0; i < basis.size(); ++i) {
    if (coords[i] == 0) continue;
    for (size_t t = 0; t < v.size(); ++t) v[t] = (v[t] + coords[i] * basis[i][t]) % p;
  }
  return v;
}

// minimal polynomial of B on the cyclic space it generates from e_0; for an
// isotypic piece this is the common irreducible annihilator
Vec min_poly_on_piece(const Mat& B, long long p) {
  long long m = (long long)B.size();
  Vec v(m, 0);
  v[0] = 1;
  Mat iterates;  // rows: v, Bv, ...
  Vec cur = v;
  while (true) {
    Mat test = iterates;
    test.push_back(cur);
    Mat red = test;
    if (rref(red, p) < (long long)test.size()) break;
    iterates = test;
    cur = mat_vec(B, cur, p);
    if ((long long)iterates.size() > m) throw std::logic_error("min poly overflow");
  }
  long long deg = (long long)iterates.size();
  // solve sum c_t B^t v = B^deg v
  Mat W(m, Vec(deg + 1, 0));
  for (long long t = 0; t < m; ++t) {
    for (long long j = 0; j < deg; ++j) W[t][j] = iterates[j][t];
    W[t][deg] = cur[t];
  }
  Mat R = W;
  rref(R, p);
  Vec c(deg, 0);
  for (long long r = 0; r < (long long)R.size(); ++r) {
    long long lead = -1;
    for (long long j = 0; j < deg; ++j)
      if (R[r][j] != 0) { lead = j; break; }
    if (lead < 0) throw std::logic_error("min poly inconsistent");
    c[lead] = R[r][deg];
  }
  Vec f(deg + 1, 0);
  f[deg] = 1;
  for (long long t = 0; t < deg; ++t) f[t] = mod_ll(-c[t], p);
  return f;
}

std::vector<PieceData> analyze(const ConcreteSymplecticSpace& S, long long dim_bound) {
  validate_space(S);
  if (S.p != 2 && S.p != 3 && S.p != 5 && S.p != 7)
    throw std::invalid_argument("p outside supported set");
  if (S.dim > dim_bound) throw std::invalid_argument("dimension exceeds brute-force bound");
  long long group_size = 1;
  for (long long n : S.factor_orders) {
    group_size *= n;
    if (group_size > kGroupCap) throw std::invalid_argument("operator group too large");
  }
  std::vector<PieceData> pieces;
  if (S.dim == 0) return pieces;

  std::vector<Mat> bases = {mat_id(S.dim)};
  long long kf = (long long)S.factor_orders.size();

  // split repeatedly by the eigen-structure of every group element
  Vec tup(kf, 0);
  std::vector<Mat> gen_pow(kf, mat_id(S.dim));  // A_i^{tup[i]}
  std::vector<Mat> prefix(kf + 1, mat_id(S.dim));
  while (true) {
    long long t = kf - 1;
    while (t >= 0 && tup[t] == S.factor_orders[t] - 1) { tup[t] = 0; gen_pow[t] = mat_id(S.dim); --t; }
    if (t < 0) break;
    ++tup[t];
    gen_pow[t] = mat_mul(gen_pow[t], S.action[t], S.p);
    for (long long s = t; s < kf; ++s) prefix[s + 1] = mat_mul(prefix[s], gen_pow[s], S.p);
    const Mat& Ac = prefix[kf];
    long long ord_c = element_order_in(S.factor_orders, tup);

    std::vector<Mat> next;
    for (const Mat& basis : bases) {
      long long m = (long long)basis.size();
      if (m == 1) { next.push_back(basis); continue; }
      Mat B = restrict_operator(Ac, basis, S.p);
      std::vector<Mat> kernels;
      long long found = 0;
      for (long long M : divisors_of(ord_c)) {
        long long s = ord_mod_capped(S.p, M, m);
        if (s == 0) continue;
        std::vector<bool> seen(M, false);
        for (long long a = M == 1 ? 0 : 1; a < std::max<long long>(M, 1); ++a) {
          if (M > 1 && (seen[a] || gcd_ll(a, M) != 1)) continue;
          if (M > 1) {
            long long b = a;
            do { seen[b] = true; b = mulmod_ll(b, S.p, M); } while (b != a);
          }
          Mat K = kernel_basis(poly_eval(coset_polynomial(S.p, M, a), B, S.p), S.p);
          if (K.empty()) {
            if (M == 1) break;
            continue;
          }
          Mat amb;
          for (const Vec& coords : K) amb.push_back(lift_to_ambient(coords, basis, S.p));
          rref(amb, S.p);
          found += (long long)amb.size();
          kernels.push_back(amb);
          if (M == 1) break;
        }
        if (found == m) break;
      }
      if (found != m) throw std::logic_error("eigen split incomplete");
      for (Mat& K : kernels) next.push_back(std::move(K));
    }
    bases = std::move(next);
  }

  // read the character off each piece
  for (const Mat& basis : bases) {
    PieceData P;
    P.basis = basis;
    long long m = (long long)basis.size();
    std::vector<Mat> restr;
    std::vector<long long> ords;
    long long N = 1;
    for (long long i = 0; i < kf; ++i) {
      restr.push_back(restrict_operator(S.action[i], basis, S.p));
      long long o = mat_order(restr.back(), S.p, S.factor_orders[i]);
      if (o == 0) throw std::logic_error("restricted action order overflow");
      ords.push_back(o);
      N = lcm_ll(N, o);
    }
    P.N = N;
    P.cstar.assign(kf, 0);
    long long rem = N;
    for (long long q = 2; q <= rem; ++q) {
      if (rem % q != 0) continue;
      long long qv = 1;
      while (rem % q == 0) { rem /= q; qv *= q; }
      long long pick = -1;
      for (long long i = 0; i < kf; ++i)
        if (ords[i] % qv == 0) { pick = i; break; }
      if (pick < 0) throw std::logic_error("lcm witness missing");
      P.cstar[pick] = mod_ll(P.cstar[pick] + ords[pick] / qv, S.factor_orders[pick]);
    }
    Mat Bstar = mat_id(m);
    P.acstar = mat_id(S.dim);
    for (long long i = 0; i < kf; ++i) {
      Bstar = mat_mul(Bstar, mat_pow(restr[i], P.cstar[i], S.p), S.p);
      P.acstar = mat_mul(P.acstar, mat_pow(S.action[i], P.cstar[i], S.p), S.p);
    }
    if (mat_order(Bstar, S.p, N) != N) throw std::logic_error("cstar order wrong");

    Vec f = min_poly_on_piece(Bstar, S.p);
    long long d = (long long)f.size() - 1;
    if (d != ord_mod_capped(S.p, N, d) || m % d != 0)
      throw std::logic_error("piece not isotypic");
    P.d = d;
    P.mult = m / d;

    auto F = FiniteField::get((int)S.p, (int)d);
    long long gamma = F->exp((F->q - 1) / N);
    long long a0 = -1;
    long long cur = 1;
    for (long long a = 1; a < N; ++a) {
      cur = F->mul(cur, gamma);
      if (gcd_ll(a, N) != 1) continue;
      long long val = 0;  // f(gamma^a), Horner with scalar coefficients
      for (long long tix = d; tix >= 0; --tix) val = F->add(F->mul(val, cur), f[tix]);
      if (val == 0) { a0 = a; break; }
    }
    if (N == 1) a0 = 0;
    if (a0 < 0) throw std::logic_error("eigen exponent not found");

    std::vector<long long> s_exp(kf, 0);
    for (long long i = 0; i < kf; ++i) {
      Mat Pm = mat_id(m);
      long long found = -1;
      for (long long s = 0; s < N; ++s) {
        if (Pm == restr[i]) { found = s; break; }
        Pm = mat_mul(Pm, Bstar, S.p);
      }
      if (found < 0) throw std::logic_error("image not cyclic on piece");
      s_exp[i] = found;
    }
    P.chi.factor_orders = S.factor_orders;
    for (long long i = 0; i < kf; ++i)
      P.chi.vals.push_back(RootOfUnity(N, mulmod_ll(a0, s_exp[i], std::max<long long>(N, 1))));
    pieces.push_back(std::move(P));
  }
  return pieces;
}

struct GroupJob {
  Summand tag;
  long long count = 0;
  int kind = 0;  // 0 scalar plane, 1 anisotropic, 2 cross pair
  int piece_e = -1, piece_f = -1;
};

std::vector<GroupJob> pair_pieces(const std::vector<PieceData>& pieces, long long p) {
  auto key_of = [&](const BarCharacter& chi) {
    BarCharacter r = orbit_representative(chi, p, false);
    return std::make_pair(r.order(), r.exponents());
  };
  std::vector<int> order_ix(pieces.size());
  for (size_t i = 0; i < pieces.size(); ++i) order_ix[i] = (int)i;
  std::sort(order_ix.begin(), order_ix.end(), [&](int a, int b) {
    return key_of(pieces[a].chi) < key_of(pieces[b].chi);
  });
  std::vector<bool> used(pieces.size(), false);
  std::vector<GroupJob> jobs;
  for (int ix : order_ix) {
    if (used[ix]) continue;
    const PieceData& P = pieces[ix];
    auto own = key_of(P.chi);
    auto inv = key_of(P.chi.inverse());
    if (own == inv) {
      used[ix] = true;
      GroupJob J;
      if (P.N <= 2) {
        if (P.mult % 2 != 0) throw std::logic_error("odd scalar multiplicity");
        J.tag = {orbit_representative(P.chi, p, true), FormType::hyperbolic};
        J.count = P.mult / 2;
        J.kind = 0;
      } else {
        if (!anisotropic_capable(P.chi, p)) throw std::logic_error("self-paired not capable");
        J.tag = {orbit_representative(P.chi, p, false), FormType::anisotropic};
        J.count = P.mult;
        J.kind = 1;
      }
      J.piece_e = ix;
      jobs.push_back(J);
    } else {
      int partner = -1;
      for (size_t j = 0; j < pieces.size(); ++j)
        if (!used[j] && (int)j != ix && key_of(pieces[j].chi) == inv) { partner = (int)j; break; }
      if (partner < 0) throw std::logic_error("unpaired isotypic piece");
      if (pieces[partner].mult != P.mult) throw std::logic_error("cross multiplicity mismatch");
      used[ix] = used[partner] = true;
      GroupJob J;
      J.tag = {orbit_representative(P.chi, p, true), FormType::hyperbolic};
      J.count = P.mult;
      J.kind = 2;
      // the e side is the piece whose plain orbit contains the stored tag
      if (key_of(J.tag.chi) == own) {
        J.piece_e = ix;
        J.piece_f = partner;
      } else {
        J.piece_e = partner;
        J.piece_f = ix;
      }
      jobs.push_back(J);
    }
  }
  return jobs;
}

long long rep_exponent_at(const BarCharacter& rep, const Vec& cstar, long long N) {
  RootOfUnity r = rep.value_at(cstar);
  if (r.order() != N) throw std::logic_error("representative not primitive at cstar");
  return r.exp * (N / r.ord) % N;
}

struct CanonicalForm {
  SymplecticModule module;
  Mat T;  // input coordinates -> model coordinates
};

CanonicalForm canonicalize(const ConcreteSymplecticSpace& S, long long dim_bound) {
  std::vector<PieceData> pieces = analyze(S, dim_bound);
  std::vector<GroupJob> jobs = pair_pieces(pieces, S.p);
  std::vector<Summand> all;
  for (const GroupJob& J : jobs)
    for (long long c = 0; c < J.count; ++c) all.push_back(J.tag);
  CanonicalForm out;
  out.module = make_module(S.p, S.factor_orders, all);
  std::sort(jobs.begin(), jobs.end(), [&](const GroupJob& a, const GroupJob& b) {
    return summand_less(a.tag, b.tag, S.p);
  });

  long long n = S.dim;
  Mat ambient_cols(n, Vec(n, 0)), model_cols(n, Vec(n, 0));
  long long filled = 0;
  Mat remaining = mat_id(n);
  auto push_pair = [&](const Vec& amb, const Vec& model) {
    for (long long t = 0; t < n; ++t) {
      ambient_cols[t][filled] = amb[t];
      model_cols[t][filled] = model[t];
    }
    ++filled;
  };
  auto unit_model = [&](long long row) {
    Vec v(n, 0);
    v[row] = 1;
    return v;
  };

  long long offset = 0;
  for (const GroupJob& J : jobs) {
    const PieceData& PE = pieces[J.piece_e];
    long long N = PE.N, d = PE.d;
    long long block_dim = J.kind == 1 ? d : 2 * d;
    for (long long copy = 0; copy < J.count; ++copy) {
      Mat WE = subspace_intersection(PE.basis, remaining, S.p);
      Mat extracted;
      if (J.kind == 0) {
        Vec v, w;
        for_each_subspace_vector(WE, S.p, [&](const Vec& cand) {
          v = cand;
          return false;
        });
        if (v.empty()) throw std::logic_error("plane vector missing");
        long long hv = 0;
        for_each_subspace_vector(WE, S.p, [&](const Vec& cand) {
          hv = form_eval(S.gram, v, cand, S.p);
          if (hv != 0) { w = cand; return false; }
          return true;
        });
        if (w.empty()) throw std::logic_error("plane partner missing");
        long long scale = invmod_ll(hv, S.p);
        for (auto& x : w) x = x * scale % S.p;
        push_pair(v, unit_model(offset));
        push_pair(w, unit_model(offset + 1));
        extracted = {v, w};
      } else if (J.kind == 1) {
        auto F = FiniteField::get((int)S.p, (int)d);
        long long step = (F->q - 1) / N;
        long long a_rep = rep_exponent_at(J.tag.chi, PE.cstar, N);
        long long pe = pow_ll(S.p, (int)(d / 2));
        // recover the model's twisting scalar for gram comparison
        ConcreteSymplecticSpace model_block = anisotropic_space(S.p, S.factor_orders, J.tag.chi);
        Vec v;
        Mat orbit;
        for_each_subspace_vector(WE, S.p, [&](const Vec& cand) {
          Mat K;
          Vec cur = cand;
          for (long long t = 0; t < d; ++t) {
            K.push_back(cur);
            cur = mat_vec(PE.acstar, cur, S.p);
          }
          Mat Kr = K;
          if (rref(Kr, S.p) != d) return true;
          Mat g(d, Vec(d, 0));
          for (long long i = 0; i < d; ++i)
            for (long long j = 0; j < d; ++j) g[i][j] = form_eval(S.gram, K[i], K[j], S.p);
          if (mat_rank(g, S.p) != d) return true;
          v = cand;
          orbit = K;
          return false;
        });
        if (v.empty()) throw std::logic_error("anisotropic generator missing");
        // solve Tr(delta' * (gamma^{a_rep b})^{p^e}) = h(v, cstar^b v) for delta'
        Mat sys(d, Vec(d + 1, 0));
        for (long long b = 0; b < d; ++b) {
          long long gb = F->pow(F->exp(step * (a_rep * b % std::max<long long>(N, 1))), pe);
          for (long long j = 0; j < d; ++j)
            sys[b][j] = F->abs_trace(F->mul(pow_ll(S.p, (int)j), gb));
          sys[b][d] = form_eval(S.gram, v, orbit[b], S.p);
        }
        Mat R = sys;
        rref(R, S.p);
        Vec dd(d, 0);
        for (long long r = 0; r < (long long)R.size(); ++r) {
          long long lead = -1;
          for (long long j = 0; j < d; ++j)
            if (R[r][j] != 0) { lead = j; break; }
          if (lead < 0) throw std::logic_error("twisting scalar system inconsistent");
          dd[lead] = R[r][d];
        }
        long long delta_prime = 0;
        for (long long j = d - 1; j >= 0; --j) delta_prime = delta_prime * S.p + dd[j];
        if (F->add(F->pow(delta_prime, pe), delta_prime) != 0)
          throw std::logic_error("recovered form not alternating");
        // model gram uses delta; find mu with Norm(mu) = delta' / delta
        long long delta = 0;
        {
          // read the model's delta back from its gram first row
          Mat msys(d, Vec(d + 1, 0));
          for (long long b = 0; b < d; ++b) {
            long long gb = F->pow(pow_ll(S.p, (int)b), pe);
            for (long long j = 0; j < d; ++j)
              msys[b][j] = F->abs_trace(F->mul(pow_ll(S.p, (int)j), gb));
            msys[b][d] = model_block.gram[0][b];
          }
          rref(msys, S.p);
          Vec md(d, 0);
          for (long long r = 0; r < (long long)msys.size(); ++r) {
            long long lead = -1;
            for (long long j = 0; j < d; ++j)
              if (msys[r][j] != 0) { lead = j; break; }
            if (lead < 0) throw std::logic_error("model scalar system inconsistent");
            md[lead] = msys[r][d];
          }
          for (long long j = d - 1; j >= 0; --j) delta = delta * S.p + md[j];
        }
        long long target = F->mul(delta_prime, F->inv(delta));
        long long mu = 0, norm = 1, wstep = F->pow(F->generator, pe + 1);
        for (long long kpow = 0; kpow < F->q - 1; ++kpow) {
          if (norm == target) { mu = F->exp(kpow); break; }
          norm = F->mul(norm, wstep);
        }
        if (mu == 0) throw std::logic_error("norm equation unsolved");
        for (long long t = 0; t < d; ++t) {
          long long val = F->mul(mu, F->exp(step * (a_rep * t % std::max<long long>(N, 1))));
          push_pair(orbit[t], [&] {
            Vec m(n, 0);
            Vec dg = digits_of(val, S.p, d);
            for (long long i = 0; i < d; ++i) m[offset + i] = dg[i];
            return m;
          }());
        }
        extracted = orbit;
      } else {
        const PieceData& PF = pieces[J.piece_f];
        auto F = FiniteField::get((int)S.p, (int)d);
        long long step = (F->q - 1) / N;
        long long a_rep = rep_exponent_at(J.tag.chi, PE.cstar, N);
        Vec v;
        for_each_subspace_vector(WE, S.p, [&](const Vec& cand) {
          v = cand;
          return false;
        });
        if (v.empty()) throw std::logic_error("hyperbolic generator missing");
        Mat orbit;
        Vec cur = v;
        for (long long t = 0; t < d; ++t) {
          orbit.push_back(cur);
          cur = mat_vec(PE.acstar, cur, S.p);
        }
        // ambient preimages of the model e-units
        Mat Q(d, Vec(d, 0));
        for (long long t = 0; t < d; ++t) {
          Vec dg = digits_of(F->exp(step * (a_rep * t % std::max<long long>(N, 1))), S.p, d);
          for (long long i = 0; i < d; ++i) Q[i][t] = dg[i];
        }
        Mat Qinv = mat_inverse(Q, S.p);
        Mat eprime(d, Vec(n, 0));  // rows: ambient vectors mapping to unit e_i
        for (long long i = 0; i < d; ++i)
          for (long long t = 0; t < d; ++t) {
            if (Qinv[t][i] == 0) continue;
            for (long long x = 0; x < n; ++x)
              eprime[i][x] = (eprime[i][x] + Qinv[t][i] * orbit[t][x]) % S.p;
          }
        Mat WF = subspace_intersection(PF.basis, remaining, S.p);
        Vec w;
        Mat worbit, Pmat;
        for_each_subspace_vector(WF, S.p, [&](const Vec& cand) {
          Mat K;
          Vec c2 = cand;
          for (long long t = 0; t < d; ++t) {
            K.push_back(c2);
            c2 = mat_vec(PF.acstar, c2, S.p);
          }
          Mat Pm(d, Vec(d, 0));
          bool nonzero = false;
          for (long long i = 0; i < d; ++i)
            for (long long t = 0; t < d; ++t) {
              Pm[i][t] = form_eval(S.gram, eprime[i], K[t], S.p);
              nonzero = nonzero || Pm[i][t] != 0;
            }
          if (!nonzero) return true;
          if (mat_rank(Pm, S.p) != d) throw std::logic_error("degenerate cross pairing");
          w = cand;
          worbit = K;
          Pmat = Pm;
          return false;
        });
        if (w.empty()) throw std::logic_error("hyperbolic partner missing");
        Mat Pinv = mat_inverse(Pmat, S.p);
        for (long long t = 0; t < d; ++t) push_pair(orbit[t], [&] {
          Vec m(n, 0);
          Vec dg = digits_of(F->exp(step * (a_rep * t % std::max<long long>(N, 1))), S.p, d);
          for (long long i = 0; i < d; ++i) m[offset + i] = dg[i];
          return m;
        }());
        extracted = orbit;
        for (long long j = 0; j < d; ++j) {
          Vec Fj(n, 0);
          for (long long t = 0; t < d; ++t) {
            if (Pinv[t][j] == 0) continue;
            for (long long x = 0; x < n; ++x)
              Fj[x] = (Fj[x] + Pinv[t][j] * worbit[t][x]) % S.p;
          }
          push_pair(Fj, unit_model(offset + d + j));
          extracted.push_back(Fj);
        }
      }
      Mat perp = orthogonal_complement(extracted, S.gram, S.p);
      remaining = subspace_intersection(remaining, perp, S.p);
      offset += block_dim;
    }
  }
  if (filled != n) throw std::logic_error("canonical basis incomplete");
  out.T = n == 0 ? Mat{} : mat_mul(model_cols, mat_inverse(ambient_cols, S.p), S.p);

  // exact verification against the synthesized model
  ConcreteSymplecticSpace model = synthesize(out.module);
  Mat TtGT = mat_mul(mat_mul(mat_transpose(out.T), model.gram, S.p), out.T, S.p);
  if (TtGT != S.gram) throw std::logic_error("canonicalization failed");
  for (size_t i = 0; i < S.action.size(); ++i)
    if (mat_mul(out.T, S.action[i], S.p) != mat_mul(model.action[i], out.T, S.p))
      throw std::logic_error("canonicalization failed");
  return out;
}

}  // namespace

SymplecticModule decompose(const ConcreteSymplecticSpace& S, long long dim_bound) {
  std::vector<PieceData> pieces = analyze(S, dim_bound);
  std::vector<GroupJob> jobs = pair_pieces(pieces, S.p);
  std::vector<Summand> all;
  for (const GroupJob& J : jobs)
    for (long long c = 0; c < J.count; ++c) all.push_back(J.tag);
  return make_module(S.p, S.factor_orders, all);
}

std::optional<std::vector<std::vector<long long>>> find_isometry(
    const ConcreteSymplecticSpace& S1, const ConcreteSymplecticSpace& S2) {
  if (S1.p != S2.p || S1.factor_orders != S2.factor_orders)
    throw std::invalid_argument("operator group mismatch");
  if (S1.dim != S2.dim) return std::nullopt;
  CanonicalForm c1 = canonicalize(S1, std::max<long long>(S1.dim, 8));
  CanonicalForm c2 = canonicalize(S2, std::max<long long>(S2.dim, 8));
  if (!(c1.module == c2.module)) return std::nullopt;
  if (S1.dim == 0) return Mat{};
  Mat U = mat_mul(mat_inverse(c2.T, S1.p), c1.T, S1.p);
  Mat UtGU = mat_mul(mat_mul(mat_transpose(U), S2.gram, S1.p), U, S1.p);
  if (UtGU != S1.gram) throw std::logic_error("isometry verification failed");
  for (size_t i = 0; i < S1.action.size(); ++i)
    if (mat_mul(U, S1.action[i], S1.p) != mat_mul(S2.action[i], U, S1.p))
      throw std::logic_error("isometry verification failed");
  return U;
}

// ---- exhaustive submodule searches ----

bool has_invariant_lagrangian(const ConcreteSymplecticSpace& S) {
  validate_space(S);
  long long n = S.dim;
  if (n == 0) return true;
  long long target = n / 2;
  std::set<Mat> visited;
  std::vector<Mat> queue = {Mat{}};
  visited.insert(Mat{});
  while (!queue.empty()) {
    Mat cur = queue.back();
    queue.pop_back();
    if ((long long)cur.size() == target) return true;
    Mat candidates = cur.empty() ? mat_id(n) : orthogonal_complement(cur, S.gram, S.p);
    bool found_target = false;
    for_each_subspace_vector(candidates, S.p, [&](const Vec& v) {
      if (subspace_contains_vec(cur, v, S.p)) return true;
      Mat ext = cyclic_closure(v, S.action, S.p);
      for (const Vec& r : cur) ext.push_back(r);
      rref(ext, S.p);
      if ((long long)ext.size() > target) return true;
      for (size_t i = 0; i < ext.size(); ++i)
        for (size_t j = i + 1; j < ext.size(); ++j)
          if (form_eval(S.gram, ext[i], ext[j], S.p) != 0) return true;
      if ((long long)ext.size() == target) { found_target = true; return false; }
      if (visited.insert(ext).second) {
        if ((long long)visited.size() > kSearchCap)
          throw std::runtime_error("submodule search too large");
        queue.push_back(ext);
      }
      return true;
    });
    if (found_target) return true;
  }
  return false;
}

bool has_proper_nondegenerate_submodule(const ConcreteSymplecticSpace& S) {
  validate_space(S);
  long long n = S.dim;
  if (n == 0) return false;
  std::set<Mat> visited;
  std::vector<Mat> queue = {Mat{}};
  visited.insert(Mat{});
  Mat full = mat_id(n);
  while (!queue.empty()) {
    Mat cur = queue.back();
    queue.pop_back();
    bool hit = false;
    for_each_subspace_vector(full, S.p, [&](const Vec& v) {
      if (subspace_contains_vec(cur, v, S.p)) return true;
      Mat ext = cyclic_closure(v, S.action, S.p);
      for (const Vec& r : cur) ext.push_back(r);
      rref(ext, S.p);
      if ((long long)ext.size() >= n) return true;
      if (!visited.insert(ext).second) return true;
      if ((long long)visited.size() > kSearchCap)
        throw std::runtime_error("submodule search too large");
      Mat g(ext.size(), Vec(ext.size(), 0));
      for (size_t i = 0; i < ext.size(); ++i)
        for (size_t j = 0; j < ext.size(); ++j)
          g[i][j] = form_eval(S.gram, ext[i], ext[j], S.p);
      if (mat_rank(g, S.p) == (long long)ext.size()) { hit = true; return false; }
      queue.push_back(ext);
      return true;
    });
    if (hit) return true;
  }
  return false;
}

// ---- sign table ----

// Entries are given by a closed form in 2-adic valuations; the unit tests pin
// them against instance computations and the operator-extension sign oracle
// recomputes the whole feasible range independently.
SignTableEntry sign_table_entry(long long p, FormType type, long long d, long long N) {
  if (!is_prime_ll(p)) throw std::invalid_argument("p not prime");
  if (N < 1) throw std::invalid_argument("order must be positive");
  if (gcd_ll(p, N) != 1) throw std::invalid_argument("order divisible by p");
  if (d != mult_order_ll(p, N)) throw std::invalid_argument("degree does not match order");
  if (type == FormType::anisotropic) {
    if (N <= 2 || d % 2 != 0 || powmod_ll(p, d / 2, N) != N - 1)
      throw std::invalid_argument("not an anisotropic shape");
  }
  SignTableEntry e;
  if (type == FormType::hyperbolic) {
    e.t0 = +1;
    long long v = d % 2 == 1 ? v2_ll(p - 1) : v2_ll(p - 1) + v2_ll(p + 1) + v2_ll(d) - 1;
    e.t1_nontrivial = p != 2 && N % 2 == 0 && v == v2_ll(N);
  } else {
    e.t0 = -1;
    long long half = d / 2;
    long long v = half % 2 == 1 ? v2_ll(p + 1) : 1;
    e.t1_nontrivial = p != 2 && N % 2 == 0 && v == v2_ll(N);
  }
  return e;
}

// ---- invariants ----

int t0_of(const SymplecticModule& M, const std::vector<std::vector<long long>>& cprime_gens) {
  int t0 = +1;
  for (const RestrictedRow& r : restricted_rows(M, cprime_gens)) {
    SignTableEntry e = sign_table_entry(M.p, r.type, r.d, r.N);
    if (e.t0 == -1 && r.count % 2 == 1) t0 = -t0;
  }
  return t0;
}

namespace {

int t1_at_unchecked(const SymplecticModule& M, const std::vector<RestrictedRow>& rows,
                    const Vec& x) {
  int val = +1;
  for (const RestrictedRow& r : rows) {
    if (r.count % 2 == 0) continue;
    SignTableEntry e = sign_table_entry(M.p, r.type, r.d, r.N);
    if (!e.t1_nontrivial) continue;
    val *= r.s->chi.value_at(x).pow(r.N / 2).as_sign();
  }
  return val;
}

}  // namespace

int t1_value_at(const SymplecticModule& M, const std::vector<std::vector<long long>>& cprime_gens,
                const std::vector<long long>& x) {
  Vec xr = tuple_mod(x, M.factor_orders);
  if (!subgroup_contains(M.factor_orders, cprime_gens, xr))
    throw std::invalid_argument("element outside the subgroup");
  return t1_at_unchecked(M, restricted_rows(M, cprime_gens), xr);
}

TInvariants t_invariants(const SymplecticModule& M,
                         const std::vector<std::vector<long long>>& cprime_gens) {
  std::vector<Vec> gens;
  for (const auto& g : cprime_gens) gens.push_back(tuple_mod(g, M.factor_orders));
  std::vector<RestrictedRow> rows = restricted_rows(M, gens);
  TInvariants out;
  out.t0 = +1;
  for (const RestrictedRow& r : rows) {
    SignTableEntry e = sign_table_entry(M.p, r.type, r.d, r.N);
    if (e.t0 == -1 && r.count % 2 == 1) out.t0 = -out.t0;
  }
  out.t1_trivial = true;
  for (const Vec& g : gens) {
    int v = t1_at_unchecked(M, rows, g);
    out.t1_gen_values.push_back(v);
    if (v != +1) out.t1_trivial = false;
  }
  // t is defined when the image of C' in the automorphisms of M is cyclic
  long long L = 1;
  for (const RestrictedRow& r : rows) L = lcm_ll(L, r.N);
  std::vector<Vec> elems = subgroup_elements(M.factor_orders, gens);
  std::set<std::vector<std::pair<long long, long long>>> signatures;
  Vec witness;
  for (const Vec& x : elems) {
    std::vector<std::pair<long long, long long>> sig;
    long long ord = 1;
    for (const Summand& s : M.summands) {
      RootOfUnity v = s.chi.value_at(x);
      sig.push_back({v.ord, v.exp});
      ord = lcm_ll(ord, v.order());
    }
    signatures.insert(sig);
    if (witness.empty() && ord == L) witness = x;
  }
  if (!witness.empty() && (long long)signatures.size() == L)
    out.t = out.t0 * t1_at_unchecked(M, rows, witness);
  return out;
}

int t_of(const SymplecticModule& M, const std::vector<long long>& c) {
  TInvariants ti = t_invariants(M, {c});
  if (ti.t == 0) throw std::logic_error("cyclic image expected");
  return ti.t;
}

bool signs_lemma_check(const SymplecticModule& M) {
  if (!M.pi || !M.pi_alpha) throw std::invalid_argument("marked elements missing");
  Vec pi = tuple_mod(*M.pi, M.factor_orders);
  Vec pia = tuple_mod(*M.pi_alpha, M.factor_orders);
  Vec ratio(pi.size());
  for (size_t i = 0; i < pi.size(); ++i)
    ratio[i] = mod_ll(pia[i] - pi[i], M.factor_orders[i]);
  if (!subgroup_contains(M.factor_orders, M.mu_gens, ratio))
    throw std::invalid_argument("markings inconsistent");
  int lhs = t_of(M, pia) * t0_of(fixed_points(M, {pia}), M.mu_gens) *
            t1_value_at(M, M.mu_gens, ratio);
  int rhs = t_of(M, pi) * t0_of(fixed_points(M, {pi}), M.mu_gens);
  return lhs == rhs;
}

// ---- subgroup helpers ----

long long element_order_in(const std::vector<long long>& orders, const std::vector<long long>& x) {
  if (x.size() != orders.size()) throw std::invalid_argument("bad subgroup generator");
  long long o = 1;
  for (size_t i = 0; i < x.size(); ++i) {
    long long xi = mod_ll(x[i], orders[i]);
    o = lcm_ll(o, orders[i] / gcd_ll(orders[i], xi == 0 ? orders[i] : xi));
  }
  return o;
}

std::vector<std::vector<long long>> subgroup_elements(
    const std::vector<long long>& orders, const std::vector<std::vector<long long>>& gens) {
  std::vector<Vec> norm;
  for (const auto& g : gens) norm.push_back(tuple_mod(g, orders));
  std::set<Vec> seen;
  std::vector<Vec> queue;
  Vec zero(orders.size(), 0);
  seen.insert(zero);
  queue.push_back(zero);
  while (!queue.empty()) {
    Vec cur = queue.back();
    queue.pop_back();
    for (const Vec& g : norm) {
      Vec nxt(cur.size());
      for (size_t i = 0; i < cur.size(); ++i) nxt[i] = (cur[i] + g[i]) % orders[i];
      if (seen.insert(nxt).second) {
        if ((long long)seen.size() > kSubgroupCap)
          throw std::invalid_argument("subgroup too large");
        queue.push_back(nxt);
      }
    }
  }
  return std::vector<Vec>(seen.begin(), seen.end());
}

bool subgroup_contains(const std::vector<long long>& orders,
                       const std::vector<std::vector<long long>>& gens,
                       const std::vector<long long>& x) {
  Vec xr = tuple_mod(x, orders);
  for (const Vec& e : subgroup_elements(orders, gens))
    if (e == xr) return true;
  return false;
}

}  // namespace tamecorr
