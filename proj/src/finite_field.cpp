#include "tamecorr/finite_field.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace tamecorr {

namespace {

constexpr long long kTableLimit = 1LL << 21;

// dense polynomial arithmetic over F_p on int vectors (low-to-high)
std::vector<int> pm_mul(const std::vector<int>& a, const std::vector<int>& b, int p) {
  if (a.empty() || b.empty()) return {};
  std::vector<int> r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = (int)((r[i + j] + (long long)a[i] * b[j]) % p);
  }
  while (!r.empty() && !r.back()) r.pop_back();
  return r;
}

// a mod f, f monic given as c_0..c_{k-1} with t^k = -(...)
std::vector<int> pm_mod(std::vector<int> a, const std::vector<int>& f, int p) {
  size_t k = f.size();
  while (a.size() > k) {
    int top = a.back();
    a.pop_back();
    if (top)
      for (size_t i = 0; i < k; ++i) {
        size_t at = a.size() - k + i;
        a[at] = (int)mod_ll(a[at] - (long long)top * f[i], p);
      }
    while (!a.empty() && !a.back()) a.pop_back();
  }
  return a;
}

std::vector<int> pm_powmod_x(long long e, const std::vector<int>& f, int p) {
  // x^e mod f
  std::vector<int> r{1}, x{0, 1};
  x = pm_mod(x, f, p);
  for (; e > 0; e >>= 1) {
    if (e & 1) r = pm_mod(pm_mul(r, x, p), f, p);
    x = pm_mod(pm_mul(x, x, p), f, p);
  }
  return r;
}

std::vector<int> pm_gcd(std::vector<int> a, std::vector<int> b, int p) {
  while (!b.empty()) {
    // a mod b with b made monic
    int lead = b.back();
    if (lead != 1) {
      long long il = invmod_ll(lead, p);
      for (auto& c : b) c = (int)mulmod_ll(c, il, p);
    }
    std::vector<int> r = pm_mod(std::move(a), std::vector<int>(b.begin(), b.end() - 1), p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

bool is_irreducible(const std::vector<int>& f, int p) {
  // f given as c_0..c_{k-1} for monic degree k; irreducible iff
  // x^{p^k} = x mod f and gcd(x^{p^{k/r}} - x, f) = 1 for prime r | k
  int k = (int)f.size();
  long long pk = pow_ll(p, k);
  std::vector<int> xe = pm_powmod_x(pk, f, p);
  std::vector<int> x{0, 1};
  if (xe != pm_mod(x, f, p)) return false;
  int kk = k;
  for (int r = 2; r <= kk; ++r)
    if (kk % r == 0) {
      while (kk % r == 0) kk /= r;
      std::vector<int> d = pm_powmod_x(pow_ll(p, k / r), f, p);
      // d - x
      std::vector<int> dx = d;
      if (dx.size() < 2) dx.resize(2, 0);
      dx[1] = (int)mod_ll(dx[1] - 1, p);
      while (!dx.empty() && !dx.back()) dx.pop_back();
      std::vector<int> full = f;
      full.push_back(1);
      std::vector<int> g = pm_gcd(full, dx, p);
      if ((int)g.size() - 1 != 0) return false;
    }
  return true;
}

std::vector<int> unpack(long long x, int p, int k) {
  std::vector<int> d((size_t)k, 0);
  for (int i = 0; i < k && x; ++i) {
    d[(size_t)i] = (int)(x % p);
    x /= p;
  }
  return d;
}

long long pack(const std::vector<int>& d, int p, int k) {
  long long x = 0;
  for (int i = std::min<int>(k, (int)d.size()) - 1; i >= 0; --i) x = x * p + d[(size_t)i];
  return x;
}

}  // namespace

long long FiniteField::mul_direct(long long a, long long b) const {
  auto r = pm_mod(pm_mul(unpack(a, p, k), unpack(b, p, k), p), modulus, p);
  return pack(r, p, k);
}

long long FiniteField::add(long long a, long long b) const {
  long long r = 0, m = 1;
  for (int i = 0; i < k; ++i) {
    r += ((a + b) % p) * m;
    a /= p;
    b /= p;
    m *= p;
  }
  return r;
}

long long FiniteField::neg(long long a) const {
  long long r = 0, m = 1;
  for (int i = 0; i < k; ++i) {
    r += ((p - a % p) % p) * m;
    a /= p;
    m *= p;
  }
  return r;
}

long long FiniteField::mul(long long a, long long b) const {
  if (a == 0 || b == 0) return 0;
  if (has_tables()) return exp_[(size_t)((log_[(size_t)a] + log_[(size_t)b]) % (q - 1))];
  return mul_direct(a, b);
}

long long FiniteField::pow(long long a, long long e) const {
  if (a == 0) {
    if (e == 0) return 1;
    if (e < 0) throw std::invalid_argument("pow: zero to negative power");
    return 0;
  }
  long long em = mod_ll(e, q - 1);
  if (has_tables()) return exp_[(size_t)(log_[(size_t)a] * (__int128)em % (q - 1))];
  long long r = 1, x = a;
  for (; em > 0; em >>= 1) {
    if (em & 1) r = mul_direct(r, x);
    x = mul_direct(x, x);
  }
  return r;
}

long long FiniteField::inv(long long a) const {
  if (a == 0) throw std::invalid_argument("inv: zero");
  return pow(a, q - 2);
}

long long FiniteField::dlog(long long a) const {
  if (a == 0) throw std::invalid_argument("dlog: zero");
  if (!has_tables()) throw std::logic_error("dlog: field too large for tables");
  return log_[(size_t)a];
}

long long FiniteField::exp(long long e) const {
  if (has_tables()) return exp_[(size_t)mod_ll(e, q - 1)];
  return pow(generator, mod_ll(e, q - 1));
}

long long FiniteField::element_order(long long a) const {
  if (a == 0) throw std::invalid_argument("element_order: zero");
  if (has_tables()) return (q - 1) / gcd_ll(q - 1, dlog(a) == 0 ? q - 1 : dlog(a));
  long long o = 1, x = a;
  while (x != 1) {
    x = mul(x, a);
    ++o;
  }
  return o;
}

int FiniteField::abs_trace(long long a) const {
  long long acc = 0, y = a;
  for (int i = 0; i < k; ++i) {
    acc = add(acc, y);
    y = frobenius(y);
  }
  if (acc >= p) throw std::logic_error("abs_trace: value not in prime field");
  return (int)acc;
}

std::vector<int> FiniteField::minpoly_over_prime(long long a) const {
  // product of (x - c) over the Frobenius orbit of a, coefficients in F_p
  std::vector<long long> orbit{a};
  long long c = frobenius(a);
  while (c != a) {
    orbit.push_back(c);
    c = frobenius(c);
  }
  // build monic poly prod (x - o), low-to-high, coefficients in this field
  std::vector<long long> f{1};
  for (long long o : orbit) {
    std::vector<long long> nf(f.size() + 1, 0);
    for (size_t i = 0; i < f.size(); ++i) {
      nf[i + 1] = add(nf[i + 1], f[i]);
      nf[i] = add(nf[i], mul(neg(o), f[i]));
    }
    f = std::move(nf);
  }
  std::vector<int> out(f.size());
  for (size_t i = 0; i < f.size(); ++i) {
    if (f[i] >= p) throw std::logic_error("minpoly: coefficient outside prime field");
    out[i] = (int)f[i];
  }
  return out;
}

std::vector<long long> FiniteField::embedding_from(const FiniteField& small) const {
  if (small.p != p || k % small.k != 0)
    throw std::invalid_argument("embedding_from: not a subfield");
  if (small.q == q) {
    std::vector<long long> idmap((size_t)q);
    for (long long x = 0; x < q; ++x) idmap[(size_t)x] = x;
    return idmap;
  }
  std::vector<int> mp = small.minpoly_over_prime(small.generator);
  // smallest-packed root of mp in this field
  long long root = -1;
  for (long long x = 0; x < q && root < 0; ++x) {
    long long acc = 0, xp = 1;
    for (size_t i = 0; i < mp.size(); ++i) {
      acc = add(acc, mul((long long)mp[i], xp));
      xp = mul(xp, x);
    }
    if (acc == 0) root = x;
  }
  if (root < 0) throw std::logic_error("embedding_from: no root found");
  std::vector<long long> map((size_t)small.q, 0);
  long long sg = 1, bg = 1;
  map[1] = 1;
  for (long long e = 1; e < small.q - 1; ++e) {
    sg = small.mul(sg, small.generator);
    bg = mul(bg, root);
    map[(size_t)sg] = bg;
  }
  return map;
}

std::shared_ptr<const FiniteField> FiniteField::get(int p, int k) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const FiniteField>> cache;
  std::lock_guard<std::mutex> lk(mu);
  auto key = std::make_pair(p, k);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  if (p < 2 || !is_prime_ll(p)) throw std::invalid_argument("FiniteField: p must be prime");
  if (k < 1 || pow_big(p, k) > BigInt(1) << 62) throw std::invalid_argument("FiniteField: too large");

  auto F = std::shared_ptr<FiniteField>(new FiniteField());
  F->p = p;
  F->k = k;
  F->q = pow_ll(p, k);

  if (k == 1) {
    F->modulus = {0};  // t = 0: elements are plain residues
  } else {
    long long pk1 = pow_ll(p, k);
    for (long long m = 0; m < pk1; ++m) {
      std::vector<int> f = unpack(m, p, k);
      if (is_irreducible(f, p)) {
        F->modulus = f;
        break;
      }
    }
    if (F->modulus.empty()) throw std::logic_error("no irreducible polynomial found");
  }

  // distinguished generator: smallest packed element of order q-1
  auto order_is_maximal = [&](long long x) {
    long long m = F->q - 1;
    for (long long r = 2; r * r <= m; ++r)
      if (m % r == 0) {
        while (m % r == 0) m /= r;
        if (F->pow(x, (F->q - 1) / r) == 1) return false;
      }
    if (m > 1 && F->pow(x, (F->q - 1) / m) == 1) return false;
    return true;
  };
  F->generator = -1;
  for (long long x = 1; x < F->q; ++x)
    if (order_is_maximal(x)) {
      F->generator = x;
      break;
    }
  if (F->generator < 0) throw std::logic_error("no generator found");

  if (F->q <= kTableLimit) {
    F->exp_.assign((size_t)(F->q - 1), 0);
    F->log_.assign((size_t)F->q, 0);
    long long cur = 1;
    for (long long e = 0; e < F->q - 1; ++e) {
      F->exp_[(size_t)e] = cur;
      F->log_[(size_t)cur] = e;
      cur = F->mul_direct(cur, F->generator);
    }
    if (cur != 1) throw std::logic_error("generator order check failed");
  }

  cache[key] = F;
  return F;
}

}  // namespace tamecorr
