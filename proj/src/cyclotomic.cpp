#include "tamecorr/cyclotomic.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

namespace tamecorr {

namespace {

using Poly = std::vector<BigInt>;  // low-to-high, no trailing zeros except poly 0

void poly_trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, BigInt(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

// exact division of integer polynomials, divisor monic-leading or exact anyway
Poly poly_div_exact(Poly num, const Poly& den) {
  Poly q(num.size() >= den.size() ? num.size() - den.size() + 1 : 0, BigInt(0));
  while (true) {
    poly_trim(num);
    if (num.size() < den.size()) break;
    size_t shift = num.size() - den.size();
    BigInt lead = num.back() / den.back();
    if (lead * den.back() != num.back())
      throw std::logic_error("poly_div_exact: not divisible");
    q[shift] = lead;
    for (size_t i = 0; i < den.size(); ++i) num[shift + i] -= lead * den[i];
  }
  poly_trim(num);
  if (!num.empty()) throw std::logic_error("poly_div_exact: nonzero remainder");
  return q;
}

}  // namespace

std::vector<BigInt> cyclotomic_polynomial(long long n) {
  if (n < 1) throw std::invalid_argument("cyclotomic_polynomial: n >= 1");
  // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d
  Poly num((size_t)n + 1, BigInt(0));
  num[0] = -1;
  num[(size_t)n] = 1;
  Poly den{BigInt(1)};
  for (long long d : divisors_of(n))
    if (d < n) den = poly_mul(den, cyclotomic_polynomial(d));
  return poly_div_exact(std::move(num), den);
}

// Per-conductor reduction data: Phi_n and x^k mod Phi_n for 0 <= k < 2n.
struct CycloTables {
  long long n = 1;
  long long phi = 1;
  Poly phi_poly;                        // Phi_n, degree phi, monic
  std::vector<std::vector<BigInt>> pw;  // pw[k] = x^k mod Phi_n, phi coords

  static std::shared_ptr<const CycloTables> get(long long n) {
    static std::mutex mu;
    static std::map<long long, std::shared_ptr<const CycloTables>> cache;
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    auto t = std::make_shared<CycloTables>();
    t->n = n;
    t->phi = euler_phi(n);
    t->phi_poly = cyclotomic_polynomial(n);
    t->pw.assign((size_t)(2 * n), std::vector<BigInt>((size_t)t->phi, BigInt(0)));
    std::vector<BigInt> cur((size_t)t->phi, BigInt(0));
    cur[0] = 1;
    t->pw[0] = cur;
    for (long long k = 1; k < 2 * n; ++k) {
      // cur := x * cur mod Phi
      BigInt top = cur.back();
      for (long long i = t->phi - 1; i > 0; --i) cur[(size_t)i] = cur[(size_t)(i - 1)];
      cur[0] = 0;
      if (top != 0)
        for (long long i = 0; i < t->phi; ++i)
          cur[(size_t)i] -= top * t->phi_poly[(size_t)i];
      t->pw[(size_t)k] = cur;
    }
    cache[n] = t;
    return t;
  }
};

Cyclotomic Cyclotomic::root_of_unity(long long n, long long k) {
  if (n < 1) throw std::invalid_argument("root_of_unity: n >= 1");
  auto t = CycloTables::get(n);
  return Cyclotomic(n, t->pw[(size_t)mod_ll(k, n)]);
}

bool Cyclotomic::is_zero() const {
  for (auto& v : c_)
    if (v != 0) return false;
  return true;
}

bool Cyclotomic::is_integer(BigInt* out) const {
  for (size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != 0) return false;
  if (out) *out = c_[0];
  return true;
}

Cyclotomic Cyclotomic::galois(long long j) const {
  if (gcd_ll(mod_ll(j, n_ == 1 ? 1 : n_), n_) != 1)
    throw std::invalid_argument("galois: exponent not coprime to conductor");
  if (n_ <= 2) return *this;
  auto t = CycloTables::get(n_);
  std::vector<BigInt> r((size_t)t->phi, BigInt(0));
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    const auto& p = t->pw[(size_t)mod_ll((long long)i * j, n_)];
    for (size_t k = 0; k < r.size(); ++k) r[k] += c_[i] * p[k];
  }
  return Cyclotomic(n_, std::move(r));
}

Cyclotomic Cyclotomic::embedded(long long m) const {
  if (m % n_ != 0) throw std::invalid_argument("embedded: conductor must be a multiple");
  if (m == n_) return *this;
  auto t = CycloTables::get(m);
  long long step = m / n_;
  std::vector<BigInt> r((size_t)t->phi, BigInt(0));
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    const auto& p = t->pw[(size_t)((long long)i * step)];
    for (size_t k = 0; k < r.size(); ++k) r[k] += c_[i] * p[k];
  }
  return Cyclotomic(m, std::move(r));
}

Cyclotomic Cyclotomic::operator-() const {
  Cyclotomic r = *this;
  for (auto& v : r.c_) v = -v;
  return r;
}

Cyclotomic& Cyclotomic::operator+=(const Cyclotomic& o) {
  long long m = lcm_ll(n_, o.n_);
  if (m != n_) *this = embedded(m);
  Cyclotomic ob = o.n_ == m ? o : o.embedded(m);
  for (size_t i = 0; i < c_.size(); ++i) c_[i] += ob.c_[i];
  return *this;
}

Cyclotomic& Cyclotomic::operator-=(const Cyclotomic& o) {
  long long m = lcm_ll(n_, o.n_);
  if (m != n_) *this = embedded(m);
  Cyclotomic ob = o.n_ == m ? o : o.embedded(m);
  for (size_t i = 0; i < c_.size(); ++i) c_[i] -= ob.c_[i];
  return *this;
}

Cyclotomic& Cyclotomic::operator*=(const Cyclotomic& o) {
  long long m = lcm_ll(n_, o.n_);
  Cyclotomic a = n_ == m ? *this : embedded(m);
  Cyclotomic b = o.n_ == m ? o : o.embedded(m);
  auto t = CycloTables::get(m);
  // convolution, then fold degrees >= phi through the power table
  std::vector<BigInt> conv((size_t)(2 * t->phi - 1), BigInt(0));
  for (size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (size_t j = 0; j < b.c_.size(); ++j)
      if (b.c_[j] != 0) conv[i + j] += a.c_[i] * b.c_[j];
  }
  std::vector<BigInt> r((size_t)t->phi, BigInt(0));
  for (size_t k = 0; k < conv.size(); ++k) {
    if (conv[k] == 0) continue;
    if ((long long)k < t->phi)
      r[k] += conv[k];
    else {
      const auto& p = t->pw[k];
      for (size_t i = 0; i < r.size(); ++i) r[i] += conv[k] * p[i];
    }
  }
  n_ = m;
  c_ = std::move(r);
  return *this;
}

bool operator==(const Cyclotomic& a, const Cyclotomic& b) {
  long long m = lcm_ll(a.n_, b.n_);
  Cyclotomic ae = a.n_ == m ? a : a.embedded(m);
  Cyclotomic be = b.n_ == m ? b : b.embedded(m);
  return ae.c_ == be.c_;
}

Cyclotomic Cyclotomic::pow(long long e) const {
  if (e < 0) throw std::invalid_argument("pow: nonnegative exponents only");
  Cyclotomic r = Cyclotomic::one(), x = *this;
  for (; e > 0; e >>= 1) {
    if (e & 1) r *= x;
    if (e > 1) x *= x;
  }
  return r;
}

Cyclotomic Cyclotomic::divide_exact(const BigInt& d) const {
  if (d == 0) throw std::invalid_argument("divide_exact: zero divisor");
  Cyclotomic r = *this;
  for (auto& v : r.c_) {
    BigInt q = v / d;
    if (q * d != v) throw std::logic_error("divide_exact: not divisible");
    v = q;
  }
  return r;
}

Cyclotomic Cyclotomic::reduced() const {
  BigInt iv;
  if (is_integer(&iv)) return Cyclotomic(iv);
  // conductor 2 mod 4 collapses: zeta_{2m} = -zeta_m^{(m+1)/2} for odd m
  if (n_ % 4 == 2) {
    long long m = n_ / 2;
    auto t = CycloTables::get(m);
    std::vector<BigInt> r((size_t)t->phi, BigInt(0));
    long long h = (m + 1) / 2;
    for (size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      const auto& p = t->pw[(size_t)mod_ll((long long)i * h, m)];
      BigInt s = (i % 2 == 0) ? c_[i] : -c_[i];
      for (size_t k = 0; k < r.size(); ++k) r[k] += s * p[k];
    }
    return Cyclotomic(m, std::move(r)).reduced();
  }
  return *this;
}

std::optional<std::pair<long long, long long>> Cyclotomic::as_root_of_unity() const {
  // roots of unity in Q(zeta_n) are exactly mu_{lcm(2,n)}
  long long L = lcm_ll(2, n_);
  Cyclotomic self = embedded(L);
  for (long long j = 0; j < L; ++j) {
    if (self == root_of_unity(L, j)) {
      long long g = gcd_ll(j == 0 ? L : j, L);
      long long M = L / g, k = j / g;
      if (j == 0) return std::make_pair(1LL, 0LL);
      return std::make_pair(M, k);
    }
  }
  return std::nullopt;
}

std::string Cyclotomic::str() const {
  BigInt iv;
  std::ostringstream os;
  if (is_integer(&iv)) {
    os << iv;
    return os.str();
  }
  os << "z" << n_ << "[";
  for (size_t i = 0; i < c_.size(); ++i) {
    if (i) os << ",";
    os << c_[i];
  }
  os << "]";
  return os.str();
}

}  // namespace tamecorr
