#include "tamecorr/char_table.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tamecorr {

namespace {

// ----- F_l linear algebra -----

struct ModField {
  long long l;
  long long add(long long a, long long b) const { return (a + b) % l; }
  long long sub(long long a, long long b) const { return (a - b % l + l) % l; }
  long long mul(long long a, long long b) const { return a * b % l; }
  long long inv(long long a) const { return invmod_ll(mod_ll(a, l), l); }
  long long pow(long long a, long long e) const { return powmod_ll(mod_ll(a, l), e, l); }
};

using Vec = std::vector<long long>;
using Mat = std::vector<Vec>;

// reduced row echelon form in place; returns pivot column per row
std::vector<int> rref(Mat& m, const ModField& F) {
  std::vector<int> pivots;
  size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[r], m[p]);
    long long iv = F.inv(m[r][c]);
    for (size_t j = c; j < cols; ++j) m[r][j] = F.mul(m[r][j], iv);
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      long long f = m[i][c];
      for (size_t j = c; j < cols; ++j) m[i][j] = F.sub(m[i][j], F.mul(f, m[r][j]));
    }
    pivots.push_back((int)c);
    ++r;
  }
  m.resize(r);
  return pivots;
}

// coordinates of v in the rref basis; throws if v is outside the span
Vec coords_in(const Mat& basis, const std::vector<int>& pivots, Vec v, const ModField& F) {
  Vec out(basis.size(), 0);
  for (size_t r = 0; r < basis.size(); ++r) {
    long long c = v[(size_t)pivots[r]];
    if (c == 0) continue;
    out[r] = c;
    for (size_t j = 0; j < v.size(); ++j) v[j] = F.sub(v[j], F.mul(c, basis[r][j]));
  }
  for (long long x : v)
    if (x != 0) throw std::logic_error("character table: subspace not invariant");
  return out;
}

// characteristic polynomial of a square matrix via Hessenberg form,
// low-to-high coefficients of det(xI - M)
Vec charpoly(Mat H, const ModField& F) {
  size_t n = H.size();
  for (size_t j = 0; j + 2 < n; ++j) {
    size_t p = j + 1;
    while (p < n && H[p][j] == 0) ++p;
    if (p == n) continue;
    std::swap(H[j + 1], H[p]);
    for (size_t i = 0; i < n; ++i) std::swap(H[i][j + 1], H[i][p]);
    long long piv = F.inv(H[j + 1][j]);
    for (size_t i = j + 2; i < n; ++i) {
      long long f = F.mul(H[i][j], piv);
      if (f == 0) continue;
      for (size_t c = 0; c < n; ++c) H[i][c] = F.sub(H[i][c], F.mul(f, H[j + 1][c]));
      for (size_t r = 0; r < n; ++r) H[r][j + 1] = F.add(H[r][j + 1], F.mul(f, H[r][i]));
    }
  }
  std::vector<Vec> p(n + 1);
  p[0] = {1};
  for (size_t m = 1; m <= n; ++m) {
    const Vec& prev = p[m - 1];
    Vec cur(m + 1, 0);
    long long hmm = H[m - 1][m - 1];
    for (size_t i = 0; i < prev.size(); ++i) {
      cur[i + 1] = F.add(cur[i + 1], prev[i]);
      cur[i] = F.sub(cur[i], F.mul(hmm, prev[i]));
    }
    long long prod = 1;
    for (size_t i = m - 1; i >= 1; --i) {
      prod = F.mul(prod, H[i][i - 1]);
      long long coef = F.mul(H[i - 1][m - 1], prod);
      if (coef != 0)
        for (size_t t = 0; t < p[i - 1].size(); ++t)
          cur[t] = F.sub(cur[t], F.mul(coef, p[i - 1][t]));
    }
    p[m] = std::move(cur);
  }
  return p[n];
}

Vec matvec(const Mat& M, const Vec& v, const ModField& F) {
  Vec out(M.size(), 0);
  for (size_t i = 0; i < M.size(); ++i) {
    long long s = 0;
    for (size_t j = 0; j < v.size(); ++j) s = F.add(s, F.mul(M[i][j], v[j]));
    out[i] = s;
  }
  return out;
}

// kernel basis of M (square), as rows
Mat kernel(Mat M, const ModField& F) {
  size_t n = M.size();
  std::vector<int> pivots = rref(M, F);
  std::vector<bool> is_pivot(n, false);
  for (int c : pivots) is_pivot[(size_t)c] = true;
  Mat out;
  for (size_t c = 0; c < n; ++c) {
    if (is_pivot[c]) continue;
    Vec v(n, 0);
    v[c] = 1;
    for (size_t r = 0; r < M.size(); ++r)
      v[(size_t)pivots[r]] = F.sub(0, M[r][c]);
    out.push_back(std::move(v));
  }
  return out;
}

long long smallest_primitive_root(long long l) {
  if (l == 2) return 1;
  std::vector<long long> pf;
  long long m = l - 1;
  for (long long d = 2; d * d <= m; ++d)
    if (m % d == 0) {
      pf.push_back(d);
      while (m % d == 0) m /= d;
    }
  if (m > 1) pf.push_back(m);
  for (long long w = 2; w < l; ++w) {
    bool ok = true;
    for (long long d : pf)
      if (powmod_ll(w, (l - 1) / d, l) == 1) { ok = false; break; }
    if (ok) return w;
  }
  throw std::logic_error("no primitive root");
}

bool row_less(const std::pair<long long, std::vector<std::string>>& a,
              const std::pair<long long, std::vector<std::string>>& b) {
  if (a.first != b.first) return a.first < b.first;
  return a.second < b.second;
}

}  // namespace

CharacterTable dixon_character_table(const FiniteGroupModel& G, long long bound) {
  if (G.n > bound)
    throw std::invalid_argument("character table: group order exceeds the configured bound");
  int k = G.num_classes();
  long long n = G.n;

  // l = 1 (mod exponent), l > |G|: degrees and multiplicities lift uniquely
  long long l = 0;
  for (long long c = G.exponent + 1;; c += G.exponent)
    if (c > n && is_prime_ll(c)) { l = c; break; }
  ModField F{l};

  std::vector<int> reps(k);
  std::vector<long long> csize(k);
  for (int j = 0; j < k; ++j) {
    reps[j] = G.class_rep(j);
    csize[j] = (long long)G.classes[(size_t)j].size();
  }

  // class-sum matrix for class i: (M_i)_{j,t} = #{(x,y) in C_i x C_j : xy = g_t};
  // M_i w = w_i w for every central character w
  auto class_matrix = [&](int i) {
    Mat M((size_t)k, Vec((size_t)k, 0));
    for (int x : G.classes[(size_t)i]) {
      int xi = G.invE(x);
      for (int t = 0; t < k; ++t) {
        int y = G.mulE(xi, reps[(size_t)t]);
        M[(size_t)G.class_of[(size_t)y]][(size_t)t] += 1;
      }
    }
    for (auto& row : M)
      for (auto& v : row) v %= l;
    return M;
  };

  // split the k-dim space into common eigenlines
  struct Space {
    Mat basis;               // rref rows
    std::vector<int> pivots;
  };
  std::vector<Space> spaces;
  {
    Mat id((size_t)k, Vec((size_t)k, 0));
    for (int i = 0; i < k; ++i) id[(size_t)i][(size_t)i] = 1;
    Space s{std::move(id), {}};
    for (int i = 0; i < k; ++i) s.pivots.push_back(i);
    spaces.push_back(std::move(s));
  }
  for (int i = 1; i < k; ++i) {
    bool all_lines = true;
    for (const auto& s : spaces) all_lines = all_lines && s.basis.size() == 1;
    if (all_lines) break;
    Mat Mi = class_matrix(i);
    std::vector<Space> next;
    for (auto& s : spaces) {
      size_t d = s.basis.size();
      if (d == 1) {
        next.push_back(std::move(s));
        continue;
      }
      // restriction of M_i to the subspace, columns = coordinates of images
      Mat R(d, Vec(d, 0));
      for (size_t c = 0; c < d; ++c) {
        Vec img = coords_in(s.basis, s.pivots, matvec(Mi, s.basis[c], F), F);
        for (size_t r = 0; r < d; ++r) R[r][c] = img[r];
      }
      Vec cp = charpoly(R, F);
      size_t carved = 0;
      for (long long x = 0; x < l && carved < d; ++x) {
        long long v = 0;
        for (size_t t = cp.size(); t-- > 0;) v = F.add(F.mul(v, x), cp[t]);
        if (v != 0) continue;
        Mat RmX = R;
        for (size_t r = 0; r < d; ++r) RmX[r][r] = F.sub(RmX[r][r], x);
        Mat ker = kernel(RmX, F);
        if (ker.empty()) continue;
        carved += ker.size();
        Mat amb;
        for (const auto& kv : ker) {
          Vec w((size_t)k, 0);
          for (size_t t = 0; t < d; ++t)
            if (kv[t] != 0)
              for (int j = 0; j < k; ++j)
                w[(size_t)j] = F.add(w[(size_t)j], F.mul(kv[t], s.basis[t][(size_t)j]));
          amb.push_back(std::move(w));
        }
        Space ns;
        ns.basis = std::move(amb);
        ns.pivots = rref(ns.basis, F);
        next.push_back(std::move(ns));
      }
      if (carved != d) throw std::logic_error("character table: class matrix not semisimple");
    }
    spaces = std::move(next);
  }
  if ((int)spaces.size() != k)
    throw std::logic_error("character table: eigenline count mismatch");

  // inverse classes and mod-l helpers
  std::vector<int> jinv(k);
  for (int j = 0; j < k; ++j) jinv[j] = G.class_of[(size_t)G.invE(reps[(size_t)j])];
  long long w = smallest_primitive_root(l);

  std::vector<std::pair<long long, std::vector<std::string>>> sort_keys;
  std::vector<std::pair<long long, std::vector<Cyclotomic>>> built;
  for (const auto& s : spaces) {
    if (s.basis.size() != 1) throw std::logic_error("character table: split incomplete");
    Vec omega = s.basis[0];
    if (omega[0] == 0) throw std::logic_error("character table: eigenvector vanishes at 1");
    long long sc = F.inv(omega[0]);
    for (auto& v : omega) v = F.mul(v, sc);

    // degree from <chi, chi> = 1
    long long ssum = 0;
    for (int j = 0; j < k; ++j)
      ssum = F.add(ssum, F.mul(F.mul(omega[(size_t)j], omega[(size_t)jinv[j]]),
                               F.inv(csize[(size_t)j] % l)));
    long long dsq = F.mul(n % l, F.inv(ssum));
    long long deg = 0;
    for (long long d = 1; d * d <= n; ++d)
      if (F.mul(d, d) == dsq) { deg = d; break; }
    if (deg == 0) throw std::logic_error("character table: degree does not lift");

    // mod-l character values per class
    Vec val((size_t)k);
    for (int j = 0; j < k; ++j)
      val[(size_t)j] = F.mul(F.mul(omega[(size_t)j], deg), F.inv(csize[(size_t)j] % l));

    // lift each value through eigenvalue multiplicities of rho(g_j)
    std::vector<Cyclotomic> row((size_t)k);
    for (int j = 0; j < k; ++j) {
      long long o = G.elem_order[(size_t)reps[(size_t)j]];
      long long z = F.pow(w, (l - 1) / o);
      long long oinv = F.inv(o % l);
      Cyclotomic acc;
      long long msum = 0;
      for (long long u = 0; u < o; ++u) {
        long long m = 0;
        for (long long t = 0; t < o; ++t) {
          int gt = G.powE(reps[(size_t)j], t);
          long long zk = F.pow(z, mod_ll(-(long long)(u * t), l - 1));
          m = F.add(m, F.mul(val[(size_t)G.class_of[(size_t)gt]], zk));
        }
        m = F.mul(m, oinv);
        if (m > deg) throw std::logic_error("character table: multiplicity does not lift");
        msum += m;
        if (m != 0) acc += Cyclotomic(BigInt(m)) * Cyclotomic::root_of_unity(o, u);
      }
      if (msum != deg) throw std::logic_error("character table: multiplicities do not sum");
      row[(size_t)j] = acc.reduced();
    }
    std::vector<std::string> key;
    for (const auto& c : row) key.push_back(c.str());
    sort_keys.push_back({deg, std::move(key)});
    built.push_back({deg, std::move(row)});
  }

  std::vector<size_t> order(built.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return row_less(sort_keys[a], sort_keys[b]);
  });

  CharacterTable T;
  T.group_name = G.name;
  T.order = n;
  T.k = k;
  for (size_t i : order) {
    T.degrees.push_back(built[i].first);
    T.rows.push_back(std::move(built[i].second));
  }
  if (!verify_character_table(G, T))
    throw std::logic_error("character table: verification failed");
  return T;
}

bool verify_character_table(const FiniteGroupModel& G, const CharacterTable& T) {
  int k = G.num_classes();
  if (T.k != k || T.order != G.n || T.group_name != G.name) return false;
  if ((int)T.rows.size() != k || (int)T.degrees.size() != k) return false;
  BigInt dsq = 0;
  for (int i = 0; i < k; ++i) {
    if ((int)T.rows[(size_t)i].size() != k) return false;
    if (T.degrees[(size_t)i] < 1) return false;
    BigInt ident;
    if (!T.rows[(size_t)i][0].is_integer(&ident) || ident != T.degrees[(size_t)i]) return false;
    dsq += ident * ident;
  }
  if (dsq != G.n) return false;
  std::vector<int> jinv(k);
  std::vector<long long> csize(k);
  for (int j = 0; j < k; ++j) {
    jinv[j] = G.class_of[(size_t)G.invE(G.class_rep(j))];
    csize[j] = (long long)G.classes[(size_t)j].size();
  }
  for (int a = 0; a < k; ++a)
    for (int b = a; b < k; ++b) {
      Cyclotomic s;
      for (int j = 0; j < k; ++j)
        s += Cyclotomic(BigInt(csize[(size_t)j])) * T.rows[(size_t)a][(size_t)j] *
             T.rows[(size_t)b][(size_t)jinv[j]];
      if (s != Cyclotomic(BigInt(a == b ? G.n : 0))) return false;
    }
  return true;
}

std::string CharacterTable::serialize() const {
  std::ostringstream os;
  os << "group " << group_name << " order " << order << " classes " << k << "\n";
  for (int i = 0; i < k; ++i) {
    long long cond = 1;
    for (const auto& v : rows[(size_t)i]) cond = lcm_ll(cond, v.conductor());
    os << "irr deg=" << degrees[(size_t)i] << " cond=" << cond << " coeffs=";
    for (int j = 0; j < k; ++j) {
      Cyclotomic e = rows[(size_t)i][(size_t)j].embedded(cond);
      os << "[";
      const auto& cs = e.coeffs();
      for (size_t t = 0; t < cs.size(); ++t) {
        if (t) os << ",";
        os << cs[t].str();
      }
      os << "]";
    }
    os << "\n";
  }
  return os.str();
}

CharacterTable CharacterTable::deserialize(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("table parse: empty");
  if (line.rfind("group ", 0) != 0) throw std::invalid_argument("table parse: bad header");
  size_t op = line.rfind(" order ");
  if (op == std::string::npos) throw std::invalid_argument("table parse: bad header");
  size_t cp = line.rfind(" classes ");
  if (cp == std::string::npos || cp < op) throw std::invalid_argument("table parse: bad header");
  CharacterTable T;
  T.group_name = line.substr(6, op - 6);
  T.order = std::stoll(line.substr(op + 7, cp - (op + 7)));
  T.k = (int)std::stoll(line.substr(cp + 9));
  if (T.k < 1 || T.order < 1) throw std::invalid_argument("table parse: bad header counts");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tag, degkv, condkv;
    ls >> tag >> degkv >> condkv;
    if (tag != "irr" || degkv.rfind("deg=", 0) != 0 || condkv.rfind("cond=", 0) != 0)
      throw std::invalid_argument("table parse: bad irr line");
    long long deg = std::stoll(degkv.substr(4));
    long long cond = std::stoll(condkv.substr(5));
    if (cond < 1) throw std::invalid_argument("table parse: bad conductor");
    std::string rest;
    std::getline(ls, rest);
    size_t eq = rest.find("coeffs=");
    if (eq == std::string::npos) throw std::invalid_argument("table parse: missing coeffs");
    rest = rest.substr(eq + 7);
    std::vector<Cyclotomic> row;
    size_t pos = 0;
    while (pos < rest.size()) {
      if (rest[pos] != '[') throw std::invalid_argument("table parse: bad coeff group");
      size_t end = rest.find(']', pos);
      if (end == std::string::npos) throw std::invalid_argument("table parse: bad coeff group");
      std::string body = rest.substr(pos + 1, end - pos - 1);
      if (body.empty()) throw std::invalid_argument("table parse: empty coeff group");
      Cyclotomic v;
      long long idx = 0;
      size_t at = 0;
      while (at <= body.size()) {
        size_t comma = body.find(',', at);
        std::string num = body.substr(at, comma == std::string::npos ? std::string::npos
                                                                     : comma - at);
        if (num.empty()) throw std::invalid_argument("table parse: empty coefficient");
        v += Cyclotomic(BigInt(num)) * Cyclotomic::root_of_unity(cond, idx);
        ++idx;
        if (comma == std::string::npos) break;
        at = comma + 1;
      }
      if (idx != euler_phi(cond))
        throw std::invalid_argument("table parse: coefficient count mismatch");
      row.push_back(v.reduced());
      pos = end + 1;
    }
    if ((int)row.size() != T.k) throw std::invalid_argument("table parse: wrong class count");
    T.degrees.push_back(deg);
    T.rows.push_back(std::move(row));
  }
  if ((int)T.rows.size() != T.k) throw std::invalid_argument("table parse: wrong row count");
  return T;
}

std::string table_cache_filename(const std::string& group_name) {
  std::string out;
  for (char c : group_name)
    out += (std::isalnum((unsigned char)c) ? c : '_');
  return out + ".txt";
}

CharacterTable character_table_cached(const FiniteGroupModel& G, const std::string& path,
                                      long long bound) {
  {
    std::ifstream in(path);
    if (in) {
      std::stringstream buf;
      buf << in.rdbuf();
      try {
        CharacterTable T = CharacterTable::deserialize(buf.str());
        if (verify_character_table(G, T)) return T;
      } catch (const std::exception&) {
        // fall through to recompute
      }
    }
  }
  CharacterTable T = dixon_character_table(G, bound);
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << T.serialize();
  }
  std::rename(tmp.c_str(), path.c_str());
  return T;
}

}  // namespace tamecorr
