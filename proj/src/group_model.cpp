#include "tamecorr/group_model.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace tamecorr {

int FiniteGroupModel::powE(int a, long long k) const {
  long long o = elem_order.empty() ? 0 : elem_order[(size_t)a];
  if (o > 0) k = mod_ll(k, o);
  if (k < 0) throw std::logic_error("powE: negative exponent on unordered element");
  int acc = id, base = a;
  while (k > 0) {
    if (k & 1) acc = mulE(acc, base);
    base = mulE(base, base);
    k >>= 1;
  }
  return acc;
}

bool FiniteGroupModel::is_abelian() const {
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (mulE(a, b) != mulE(b, a)) return false;
  return true;
}

FiniteGroupModel FiniteGroupModel::from_law(std::string name, int n,
                                            const std::function<int(int, int)>& law) {
  if (n <= 0 || n > 65535) throw std::invalid_argument("from_law: bad order");
  FiniteGroupModel G;
  G.name = std::move(name);
  G.n = n;
  G.mul.assign((size_t)n * n, 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      int c = law(a, b);
      if (c < 0 || c >= n) throw std::invalid_argument("from_law: law out of range");
      G.mul[(size_t)a * n + b] = (uint16_t)c;
    }

  // identity
  G.id = -1;
  for (int e = 0; e < n && G.id < 0; ++e) {
    bool ok = true;
    for (int a = 0; a < n && ok; ++a)
      ok = G.mulE(e, a) == a && G.mulE(a, e) == a;
    if (ok) G.id = e;
  }
  if (G.id < 0) throw std::invalid_argument("from_law: no identity");

  // inverses (existence checks the table is a Latin square on each row)
  G.inv.assign((size_t)n, 0);
  for (int a = 0; a < n; ++a) {
    int found = -1;
    for (int b = 0; b < n; ++b)
      if (G.mulE(a, b) == G.id) {
        found = b;
        break;
      }
    if (found < 0 || G.mulE(found, a) != G.id)
      throw std::invalid_argument("from_law: missing inverse");
    G.inv[(size_t)a] = (uint16_t)found;
  }

  // associativity: exhaustive when affordable, else a fixed deterministic sample
  auto assoc = [&](int a, int b, int c) {
    return G.mulE(G.mulE(a, b), c) == G.mulE(a, G.mulE(b, c));
  };
  if (n <= 512) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          if (!assoc(a, b, c)) throw std::invalid_argument("from_law: not associative");
  } else {
    uint64_t s = 0x9e3779b97f4a7c15ull ^ (uint64_t)n;
    auto next = [&s]() {
      s ^= s << 13;
      s ^= s >> 7;
      s ^= s << 17;
      return s;
    };
    for (int t = 0; t < 200000; ++t) {
      int a = (int)(next() % (uint64_t)n);
      int b = (int)(next() % (uint64_t)n);
      int c = (int)(next() % (uint64_t)n);
      if (!assoc(a, b, c)) throw std::invalid_argument("from_law: not associative");
    }
  }

  // element orders and group exponent
  G.elem_order.assign((size_t)n, 0);
  G.exponent = 1;
  for (int a = 0; a < n; ++a) {
    int o = 1, x = a;
    while (x != G.id) {
      x = G.mulE(x, a);
      ++o;
      if (o > n) throw std::invalid_argument("from_law: order overflow");
    }
    G.elem_order[(size_t)a] = o;
    G.exponent = lcm_ll(G.exponent, o);
  }

  // conjugacy classes, then canonical class order
  G.class_of.assign((size_t)n, -1);
  std::vector<std::vector<int>> raw;
  for (int g = 0; g < n; ++g) {
    if (G.class_of[(size_t)g] >= 0) continue;
    std::vector<int> cls;
    for (int x = 0; x < n; ++x) {
      int h = G.conj(g, x);
      if (G.class_of[(size_t)h] < 0) {
        G.class_of[(size_t)h] = (int)raw.size();
        cls.push_back(h);
      }
    }
    std::sort(cls.begin(), cls.end());
    raw.push_back(std::move(cls));
  }
  std::vector<int> order_idx(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) order_idx[i] = (int)i;
  std::sort(order_idx.begin(), order_idx.end(), [&](int x, int y) {
    bool ix = raw[(size_t)x][0] == G.id ? false : true;
    bool iy = raw[(size_t)y][0] == G.id ? false : true;
    if (ix != iy) return !ix;  // identity class first
    int ox = G.elem_order[(size_t)raw[(size_t)x][0]];
    int oy = G.elem_order[(size_t)raw[(size_t)y][0]];
    if (ox != oy) return ox < oy;
    if (raw[(size_t)x].size() != raw[(size_t)y].size())
      return raw[(size_t)x].size() < raw[(size_t)y].size();
    return raw[(size_t)x][0] < raw[(size_t)y][0];
  });
  G.classes.resize(raw.size());
  for (size_t k = 0; k < raw.size(); ++k) G.classes[k] = std::move(raw[(size_t)order_idx[k]]);
  for (size_t k = 0; k < G.classes.size(); ++k)
    for (int g : G.classes[k]) G.class_of[(size_t)g] = (int)k;
  return G;
}

std::vector<int> FiniteGroupModel::closure(std::vector<int> gens) const {
  std::vector<char> in((size_t)n, 0);
  std::vector<int> frontier;
  in[(size_t)id] = 1;
  frontier.push_back(id);
  for (int g : gens)
    if (!in[(size_t)g]) {
      in[(size_t)g] = 1;
      frontier.push_back(g);
    }
  for (size_t head = 0; head < frontier.size(); ++head) {
    int x = frontier[head];
    for (int g : gens) {
      int y = mulE(x, g);
      if (!in[(size_t)y]) {
        in[(size_t)y] = 1;
        frontier.push_back(y);
      }
      y = mulE(g, x);
      if (!in[(size_t)y]) {
        in[(size_t)y] = 1;
        frontier.push_back(y);
      }
    }
  }
  std::sort(frontier.begin(), frontier.end());
  return frontier;
}

bool FiniteGroupModel::is_subgroup(const std::vector<int>& s) const {
  if (!std::binary_search(s.begin(), s.end(), id)) return false;
  for (int a : s)
    for (int b : s)
      if (!std::binary_search(s.begin(), s.end(), mulE(a, b))) return false;
  return true;
}

bool FiniteGroupModel::is_normal(const std::vector<int>& s) const {
  for (int h : s)
    for (int x = 0; x < n; ++x)
      if (!std::binary_search(s.begin(), s.end(), conj(h, x))) return false;
  return true;
}

std::vector<int> FiniteGroupModel::center() const {
  std::vector<int> z;
  for (int a = 0; a < n; ++a) {
    bool central = true;
    for (int b = 0; b < n && central; ++b) central = mulE(a, b) == mulE(b, a);
    if (central) z.push_back(a);
  }
  return z;
}

std::pair<FiniteGroupModel, std::vector<int>> FiniteGroupModel::subgroup_model(
    const std::vector<int>& s, std::string name) const {
  if (!is_subgroup(s)) throw std::invalid_argument("subgroup_model: not a subgroup");
  std::map<int, int> idx;
  for (size_t i = 0; i < s.size(); ++i) idx[s[i]] = (int)i;
  auto law = [&](int a, int b) { return idx.at(mulE(s[(size_t)a], s[(size_t)b])); };
  return {from_law(std::move(name), (int)s.size(), law), s};
}

int FiniteGroupModel::transfer(const std::vector<int>& H, int g) const {
  if (n % (int)H.size() != 0) throw std::invalid_argument("transfer: not a subgroup size");
  // right coset reps, chosen as smallest unassigned index
  std::vector<int> rep_of((size_t)n, -1);
  std::vector<int> reps;
  for (int x = 0; x < n; ++x) {
    if (rep_of[(size_t)x] >= 0) continue;
    reps.push_back(x);
    for (int h : H) rep_of[(size_t)mulE(h, x)] = x;
  }
  int acc = id;
  for (int r : reps) {
    int rg = mulE(r, g);
    int r2 = rep_of[(size_t)rg];
    int h = mulE(rg, invE(r2));  // rg = h * r2
    if (!std::binary_search(H.begin(), H.end(), h))
      throw std::logic_error("transfer: component not in subgroup");
    acc = mulE(acc, h);
  }
  return acc;
}

}  // namespace tamecorr
