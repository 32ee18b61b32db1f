// Derives the per-summand sign table empirically from the fixed-point
// correspondence sign on Heisenberg realizations, and certifies the closed
// form shipped in sign_table_entry against it:
//
//   - for each feasible irreducible pair (p, form type, character order N),
//     the sign of the full cyclic action factors as t0 * t1(c) with t0 = -1
//     exactly on the anisotropic type and t1 the unique quadratic character
//     of the image when nontrivial;
//   - for every divisor subgroup <c^j>, the sign of the restricted action
//     must equal the table's prediction through restrict/decompose, so the
//     t1 values are pinned on the whole group, not just on generators.
//
// One row per (p, type, N); nonzero exit on any odd-p mismatch.  p = 2 rows
// exercise the experimental central-product realization and are reported
// separately.
//
// Usage: derive_sign_table [cache-dir]

#include <cstdio>
#include <exception>
#include <numeric>
#include <string>
#include <vector>

#include "tamecorr/glauberman.hpp"
#include "tamecorr/symplectic.hpp"

using namespace tamecorr;

namespace {

using Mat = std::vector<std::vector<long long>>;

Mat mat_mul_p(const Mat& a, const Mat& b, long long p) {
  size_t n = a.size();
  Mat r(n, std::vector<long long>(n, 0));
  for (size_t i = 0; i < n; ++i)
    for (size_t k = 0; k < n; ++k) {
      if (a[i][k] == 0) continue;
      for (size_t j = 0; j < n; ++j) r[i][j] = (r[i][j] + a[i][k] * b[k][j]) % p;
    }
  return r;
}

Mat mat_pow_p(Mat a, long long e, long long p) {
  size_t n = a.size();
  Mat r(n, std::vector<long long>(n, 0));
  for (size_t i = 0; i < n; ++i) r[i][i] = 1;
  for (; e > 0; e >>= 1) {
    if (e & 1) r = mat_mul_p(r, a, p);
    a = mat_mul_p(a, a, p);
  }
  return r;
}

long long pow_ll_local(long long b, long long e) {
  long long r = 1;
  while (e-- > 0) r *= b;
  return r;
}

struct RowResult {
  bool consistent = true;
  std::string line;
};

RowResult run_row(long long p, bool aniso, long long N, const std::string& cache) {
  BarCharacter chi = N == 1 ? trivial_bar_character({1}) : bar_character({N}, N, {1});
  SymplecticModule M =
      aniso ? anisotropic_module(p, {N}, chi) : hyperbolic_module(p, {N}, chi);
  ConcreteSymplecticSpace S = synthesize(M);
  long long d = chi.degree(p);

  RowResult out;
  char head[96];
  std::snprintf(head, sizeof head, "p=%lld %-5s N=%-2lld d=%lld dim=%lld |", p,
                aniso ? "aniso" : "hyp", N, d, S.dim);
  out.line = head;

  for (long long j = 1; j <= N; ++j) {
    if (N % j != 0) continue;
    ConcreteSymplecticSpace Sj = S;
    Sj.factor_orders = {N / j};
    Sj.action = {mat_pow_p(S.action[0], j, p)};
    int oracle = heisenberg_sign(Sj, 3000, cache);
    int predicted = t_of(M, {j});
    char buf[48];
    std::snprintf(buf, sizeof buf, " C%lld:%+d", N / j, oracle);
    out.line += buf;
    if (oracle != predicted) {
      std::snprintf(buf, sizeof buf, "(table %+d MISMATCH)", predicted);
      out.line += buf;
      out.consistent = false;
    }
  }

  // factorization of the full-group sign against the closed-form entry
  SignTableEntry e =
      sign_table_entry(p, aniso ? FormType::anisotropic : FormType::hyperbolic, d, N);
  int t0 = aniso ? -1 : +1;
  int full = t_of(M, {1});
  int t1_at_c = t0 * full;
  int t1_expected = e.t1_nontrivial ? -1 : +1;
  char tail[64];
  std::snprintf(tail, sizeof tail, " | t0=%+d t1(c)=%+d%s", t0, t1_at_c,
                e.t1_nontrivial ? " (quadratic)" : "");
  out.line += tail;
  if (!aniso && M.summands.size() == 1 && t1_at_c != t1_expected) {
    // single-summand rows must match the entry directly; capable-chi
    // hyperbolic rows decompose into an anisotropic pair instead
    out.line += " ENTRY MISMATCH";
    out.consistent = false;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::string cache = argc > 1 ? argv[1] : "";
  int bad_odd = 0, bad_two = 0, rows = 0;
  for (long long p : {2LL, 3LL, 5LL, 7LL}) {
    for (long long N = 1; N <= 24; ++N) {
      if (std::gcd(N, p) != 1) continue;
      BarCharacter chi = N == 1 ? trivial_bar_character({1}) : bar_character({N}, N, {1});
      long long d = chi.degree(p);
      for (int aniso = 0; aniso <= 1; ++aniso) {
        if (aniso && !anisotropic_capable(chi, p)) continue;
        long long dim = aniso ? d : 2 * d;
        if (dim > 6) continue;
        if (N * pow_ll_local(p, 1 + dim) > 3000) continue;
        try {
          RowResult r = run_row(p, aniso, N, cache);
          ++rows;
          std::printf("%s%s\n", r.line.c_str(), p == 2 ? "  [experimental]" : "");
          if (!r.consistent) (p == 2 ? bad_two : bad_odd)++;
        } catch (const std::exception& ex) {
          std::printf("p=%lld %s N=%lld: error: %s%s\n", p, aniso ? "aniso" : "hyp", N,
                      ex.what(), p == 2 ? "  [experimental]" : "");
          (p == 2 ? bad_two : bad_odd)++;
        }
        std::fflush(stdout);
      }
    }
  }
  std::printf("rows=%d odd-p mismatches=%d p2 mismatches=%d\n", rows, bad_odd, bad_two);
  return bad_odd == 0 ? 0 : 1;
}
