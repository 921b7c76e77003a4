#include "qhess/nabla_table.hpp"

#include <stdexcept>

namespace qhess {

std::array<NablaTerm, 2> nabla_terms(int i, int alpha) {
  const int l = i / 2;
  const bool odd = (i % 2) != 0;
  const Cplx I(0.0, 1.0);
  if (!odd && alpha == 0) return {NablaTerm{4 * l, 1.0}, NablaTerm{4 * l + 1, I}};
  if (!odd && alpha == 1) return {NablaTerm{4 * l + 2, -1.0}, NablaTerm{4 * l + 3, -I}};
  if (odd && alpha == 0) return {NablaTerm{4 * l + 2, 1.0}, NablaTerm{4 * l + 3, -I}};
  return {NablaTerm{4 * l, 1.0}, NablaTerm{4 * l + 1, -I}};
}

int pair_count(int n) { return n * (2 * n - 1); }

int pair_index(int i, int j, int n) {
  const int d = 2 * n;
  if (i < 0 || j <= i || j >= d) throw std::out_of_range("pair_index");
  // Lexicographic over i, then j.
  return i * d - i * (i + 1) / 2 + (j - i - 1);
}

std::pair<int, int> pair_from_index(int idx, int n) {
  const int d = 2 * n;
  for (int i = 0; i < d - 1; ++i) {
    const int row = d - 1 - i;
    if (idx < row) return {i, i + 1 + idx};
    idx -= row;
  }
  throw std::out_of_range("pair_from_index");
}

void twoform_from_real_hessian(const double* H, int n, Cplx* out) {
  const int d = 2 * n;
  const int dr = 4 * n;
  int idx = 0;
  for (int i = 0; i < d; ++i) {
    const auto ci0 = nabla_terms(i, 0);
    const auto ci1 = nabla_terms(i, 1);
    for (int j = i + 1; j < d; ++j, ++idx) {
      const auto cj0 = nabla_terms(j, 0);
      const auto cj1 = nabla_terms(j, 1);
      Cplx v(0.0, 0.0);
      for (const auto& s : ci0)
        for (const auto& t : cj1) v += s.coeff * t.coeff * H[s.axis * dr + t.axis];
      for (const auto& s : ci1)
        for (const auto& t : cj0) v -= s.coeff * t.coeff * H[s.axis * dr + t.axis];
      out[idx] = v;
    }
  }
}

std::vector<Cplx> twoform_from_real_hessian(
    const std::function<double(int, int)>& H, int n) {
  const int dr = 4 * n;
  std::vector<double> dense(dr * dr);
  for (int a = 0; a < dr; ++a)
    for (int b = 0; b < dr; ++b) dense[a * dr + b] = H(a, b);
  std::vector<Cplx> c(pair_count(n), Cplx(0.0, 0.0));
  twoform_from_real_hessian(dense.data(), n, c.data());
  return c;
}

}  // namespace qhess
