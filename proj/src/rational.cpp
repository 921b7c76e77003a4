#include "qhess/rational.hpp"

namespace qhess {

Rational elementary_symmetric(const std::vector<Rational>& xs, int k) {
  if (k < 0 || k > static_cast<int>(xs.size())) return Rational(0);
  // e[j] after processing a prefix = sigma_j of that prefix.
  std::vector<Rational> e(static_cast<std::size_t>(k) + 1, Rational(0));
  e[0] = Rational(1);
  for (const Rational& x : xs) {
    for (int j = std::min<int>(k, static_cast<int>(xs.size())); j >= 1; --j) {
      e[j] = e[j] + e[j - 1] * x;
    }
  }
  return e[k];
}

}  // namespace qhess
