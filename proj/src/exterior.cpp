#include "qhess/exterior.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

#include "qhess/nabla_table.hpp"

namespace qhess {

namespace {

int merge_sign(std::uint32_t a, std::uint32_t b) {
  // Sign of sorting the concatenation (sorted a, sorted b): for each generator in b,
  // count the generators of a above it.
  int inv = 0;
  std::uint32_t bb = b;
  while (bb) {
    const int j = std::countr_zero(bb);
    bb &= bb - 1;
    inv += std::popcount(a >> (j + 1));
  }
  return (inv % 2 == 0) ? 1 : -1;
}

}  // namespace

Multivector::Multivector(int n, int degree) : n_(n), degree_(degree) {
  if (n < 1 || degree < 0 || degree > 2 * n)
    throw std::invalid_argument("Multivector: bad n or degree");
}

Multivector Multivector::scalar(int n, Cplx value) {
  Multivector m(n, 0);
  m.set(0, value);
  return m;
}

void Multivector::check_mask(std::uint32_t mask) const {
  if (mask >= (1u << (2 * n_)) || std::popcount(mask) != degree_)
    throw std::invalid_argument("Multivector: mask does not match degree");
}

void Multivector::set(std::uint32_t mask, Cplx value) {
  check_mask(mask);
  if (value == Cplx(0.0, 0.0)) {
    terms_.erase(mask);
  } else {
    terms_[mask] = value;
  }
}

void Multivector::add(std::uint32_t mask, Cplx value) {
  check_mask(mask);
  auto it = terms_.find(mask);
  const Cplx v = (it == terms_.end() ? Cplx(0.0) : it->second) + value;
  if (v == Cplx(0.0, 0.0)) {
    if (it != terms_.end()) terms_.erase(it);
  } else {
    terms_[mask] = v;
  }
}

Cplx Multivector::coeff(std::uint32_t mask) const {
  auto it = terms_.find(mask);
  return it == terms_.end() ? Cplx(0.0) : it->second;
}

Multivector operator+(const Multivector& a, const Multivector& b) {
  if (a.n_ != b.n_ || a.degree_ != b.degree_)
    throw std::invalid_argument("Multivector +: grade mismatch");
  Multivector r = a;
  for (const auto& [m, v] : b.terms_) r.add(m, v);
  return r;
}

Multivector operator-(const Multivector& a, const Multivector& b) {
  return a + Cplx(-1.0) * b;
}

Multivector operator*(Cplx t, const Multivector& a) {
  Multivector r(a.n_, a.degree_);
  if (t == Cplx(0.0, 0.0)) return r;
  for (const auto& [m, v] : a.terms_) r.terms_[m] = t * v;
  return r;
}

double Multivector::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [mask, v] : terms_) m = std::max(m, std::abs(v));
  return m;
}

Multivector wedge(const Multivector& a, const Multivector& b) {
  if (a.n() != b.n()) throw std::invalid_argument("wedge: dimension mismatch");
  if (a.degree() + b.degree() > 2 * a.n())
    throw std::invalid_argument("wedge: degree overflow");
  Multivector r(a.n(), a.degree() + b.degree());
  for (const auto& [ma, va] : a.terms()) {
    for (const auto& [mb, vb] : b.terms()) {
      if (ma & mb) continue;
      const double s = merge_sign(ma, mb);
      r.add(ma | mb, s * va * vb);
    }
  }
  return r;
}

Multivector power(const Multivector& a, int k) {
  if (k < 0) throw std::invalid_argument("power: negative exponent");
  Multivector r = Multivector::scalar(a.n(), 1.0);
  for (int i = 0; i < k; ++i) r = wedge(r, a);
  return r;
}

Cplx top_coefficient(const Multivector& a) {
  if (a.degree() != 2 * a.n())
    throw std::invalid_argument("top_coefficient: not a top-degree form");
  return a.coeff((1u << (2 * a.n())) - 1);
}

TwoForm::TwoForm(int n_) : n(n_), c(pair_count(n_), Cplx(0.0)) {
  if (n_ < 1) throw std::invalid_argument("TwoForm: n must be positive");
}

Cplx TwoForm::at(int i, int j) const {
  if (i == j) return Cplx(0.0);
  return i < j ? c[pair_index(i, j, n)] : -c[pair_index(j, i, n)];
}

void TwoForm::set(int i, int j, Cplx v) { c[pair_index(i, j, n)] = v; }

Multivector TwoForm::to_multivector() const {
  Multivector m(n, 2);
  for (int idx = 0; idx < pair_count(n); ++idx) {
    if (c[idx] == Cplx(0.0, 0.0)) continue;
    const auto [i, j] = pair_from_index(idx, n);
    m.set((1u << i) | (1u << j), c[idx]);
  }
  return m;
}

TwoForm TwoForm::from_multivector(const Multivector& m) {
  if (m.degree() != 2) throw std::invalid_argument("from_multivector: degree != 2");
  TwoForm f(m.n());
  for (const auto& [mask, v] : m.terms()) {
    const int i = std::countr_zero(mask);
    const int j = std::countr_zero(mask & (mask - 1));
    f.set(i, j, v);
  }
  return f;
}

TwoForm operator+(const TwoForm& a, const TwoForm& b) {
  if (a.n != b.n) throw std::invalid_argument("TwoForm +: size mismatch");
  TwoForm r(a.n);
  for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = a.c[i] + b.c[i];
  return r;
}

TwoForm operator-(const TwoForm& a, const TwoForm& b) {
  if (a.n != b.n) throw std::invalid_argument("TwoForm -: size mismatch");
  TwoForm r(a.n);
  for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = a.c[i] - b.c[i];
  return r;
}

TwoForm operator*(Cplx t, const TwoForm& a) {
  TwoForm r(a.n);
  for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = t * a.c[i];
  return r;
}

double TwoForm::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& v : c) m = std::max(m, std::abs(v));
  return m;
}

TwoForm beta(int n) {
  TwoForm b(n);
  for (int l = 0; l < n; ++l) b.set(2 * l, 2 * l + 1, Cplx(1.0));
  return b;
}

namespace {

// densities of a^k ^ beta^{n-k} (complex, un-normalized by n!) for k = 1..n.
std::vector<Cplx> wedge_density_ladder(const TwoForm& a) {
  const int n = a.n;
  std::vector<Cplx> out(n);
  std::vector<const Cplx*> factors(n);
  const auto& bc = beta_coeffs(n);
  for (int k = 1; k <= n; ++k) {
    for (int t = 0; t < k; ++t) factors[t] = a.c.data();
    for (int t = k; t < n; ++t) factors[t] = bc.data();
    out[k - 1] = wedge_top(factors, n);
  }
  return out;
}

}  // namespace

double real_form_defect(const TwoForm& a) {
  const double scale = a.max_abs_coeff();
  if (scale == 0.0) return 0.0;
  TwoForm u = Cplx(1.0 / scale) * a;
  double defect = 0.0;
  for (const Cplx& d : wedge_density_ladder(u)) defect = std::max(defect, std::abs(d.imag()));
  return defect;
}

ConeReport cone_membership(const TwoForm& a, int m, double tol, double real_tol) {
  if (m < 1 || m > a.n) throw std::invalid_argument("cone_membership: m out of range");
  ConeReport rep;
  rep.scale = a.max_abs_coeff();
  TwoForm u = rep.scale > 0.0 ? Cplx(1.0 / rep.scale) * a : a;
  const auto ladder = wedge_density_ladder(u);
  double defect = 0.0;
  for (const Cplx& d : ladder) defect = std::max(defect, std::abs(d.imag()));
  if (defect > real_tol)
    throw std::invalid_argument("cone_membership: non-real two-form");
  const double norm = factorial(a.n);
  rep.densities.resize(m);
  rep.member = true;
  for (int k = 1; k <= m; ++k) {
    rep.densities[k - 1] = ladder[k - 1].real() / norm;
    if (rep.densities[k - 1] < -tol) rep.member = false;
  }
  return rep;
}

namespace {

// Real 4n x 4n Hessian of the quadratic q -> sum conj(q_k) A_{kl} q_l:
// H_{4k+s, 4l+t} = 2 Sc(conj(e_s) A_{kl} e_t) with e = (1, i, j, k).
std::vector<double> quadratic_real_hessian(const HyperhermitianMatrix& A) {
  static const Quaternion e[4] = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
  const int n = A.n();
  const int d = 4 * n;
  std::vector<double> H(d * d);
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      const Quaternion a = A(k, l);
      for (int s = 0; s < 4; ++s) {
        for (int t = 0; t < 4; ++t) {
          H[(4 * k + s) * d + (4 * l + t)] = 2.0 * (conj(e[s]) * a * e[t]).scalar_part();
        }
      }
    }
  }
  return H;
}

struct BridgeBasis {
  // Real basis of hyperhermitian matrices and the matrix of the two-form bridge over
  // it, factorized once for the inverse map.
  std::vector<HyperhermitianMatrix> basis;
  Eigen::MatrixXd M;  // 2 * pair_count x basis.size()
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr;
};

Eigen::VectorXd twoform_to_reals(const TwoForm& f) {
  Eigen::VectorXd v(2 * f.c.size());
  for (std::size_t i = 0; i < f.c.size(); ++i) {
    v(2 * i) = f.c[i].real();
    v(2 * i + 1) = f.c[i].imag();
  }
  return v;
}

const BridgeBasis& bridge_basis(int n) {
  static std::mutex mu;
  static std::unordered_map<int, BridgeBasis> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  BridgeBasis bb;
  for (int l = 0; l < n; ++l) {
    HyperhermitianMatrix E(n);
    E.set(l, l, Quaternion::real(1.0));
    bb.basis.push_back(E);
  }
  static const Quaternion units[4] = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
  for (int r = 0; r < n; ++r) {
    for (int c2 = r + 1; c2 < n; ++c2) {
      for (const Quaternion& w : units) {
        HyperhermitianMatrix E(n);
        E.set(r, c2, w);
        bb.basis.push_back(E);
      }
    }
  }
  bb.M.resize(2 * pair_count(n), static_cast<int>(bb.basis.size()));
  for (std::size_t b = 0; b < bb.basis.size(); ++b) {
    bb.M.col(static_cast<int>(b)) = twoform_to_reals(twoform_from_hyperhermitian(bb.basis[b]));
  }
  bb.qr.compute(bb.M);
  if (bb.qr.rank() != bb.M.cols())
    throw std::logic_error("bridge_basis: bridge map lost rank");
  auto [pos, ok] = cache.emplace(n, std::move(bb));
  return pos->second;
}

}  // namespace

TwoForm twoform_from_hyperhermitian(const HyperhermitianMatrix& A) {
  const int n = A.n();
  const int d = 4 * n;
  const std::vector<double> H = quadratic_real_hessian(A);
  const auto c = twoform_from_real_hessian(
      [&H, d](int a, int b) { return H[a * d + b]; }, n);
  TwoForm f(n);
  // The Baston image of the quadratic is 2 * Hessian-normalized; the bridge fixed by
  // identity -> 2 beta divides the raw contraction by 4.
  for (std::size_t i = 0; i < c.size(); ++i) f.c[i] = 0.25 * c[i];
  return f;
}

HyperhermitianMatrix hyperhermitian_from_twoform(const TwoForm& a, double fit_tol) {
  const BridgeBasis& bb = bridge_basis(a.n);
  const Eigen::VectorXd rhs = twoform_to_reals(a);
  const Eigen::VectorXd x = bb.qr.solve(rhs);
  const double resid = (bb.M * x - rhs).norm();
  const double scale = std::max(1.0, rhs.norm());
  if (resid > fit_tol * scale)
    throw std::invalid_argument("hyperhermitian_from_twoform: not of hyperhermitian type");
  HyperhermitianMatrix A(a.n);
  for (int b = 0; b < static_cast<int>(bb.basis.size()); ++b) {
    A = A + x(b) * bb.basis[b];
  }
  return A;
}

namespace {

void enumerate_top_terms(std::uint32_t used, int slot, int n,
                         std::array<std::uint8_t, 8>& pairs, std::vector<int>& order,
                         TopTermTable& out) {
  const int d = 2 * n;
  if (slot == n) {
    // order holds the index sequence i1 j1 i2 j2 ...; its permutation sign relative
    // to 0..2n-1 is the term sign.
    int inv = 0;
    for (std::size_t a = 0; a < order.size(); ++a)
      for (std::size_t b = a + 1; b < order.size(); ++b)
        if (order[a] > order[b]) ++inv;
    out.sign.push_back(inv % 2 == 0 ? 1 : -1);
    for (int t = 0; t < n; ++t) out.pair_idx.push_back(pairs[t]);
    return;
  }
  for (int i = 0; i < d; ++i) {
    if (used & (1u << i)) continue;
    for (int j = i + 1; j < d; ++j) {
      if (used & (1u << j)) continue;
      pairs[slot] = static_cast<std::uint8_t>(pair_index(i, j, n));
      order.push_back(i);
      order.push_back(j);
      enumerate_top_terms(used | (1u << i) | (1u << j), slot + 1, n, pairs, order, out);
      order.pop_back();
      order.pop_back();
    }
  }
}

}  // namespace

const TopTermTable& top_term_table(int n) {
  static std::mutex mu;
  static std::unordered_map<int, TopTermTable> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  if (n < 1 || n > 4) throw std::invalid_argument("top_term_table: n out of range");
  TopTermTable t;
  t.n = n;
  std::array<std::uint8_t, 8> pairs{};
  std::vector<int> order;
  enumerate_top_terms(0, 0, n, pairs, order, t);
  auto [pos, ok] = cache.emplace(n, std::move(t));
  return pos->second;
}

Cplx wedge_top(const std::vector<const Cplx*>& factors, int n) {
  if (static_cast<int>(factors.size()) != n)
    throw std::invalid_argument("wedge_top: need n factors");
  const TopTermTable& t = top_term_table(n);
  Cplx acc(0.0, 0.0);
  const std::uint8_t* pi = t.pair_idx.data();
  for (std::size_t term = 0; term < t.terms(); ++term, pi += n) {
    Cplx p(static_cast<double>(t.sign[term]), 0.0);
    for (int s = 0; s < n; ++s) {
      p *= factors[s][pi[s]];
      if (p == Cplx(0.0, 0.0)) break;
    }
    acc += p;
  }
  return acc;
}

const std::vector<Cplx>& beta_coeffs(int n) {
  static std::mutex mu;
  static std::unordered_map<int, std::vector<Cplx>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<Cplx> c(pair_count(n), Cplx(0.0));
  for (int l = 0; l < n; ++l) c[pair_index(2 * l, 2 * l + 1, n)] = Cplx(1.0);
  auto [pos, ok] = cache.emplace(n, std::move(c));
  return pos->second;
}

}  // namespace qhess
