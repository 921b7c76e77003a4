#include "qhess/quaternion.hpp"

#include <cmath>
#include <stdexcept>

namespace qhess {

double Quaternion::norm() const { return std::sqrt(norm_sq()); }

QPoint qpoint_from_reals(const std::vector<double>& x) {
  if (x.size() % 4 != 0) throw std::invalid_argument("qpoint_from_reals: size not 4n");
  QPoint q(x.size() / 4);
  for (std::size_t l = 0; l < q.size(); ++l) {
    q[l] = Quaternion(x[4 * l], x[4 * l + 1], x[4 * l + 2], x[4 * l + 3]);
  }
  return q;
}

double qpoint_norm_sq(const QPoint& q) {
  double s = 0.0;
  for (const auto& c : q) s += c.norm_sq();
  return s;
}

Eigen::Matrix2cd embed_chi(Quaternion a) {
  Eigen::Matrix2cd m;
  m(0, 0) = Cplx(a.x0, a.x1);
  m(0, 1) = Cplx(-a.x2, -a.x3);
  m(1, 0) = Cplx(a.x2, -a.x3);
  m(1, 1) = Cplx(a.x0, -a.x1);
  return m;
}

Eigen::MatrixXcd embed_tau(const QPoint& q) {
  const int n = static_cast<int>(q.size());
  Eigen::MatrixXcd m(2 * n, 2);
  for (int l = 0; l < n; ++l) {
    const Quaternion& a = q[l];
    m(2 * l, 0) = Cplx(a.x0, -a.x1);
    m(2 * l, 1) = Cplx(-a.x2, a.x3);
    m(2 * l + 1, 0) = Cplx(a.x2, a.x3);
    m(2 * l + 1, 1) = Cplx(a.x0, a.x1);
  }
  return m;
}

HyperhermitianMatrix::HyperhermitianMatrix(int n) : n_(n), a_(n * n) {
  if (n < 1) throw std::invalid_argument("HyperhermitianMatrix: n must be positive");
}

HyperhermitianMatrix HyperhermitianMatrix::identity(int n) {
  HyperhermitianMatrix A(n);
  for (int l = 0; l < n; ++l) A.set(l, l, Quaternion::real(1.0));
  return A;
}

HyperhermitianMatrix HyperhermitianMatrix::diagonal(const std::vector<double>& d) {
  HyperhermitianMatrix A(static_cast<int>(d.size()));
  for (int l = 0; l < A.n(); ++l) A.set(l, l, Quaternion::real(d[l]));
  return A;
}

void HyperhermitianMatrix::set(int r, int c, Quaternion v) {
  if (r < 0 || r >= n_ || c < 0 || c >= n_)
    throw std::out_of_range("HyperhermitianMatrix::set: index");
  if (r == c && (v.x1 != 0.0 || v.x2 != 0.0 || v.x3 != 0.0))
    throw std::invalid_argument("HyperhermitianMatrix::set: diagonal must be real");
  a_[idx(r, c)] = v;
  if (r != c) a_[idx(c, r)] = conj(v);
}

HyperhermitianMatrix operator+(const HyperhermitianMatrix& A,
                               const HyperhermitianMatrix& B) {
  if (A.n_ != B.n_) throw std::invalid_argument("HyperhermitianMatrix +: size mismatch");
  HyperhermitianMatrix C(A.n_);
  for (std::size_t i = 0; i < C.a_.size(); ++i) C.a_[i] = A.a_[i] + B.a_[i];
  return C;
}

HyperhermitianMatrix operator*(double t, const HyperhermitianMatrix& A) {
  HyperhermitianMatrix C(A.n_);
  for (std::size_t i = 0; i < C.a_.size(); ++i) C.a_[i] = t * A.a_[i];
  return C;
}

double HyperhermitianMatrix::quadratic_form(const QPoint& q) const {
  if (static_cast<int>(q.size()) != n_)
    throw std::invalid_argument("quadratic_form: point size mismatch");
  // Imaginary parts cancel over the full sum; scalar parts are what survives.
  double s = 0.0;
  for (int k = 0; k < n_; ++k) {
    for (int l = 0; l < n_; ++l) {
      s += (conj(q[k]) * a_[idx(k, l)] * q[l]).scalar_part();
    }
  }
  return s;
}

double HyperhermitianMatrix::max_abs_entry() const {
  double m = 0.0;
  for (const auto& v : a_) m = std::max(m, v.norm());
  return m;
}

Eigen::MatrixXcd complex_embedding(const HyperhermitianMatrix& A) {
  const int n = A.n();
  Eigen::MatrixXcd M(2 * n, 2 * n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      M.block<2, 2>(2 * r, 2 * c) = embed_chi(A(r, c));
    }
  }
  return M;
}

std::vector<double> hyperhermitian_eigenvalues(const HyperhermitianMatrix& A,
                                               double pair_tol) {
  const Eigen::MatrixXcd M = complex_embedding(A);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("hyperhermitian_eigenvalues: eigensolver failed");
  const Eigen::VectorXd ev = es.eigenvalues();  // ascending
  const int n = A.n();
  const double scale = std::max(1e-300, ev.cwiseAbs().maxCoeff());
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    const double a = ev(2 * i), b = ev(2 * i + 1);
    if (std::abs(a - b) > pair_tol * scale)
      throw std::runtime_error("hyperhermitian_eigenvalues: embedding spectrum does not pair");
    out[n - 1 - i] = 0.5 * (a + b);  // descending order
  }
  return out;
}

double moore_det(const HyperhermitianMatrix& A, double pair_tol) {
  double p = 1.0;
  for (double lam : hyperhermitian_eigenvalues(A, pair_tol)) p *= lam;
  return p;
}

double mixed_discriminant(const std::vector<HyperhermitianMatrix>& As, double pair_tol) {
  const int n = static_cast<int>(As.size());
  if (n < 1) throw std::invalid_argument("mixed_discriminant: empty argument list");
  for (const auto& A : As) {
    if (A.n() != n)
      throw std::invalid_argument("mixed_discriminant: need n matrices of size n");
  }
  if (n > 4) throw std::invalid_argument("mixed_discriminant: n > 4 unsupported");
  double acc = 0.0;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    HyperhermitianMatrix S(n);
    int popcount = 0;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        S = S + As[i];
        ++popcount;
      }
    }
    const double sign = ((n - popcount) % 2 == 0) ? 1.0 : -1.0;
    acc += sign * moore_det(S, pair_tol);
  }
  return acc / factorial(n);
}

}  // namespace qhess
