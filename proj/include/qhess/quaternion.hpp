#pragma once

// Quaternion arithmetic, hyperhermitian matrices, and their complex embeddings.
//
// Conventions used throughout the toolkit:
//  * a quaternion q = x0 + i x1 + j x2 + k x3 with Hamilton products
//    (ij = k, jk = i, ki = j);
//  * a point of H^n is identified with R^{4n}, coordinate l of the point holding
//    real coordinates x_{4l}..x_{4l+3};
//  * the multiplicative embedding chi : H -> C^{2x2} sends q to
//      [ x0 + i x1   -x2 - i x3 ]
//      [ x2 - i x3    x0 - i x1 ],
//    so chi(conj q) = chi(q)^H and chi(pq) = chi(p) chi(q);
//  * the point embedding tau : H^n -> C^{2n x 2} stacks per-coordinate blocks
//      [ x_{4l}   - i x_{4l+1}    -x_{4l+2} + i x_{4l+3} ]
//      [ x_{4l+2} + i x_{4l+3}     x_{4l}   + i x_{4l+1} ].
//
// A hyperhermitian matrix A (A_{kl} = conj(A_{lk}), real diagonal) embeds blockwise
// through chi into a 2n x 2n complex Hermitian matrix whose spectrum lists each
// quaternionic eigenvalue twice; the Moore determinant is the product over one
// representative per pair.

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <vector>

#include "qhess/util.hpp"

namespace qhess {

struct Quaternion {
  double x0 = 0.0, x1 = 0.0, x2 = 0.0, x3 = 0.0;

  constexpr Quaternion() = default;
  constexpr Quaternion(double a, double b, double c, double d)
      : x0(a), x1(b), x2(c), x3(d) {}

  static constexpr Quaternion real(double a) { return {a, 0.0, 0.0, 0.0}; }

  friend constexpr Quaternion operator+(Quaternion a, Quaternion b) {
    return {a.x0 + b.x0, a.x1 + b.x1, a.x2 + b.x2, a.x3 + b.x3};
  }
  friend constexpr Quaternion operator-(Quaternion a, Quaternion b) {
    return {a.x0 - b.x0, a.x1 - b.x1, a.x2 - b.x2, a.x3 - b.x3};
  }
  friend constexpr Quaternion operator-(Quaternion a) {
    return {-a.x0, -a.x1, -a.x2, -a.x3};
  }
  friend constexpr Quaternion operator*(double t, Quaternion a) {
    return {t * a.x0, t * a.x1, t * a.x2, t * a.x3};
  }
  // Hamilton product.
  friend constexpr Quaternion operator*(Quaternion a, Quaternion b) {
    return {a.x0 * b.x0 - a.x1 * b.x1 - a.x2 * b.x2 - a.x3 * b.x3,
            a.x0 * b.x1 + a.x1 * b.x0 + a.x2 * b.x3 - a.x3 * b.x2,
            a.x0 * b.x2 - a.x1 * b.x3 + a.x2 * b.x0 + a.x3 * b.x1,
            a.x0 * b.x3 + a.x1 * b.x2 - a.x2 * b.x1 + a.x3 * b.x0};
  }

  constexpr double scalar_part() const { return x0; }
  constexpr double norm_sq() const { return x0 * x0 + x1 * x1 + x2 * x2 + x3 * x3; }
  double norm() const;
};

constexpr Quaternion conj(Quaternion a) { return {a.x0, -a.x1, -a.x2, -a.x3}; }

// A point of H^n; component l covers real coordinates 4l..4l+3.
using QPoint = std::vector<Quaternion>;

QPoint qpoint_from_reals(const std::vector<double>& x);
double qpoint_norm_sq(const QPoint& q);

// chi on a single quaternion.
Eigen::Matrix2cd embed_chi(Quaternion a);

// tau on a point: the 2n x 2 complex matrix of per-coordinate blocks.
Eigen::MatrixXcd embed_tau(const QPoint& q);

class HyperhermitianMatrix {
 public:
  explicit HyperhermitianMatrix(int n);

  static HyperhermitianMatrix identity(int n);
  static HyperhermitianMatrix diagonal(const std::vector<double>& d);

  int n() const { return n_; }
  Quaternion operator()(int r, int c) const { return a_[idx(r, c)]; }

  // Sets entry (r, c) and mirrors conj into (c, r); diagonal entries must be real.
  void set(int r, int c, Quaternion v);

  friend HyperhermitianMatrix operator+(const HyperhermitianMatrix& A,
                                        const HyperhermitianMatrix& B);
  friend HyperhermitianMatrix operator*(double t, const HyperhermitianMatrix& A);

  // Real value of the quadratic form sum_{k,l} conj(q_k) A_{kl} q_l.
  double quadratic_form(const QPoint& q) const;

  double max_abs_entry() const;

 private:
  int idx(int r, int c) const { return r * n_ + c; }
  int n_;
  std::vector<Quaternion> a_;
};

// Blockwise chi embedding; Hermitian by construction of the class invariant.
Eigen::MatrixXcd complex_embedding(const HyperhermitianMatrix& A);

// The n real quaternionic eigenvalues, descending. The 2n embedding eigenvalues
// must pair up within a relative gap of pair_tol; otherwise throws.
std::vector<double> hyperhermitian_eigenvalues(const HyperhermitianMatrix& A,
                                               double pair_tol = 1e-8);

// Moore determinant as the product of one eigenvalue per embedded pair.
double moore_det(const HyperhermitianMatrix& A, double pair_tol = 1e-8);

// Full polarization of moore_det: symmetric, multilinear, equal to moore_det on the
// diagonal. Inclusion-exclusion over the 2^n - 1 nonempty subsets; n <= 4 by contract.
double mixed_discriminant(const std::vector<HyperhermitianMatrix>& As,
                          double pair_tol = 1e-8);

}  // namespace qhess
