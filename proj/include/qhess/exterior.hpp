#pragma once

// Sparse exterior algebra over C^{2n} together with the two-form objects the
// toolkit revolves around.
//
// Basis k-vectors are strictly increasing index tuples stored as bitmasks over the
// 2n one-form generators w^0..w^{2n-1}. A TwoForm stores the coefficients c_{ij}
// (i < j) of sum_{i<j} c_{ij} w^i ^ w^j, mirrored antisymmetrically when viewed as a
// matrix. The Kaehler-type form
//
//   beta = w^0 ^ w^1 + w^2 ^ w^3 + ... + w^{2n-2} ^ w^{2n-1}
//
// satisfies beta^n = n! * Omega_{2n} with Omega_{2n} = w^0 ^ ... ^ w^{2n-1}; all
// densities are reported relative to Omega_{2n}.

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include "qhess/quaternion.hpp"
#include "qhess/util.hpp"

namespace qhess {

class Multivector {
 public:
  Multivector(int n, int degree);

  static Multivector scalar(int n, Cplx value);

  int n() const { return n_; }
  int degree() const { return degree_; }
  int dim() const { return 2 * n_; }

  // mask must have exactly degree() bits inside [0, 2n); zero coefficients are pruned.
  void set(std::uint32_t mask, Cplx value);
  void add(std::uint32_t mask, Cplx value);
  Cplx coeff(std::uint32_t mask) const;
  const std::map<std::uint32_t, Cplx>& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }

  friend Multivector operator+(const Multivector& a, const Multivector& b);
  friend Multivector operator-(const Multivector& a, const Multivector& b);
  friend Multivector operator*(Cplx t, const Multivector& a);

  double max_abs_coeff() const;

 private:
  void check_mask(std::uint32_t mask) const;
  int n_;
  int degree_;
  std::map<std::uint32_t, Cplx> terms_;
};

// Graded wedge; throws on operand dimension mismatch or degree overflow.
Multivector wedge(const Multivector& a, const Multivector& b);

// a^k by iterated wedge; k = 0 gives the scalar 1.
Multivector power(const Multivector& a, int k);

// Coefficient of Omega_{2n}; argument must have top degree.
Cplx top_coefficient(const Multivector& a);

struct TwoForm {
  int n = 0;
  std::vector<Cplx> c;  // pair_index-ordered upper coefficients

  TwoForm() = default;
  explicit TwoForm(int n_);

  Cplx at(int i, int j) const;        // antisymmetric matrix view
  void set(int i, int j, Cplx v);     // requires i < j

  Multivector to_multivector() const;
  static TwoForm from_multivector(const Multivector& m);

  friend TwoForm operator+(const TwoForm& a, const TwoForm& b);
  friend TwoForm operator-(const TwoForm& a, const TwoForm& b);
  friend TwoForm operator*(Cplx t, const TwoForm& a);

  double max_abs_coeff() const;
};

TwoForm beta(int n);

// Largest |Im| over the densities of a^k ^ beta^{n-k}, k = 1..n, after unit
// normalization; the operational realness test for two-forms.
double real_form_defect(const TwoForm& a);

struct ConeReport {
  std::vector<double> densities;  // densities[k-1] = Re top(a^k ^ beta^{n-k}) / n!,
                                  // with a scaled so max |c_ij| = 1
  bool member = false;
  double scale = 0.0;             // the max |c_ij| divided out (0 for the zero form)
};

// Gamma_m cone test: all k = 1..m densities >= -tol on the unit-normalized form.
// Throws if the realness defect exceeds real_tol.
ConeReport cone_membership(const TwoForm& a, int m, double tol = 1e-10,
                           double real_tol = 1e-7);

// Bridge fixed by Hessian(||q||^2) = 4 Id and Baston(||q||^2) = 8 beta: the image of
// the identity is 2 beta, and eigenvalues of A become wedge densities through
// sigma_k. Linear, injective; the inverse rejects two-forms off the image.
TwoForm twoform_from_hyperhermitian(const HyperhermitianMatrix& A);
HyperhermitianMatrix hyperhermitian_from_twoform(const TwoForm& a,
                                                 double fit_tol = 1e-8);

// ---- Fast top-coefficient evaluation -------------------------------------------
//
// Per-point density work wedges n two-forms at once; the generic sparse path is
// exact but allocation-heavy. The table below enumerates, once per n, every ordered
// assignment of disjoint index pairs to the n factor slots together with the
// permutation sign, so a top coefficient is a short sum of coefficient products.

struct TopTermTable {
  int n = 0;
  std::vector<std::int8_t> sign;       // per term
  std::vector<std::uint8_t> pair_idx;  // term-major, n pair indices per term
  std::size_t terms() const { return sign.size(); }
};

const TopTermTable& top_term_table(int n);

// factors[t] points at the pair_index-ordered coefficient array of factor t
// (size pair_count(n)); returns the Omega_{2n} coefficient of their wedge.
Cplx wedge_top(const std::vector<const Cplx*>& factors, int n);

// Convenience: coefficients of beta in pair_index order.
const std::vector<Cplx>& beta_coeffs(int n);

}  // namespace qhess
