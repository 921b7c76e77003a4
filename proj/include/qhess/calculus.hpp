#pragma once

// Discrete differential layer: first-order nabla operators, the Baston two-form of a
// scalar field, the twisted differentials d0/d1 on form fields, the gamma bracket,
// mollification, and the radial reduction.
//
// All stencils are centered and exact on quadratics: 3-point second differences on
// the diagonal, 4-point crosses for mixed partials, 2-point centered first
// differences. Each derivative order grows the margin of the result by one cell.

#include <complex>
#include <functional>
#include <vector>

#include "qhess/exterior.hpp"
#include "qhess/grid.hpp"
#include "qhess/nabla_table.hpp"

namespace qhess {

struct CGridField {
  GridSpec spec;
  int margin = 0;
  std::vector<Cplx> v;

  CGridField() = default;
  explicit CGridField(const GridSpec& s, int margin_ = 0)
      : spec(s), margin(margin_), v(s.total(), Cplx(0.0)) {}
};

// Two-form-valued field, point-major: pair_count(n) coefficients per grid point in
// pair_index order (the TwoForm layout).
struct TwoFormField {
  GridSpec spec;
  int margin = 0;
  int comps = 0;
  std::vector<Cplx> c;

  TwoFormField() = default;
  explicit TwoFormField(const GridSpec& s, int margin_);
  const Cplx* at(std::size_t flat) const { return c.data() + flat * comps; }
  Cplx* at(std::size_t flat) { return c.data() + flat * comps; }
  TwoForm form_at(std::size_t flat) const;
};

// General k-form field for the d0/d1 calculus; basis masks in increasing order.
struct FormField {
  GridSpec spec;
  int margin = 0;
  int degree = 0;
  std::vector<std::uint32_t> basis;
  std::vector<Cplx> c;  // point-major, basis.size() per point

  FormField() = default;
  FormField(const GridSpec& s, int degree_, int margin_);
  int comps() const { return static_cast<int>(basis.size()); }
  int basis_index(std::uint32_t mask) const;
  Multivector multivector_at(std::size_t flat) const;
};

FormField form_from_scalar(const GridField& u);
FormField form_from_twoform_field(const TwoFormField& f);

// nabla_{j,alpha} u by centered first differences.
CGridField nabla(const GridField& u, int j, int alpha);

// The Baston two-form Delta u, coefficients c_{ij} = (nabla_{i0} nabla_{j1} -
// nabla_{i1} nabla_{j0}) u evaluated from a per-point table of second partials
// (never as a composition of two first-difference passes).
TwoFormField baston(const GridField& u);

// Same operator evaluated at a single point of an analytic function, for
// dimensions where full grids are impractical.
TwoForm baston_at(const std::function<double(const double*)>& fn,
                  const std::vector<double>& x, double h);

// Baston form at one interior grid point with the center value overridden; the
// sweep engines probe trial center values through this. flat must be at least one
// cell away from every face.
TwoForm baston_point(const GridField& u, std::size_t flat, double center);

// Twisted exterior differentials; alpha selects the nabla column.
FormField d_alpha(const FormField& f, int alpha);
inline FormField d0(const FormField& f) { return d_alpha(f, 0); }
inline FormField d1(const FormField& f) { return d_alpha(f, 1); }

// Pointwise wedge of form fields.
FormField wedge(const FormField& a, const FormField& b);

// gamma(u, v) = (1/2)(d0 u ^ d1 v - d1 u ^ d0 v); symmetric in (u, v) as a form.
TwoFormField gamma(const GridField& u, const GridField& v);

// Ordinary 4n-dimensional discrete Laplacian (sum of second differences).
GridField laplacian(const GridField& u);

// Convolution with the polynomial bump (1 - |x/eps|^2)^3, discretely normalized so
// mollify of a constant is exact. eps must be >= spacing.
GridField mollify(const GridField& u, double eps);

// Mollified pointwise maximum.
GridField max_mollified(const GridField& u, const GridField& v, double eps);

// ---- Radial reduction -----------------------------------------------------------

// Samples u(s_k), s_k = k * ds, k = 0..K, of a radial profile on a ball of radius
// K * ds in H^n.
struct RadialProfile {
  int n = 1;
  double ds = 0.0;
  std::vector<double> u;

  int K() const { return static_cast<int>(u.size()) - 1; }
  double s(int k) const { return ds * k; }
  double radius() const { return ds * K(); }
};

RadialProfile profile_from_function(int n, double R, int K,
                                    const std::function<double(double)>& f);

struct RadialEig {
  double rad = 0.0;  // eigenvalue along the quaternionic line of q, multiplicity 1
  double tan = 0.0;  // transverse eigenvalue, multiplicity n - 1
};

// Hyperhermitian Hessian eigenvalues of a radial function in the normalization
// Hessian(||q||^2) = 4 Id: with u = f(t), t = s^2,
//   lam_tan = 4 f'(t)            = 2 u'(s)/s,
//   lam_rad = 4 f'(t) + 2 t f''(t) = u''(s)/2 + (3/2) u'(s)/s,
// finite-differenced from the profile; both tend to 2 u''(0) at the origin.
std::vector<RadialEig> radial_eigenvalues(const RadialProfile& p);

// 1-D profile mollification with the same bump kernel (even extension at s = 0,
// constant extension at s = R).
RadialProfile mollify_radial(const RadialProfile& p, double eps);

// Profile CSV: header record, then "s,u" rows.
void save_profile_csv(const std::string& path, const RadialProfile& p,
                      const std::string& value_name = "u");

}  // namespace qhess
