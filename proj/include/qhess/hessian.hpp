#pragma once

// Pointwise m-Hessian densities, the m-subharmonicity verdict, and the integrals
// built on them (total masses, integration-by-parts and comparison checks).
//
// Density convention: every density is reported relative to the volume form
// Omega_{2n}, whose top coefficient is 1. With that convention
//
//   density of (Baston u)^m ^ beta^{n-m}  =  2^m m! (n-m)! sigma_m(lambda)
//
// where lambda are the hyperhermitian Hessian eigenvalues in the normalization
// Hessian(||q||^2) = 4 Id; the anchor u = ||q||^2 gives the constant 8^m n!.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "qhess/calculus.hpp"
#include "qhess/exterior.hpp"
#include "qhess/grid.hpp"

namespace qhess {

// Scalar density samples; the represented measure is value * cell volume at each
// interior point. Entries outside the margin are stored as zero.
struct DensityField {
  GridSpec spec;
  int margin = 0;
  std::vector<double> v;

  DensityField() = default;
  explicit DensityField(const GridSpec& s, int margin_)
      : spec(s), margin(margin_), v(s.total(), 0.0) {}
};

// Radial density samples at s_k = k * ds; the represented measure adds the
// 4n-sphere area factor (see total_mass).
struct RadialDensity {
  int n = 1;
  double ds = 0.0;
  std::vector<double> dens;

  int K() const { return static_cast<int>(dens.size()) - 1; }
  double s(int k) const { return ds * k; }
};

// The ladder constant 2^m m! (n-m)! relating sigma_m of the eigenvalues to the
// wedge density.
double ladder_constant(int n, int m);

DensityField hessian_density(const TwoFormField& a, int m);
DensityField hessian_density(const GridField& u, int m);

// Polarized density a_1 ^ ... ^ a_m ^ beta^{n-m}; symmetric in the slots and equal
// to hessian_density when the slots coincide.
DensityField mixed_hessian_density(const std::vector<const TwoFormField*>& as);
DensityField mixed_hessian_density(const std::vector<const GridField*>& us);

RadialDensity radial_hessian_density(const RadialProfile& u, int m);

// Radial polarization via inclusion-exclusion over slot subsets.
RadialDensity mixed_radial_hessian_density(const std::vector<const RadialProfile*>& us,
                                           int m);

struct MshReport {
  bool msh = false;
  int m = 0;
  double tol = 0.0;
  std::vector<double> min_ladder;   // min over interior of the unit-normalized
                                    // density of (Delta u)^k ^ beta^{n-k}, k = 1..m
  double min_sampled = 0.0;         // min over sampled cone tuples (m > 1; else +inf)
  std::size_t worst_point = 0;      // flat index of the ladder minimizer
};

// Cone test at every interior point plus sampled m-positivity against `samples`
// random tuples of positive quadratic Baston images. Deterministic given the seed.
MshReport is_msh(const GridField& u, int m, double tol = 1e-9,
                 std::uint64_t seed = 1, int samples = 8);
MshReport is_msh_radial(const RadialProfile& u, int m, double tol = 1e-9);

// Surface area of the unit sphere in R^dim (dim even).
double sphere_area(int dim);

// Midpoint-rule masses: sum of density * cell volume over interior points, either
// all of them or those whose coordinates satisfy the predicate.
double total_mass(const DensityField& d);
double total_mass(const DensityField& d,
                  const std::function<bool(const double*)>& inside);

// Trapezoidal mass of a radial density: area(S^{4n-1}) * int dens(s) s^{4n-1} ds.
double total_mass(const RadialDensity& d);

struct StokesReport {
  double lhs = 0.0;    // int v * density(Delta u ^ T)
  double rhs = 0.0;    // int u * density(Delta v ^ T)
  double cross = 0.0;  // -int density(gamma(u, v) ^ T)
  double rel_gap() const;
};

// Integration-by-parts defect with T = Delta w_1 ^ ... ^ Delta w_{m-1} ^ beta^{n-m};
// ws must hold m-1 fields. u, v must vanish on the two outermost grid layers.
StokesReport stokes_check(const GridField& u, const GridField& v,
                          const std::vector<const GridField*>& ws, int m);

struct ComparisonReport {
  double mass_u = 0.0;         // m-Hessian mass of u over {u < v}
  double mass_v = 0.0;         // m-Hessian mass of v over {u < v}
  std::size_t set_points = 0;  // interior points in {u < v}
  bool holds = false;          // mass_v <= mass_u + tol margin
  double tol = 0.0;
};

// Checks mass_v <= mass_u over {u < v} given u >= v (to 1e-9) on the two outermost
// grid layers; tol is the allowed absolute-plus-relative slack.
ComparisonReport comparison_check(const GridField& u, const GridField& v, int m,
                                  double tol);
ComparisonReport comparison_check_radial(const RadialProfile& u,
                                         const RadialProfile& v, int m, double tol);

}  // namespace qhess
