#pragma once

// Energy functionals E_p, mutual energies, the Hoelder inequality with explicit
// constants, the variational functional F_mu, the M_p diagnostic, and the
// projected-descent solver for (Baston u)^m ^ beta^{n-m} = mu.

#include <cstdint>
#include <vector>

#include "qhess/envelope.hpp"
#include "qhess/grid.hpp"
#include "qhess/hessian.hpp"

namespace qhess {

// E_p(u) = int (-u)^p (Baston u)^m ^ beta^{n-m}. Requires u <= 0 (to roundoff) and
// |u| < 1e-8 on the outermost grid layer / the outer radial sample.
double energy_p(const GridField& u, int m, double p);
double energy_p(const RadialProfile& u, int m, double p);

// E_p(u0; v_1..v_m) with the density polarized over the v slots; m = vs.size().
double mutual_energy_p(const GridField& u0, const std::vector<const GridField*>& vs,
                       double p);
double mutual_energy_p(const RadialProfile& u0,
                       const std::vector<const RadialProfile*>& vs, double p);

// alpha(m, p) = (p+2)((p+1)/p)^{m-1} - (p+1).
double alpha_exponent(int m, double p);

// D_p = p^{p alpha/(p-1)} for p > 1, D_1 = 1; the alternative reading of the
// typeset exponent is p^{alpha - 1}.
double holder_constant(int m, double p);
double holder_constant_alt(int m, double p);

struct EnergyReport {
  int m = 0;
  double p = 0.0;
  double mutual = 0.0;           // E_p(u0; v_1..v_m)
  double e_u0 = 0.0;             // E_p(u0)
  std::vector<double> e_v;       // E_p(v_i)
  double d_p = 0.0;              // constant used in rhs
  double d_p_alt = 0.0;          // alternative-reading constant
  double rhs = 0.0;              // D_p * E_p(u0)^{p/(m+p)} prod E_p(v_i)^{1/(m+p)}
  bool holds = false;
  double slack = 0.0;            // (rhs - mutual) / max(rhs, tiny)
};

EnergyReport holder_check(const GridField& u0, const std::vector<const GridField*>& vs,
                          double p, double rel_tol = 1e-9);
EnergyReport holder_check(const RadialProfile& u0,
                          const std::vector<const RadialProfile*>& vs, double p,
                          double rel_tol = 1e-9);

// F_mu(u) = E_1(u)/(m+1) + int u dmu.
double functional_F(const GridField& u, const DensityField& mu, int m);
double functional_F(const RadialProfile& u, const RadialDensity& mu, int m);

// max over samples of int (-u)^p dmu / E_p(u)^{p/(m+p)}; samples with vanishing
// energy are skipped.
double mp_estimate(const DensityField& mu, int m, double p,
                   const std::vector<const GridField*>& samples);
double mp_estimate(const RadialDensity& mu, int m, double p,
                   const std::vector<const RadialProfile*>& samples);

// Screened Poisson lift (-Laplacian_h + kappa) w = r with w = 0 outside the
// interior at `margin`; conjugate gradients with deterministic reductions.
GridField screened_lift(const GridField& r, int margin, double kappa, double h);

enum class SolveStatus { converged = 0, iteration_cap = 1, backtracking_failure = 2 };

struct VariationalOptions {
  double tol = 1e-3;          // stop when |density - mu|_L1 / |mu|_L1 drops below
  int max_iterations = 400;
  double step0 = 1.0;         // initial Armijo step
  double armijo_slope = 1e-4;
  int max_backtracks = 40;
  double kappa = 1.0;         // screening mass of the residual lift
  SweepOptions projection;    // inner projection sweeps
};

struct GridSolveReport {
  GridField u;
  SolveStatus status = SolveStatus::iteration_cap;
  int iterations = 0;
  std::vector<double> residual_history;  // relative L1 residual per iteration
  std::vector<double> f_history;         // F_mu per accepted iterate (nonincreasing)
};

struct RadialSolveReport {
  RadialProfile u;
  SolveStatus status = SolveStatus::iteration_cap;
  int iterations = 0;
  std::vector<double> residual_history;
  std::vector<double> f_history;
};

// Projected descent: u <- P(u + tau * lift(density - mu)) with the lift a screened
// Poisson solve, Armijo backtracking on F_mu, stopping on the relative L1 residual.
GridSolveReport variational_solve(const DensityField& mu, int m,
                                  const VariationalOptions& opt);
RadialSolveReport variational_solve_radial(const RadialDensity& mu, int m,
                                           const VariationalOptions& opt);

}  // namespace qhess
