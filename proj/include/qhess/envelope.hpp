#pragma once

// Obstacle-problem machinery: relatively extremal functions, the largest-minorant
// projection, capacities, and radial Dirichlet solves.
//
// One engine drives everything: iterated Gauss-Seidel sweeps that clip each point
// to the obstacle and then raise it to the largest value keeping the local discrete
// Baston form in the positivity cone. On grids the largest value is found by the
// closed-form neighbor average (m = 1) or by bisection on the center value (m > 1).
// The radial engine uses the conservative flux form of the radial sigma_m operator,
// whose largest admissible center value is the exact root of the interface flux
// balance, a weighted neighbor average with weights s^{4n/m - 1}.

#include <cstddef>
#include <functional>
#include <vector>

#include "qhess/calculus.hpp"
#include "qhess/grid.hpp"
#include "qhess/hessian.hpp"

namespace qhess {

// Ball-in-ball configuration B(r) inside B(R) in H^n.
struct AnnulusConfig {
  int n = 2;
  int m = 2;
  double r = 0.5;
  double R = 1.0;
  int samples = 200;  // radial sample count K

  void validate() const;
  double a() const { return 2.0 * n / m; }  // homogeneity parameter, always >= 2
};

// Closed-form relatively extremal profile of the configuration:
//   max((R^{2-2a} - s^{2-2a}) / (r^{2-2a} - R^{2-2a}), -1).
RadialProfile extremal_radial(const AnnulusConfig& cfg);
double extremal_radial_value(const AnnulusConfig& cfg, double s);

// Closed-form capacity of the configuration: the m-Hessian mass of the extremal
// profile, concentrated on the inner sphere, evaluated from the constant flux of
// the smooth branch.
double annulus_capacity_exact(const AnnulusConfig& cfg);

struct SweepOptions {
  double tol = 1e-8;      // sup-norm change per full sweep at convergence
  int max_sweeps = 100000;
  double omega = 1.0;     // over-relaxation for the m = 1 grid update
};

struct SweepInfo {
  int sweeps = 0;
  double last_change = 0.0;
  bool converged = false;
};

// Largest field <= psi whose Baston form stays in the Gamma_m cone at every
// interior point; the outermost grid layer is pinned to psi.
GridField obstacle_sweep(const GridField& psi, int m, const SweepOptions& opt,
                         SweepInfo* info = nullptr);

// Radial counterpart on a ball; psi holds the obstacle samples, the outer sample is
// pinned. The update is the exact flux-balance root described above. The second
// overload starts the sweep from a given profile (must be <= psi) instead of psi.
RadialProfile obstacle_sweep_radial(const RadialProfile& psi, int m,
                                    const SweepOptions& opt, SweepInfo* info = nullptr);
RadialProfile obstacle_sweep_radial(const RadialProfile& psi, const RadialProfile& start,
                                    int m, const SweepOptions& opt,
                                    SweepInfo* info = nullptr);

struct ObstacleProblem {
  GridSpec spec;
  std::function<bool(const double*)> obstacle;  // the set E
  int m = 1;
  double tol = 1e-8;
  int max_sweeps = 100000;
  double omega = 1.0;
};

struct RadialObstacleProblem {
  int n = 2;
  int m = 1;
  double R = 1.0;
  int samples = 400;
  std::function<bool(double)> obstacle;  // radii belonging to E
  double tol = 1e-8;
  int max_sweeps = 200000;
};

// Relatively extremal function of E in the domain: sweep with obstacle 0 outside E
// and -1 on E, started from the obstacle itself.
GridField extremal_envelope(const ObstacleProblem& p, SweepInfo* info = nullptr);

// Radial version with cascadic coarse-to-fine warm starts.
RadialProfile extremal_envelope_radial(const RadialObstacleProblem& p,
                                       SweepInfo* info = nullptr);

struct CapacityReport {
  double value = 0.0;
  double eps = 0.0;  // mollification width used before taking the density
  SweepInfo sweep;
};

// Total m-Hessian mass of the mollified extremal function; eps <= 0 selects the
// default of four grid cells.
CapacityReport capacity(const ObstacleProblem& p, double eps = 0.0);
CapacityReport capacity_radial(const RadialObstacleProblem& p, double eps = 0.0);

// Largest cone-admissible minorant of min(target, 0) with the boundary layer
// pinned to 0; the discrete P(u).
GridField projection(const GridField& target, int m, const SweepOptions& opt,
                     SweepInfo* info = nullptr);
RadialProfile projection_radial(const RadialProfile& target, int m,
                                const SweepOptions& opt, SweepInfo* info = nullptr);

struct DirichletOptions {
  double tol = 1e-10;   // max-norm of the flux-form density residual
  int max_newton = 40;
};

struct DirichletInfo {
  int newton_iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

// Solves the radial sigma_m problem: density of the profile equals f on the ball,
// u(R) = 0, u'(0) = 0. The conservative flux form makes the cumulative-quadrature
// pass an exact discrete solution; damped Newton then polishes the residual.
RadialProfile dirichlet_radial(const RadialDensity& f, int m,
                               const DirichletOptions& opt = {},
                               DirichletInfo* info = nullptr);

}  // namespace qhess
