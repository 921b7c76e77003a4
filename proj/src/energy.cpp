#include "qhess/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qhess/util.hpp"

namespace qhess {

namespace {

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

// Admissibility for the energy integrals: nonpositive, vanishing at the boundary.
void check_admissible(const GridField& u) {
  const GridSpec& s = u.spec;
  const int d = s.axes();
  std::vector<int> idx(d, 0);
  double shell = 0.0, top = -std::numeric_limits<double>::infinity();
  for (std::size_t flat = 0; flat < s.total(); ++flat) {
    top = std::max(top, u.v[flat]);
    bool sh = false;
    for (int a = 0; a < d; ++a)
      if (idx[a] < 1 || idx[a] >= s.points - 1) sh = true;
    if (sh) shell = std::max(shell, std::abs(u.v[flat]));
    for (int a = d - 1; a >= 0; --a) {
      if (++idx[a] < s.points) break;
      idx[a] = 0;
    }
  }
  if (top > 1e-12) throw std::invalid_argument("energy input must be nonpositive");
  if (shell > 1e-8)
    throw std::invalid_argument("energy input must vanish near the boundary");
}

void check_admissible(const RadialProfile& u) {
  double top = -std::numeric_limits<double>::infinity();
  for (double v : u.u) top = std::max(top, v);
  if (top > 1e-12) throw std::invalid_argument("energy input must be nonpositive");
  if (std::abs(u.u[u.K()]) > 1e-8)
    throw std::invalid_argument("energy input must vanish at the outer radius");
}

double weighted_grid_integral(const GridField& u, const DensityField& dens, double p) {
  const GridSpec& spec = dens.spec;
  const std::size_t cnt = interior_count(spec, dens.margin);
  std::vector<double> terms(cnt);
  parallel_for(cnt, [&](std::size_t b, std::size_t e) {
    std::vector<int> idx(spec.axes());
    for (std::size_t k = b; k < e; ++k) {
      const std::size_t flat = interior_point(spec, dens.margin, k, idx.data());
      terms[k] = std::pow(-u.v[flat], p) * dens.v[flat];
    }
  });
  return pairwise_sum(terms) * ipow(spec.spacing(), spec.axes());
}

double weighted_radial_integral(const RadialProfile& u, const RadialDensity& dens,
                                double p) {
  const int K = dens.K();
  const int dim = 4 * dens.n;
  std::vector<double> terms(K + 1);
  for (int k = 0; k <= K; ++k) {
    const double w = (k == 0 || k == K) ? 0.5 : 1.0;
    terms[k] =
        w * std::pow(-u.u[k], p) * dens.dens[k] * std::pow(dens.s(k), dim - 1) * dens.ds;
  }
  return sphere_area(dim) * pairwise_sum(terms);
}

// Finite-volume cell volumes of the radial grid (cell k centered at s_k).
std::vector<double> radial_cell_volumes(int n, double ds, int K) {
  const int dim = 4 * n;
  const double area = sphere_area(dim);
  std::vector<double> v(K + 1);
  for (int k = 0; k <= K; ++k) {
    const double lo = k == 0 ? 0.0 : (k - 0.5) * ds;
    const double hi = k == K ? K * ds : (k + 0.5) * ds;
    v[k] = area * (std::pow(hi, dim) - std::pow(lo, dim)) / dim;
  }
  return v;
}

}  // namespace

double energy_p(const GridField& u, int m, double p) {
  check_admissible(u);
  const DensityField dens = hessian_density(u, m);
  return weighted_grid_integral(u, dens, p);
}

double energy_p(const RadialProfile& u, int m, double p) {
  check_admissible(u);
  const RadialDensity dens = radial_hessian_density(u, m);
  return weighted_radial_integral(u, dens, p);
}

double mutual_energy_p(const GridField& u0, const std::vector<const GridField*>& vs,
                       double p) {
  check_admissible(u0);
  for (const GridField* v : vs) check_admissible(*v);
  const DensityField dens = mixed_hessian_density(vs);
  return weighted_grid_integral(u0, dens, p);
}

double mutual_energy_p(const RadialProfile& u0,
                       const std::vector<const RadialProfile*>& vs, double p) {
  check_admissible(u0);
  for (const RadialProfile* v : vs) check_admissible(*v);
  const RadialDensity dens =
      mixed_radial_hessian_density(vs, static_cast<int>(vs.size()));
  return weighted_radial_integral(u0, dens, p);
}

double alpha_exponent(int m, double p) {
  return (p + 2.0) * std::pow((p + 1.0) / p, m - 1) - (p + 1.0);
}

double holder_constant(int m, double p) {
  if (p <= 1.0) return 1.0;
  return std::pow(p, p * alpha_exponent(m, p) / (p - 1.0));
}

double holder_constant_alt(int m, double p) {
  if (p <= 1.0) return 1.0;
  return std::pow(p, alpha_exponent(m, p) - 1.0);
}

namespace {

template <typename U, typename Vs>
EnergyReport holder_impl(const U& u0, const Vs& vs, double p, double rel_tol,
                         double mutual, double e_u0, std::vector<double> e_v) {
  EnergyReport rep;
  rep.m = static_cast<int>(e_v.size());
  rep.p = p;
  rep.mutual = mutual;
  rep.e_u0 = e_u0;
  rep.e_v = std::move(e_v);
  rep.d_p = holder_constant(rep.m, p);
  rep.d_p_alt = holder_constant_alt(rep.m, p);
  double rhs = rep.d_p * std::pow(std::max(e_u0, 0.0), p / (rep.m + p));
  for (double ev : rep.e_v) rhs *= std::pow(std::max(ev, 0.0), 1.0 / (rep.m + p));
  rep.rhs = rhs;
  rep.holds = mutual <= rhs + rel_tol * (1.0 + std::abs(rhs));
  rep.slack = (rhs - mutual) / std::max(std::abs(rhs), 1e-300);
  return rep;
}

}  // namespace

EnergyReport holder_check(const GridField& u0, const std::vector<const GridField*>& vs,
                          double p, double rel_tol) {
  std::vector<double> ev;
  ev.reserve(vs.size());
  for (const GridField* v : vs) ev.push_back(energy_p(*v, static_cast<int>(vs.size()), p));
  return holder_impl(u0, vs, p, rel_tol, mutual_energy_p(u0, vs, p),
                     energy_p(u0, static_cast<int>(vs.size()), p), std::move(ev));
}

EnergyReport holder_check(const RadialProfile& u0,
                          const std::vector<const RadialProfile*>& vs, double p,
                          double rel_tol) {
  std::vector<double> ev;
  ev.reserve(vs.size());
  for (const RadialProfile* v : vs)
    ev.push_back(energy_p(*v, static_cast<int>(vs.size()), p));
  return holder_impl(u0, vs, p, rel_tol, mutual_energy_p(u0, vs, p),
                     energy_p(u0, static_cast<int>(vs.size()), p), std::move(ev));
}

double functional_F(const GridField& u, const DensityField& mu, int m) {
  if (!(u.spec == mu.spec)) throw std::invalid_argument("grid spec mismatch");
  const double e = energy_p(u, m, 1.0);
  const std::size_t cnt = interior_count(mu.spec, mu.margin);
  std::vector<double> terms(cnt);
  parallel_for(cnt, [&](std::size_t b, std::size_t e2) {
    std::vector<int> idx(mu.spec.axes());
    for (std::size_t k = b; k < e2; ++k) {
      const std::size_t flat = interior_point(mu.spec, mu.margin, k, idx.data());
      terms[k] = u.v[flat] * mu.v[flat];
    }
  });
  return e / (m + 1.0) +
         pairwise_sum(terms) * ipow(mu.spec.spacing(), mu.spec.axes());
}

double functional_F(const RadialProfile& u, const RadialDensity& mu, int m) {
  if (u.n != mu.n || u.K() != mu.K()) throw std::invalid_argument("profile mismatch");
  const double e = energy_p(u, m, 1.0);
  const std::vector<double> vol = radial_cell_volumes(mu.n, mu.ds, mu.K());
  std::vector<double> terms(mu.K() + 1);
  for (int k = 0; k <= mu.K(); ++k) terms[k] = u.u[k] * mu.dens[k] * vol[k];
  return e / (m + 1.0) + pairwise_sum(terms);
}

double mp_estimate(const DensityField& mu, int m, double p,
                   const std::vector<const GridField*>& samples) {
  if (samples.empty()) throw std::invalid_argument("empty sample set");
  double best = 0.0;
  for (const GridField* u : samples) {
    const double e = energy_p(*u, m, p);
    if (e < 1e-300) continue;
    const std::size_t cnt = interior_count(mu.spec, mu.margin);
    std::vector<double> terms(cnt);
    std::vector<int> idx(mu.spec.axes());
    for (std::size_t k = 0; k < cnt; ++k) {
      const std::size_t flat = interior_point(mu.spec, mu.margin, k, idx.data());
      terms[k] = std::pow(-u->v[flat], p) * mu.v[flat];
    }
    const double num = pairwise_sum(terms) * ipow(mu.spec.spacing(), mu.spec.axes());
    best = std::max(best, num / std::pow(e, p / (m + p)));
  }
  return best;
}

double mp_estimate(const RadialDensity& mu, int m, double p,
                   const std::vector<const RadialProfile*>& samples) {
  if (samples.empty()) throw std::invalid_argument("empty sample set");
  double best = 0.0;
  for (const RadialProfile* u : samples) {
    const double e = energy_p(*u, m, p);
    if (e < 1e-300) continue;
    // Same quadrature as energy_p, so the generating sample realizes the bound
    // with equality up to roundoff.
    const double num = weighted_radial_integral(*u, mu, p);
    best = std::max(best, num / std::pow(e, p / (m + p)));
  }
  return best;
}

// Screened Poisson lift on the grid: (-Laplacian_h + kappa) w = r with w = 0
// outside the interior at the residual margin. Conjugate gradients with pairwise
// reductions; deterministic for any thread count.
GridField screened_lift(const GridField& r, int margin, double kappa, double h) {
  const GridSpec& spec = r.spec;
  const int d = spec.axes();
  const auto st = spec.strides();
  const double inv_h2 = 1.0 / (h * h);
  const std::size_t cnt = interior_count(spec, margin);
  std::vector<std::size_t> flats(cnt);
  {
    std::vector<int> idx(d);
    for (std::size_t k = 0; k < cnt; ++k)
      flats[k] = interior_point(spec, margin, k, idx.data());
  }

  GridField x(spec, margin);
  GridField p(spec, margin), ap(spec, margin);
  std::vector<double> rv(cnt), pv(cnt), scratch(cnt);
  for (std::size_t k = 0; k < cnt; ++k) rv[k] = r.v[flats[k]];
  for (std::size_t k = 0; k < cnt; ++k) p.v[flats[k]] = rv[k];

  auto dot = [&](const std::vector<double>& a, const std::vector<double>& b) {
    for (std::size_t k = 0; k < cnt; ++k) scratch[k] = a[k] * b[k];
    return pairwise_sum(scratch);
  };

  double rr = dot(rv, rv);
  const double rr0 = rr;
  if (rr0 == 0.0) return x;
  for (int it = 0; it < 2000; ++it) {
    parallel_for(cnt, [&](std::size_t b, std::size_t e) {
      for (std::size_t k = b; k < e; ++k) {
        const std::size_t f = flats[k];
        double acc = (2.0 * d) * p.v[f];
        for (int a = 0; a < d; ++a) acc -= p.v[f + st[a]] + p.v[f - st[a]];
        ap.v[f] = acc * inv_h2 + kappa * p.v[f];
      }
    });
    for (std::size_t k = 0; k < cnt; ++k) pv[k] = ap.v[flats[k]];
    std::vector<double> pcur(cnt);
    for (std::size_t k = 0; k < cnt; ++k) pcur[k] = p.v[flats[k]];
    const double alpha = rr / dot(pcur, pv);
    for (std::size_t k = 0; k < cnt; ++k) x.v[flats[k]] += alpha * pcur[k];
    for (std::size_t k = 0; k < cnt; ++k) rv[k] -= alpha * pv[k];
    const double rr_new = dot(rv, rv);
    if (rr_new <= 1e-20 * rr0) break;
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t k = 0; k < cnt; ++k) p.v[flats[k]] = rv[k] + beta * pcur[k];
  }
  return x;
}

namespace {

// Radial screened lift: finite-volume radial Laplacian plus mass term, Neumann at
// the origin, Dirichlet at the outer radius. Direct tridiagonal solve.
std::vector<double> screened_lift_radial(const std::vector<double>& r, int n, double ds,
                                         double kappa) {
  const int K = static_cast<int>(r.size()) - 1;  // unknowns 0..K-1, w_K = 0
  const int dim = 4 * n;
  std::vector<double> lower(K, 0.0), diag(K, 0.0), upper(K, 0.0), rhs(K, 0.0);
  const std::vector<double> vol = radial_cell_volumes(n, ds, K);
  for (int k = 0; k < K; ++k) {
    const double shi = (k + 0.5) * ds;
    const double fhi = sphere_area(dim) * std::pow(shi, dim - 1) / ds;
    diag[k] += fhi;
    if (k + 1 < K) upper[k] -= fhi;
    if (k > 0) {
      const double slo = (k - 0.5) * ds;
      const double flo = sphere_area(dim) * std::pow(slo, dim - 1) / ds;
      diag[k] += flo;
      lower[k] -= flo;
    }
    diag[k] += kappa * vol[k];
    rhs[k] = r[k] * vol[k];
  }
  std::vector<double> cp(K, 0.0), dp(K, 0.0), w(K + 1, 0.0);
  cp[0] = upper[0] / diag[0];
  dp[0] = rhs[0] / diag[0];
  for (int k = 1; k < K; ++k) {
    const double denom = diag[k] - lower[k] * cp[k - 1];
    cp[k] = k + 1 < K ? upper[k] / denom : 0.0;
    dp[k] = (rhs[k] - lower[k] * dp[k - 1]) / denom;
  }
  w[K - 1] = dp[K - 1];
  for (int k = K - 2; k >= 0; --k) w[k] = dp[k] - cp[k] * w[k + 1];
  return w;
}

}  // namespace

GridSolveReport variational_solve(const DensityField& mu, int m,
                                  const VariationalOptions& opt) {
  const GridSpec& spec = mu.spec;
  spec.validate();
  const int margin = std::max(mu.margin, 1);
  const double cell = ipow(spec.spacing(), spec.axes());
  const std::size_t cnt = interior_count(spec, margin);
  std::vector<std::size_t> flats(cnt);
  {
    std::vector<int> idx(spec.axes());
    for (std::size_t k = 0; k < cnt; ++k)
      flats[k] = interior_point(spec, margin, k, idx.data());
  }
  std::vector<double> scratch(cnt);
  auto l1 = [&](const GridField& g) {
    for (std::size_t k = 0; k < cnt; ++k) scratch[k] = std::abs(g.v[flats[k]]);
    return pairwise_sum(scratch) * cell;
  };

  GridSolveReport rep;
  rep.u = GridField(spec, 0);
  GridField r(spec, margin);
  for (std::size_t k = 0; k < cnt; ++k) r.v[flats[k]] = mu.v[flats[k]];
  const double mu_l1 = l1(r);

  double f_cur = functional_F(rep.u, mu, m);
  rep.f_history.push_back(f_cur);

  for (int it = 0; it < opt.max_iterations; ++it) {
    const DensityField dens = hessian_density(rep.u, m);
    for (std::size_t k = 0; k < cnt; ++k)
      r.v[flats[k]] = dens.v[flats[k]] - mu.v[flats[k]];
    const double rel = mu_l1 > 0.0 ? l1(r) / mu_l1 : l1(r);
    rep.residual_history.push_back(rel);
    rep.iterations = it;
    if (rel < opt.tol) {
      rep.status = SolveStatus::converged;
      return rep;
    }

    const GridField w = screened_lift(r, margin, opt.kappa, spec.spacing());
    for (std::size_t k = 0; k < cnt; ++k) scratch[k] = r.v[flats[k]] * w.v[flats[k]];
    const double slope = pairwise_sum(scratch) * cell;

    double tau = opt.step0;
    bool accepted = false;
    for (int bt = 0; bt < opt.max_backtracks; ++bt) {
      GridField target = rep.u;
      for (std::size_t k = 0; k < cnt; ++k) target.v[flats[k]] += tau * w.v[flats[k]];
      const GridField trial = projection(target, m, opt.projection);
      const double f_try = functional_F(trial, mu, m);
      if (f_try <= f_cur - opt.armijo_slope * tau * slope) {
        rep.u = trial;
        f_cur = f_try;
        rep.f_history.push_back(f_cur);
        accepted = true;
        break;
      }
      tau *= 0.5;
    }
    if (!accepted) {
      rep.status = SolveStatus::backtracking_failure;
      return rep;
    }
  }
  rep.status = SolveStatus::iteration_cap;
  return rep;
}

RadialSolveReport variational_solve_radial(const RadialDensity& mu, int m,
                                           const VariationalOptions& opt) {
  const int K = mu.K();
  const int n = mu.n;
  const std::vector<double> vol = radial_cell_volumes(n, mu.ds, K);

  RadialSolveReport rep;
  rep.u.n = n;
  rep.u.ds = mu.ds;
  rep.u.u.assign(K + 1, 0.0);

  std::vector<double> r(K + 1, 0.0), scratch(K + 1, 0.0);
  auto l1 = [&](const std::vector<double>& g) {
    for (int k = 0; k <= K; ++k) scratch[k] = std::abs(g[k]) * vol[k];
    return pairwise_sum(scratch);
  };
  for (int k = 0; k < K; ++k) r[k] = mu.dens[k];
  const double mu_l1 = l1(r);

  double f_cur = functional_F(rep.u, mu, m);
  rep.f_history.push_back(f_cur);

  for (int it = 0; it < opt.max_iterations; ++it) {
    const RadialDensity dens = radial_hessian_density(rep.u, m);
    for (int k = 0; k < K; ++k) r[k] = dens.dens[k] - mu.dens[k];
    r[K] = 0.0;
    const double rel = mu_l1 > 0.0 ? l1(r) / mu_l1 : l1(r);
    rep.residual_history.push_back(rel);
    rep.iterations = it;
    if (rel < opt.tol) {
      rep.status = SolveStatus::converged;
      return rep;
    }

    const std::vector<double> w = screened_lift_radial(r, n, mu.ds, opt.kappa);
    for (int k = 0; k <= K; ++k) scratch[k] = r[k] * w[k] * vol[k];
    const double slope = pairwise_sum(scratch);

    double tau = opt.step0;
    bool accepted = false;
    for (int bt = 0; bt < opt.max_backtracks; ++bt) {
      RadialProfile target = rep.u;
      for (int k = 0; k < K; ++k) target.u[k] += tau * w[k];
      const RadialProfile trial = projection_radial(target, m, opt.projection);
      const double f_try = functional_F(trial, mu, m);
      if (f_try <= f_cur - opt.armijo_slope * tau * slope) {
        rep.u = trial;
        f_cur = f_try;
        rep.f_history.push_back(f_cur);
        accepted = true;
        break;
      }
      tau *= 0.5;
    }
    if (!accepted) {
      rep.status = SolveStatus::backtracking_failure;
      return rep;
    }
  }
  rep.status = SolveStatus::iteration_cap;
  return rep;
}

}  // namespace qhess
