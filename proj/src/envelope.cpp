#include "qhess/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qhess/exterior.hpp"
#include "qhess/util.hpp"

namespace qhess {

namespace {

void check_order(int n, int m) {
  if (m < 1 || m > n) throw std::invalid_argument("order m must satisfy 1 <= m <= n");
}

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

// Constant of the conservative radial form: the density of a profile equals
// c_div * s^{1-4n} d/ds [ s^{4n} (u'/s)^m ].
double flux_constant(int n, int m) {
  return ipow(2.0, 2 * m - 2) * factorial(m - 1) * factorial(n - m) *
         binomial(n - 1, m - 1);
}

// Interface flux F_{k+1/2} = c_div s^{4n} g^m with g = (u_hi - u_lo)/(ds s).
double interface_flux(double c_div, double s_half, int dim4n, int m, double u_lo,
                      double u_hi, double ds) {
  const double g = (u_hi - u_lo) / (ds * s_half);
  return c_div * std::pow(s_half, dim4n) * ipow(g, m);
}

}  // namespace

void AnnulusConfig::validate() const {
  check_order(n, m);
  if (!(0.0 < r && r < R)) throw std::invalid_argument("need 0 < r < R");
  if (samples < 8) throw std::invalid_argument("too few radial samples");
}

double extremal_radial_value(const AnnulusConfig& cfg, double s) {
  const double e = 2.0 - 2.0 * cfg.a();  // negative
  const double denom = std::pow(cfg.r, e) - std::pow(cfg.R, e);
  if (s <= 0.0) return -1.0;
  const double v = (std::pow(cfg.R, e) - std::pow(s, e)) / denom;
  return std::max(v, -1.0);
}

RadialProfile extremal_radial(const AnnulusConfig& cfg) {
  cfg.validate();
  return profile_from_function(cfg.n, cfg.R, cfg.samples,
                               [&](double s) { return extremal_radial_value(cfg, s); });
}

double annulus_capacity_exact(const AnnulusConfig& cfg) {
  cfg.validate();
  const double e = 2.0 - 2.0 * cfg.a();
  const double denom = std::pow(cfg.r, e) - std::pow(cfg.R, e);
  const double g_scale = -e / denom;  // branch satisfies s^{4n} (u'/s)^m = g_scale^m
  return sphere_area(4 * cfg.n) * flux_constant(cfg.n, cfg.m) * ipow(g_scale, cfg.m);
}

GridField obstacle_sweep(const GridField& psi, int m, const SweepOptions& opt,
                         SweepInfo* info) {
  const GridSpec& spec = psi.spec;
  spec.validate();
  check_order(spec.n, m);
  const int d = spec.axes();
  const auto st = spec.strides();
  const double h = spec.spacing();
  const double inv_h2 = 1.0 / (h * h);

  GridField u = psi;
  const std::size_t cnt = interior_count(spec, 1);
  std::vector<std::size_t> flats(cnt);
  std::vector<unsigned char> parity(cnt);
  {
    std::vector<int> idx(d);
    for (std::size_t k = 0; k < cnt; ++k) {
      flats[k] = interior_point(spec, 1, k, idx.data());
      int s = 0;
      for (int a = 0; a < d; ++a) s += idx[a];
      parity[k] = static_cast<unsigned char>(s & 1);
    }
  }
  std::vector<double> change(cnt, 0.0);

  SweepInfo local;
  for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
    if (m == 1) {
      // sigma_1 >= 0 is the neighbor-average bound; red-black projected SOR.
      for (int color = 0; color < 2; ++color) {
        parallel_for(cnt, [&](std::size_t b, std::size_t e) {
          for (std::size_t k = b; k < e; ++k) {
            if (parity[k] != color) continue;
            const std::size_t f = flats[k];
            double nb = 0.0;
            for (int a = 0; a < d; ++a) nb += u.v[f + st[a]] + u.v[f - st[a]];
            const double bound = nb / (2.0 * d);
            const double c_old = u.v[f];
            const double c_new = std::min(psi.v[f], c_old + opt.omega * (bound - c_old));
            change[k] = std::abs(c_new - c_old);
            u.v[f] = c_new;
          }
        });
      }
    } else {
      // Largest center value keeping the point form in the cone. Lowering the
      // center by delta moves the form along 8 delta / h^2 * beta, so every
      // ladder density is a short polynomial in that shift; evaluate the wedge
      // ladder once per point and bisect on the scalar polynomials.
      const int n = spec.n;
      const std::vector<Cplx>& bc = beta_coeffs(n);
      const double nfact = factorial(n);
      std::vector<double> lad(m + 1, 0.0);
      std::vector<const Cplx*> factors(n, bc.data());
      for (std::size_t k = 0; k < cnt; ++k) {
        const std::size_t f = flats[k];
        const double c_old = u.v[f];
        const TwoForm base = baston_point(u, f, c_old);
        double base_scale = std::max(base.max_abs_coeff(), 1.0);
        lad[0] = nfact;
        for (int i = 1; i <= m; ++i) {
          for (int t = 0; t < n; ++t) factors[t] = (t < i) ? base.c.data() : bc.data();
          lad[i] = wedge_top(factors, n).real();
        }
        // density of (base + t beta)^kk ^ beta^{n-kk}, all kk = 1..m, with the
        // same roundoff slack as a direct cone test
        auto admissible = [&](double t) {
          const double sc = base_scale + std::abs(t);
          double slack = 1e-12;
          for (int kk = 1; kk <= m; ++kk) {
            slack *= sc;
            double dens = 0.0, cjk = 1.0, tp = 1.0;
            for (int j = 0; j <= kk; ++j) {
              dens += cjk * tp * lad[kk - j];
              tp *= t;
              cjk = cjk * (kk - j) / (j + 1);
            }
            if (dens < -slack) return false;
          }
          return true;
        };
        const double hi_c = psi.v[f];
        const auto t_at = [&](double c) { return (c_old - c) * inv_h2 * 8.0; };
        double c_new;
        if (admissible(t_at(hi_c))) {
          c_new = hi_c;
        } else {
          double nb = 0.0;
          for (int a = 0; a < d; ++a) nb += u.v[f + st[a]] + u.v[f - st[a]];
          double lo = std::min(hi_c, nb / (2.0 * d));
          double step = 0.5 * (std::abs(lo) + 1.0);
          int guard = 0;
          while (!admissible(t_at(lo)) && guard++ < 200) {
            lo -= step;
            step *= 2.0;
          }
          double hi = hi_c;
          const double width = std::max(opt.tol * h * h, 1e-14);
          while (hi - lo > width) {
            const double mid = 0.5 * (hi + lo);
            (admissible(t_at(mid)) ? lo : hi) = mid;
          }
          c_new = lo;
        }
        change[k] = std::abs(c_new - c_old);
        u.v[f] = c_new;
      }
    }
    double worst = 0.0;
    for (double c : change) worst = std::max(worst, c);
    local.sweeps = sweep + 1;
    local.last_change = worst;
    if (worst < opt.tol) {
      local.converged = true;
      break;
    }
  }
  if (info) *info = local;
  return u;
}

RadialProfile obstacle_sweep_radial(const RadialProfile& psi, int m,
                                    const SweepOptions& opt, SweepInfo* info) {
  return obstacle_sweep_radial(psi, psi, m, opt, info);
}

RadialProfile obstacle_sweep_radial(const RadialProfile& psi, const RadialProfile& start,
                                    int m, const SweepOptions& opt, SweepInfo* info) {
  const int n = psi.n;
  check_order(n, m);
  const int K = psi.K();
  const double ds = psi.ds;
  if (start.K() != K || start.n != n)
    throw std::invalid_argument("start profile mismatch");
  RadialProfile u = start;
  u.u[K] = psi.u[K];

  // Interface weights: the flux balance root is the weighted neighbor average with
  // weights s^{4n/m - 1}.
  const double expo = 4.0 * n / m - 1.0;
  std::vector<double> w(K);  // w[k] is the weight of interface k+1/2
  for (int k = 0; k < K; ++k) w[k] = std::pow((k + 0.5) * ds, expo);

  auto update = [&](int k) {
    double c_new;
    if (k == 0) {
      c_new = std::min(psi.u[0], u.u[1]);
    } else {
      const double cf = (w[k] * u.u[k + 1] + w[k - 1] * u.u[k - 1]) / (w[k] + w[k - 1]);
      c_new = std::min(psi.u[k], cf);
    }
    const double delta = std::abs(c_new - u.u[k]);
    u.u[k] = c_new;
    return delta;
  };

  SweepInfo local;
  for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
    double worst = 0.0;
    for (int k = K - 1; k >= 0; --k) worst = std::max(worst, update(k));
    for (int k = 0; k <= K - 1; ++k) worst = std::max(worst, update(k));
    local.sweeps = sweep + 1;
    local.last_change = worst;
    if (worst < opt.tol) {
      local.converged = true;
      break;
    }
  }
  if (info) *info = local;
  return u;
}

GridField extremal_envelope(const ObstacleProblem& p, SweepInfo* info) {
  p.spec.validate();
  check_order(p.spec.n, p.m);
  GridField psi(p.spec, 0);
  const int d = p.spec.axes();
  std::vector<int> idx(d, 0);
  std::vector<double> x(d);
  for (std::size_t flat = 0; flat < p.spec.total(); ++flat) {
    for (int a = 0; a < d; ++a) x[a] = p.spec.coord(idx[a]);
    bool boundary = false;
    for (int a = 0; a < d; ++a)
      if (idx[a] == 0 || idx[a] == p.spec.points - 1) boundary = true;
    const bool in_e = p.obstacle(x.data());
    if (in_e && boundary)
      throw std::invalid_argument("obstacle set must be strictly inside the domain");
    psi.v[flat] = in_e ? -1.0 : 0.0;
    for (int a = d - 1; a >= 0; --a) {
      if (++idx[a] < p.spec.points) break;
      idx[a] = 0;
    }
  }
  SweepOptions opt;
  opt.tol = p.tol;
  opt.max_sweeps = p.max_sweeps;
  opt.omega = p.omega;
  return obstacle_sweep(psi, p.m, opt, info);
}

RadialProfile extremal_envelope_radial(const RadialObstacleProblem& p,
                                       SweepInfo* info) {
  check_order(p.n, p.m);
  if (p.samples < 8) throw std::invalid_argument("too few radial samples");

  std::vector<int> ladder;
  for (int K = p.samples; K >= 32 && K % 2 == 0; K /= 2) ladder.push_back(K);
  if (ladder.empty()) ladder.push_back(p.samples);
  std::reverse(ladder.begin(), ladder.end());

  auto make_psi = [&](int K) {
    RadialProfile psi;
    psi.n = p.n;
    psi.ds = p.R / K;
    psi.u.resize(K + 1);
    for (int k = 0; k <= K; ++k) psi.u[k] = p.obstacle(psi.s(k)) ? -1.0 : 0.0;
    if (psi.u[K] < 0.0)
      throw std::invalid_argument("obstacle set must be strictly inside the ball");
    return psi;
  };

  SweepOptions opt;
  opt.tol = p.tol;
  opt.max_sweeps = p.max_sweeps;

  SweepInfo total;
  RadialProfile u;
  for (std::size_t lev = 0; lev < ladder.size(); ++lev) {
    const RadialProfile psi = make_psi(ladder[lev]);
    RadialProfile start = psi;
    if (lev > 0) {
      // Linear interpolation of the coarse solution, clipped to the fine obstacle.
      for (int k = 0; k <= ladder[lev]; ++k) {
        const double coarse =
            (k % 2 == 0) ? u.u[k / 2] : 0.5 * (u.u[k / 2] + u.u[k / 2 + 1]);
        start.u[k] = std::min(psi.u[k], coarse);
      }
      start.u[ladder[lev]] = psi.u[ladder[lev]];
    }
    SweepInfo li;
    u = obstacle_sweep_radial(psi, start, p.m, opt, &li);
    total.sweeps += li.sweeps;
    total.last_change = li.last_change;
    total.converged = li.converged;
  }
  if (info) *info = total;
  return u;
}

CapacityReport capacity(const ObstacleProblem& p, double eps) {
  SweepInfo si;
  const GridField env = extremal_envelope(p, &si);
  CapacityReport rep;
  rep.sweep = si;
  rep.eps = eps > 0.0 ? eps : 4.0 * p.spec.spacing();
  const GridField sm = mollify(env, rep.eps);
  const DensityField dens = hessian_density(sm, p.m);
  rep.value = total_mass(dens);
  return rep;
}

CapacityReport capacity_radial(const RadialObstacleProblem& p, double eps) {
  SweepInfo si;
  const RadialProfile env = extremal_envelope_radial(p, &si);
  CapacityReport rep;
  rep.sweep = si;
  rep.eps = eps > 0.0 ? eps : 4.0 * env.ds;
  const RadialProfile sm = mollify_radial(env, rep.eps);
  RadialDensity dens = radial_hessian_density(sm, p.m);
  // The measure of the envelope charges only the contact set, which sits
  // strictly inside the ball. Samples within the smoothing layer of the outer
  // boundary see the constant extension of the profile and are discarded.
  const double cutoff = p.R - (rep.eps + 2.0 * env.ds);
  for (int k = 0; k <= dens.K(); ++k)
    if (dens.s(k) > cutoff) dens.dens[k] = 0.0;
  rep.value = total_mass(dens);
  return rep;
}

GridField projection(const GridField& target, int m, const SweepOptions& opt,
                     SweepInfo* info) {
  GridField psi = target;
  for (double& v : psi.v) v = std::min(v, 0.0);
  return obstacle_sweep(psi, m, opt, info);
}

RadialProfile projection_radial(const RadialProfile& target, int m,
                                const SweepOptions& opt, SweepInfo* info) {
  RadialProfile psi = target;
  for (double& v : psi.u) v = std::min(v, 0.0);
  return obstacle_sweep_radial(psi, m, opt, info);
}

RadialProfile dirichlet_radial(const RadialDensity& f, int m,
                               const DirichletOptions& opt, DirichletInfo* info) {
  const int n = f.n;
  check_order(n, m);
  const int K = f.K();
  const double ds = f.ds;
  const int dim = 4 * n;
  const double c_div = flux_constant(n, m);
  for (double v : f.dens)
    if (v < -1e-12) throw std::invalid_argument("dirichlet_radial: negative density");

  // Cell-centered cumulative target: T[k] = int_0^{s_{k+1/2}} f s^{4n-1} ds with f
  // frozen per cell; exact for constant f.
  std::vector<double> half(K), cellw(K + 1), target(K);
  for (int k = 0; k < K; ++k) half[k] = (k + 0.5) * ds;
  for (int k = 0; k <= K; ++k) {
    const double lo = k == 0 ? 0.0 : half[k - 1];
    const double hi = k == K ? K * ds : half[k];
    cellw[k] = (std::pow(hi, dim) - std::pow(lo, dim)) / dim;
  }
  double acc = 0.0;
  for (int k = 0; k < K; ++k) {
    acc += std::max(f.dens[k], 0.0) * cellw[k];
    target[k] = acc;
  }

  // Direct discrete solution: invert the cumulative flux, then integrate inward.
  RadialProfile u;
  u.n = n;
  u.ds = ds;
  u.u.assign(K + 1, 0.0);
  for (int k = K - 1; k >= 0; --k) {
    const double g = std::pow(target[k] / (c_div * std::pow(half[k], dim)), 1.0 / m);
    u.u[k] = u.u[k + 1] - ds * half[k] * g;
  }

  // Convergence is measured on cumulative fluxes relative to the total mass;
  // per-cell normalization would divide roundoff by the vanishing origin cell.
  const double mass_scale = 1.0 + target[K - 1];
  auto residual = [&](const RadialProfile& w, std::vector<double>& r) {
    double worst = 0.0;
    for (int k = 0; k < K; ++k) {
      const double fk =
          interface_flux(c_div, half[k], dim, m, w.u[k], w.u[k + 1], ds);
      const double fprev =
          k == 0 ? 0.0 : interface_flux(c_div, half[k - 1], dim, m, w.u[k - 1], w.u[k], ds);
      r[k] = (fk - fprev) - std::max(f.dens[k], 0.0) * cellw[k];
      worst = std::max(worst, std::abs(fk - target[k]) / mass_scale);
    }
    return worst;
  };

  std::vector<double> r(K), rtry(K);
  double res = residual(u, r);
  DirichletInfo li;
  while (res > opt.tol && li.newton_iterations < opt.max_newton) {
    // Tridiagonal Newton system over u_0..u_{K-1}; u_K pinned at 0.
    std::vector<double> lower(K, 0.0), diag(K, 0.0), upper(K, 0.0);
    for (int k = 0; k < K; ++k) {
      const double gk = (u.u[k + 1] - u.u[k]) / (ds * half[k]);
      const double dk = c_div * std::pow(half[k], dim) * m *
                        ipow(std::max(std::abs(gk), 1e-12), m - 1) / (ds * half[k]);
      // d r[k] / d u_k gets -dk, d r[k] / d u_{k+1} gets +dk (when k+1 < K),
      // d r[k+1] / d u_k gets +dk, d r[k+1] / d u_{k+1} gets -dk.
      diag[k] -= dk;
      if (k + 1 < K) {
        upper[k] += dk;
        lower[k + 1] += dk;
        diag[k + 1] -= dk;
      }
    }
    // Thomas solve of J delta = -r.
    std::vector<double> cp(K, 0.0), dp(K, 0.0);
    cp[0] = upper[0] / diag[0];
    dp[0] = -r[0] / diag[0];
    for (int k = 1; k < K; ++k) {
      const double denom = diag[k] - lower[k] * cp[k - 1];
      cp[k] = k + 1 < K ? upper[k] / denom : 0.0;
      dp[k] = (-r[k] - lower[k] * dp[k - 1]) / denom;
    }
    std::vector<double> delta(K);
    delta[K - 1] = dp[K - 1];
    for (int k = K - 2; k >= 0; --k) delta[k] = dp[k] - cp[k] * delta[k + 1];

    double lam = 1.0;
    bool accepted = false;
    while (lam > 1e-8) {
      RadialProfile trial = u;
      for (int k = 0; k < K; ++k) trial.u[k] += lam * delta[k];
      const double rt = residual(trial, rtry);
      if (rt < res) {
        u = trial;
        res = rt;
        r = rtry;
        accepted = true;
        break;
      }
      lam *= 0.5;
    }
    ++li.newton_iterations;
    if (!accepted) break;
  }
  li.residual = res;
  li.converged = res <= opt.tol;
  if (info) *info = li;
  if (!li.converged && !info)
    throw std::runtime_error("dirichlet_radial: Newton did not reach tolerance");
  return u;
}

}  // namespace qhess
