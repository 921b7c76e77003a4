#include "qhess/hessian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>

#include "qhess/quaternion.hpp"
#include "qhess/util.hpp"

namespace qhess {

namespace {

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

void check_order(int n, int m) {
  if (m < 1 || m > n) throw std::invalid_argument("order m must satisfy 1 <= m <= n");
}

// sigma_m of (tan x (n-1), rad): only the terms with at most one rad factor survive.
double radial_sigma(int n, int m, double tan, double rad) {
  return binomial(n - 1, m) * ipow(tan, m) +
         binomial(n - 1, m - 1) * ipow(tan, m - 1) * rad;
}

// max |u| over grid points whose index touches the outermost `layers` cells.
double shell_max_abs(const GridField& u, int layers) {
  const GridSpec& s = u.spec;
  const int d = s.axes();
  std::vector<int> idx(d, 0);
  double worst = 0.0;
  for (std::size_t flat = 0; flat < s.total(); ++flat) {
    bool shell = false;
    for (int a = 0; a < d; ++a)
      if (idx[a] < layers || idx[a] >= s.points - layers) shell = true;
    if (shell) worst = std::max(worst, std::abs(u.v[flat]));
    for (int a = d - 1; a >= 0; --a) {
      if (++idx[a] < s.points) break;
      idx[a] = 0;
    }
  }
  return worst;
}

// min of u - v over the same shell.
double shell_min_diff(const GridField& u, const GridField& v, int layers) {
  const GridSpec& s = u.spec;
  const int d = s.axes();
  std::vector<int> idx(d, 0);
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t flat = 0; flat < s.total(); ++flat) {
    bool shell = false;
    for (int a = 0; a < d; ++a)
      if (idx[a] < layers || idx[a] >= s.points - layers) shell = true;
    if (shell) worst = std::min(worst, u.v[flat] - v.v[flat]);
    for (int a = d - 1; a >= 0; --a) {
      if (++idx[a] < s.points) break;
      idx[a] = 0;
    }
  }
  return worst;
}

DensityField density_of_forms(const std::vector<const TwoFormField*>& as) {
  if (as.empty()) throw std::invalid_argument("no factors");
  const GridSpec spec = as[0]->spec;
  const int n = spec.n;
  const int m = static_cast<int>(as.size());
  check_order(n, m);
  int margin = 0;
  for (const TwoFormField* a : as) {
    if (!(a->spec == spec)) throw std::invalid_argument("grid spec mismatch");
    margin = std::max(margin, a->margin);
  }
  DensityField out(spec, margin);
  const std::vector<Cplx>& bc = beta_coeffs(n);
  const std::size_t cnt = interior_count(spec, margin);
  parallel_for(cnt, [&](std::size_t b, std::size_t e) {
    std::vector<int> idx(spec.axes());
    std::vector<const Cplx*> factors(n, bc.data());
    for (std::size_t k = b; k < e; ++k) {
      const std::size_t flat = interior_point(spec, margin, k, idx.data());
      for (int t = 0; t < m; ++t) factors[t] = as[t]->at(flat);
      out.v[flat] = wedge_top(factors, n).real();
    }
  });
  return out;
}

}  // namespace

double ladder_constant(int n, int m) {
  return ipow(2.0, m) * factorial(m) * factorial(n - m);
}

DensityField hessian_density(const TwoFormField& a, int m) {
  std::vector<const TwoFormField*> as(m, &a);
  return density_of_forms(as);
}

DensityField hessian_density(const GridField& u, int m) {
  const TwoFormField a = baston(u);
  return hessian_density(a, m);
}

DensityField mixed_hessian_density(const std::vector<const TwoFormField*>& as) {
  return density_of_forms(as);
}

DensityField mixed_hessian_density(const std::vector<const GridField*>& us) {
  std::vector<TwoFormField> forms;
  forms.reserve(us.size());
  for (const GridField* u : us) forms.push_back(baston(*u));
  std::vector<const TwoFormField*> ptrs;
  ptrs.reserve(forms.size());
  for (const TwoFormField& f : forms) ptrs.push_back(&f);
  return density_of_forms(ptrs);
}

RadialDensity radial_hessian_density(const RadialProfile& u, int m) {
  check_order(u.n, m);
  const std::vector<RadialEig> eig = radial_eigenvalues(u);
  RadialDensity out;
  out.n = u.n;
  out.ds = u.ds;
  out.dens.resize(eig.size());
  const double c = ladder_constant(u.n, m);
  for (std::size_t k = 0; k < eig.size(); ++k)
    out.dens[k] = c * radial_sigma(u.n, m, eig[k].tan, eig[k].rad);
  return out;
}

RadialDensity mixed_radial_hessian_density(const std::vector<const RadialProfile*>& us,
                                           int m) {
  if (static_cast<int>(us.size()) != m) throw std::invalid_argument("need m profiles");
  const int n = us[0]->n;
  check_order(n, m);
  const int K = us[0]->K();
  for (const RadialProfile* u : us)
    if (u->n != n || u->K() != K || u->ds != us[0]->ds)
      throw std::invalid_argument("profile mismatch");

  std::vector<std::vector<RadialEig>> eig(us.size());
  for (std::size_t i = 0; i < us.size(); ++i) eig[i] = radial_eigenvalues(*us[i]);

  // Polarization of sigma_m: (1/m!) sum over nonempty subsets S of slots of
  // (-1)^{m-|S|} sigma_m(sum of the slot eigenvalues).
  RadialDensity out;
  out.n = n;
  out.ds = us[0]->ds;
  out.dens.assign(K + 1, 0.0);
  const double c = ladder_constant(n, m) / factorial(m);
  for (int k = 0; k <= K; ++k) {
    double acc = 0.0;
    for (unsigned sub = 1; sub < (1u << m); ++sub) {
      double tan = 0.0, rad = 0.0;
      int bits = 0;
      for (int i = 0; i < m; ++i) {
        if (sub & (1u << i)) {
          tan += eig[i][k].tan;
          rad += eig[i][k].rad;
          ++bits;
        }
      }
      const double sign = ((m - bits) % 2 == 0) ? 1.0 : -1.0;
      acc += sign * radial_sigma(n, m, tan, rad);
    }
    out.dens[k] = c * acc;
  }
  return out;
}

MshReport is_msh(const GridField& u, int m, double tol, std::uint64_t seed,
                 int samples) {
  const GridSpec& spec = u.spec;
  const int n = spec.n;
  check_order(n, m);
  const TwoFormField a = baston(u);
  const int margin = a.margin;
  const std::vector<Cplx>& bc = beta_coeffs(n);
  const double nf = factorial(n);

  MshReport rep;
  rep.m = m;
  rep.tol = tol;
  rep.min_ladder.assign(m, std::numeric_limits<double>::infinity());
  rep.min_sampled = std::numeric_limits<double>::infinity();
  rep.worst_point = 0;

  // Sampled cone partners: Baston images of random convex quadratics, i.e. bridge
  // images of positive hyperhermitian G*G, unit-normalized.
  std::vector<std::vector<Cplx>> partners;
  if (m > 1) {
    Rng rng(seed);
    for (int s = 0; s < samples * (m - 1); ++s) {
      std::vector<std::vector<Quaternion>> g(n, std::vector<Quaternion>(n));
      for (int r = 0; r < n; ++r)
        for (int c2 = 0; c2 < n; ++c2)
          g[r][c2] = Quaternion{rng.normal(), rng.normal(), rng.normal(), rng.normal()};
      HyperhermitianMatrix A(n);
      for (int r = 0; r < n; ++r) {
        for (int c2 = r; c2 < n; ++c2) {
          Quaternion acc = Quaternion{0, 0, 0, 0};
          for (int j = 0; j < n; ++j) acc = acc + conj(g[j][r]) * g[j][c2];
          if (c2 == r)
            A.set(r, r, Quaternion::real(acc.scalar_part()));
          else
            A.set(r, c2, acc);
        }
      }
      TwoForm alpha = twoform_from_hyperhermitian(A);
      const double scale = alpha.max_abs_coeff();
      if (scale > 0) alpha = Cplx(1.0 / scale) * alpha;
      partners.push_back(alpha.c);
    }
  }

  const std::size_t cnt = interior_count(spec, margin);

  // Normalize against the field-wide scale of the form. A per-point scale would
  // blow up pure roundoff at points where the form nearly vanishes, e.g. deep
  // inside the contact set of an envelope.
  std::vector<double> scales(cnt, 0.0);
  parallel_for(cnt, [&](std::size_t b, std::size_t e) {
    std::vector<int> idx(spec.axes());
    for (std::size_t k = b; k < e; ++k) {
      const std::size_t flat = interior_point(spec, margin, k, idx.data());
      const Cplx* ap = a.at(flat);
      double s = 0.0;
      for (int c2 = 0; c2 < a.comps; ++c2) s = std::max(s, std::abs(ap[c2]));
      scales[k] = s;
    }
  });
  double gscale = 0.0;
  for (double s : scales) gscale = std::max(gscale, s);
  if (gscale < 1e-300) {
    rep.min_ladder.assign(m, 0.0);
    rep.min_sampled = 0.0;
    rep.msh = true;
    return rep;
  }

  std::mutex merge_mutex;
  std::vector<MshReport> partial;

  parallel_for(cnt, [&](std::size_t b, std::size_t e) {
    MshReport local = rep;
    std::vector<int> idx(spec.axes());
    std::vector<const Cplx*> factors(n, bc.data());
    for (std::size_t k = b; k < e; ++k) {
      const std::size_t flat = interior_point(spec, margin, k, idx.data());
      const Cplx* ap = a.at(flat);
      for (int deg = 1; deg <= m; ++deg) {
        for (int t = 0; t < n; ++t) factors[t] = (t < deg) ? ap : bc.data();
        const double dens = wedge_top(factors, n).real() / (ipow(gscale, deg) * nf);
        if (dens < local.min_ladder[deg - 1]) {
          local.min_ladder[deg - 1] = dens;
          if (deg == m) local.worst_point = flat;
        }
      }
      if (m > 1) {
        for (std::size_t s = 0; s + (m - 1) <= partners.size(); s += (m - 1)) {
          factors[0] = ap;
          for (int t = 1; t < m; ++t) factors[t] = partners[s + t - 1].data();
          for (int t = m; t < n; ++t) factors[t] = bc.data();
          const double dens = wedge_top(factors, n).real() / (gscale * nf);
          local.min_sampled = std::min(local.min_sampled, dens);
        }
      }
    }
    std::lock_guard<std::mutex> lock(merge_mutex);
    partial.push_back(std::move(local));
  });

  for (const MshReport& p : partial) {
    for (int k = 0; k < m; ++k) {
      if (p.min_ladder[k] < rep.min_ladder[k]) {
        rep.min_ladder[k] = p.min_ladder[k];
        if (k + 1 == m) rep.worst_point = p.worst_point;
      }
    }
    rep.min_sampled = std::min(rep.min_sampled, p.min_sampled);
  }
  bool ok = true;
  for (double d : rep.min_ladder) ok = ok && d >= -tol;
  if (m > 1) ok = ok && rep.min_sampled >= -tol;
  rep.msh = ok;
  return rep;
}

MshReport is_msh_radial(const RadialProfile& u, int m, double tol) {
  check_order(u.n, m);
  const std::vector<RadialEig> eig = radial_eigenvalues(u);
  MshReport rep;
  rep.m = m;
  rep.tol = tol;
  rep.min_ladder.assign(m, std::numeric_limits<double>::infinity());
  rep.min_sampled = std::numeric_limits<double>::infinity();
  const double nf = factorial(u.n);
  // field-wide scale, matching the grid variant
  double gscale = 0.0;
  for (const RadialEig& e : eig)
    gscale = std::max(gscale, std::max(std::abs(e.tan), std::abs(e.rad)));
  if (gscale < 1e-300) {
    rep.min_ladder.assign(m, 0.0);
    rep.min_sampled = 0.0;
    rep.msh = true;
    return rep;
  }
  for (std::size_t k = 0; k < eig.size(); ++k) {
    for (int deg = 1; deg <= m; ++deg) {
      const double dens = ladder_constant(u.n, deg) *
                          radial_sigma(u.n, deg, eig[k].tan / gscale, eig[k].rad / gscale) /
                          nf;
      if (dens < rep.min_ladder[deg - 1]) {
        rep.min_ladder[deg - 1] = dens;
        if (deg == m) rep.worst_point = k;
      }
    }
  }
  bool ok = true;
  for (double d : rep.min_ladder) ok = ok && d >= -tol;
  rep.msh = ok;
  return rep;
}

double sphere_area(int dim) {
  if (dim < 2 || dim % 2 != 0) throw std::invalid_argument("even dimension expected");
  return 2.0 * std::pow(kPi, dim / 2) / factorial(dim / 2 - 1);
}

double total_mass(const DensityField& d) {
  const std::size_t cnt = interior_count(d.spec, d.margin);
  std::vector<double> vals(cnt);
  parallel_for(cnt, [&](std::size_t b, std::size_t e) {
    std::vector<int> idx(d.spec.axes());
    for (std::size_t k = b; k < e; ++k)
      vals[k] = d.v[interior_point(d.spec, d.margin, k, idx.data())];
  });
  return pairwise_sum(vals) * ipow(d.spec.spacing(), d.spec.axes());
}

double total_mass(const DensityField& d,
                  const std::function<bool(const double*)>& inside) {
  const std::size_t cnt = interior_count(d.spec, d.margin);
  std::vector<double> vals(cnt, 0.0);
  parallel_for(cnt, [&](std::size_t b, std::size_t e) {
    std::vector<int> idx(d.spec.axes());
    std::vector<double> x(d.spec.axes());
    for (std::size_t k = b; k < e; ++k) {
      const std::size_t flat = interior_point(d.spec, d.margin, k, idx.data());
      for (int a = 0; a < d.spec.axes(); ++a) x[a] = d.spec.coord(idx[a]);
      if (inside(x.data())) vals[k] = d.v[flat];
    }
  });
  return pairwise_sum(vals) * ipow(d.spec.spacing(), d.spec.axes());
}

double total_mass(const RadialDensity& d) {
  const int K = d.K();
  const int dim = 4 * d.n;
  std::vector<double> terms(K + 1);
  for (int k = 0; k <= K; ++k) {
    const double w = (k == 0 || k == K) ? 0.5 : 1.0;
    terms[k] = w * d.dens[k] * std::pow(d.s(k), dim - 1) * d.ds;
  }
  return sphere_area(dim) * pairwise_sum(terms);
}

double StokesReport::rel_gap() const {
  const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
  return std::abs(lhs - rhs) / scale;
}

StokesReport stokes_check(const GridField& u, const GridField& v,
                          const std::vector<const GridField*>& ws, int m) {
  const GridSpec& spec = u.spec;
  const int n = spec.n;
  check_order(n, m);
  if (!(v.spec == spec)) throw std::invalid_argument("grid spec mismatch");
  if (static_cast<int>(ws.size()) != m - 1)
    throw std::invalid_argument("need m-1 weight fields");
  for (const GridField* w : ws)
    if (!(w->spec == spec)) throw std::invalid_argument("grid spec mismatch");
  if (shell_max_abs(u, 2) > 1e-10 || shell_max_abs(v, 2) > 1e-10)
    throw std::invalid_argument("support touches the grid boundary");

  const TwoFormField au = baston(u);
  const TwoFormField av = baston(v);
  const TwoFormField g = gamma(u, v);
  std::vector<TwoFormField> aws;
  aws.reserve(ws.size());
  for (const GridField* w : ws) aws.push_back(baston(*w));

  const int margin = au.margin;
  const std::vector<Cplx>& bc = beta_coeffs(n);
  const std::size_t cnt = interior_count(spec, margin);
  std::vector<double> tl(cnt), tr(cnt), tc(cnt);
  parallel_for(cnt, [&](std::size_t b, std::size_t e) {
    std::vector<int> idx(spec.axes());
    std::vector<const Cplx*> factors(n, bc.data());
    for (std::size_t k = b; k < e; ++k) {
      const std::size_t flat = interior_point(spec, margin, k, idx.data());
      for (std::size_t t = 0; t < aws.size(); ++t) factors[1 + t] = aws[t].at(flat);
      factors[0] = au.at(flat);
      tl[k] = v.v[flat] * wedge_top(factors, n).real();
      factors[0] = av.at(flat);
      tr[k] = u.v[flat] * wedge_top(factors, n).real();
      factors[0] = g.at(flat);
      tc[k] = -wedge_top(factors, n).real();
    }
  });
  const double cell = ipow(spec.spacing(), spec.axes());
  StokesReport rep;
  rep.lhs = pairwise_sum(tl) * cell;
  rep.rhs = pairwise_sum(tr) * cell;
  rep.cross = pairwise_sum(tc) * cell;
  return rep;
}

ComparisonReport comparison_check(const GridField& u, const GridField& v, int m,
                                  double tol) {
  const GridSpec& spec = u.spec;
  check_order(spec.n, m);
  if (!(v.spec == spec)) throw std::invalid_argument("grid spec mismatch");
  if (shell_min_diff(u, v, 2) < -1e-9)
    throw std::invalid_argument("comparison requires u >= v near the boundary");

  const DensityField du = hessian_density(u, m);
  const DensityField dv = hessian_density(v, m);
  const int margin = du.margin;
  const std::size_t cnt = interior_count(spec, margin);
  std::vector<double> tu(cnt, 0.0), tv(cnt, 0.0);
  std::vector<unsigned char> hit(cnt, 0);
  parallel_for(cnt, [&](std::size_t b, std::size_t e) {
    std::vector<int> idx(spec.axes());
    for (std::size_t k = b; k < e; ++k) {
      const std::size_t flat = interior_point(spec, margin, k, idx.data());
      if (u.v[flat] < v.v[flat]) {
        hit[k] = 1;
        tu[k] = du.v[flat];
        tv[k] = dv.v[flat];
      }
    }
  });
  const double cell = ipow(spec.spacing(), spec.axes());
  ComparisonReport rep;
  rep.tol = tol;
  rep.mass_u = pairwise_sum(tu) * cell;
  rep.mass_v = pairwise_sum(tv) * cell;
  for (unsigned char h : hit) rep.set_points += h;
  rep.holds = rep.mass_v <= rep.mass_u + tol * (1.0 + std::abs(rep.mass_u));
  return rep;
}

ComparisonReport comparison_check_radial(const RadialProfile& u,
                                         const RadialProfile& v, int m, double tol) {
  if (u.n != v.n || u.K() != v.K() || u.ds != v.ds)
    throw std::invalid_argument("profile mismatch");
  const int K = u.K();
  if (u.u[K] < v.u[K] - 1e-9)
    throw std::invalid_argument("comparison requires u >= v at the boundary");
  const RadialDensity du = radial_hessian_density(u, m);
  const RadialDensity dv = radial_hessian_density(v, m);
  const int dim = 4 * u.n;
  std::vector<double> tu(K + 1, 0.0), tv(K + 1, 0.0);
  ComparisonReport rep;
  rep.tol = tol;
  for (int k = 0; k <= K; ++k) {
    if (u.u[k] < v.u[k]) {
      const double w = ((k == 0 || k == K) ? 0.5 : 1.0) * std::pow(u.s(k), dim - 1) * u.ds;
      tu[k] = w * du.dens[k];
      tv[k] = w * dv.dens[k];
      ++rep.set_points;
    }
  }
  rep.mass_u = sphere_area(dim) * pairwise_sum(tu);
  rep.mass_v = sphere_area(dim) * pairwise_sum(tv);
  rep.holds = rep.mass_v <= rep.mass_u + tol * (1.0 + std::abs(rep.mass_u));
  return rep;
}

}  // namespace qhess
