#include "qhess/calculus.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace qhess {

namespace {

// Interior walk at a given margin; body(flat) only.
template <typename F>
void walk_interior(const GridSpec& s, int margin, F&& body) {
  const std::size_t cnt = interior_count(s, margin);
  parallel_for(cnt, [&](std::size_t b, std::size_t e) {
    std::vector<int> idx(s.axes());
    for (std::size_t k = b; k < e; ++k) {
      const std::size_t flat = interior_point(s, margin, k, idx.data());
      body(flat);
    }
  });
}

}  // namespace

TwoFormField::TwoFormField(const GridSpec& s, int margin_)
    : spec(s), margin(margin_), comps(pair_count(s.n)),
      c(s.total() * static_cast<std::size_t>(pair_count(s.n)), Cplx(0.0)) {}

TwoForm TwoFormField::form_at(std::size_t flat) const {
  TwoForm f(spec.n);
  const Cplx* p = at(flat);
  for (int i = 0; i < comps; ++i) f.c[i] = p[i];
  return f;
}

FormField::FormField(const GridSpec& s, int degree_, int margin_)
    : spec(s), margin(margin_), degree(degree_) {
  const int d = 2 * s.n;
  for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
    if (std::popcount(mask) == degree_) basis.push_back(mask);
  }
  c.assign(s.total() * basis.size(), Cplx(0.0));
}

int FormField::basis_index(std::uint32_t mask) const {
  const auto it = std::lower_bound(basis.begin(), basis.end(), mask);
  if (it == basis.end() || *it != mask)
    throw std::invalid_argument("FormField::basis_index: mask not in basis");
  return static_cast<int>(it - basis.begin());
}

Multivector FormField::multivector_at(std::size_t flat) const {
  Multivector m(spec.n, degree);
  const Cplx* p = c.data() + flat * basis.size();
  for (std::size_t b = 0; b < basis.size(); ++b) {
    if (p[b] != Cplx(0.0, 0.0)) m.set(basis[b], p[b]);
  }
  return m;
}

FormField form_from_scalar(const GridField& u) {
  FormField f(u.spec, 0, u.margin);
  for (std::size_t k = 0; k < u.v.size(); ++k) f.c[k] = Cplx(u.v[k]);
  return f;
}

FormField form_from_twoform_field(const TwoFormField& tf) {
  FormField f(tf.spec, 2, tf.margin);
  const int nc = tf.comps;
  for (std::size_t p = 0; p < tf.spec.total(); ++p) {
    const Cplx* src = tf.at(p);
    Cplx* dst = f.c.data() + p * f.basis.size();
    for (int idx = 0; idx < nc; ++idx) {
      const auto [i, j] = pair_from_index(idx, tf.spec.n);
      dst[f.basis_index((1u << i) | (1u << j))] = src[idx];
    }
  }
  return f;
}

CGridField nabla(const GridField& u, int j, int alpha) {
  u.spec.validate();
  if (j < 0 || j >= 2 * u.spec.n || (alpha != 0 && alpha != 1))
    throw std::invalid_argument("nabla: bad operator index");
  CGridField out(u.spec, u.margin + 1);
  const auto st = u.spec.strides();
  const double inv2h = 1.0 / (2.0 * u.spec.spacing());
  const auto terms = nabla_terms(j, alpha);
  walk_interior(u.spec, out.margin, [&](std::size_t flat) {
    Cplx v(0.0, 0.0);
    for (const auto& t : terms) {
      const std::size_t s = st[t.axis];
      v += t.coeff * ((u.v[flat + s] - u.v[flat - s]) * inv2h);
    }
    out.v[flat] = v;
  });
  return out;
}

TwoFormField baston(const GridField& u) {
  u.spec.validate();
  TwoFormField out(u.spec, u.margin + 1);
  const int d = u.spec.axes();
  const auto st = u.spec.strides();
  const double h = u.spec.spacing();
  const double inv_h2 = 1.0 / (h * h);
  const std::size_t cnt = interior_count(u.spec, out.margin);
  const int n = u.spec.n;
  parallel_for(cnt, [&](std::size_t b, std::size_t e) {
    std::vector<int> idx(d);
    std::vector<double> H(d * d);
    for (std::size_t k = b; k < e; ++k) {
      const std::size_t f = interior_point(u.spec, out.margin, k, idx.data());
      const double center = u.v[f];
      for (int a = 0; a < d; ++a) {
        H[a * d + a] = (u.v[f + st[a]] - 2.0 * center + u.v[f - st[a]]) * inv_h2;
        for (int b2 = a + 1; b2 < d; ++b2) {
          const double m = (u.v[f + st[a] + st[b2]] - u.v[f + st[a] - st[b2]] -
                            u.v[f - st[a] + st[b2]] + u.v[f - st[a] - st[b2]]) *
                           (0.25 * inv_h2);
          H[a * d + b2] = m;
          H[b2 * d + a] = m;
        }
      }
      twoform_from_real_hessian(H.data(), n, out.at(f));
    }
  });
  return out;
}

TwoForm baston_at(const std::function<double(const double*)>& fn,
                  const std::vector<double>& x, double h) {
  if (x.size() % 4 != 0 || x.empty())
    throw std::invalid_argument("baston_at: point dimension not 4n");
  const int d = static_cast<int>(x.size());
  const int n = d / 4;
  std::vector<double> p(x), H(d * d);
  const double inv_h2 = 1.0 / (h * h);
  const double c0 = fn(p.data());
  auto eval_shift = [&](int a, double da, int b, double db) {
    p = x;
    p[a] += da;
    if (b >= 0) p[b] += db;
    return fn(p.data());
  };
  for (int a = 0; a < d; ++a) {
    H[a * d + a] =
        (eval_shift(a, h, -1, 0.0) - 2.0 * c0 + eval_shift(a, -h, -1, 0.0)) * inv_h2;
    for (int b = a + 1; b < d; ++b) {
      const double m = (eval_shift(a, h, b, h) - eval_shift(a, h, b, -h) -
                        eval_shift(a, -h, b, h) + eval_shift(a, -h, b, -h)) *
                       (0.25 * inv_h2);
      H[a * d + b] = m;
      H[b * d + a] = m;
    }
  }
  TwoForm f(n);
  twoform_from_real_hessian(H.data(), n, f.c.data());
  return f;
}

TwoForm baston_point(const GridField& u, std::size_t flat, double center) {
  const int d = u.spec.axes();
  const auto st = u.spec.strides();
  const double inv_h2 = 1.0 / (u.spec.spacing() * u.spec.spacing());
  std::vector<double> H(d * d);
  for (int a = 0; a < d; ++a) {
    H[a * d + a] = (u.v[flat + st[a]] - 2.0 * center + u.v[flat - st[a]]) * inv_h2;
    for (int b = a + 1; b < d; ++b) {
      const double m = (u.v[flat + st[a] + st[b]] - u.v[flat + st[a] - st[b]] -
                        u.v[flat - st[a] + st[b]] + u.v[flat - st[a] - st[b]]) *
                       (0.25 * inv_h2);
      H[a * d + b] = m;
      H[b * d + a] = m;
    }
  }
  TwoForm f(u.spec.n);
  twoform_from_real_hessian(H.data(), u.spec.n, f.c.data());
  return f;
}

FormField d_alpha(const FormField& f, int alpha) {
  if (alpha != 0 && alpha != 1) throw std::invalid_argument("d_alpha: alpha must be 0/1");
  if (f.degree >= 2 * f.spec.n)
    throw std::invalid_argument("d_alpha: degree overflow");
  FormField out(f.spec, f.degree + 1, f.margin + 1);
  const int d2 = 2 * f.spec.n;
  const auto st = f.spec.strides();
  const double inv2h = 1.0 / (2.0 * f.spec.spacing());
  const std::size_t nc_in = f.basis.size();
  const std::size_t nc_out = out.basis.size();

  // Static expansion: output component M collects sign * nabla_i of component M\{i}.
  struct Term {
    int out_comp;
    int in_comp;
    int i;
    double sign;
  };
  std::vector<Term> terms;
  for (std::size_t ob = 0; ob < nc_out; ++ob) {
    const std::uint32_t M = out.basis[ob];
    for (int i = 0; i < d2; ++i) {
      if (!(M & (1u << i))) continue;
      const std::uint32_t rest = M & ~(1u << i);
      const int below = std::popcount(rest & ((1u << i) - 1));
      Term t;
      t.out_comp = static_cast<int>(ob);
      t.in_comp = f.basis_index(rest);
      t.i = i;
      t.sign = (below % 2 == 0) ? 1.0 : -1.0;
      terms.push_back(t);
    }
  }

  walk_interior(f.spec, out.margin, [&](std::size_t flat) {
    Cplx* dst = out.c.data() + flat * nc_out;
    for (const Term& t : terms) {
      const auto nts = nabla_terms(t.i, alpha);
      Cplx v(0.0, 0.0);
      for (const auto& nt : nts) {
        const std::size_t s = st[nt.axis];
        const Cplx* hi = f.c.data() + (flat + s) * nc_in;
        const Cplx* lo = f.c.data() + (flat - s) * nc_in;
        v += nt.coeff * ((hi[t.in_comp] - lo[t.in_comp]) * inv2h);
      }
      dst[t.out_comp] += t.sign * v;
    }
  });
  return out;
}

FormField wedge(const FormField& a, const FormField& b) {
  if (!(a.spec == b.spec)) throw std::invalid_argument("wedge(FormField): grid mismatch");
  if (a.degree + b.degree > 2 * a.spec.n)
    throw std::invalid_argument("wedge(FormField): degree overflow");
  FormField out(a.spec, a.degree + b.degree, std::max(a.margin, b.margin));
  struct Term {
    int out_comp, ac, bc;
    double sign;
  };
  std::vector<Term> terms;
  for (std::size_t ia = 0; ia < a.basis.size(); ++ia) {
    for (std::size_t ib = 0; ib < b.basis.size(); ++ib) {
      const std::uint32_t ma = a.basis[ia], mb = b.basis[ib];
      if (ma & mb) continue;
      int inv = 0;
      std::uint32_t bb = mb;
      while (bb) {
        const int j = std::countr_zero(bb);
        bb &= bb - 1;
        inv += std::popcount(ma >> (j + 1));
      }
      terms.push_back(Term{out.basis_index(ma | mb), static_cast<int>(ia),
                           static_cast<int>(ib), inv % 2 == 0 ? 1.0 : -1.0});
    }
  }
  const std::size_t nca = a.basis.size(), ncb = b.basis.size(), nco = out.basis.size();
  walk_interior(out.spec, out.margin, [&](std::size_t flat) {
    const Cplx* pa = a.c.data() + flat * nca;
    const Cplx* pb = b.c.data() + flat * ncb;
    Cplx* po = out.c.data() + flat * nco;
    for (const Term& t : terms) po[t.out_comp] += t.sign * pa[t.ac] * pb[t.bc];
  });
  return out;
}

TwoFormField gamma(const GridField& u, const GridField& v) {
  if (!(u.spec == v.spec)) throw std::invalid_argument("gamma: grid mismatch");
  const int d2 = 2 * u.spec.n;
  TwoFormField out(u.spec, std::max(u.margin, v.margin) + 1);
  const auto st = u.spec.strides();
  const double inv2h = 1.0 / (2.0 * u.spec.spacing());
  walk_interior(u.spec, out.margin, [&](std::size_t flat) {
    // First differences of u and v packed as nabla_{i,alpha} values.
    Cplx du[8][2], dv[8][2];
    for (int i = 0; i < d2; ++i) {
      for (int al = 0; al < 2; ++al) {
        const auto nts = nabla_terms(i, al);
        Cplx a(0.0), b(0.0);
        for (const auto& nt : nts) {
          const std::size_t s = st[nt.axis];
          a += nt.coeff * ((u.v[flat + s] - u.v[flat - s]) * inv2h);
          b += nt.coeff * ((v.v[flat + s] - v.v[flat - s]) * inv2h);
        }
        du[i][al] = a;
        dv[i][al] = b;
      }
    }
    Cplx* dst = out.at(flat);
    int idx = 0;
    for (int i = 0; i < d2; ++i) {
      for (int j = i + 1; j < d2; ++j, ++idx) {
        const Cplx bij = 0.5 * (du[i][0] * dv[j][1] - du[i][1] * dv[j][0]);
        const Cplx bji = 0.5 * (du[j][0] * dv[i][1] - du[j][1] * dv[i][0]);
        dst[idx] = bij - bji;
      }
    }
  });
  return out;
}

GridField laplacian(const GridField& u) {
  GridField out(u.spec, u.margin + 1);
  const auto st = u.spec.strides();
  const double inv_h2 = 1.0 / (u.spec.spacing() * u.spec.spacing());
  const int d = u.spec.axes();
  walk_interior(u.spec, out.margin, [&](std::size_t flat) {
    double acc = 0.0;
    for (int a = 0; a < d; ++a)
      acc += u.v[flat + st[a]] - 2.0 * u.v[flat] + u.v[flat - st[a]];
    out.v[flat] = acc * inv_h2;
  });
  return out;
}

namespace {

struct KernelTap {
  std::ptrdiff_t offset;
  double w;
};

std::vector<KernelTap> bump_taps(const GridSpec& s, double eps, int* width) {
  const double h = s.spacing();
  if (eps < h) throw std::invalid_argument("mollify: eps below grid spacing");
  const int w = static_cast<int>(std::floor(eps / h));
  *width = w;
  const auto st = s.strides();
  const int d = s.axes();
  std::vector<KernelTap> taps;
  std::vector<int> off(d, -w);
  double total = 0.0;
  while (true) {
    double r2 = 0.0;
    for (int a = 0; a < d; ++a) r2 += (off[a] * h) * (off[a] * h);
    const double t = 1.0 - r2 / (eps * eps);
    if (t > 0.0) {
      std::ptrdiff_t o = 0;
      for (int a = 0; a < d; ++a) o += static_cast<std::ptrdiff_t>(st[a]) * off[a];
      const double wgt = t * t * t;
      taps.push_back({o, wgt});
      total += wgt;
    }
    int ax = d - 1;
    while (ax >= 0 && ++off[ax] > w) off[ax--] = -w;
    if (ax < 0) break;
  }
  for (auto& t : taps) t.w /= total;  // discrete normalization: mollify(1) = 1
  return taps;
}

}  // namespace

GridField mollify(const GridField& u, double eps) {
  int w = 0;
  const auto taps = bump_taps(u.spec, eps, &w);
  GridField out(u.spec, u.margin + w);
  walk_interior(u.spec, out.margin, [&](std::size_t flat) {
    double acc = 0.0;
    for (const auto& t : taps) acc += t.w * u.v[flat + t.offset];
    out.v[flat] = acc;
  });
  return out;
}

GridField max_mollified(const GridField& u, const GridField& v, double eps) {
  if (!(u.spec == v.spec)) throw std::invalid_argument("max_mollified: grid mismatch");
  GridField m(u.spec, std::max(u.margin, v.margin));
  for (std::size_t k = 0; k < m.v.size(); ++k) m.v[k] = std::max(u.v[k], v.v[k]);
  return mollify(m, eps);
}

RadialProfile profile_from_function(int n, double R, int K,
                                    const std::function<double(double)>& f) {
  if (K < 4) throw std::invalid_argument("profile_from_function: K too small");
  RadialProfile p;
  p.n = n;
  p.ds = R / K;
  p.u.resize(K + 1);
  for (int k = 0; k <= K; ++k) p.u[k] = f(p.s(k));
  return p;
}

std::vector<RadialEig> radial_eigenvalues(const RadialProfile& p) {
  const int K = p.K();
  const double ds = p.ds;
  std::vector<RadialEig> out(K + 1);
  auto fill = [&](int k, double d1, double d2) {
    RadialEig e;
    if (k == 0) {
      e.rad = e.tan = 2.0 * d2;  // both limits equal 2 u''(0)
    } else {
      const double s = p.s(k);
      e.tan = 2.0 * d1 / s;
      e.rad = 0.5 * d2 + 1.5 * d1 / s;
    }
    out[k] = e;
  };
  // Origin: even extension u_{-1} = u_1 makes u'(0) = 0, u''(0) = 2(u1 - u0)/ds^2.
  fill(0, 0.0, 2.0 * (p.u[1] - p.u[0]) / (ds * ds));
  for (int k = 1; k < K; ++k) {
    const double d1 = (p.u[k + 1] - p.u[k - 1]) / (2.0 * ds);
    const double d2 = (p.u[k + 1] - 2.0 * p.u[k] + p.u[k - 1]) / (ds * ds);
    fill(k, d1, d2);
  }
  if (K >= 2) {
    const double d1 = (3.0 * p.u[K] - 4.0 * p.u[K - 1] + p.u[K - 2]) / (2.0 * ds);
    const double d2 = (p.u[K] - 2.0 * p.u[K - 1] + p.u[K - 2]) / (ds * ds);
    fill(K, d1, d2);
  }
  return out;
}

RadialProfile mollify_radial(const RadialProfile& p, double eps) {
  if (eps < p.ds) throw std::invalid_argument("mollify_radial: eps below spacing");
  const int w = static_cast<int>(std::floor(eps / p.ds));
  const int K = p.K();
  std::vector<double> wgt(2 * w + 1);
  double total = 0.0;
  for (int o = -w; o <= w; ++o) {
    const double t = 1.0 - (o * p.ds) * (o * p.ds) / (eps * eps);
    wgt[o + w] = t > 0.0 ? t * t * t : 0.0;
    total += wgt[o + w];
  }
  for (auto& x : wgt) x /= total;
  RadialProfile out = p;
  for (int k = 0; k <= K; ++k) {
    double acc = 0.0;
    for (int o = -w; o <= w; ++o) {
      int j = k + o;
      if (j < 0) j = -j;              // even extension through the origin
      if (j > K) j = K;               // constant extension past the boundary
      acc += wgt[o + w] * p.u[j];
    }
    out.u[k] = acc;
  }
  return out;
}

void save_profile_csv(const std::string& path, const RadialProfile& p,
                      const std::string& value_name) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_profile_csv: cannot open " + path);
  out << "s," << value_name << "\r\n";
  out.precision(17);
  for (int k = 0; k <= p.K(); ++k) out << p.s(k) << "," << p.u[k] << "\r\n";
  if (!out) throw std::runtime_error("save_profile_csv: write failed");
}

}  // namespace qhess
