#include "renarea/curvature.hpp"

#include <cmath>
#include <limits>

namespace renarea {

MatN<double> metric_at(const MetricField& field, const ChartPoint& p) {
  RENAREA_CHECK(p.coords.n == field.dim(), "chart point dimension mismatch");
  RENAREA_CHECK(field.box().contains(p.coords), "chart point outside declared domain of " + field.name());
  MatN<double> g = field(p.coords);
  RENAREA_CHECK(is_symmetric(g, 1e-10), "metric evaluation not symmetric for " + field.name());
  RENAREA_CHECK(is_positive_definite(g), "metric not positive definite at chart point of " + field.name());
  return g;
}

MatN<double> metric_inverse_at(const MetricField& field, const ChartPoint& p) {
  return inverse(metric_at(field, p));
}

namespace {

MetricDerivs derivs_fd(const MetricField& field, const ChartPoint& p, double scale) {
  const int n = field.dim();
  MetricDerivs md;
  md.dim = n;
  md.g = field(p.coords);
  const double eps = std::numeric_limits<double>::epsilon();
  const double h1 = std::cbrt(eps) * scale * 40.0;
  const double h2 = std::pow(eps, 0.25) * scale * 4.0;

  auto shifted = [&](int k, double h, int l = -1, double h2v = 0.0) {
    VecN<double> x = p.coords;
    x[k] += h;
    if (l >= 0) x[l] += h2v;
    return field(x);
  };

  auto central_d1 = [&](int k, double h) {
    MatN<double> a = shifted(k, h), b = shifted(k, -h), r(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) r(i, j) = (a(i, j) - b(i, j)) / (2.0 * h);
    return r;
  };
  auto second_pure = [&](int k, double h) {
    MatN<double> a = shifted(k, h), b = shifted(k, -h), r(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) r(i, j) = (a(i, j) - 2.0 * md.g(i, j) + b(i, j)) / (h * h);
    return r;
  };
  auto second_mixed = [&](int k, int l, double h) {
    MatN<double> pp = shifted(k, h, l, h), pm = shifted(k, h, l, -h);
    MatN<double> mp = shifted(k, -h, l, h), mm = shifted(k, -h, l, -h);
    MatN<double> r(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        r(i, j) = (pp(i, j) - pm(i, j) - mp(i, j) + mm(i, j)) / (4.0 * h * h);
    return r;
  };
  auto richardson = [&](const MatN<double>& coarse, const MatN<double>& fine) {
    MatN<double> r(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) r(i, j) = (4.0 * fine(i, j) - coarse(i, j)) / 3.0;
    return r;
  };

  for (int k = 0; k < n; ++k) md.dg[k] = richardson(central_d1(k, h1), central_d1(k, h1 / 2));
  for (int k = 0; k < n; ++k) {
    md.ddg[k][k] = richardson(second_pure(k, h2), second_pure(k, h2 / 2));
    for (int l = k + 1; l < n; ++l) {
      md.ddg[k][l] = richardson(second_mixed(k, l, h2), second_mixed(k, l, h2 / 2));
      md.ddg[l][k] = md.ddg[k][l];
    }
  }
  return md;
}

}  // namespace

MetricDerivs MetricField::derivs(const ChartPoint& p) const {
  RENAREA_CHECK(p.coords.n == dim(), "chart point dimension mismatch");
  if (fd_mode_) return derivs_fd(*this, p, fd_scale_);
  const int n = dim();
  MatN<DualHess> r = eval(hess_seed(p.coords));
  MetricDerivs md;
  md.dim = n;
  md.g = MatN<double>(n);
  for (int k = 0; k < n; ++k) {
    md.dg[k] = MatN<double>(n);
    for (int l = 0; l < n; ++l) md.ddg[k][l] = MatN<double>(n);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const DualHess& e = r(i, j);
      md.g(i, j) = e.v.v;
      for (int k = 0; k < n; ++k) {
        md.dg[k](i, j) = e.v.d[k];
        for (int l = 0; l < n; ++l) md.ddg[k][l](i, j) = e.d[k].d[l];
      }
    }
  return md;
}

ScalarDerivs ScalarField::derivs(const ChartPoint& p) const {
  const int n = dim();
  DualHess r = eval(hess_seed(p.coords));
  ScalarDerivs sd;
  sd.dim = n;
  sd.v = r.v.v;
  sd.grad = VecN<double>(n);
  sd.hess = MatN<double>(n);
  for (int k = 0; k < n; ++k) {
    sd.grad[k] = r.v.d[k];
    for (int l = 0; l < n; ++l) sd.hess(k, l) = r.d[k].d[l];
  }
  return sd;
}

Christoffels christoffels_from(const MetricDerivs& md) {
  const int n = md.dim;
  MatN<double> ginv = inverse(md.g);
  Christoffels ch;
  ch.n = n;
  for (int l = 0; l < n; ++l) ch.gamma[l] = MatN<double>(n);
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l) ch.dgamma[i][l] = MatN<double>(n);

  for (int l = 0; l < n; ++l)
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        double s = 0.0;
        for (int m = 0; m < n; ++m)
          s += ginv(l, m) * (md.dg[j](m, k) + md.dg[k](m, j) - md.dg[m](j, k));
        ch.gamma[l](j, k) = ch.gamma[l](k, j) = 0.5 * s;
      }

  // d_i g^{lm} = -g^{la} (d_i g_ab) g^{bm}
  std::array<MatN<double>, kMaxDim> dginv;
  for (int i = 0; i < n; ++i) {
    dginv[i] = MatN<double>(n);
    for (int l = 0; l < n; ++l)
      for (int m = 0; m < n; ++m) {
        double s = 0.0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) s += ginv(l, a) * md.dg[i](a, b) * ginv(b, m);
        dginv[i](l, m) = -s;
      }
  }

  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l)
      for (int j = 0; j < n; ++j)
        for (int k = j; k < n; ++k) {
          double s = 0.0;
          for (int m = 0; m < n; ++m) {
            s += dginv[i](l, m) * (md.dg[j](m, k) + md.dg[k](m, j) - md.dg[m](j, k));
            s += ginv(l, m) * (md.ddg[i][j](m, k) + md.ddg[i][k](m, j) - md.ddg[i][m](j, k));
          }
          ch.dgamma[i][l](j, k) = ch.dgamma[i][l](k, j) = 0.5 * s;
        }
  return ch;
}

Ten4 space_form_riemann(const MatN<double>& g, double K) {
  Ten4 r(g.n);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k)
        for (int l = 0; l < g.n; ++l)
          r(i, j, k, l) = K * (g(i, k) * g(j, l) - g(i, l) * g(j, k));
  return r;
}

CurvatureBundle bundle_from_riemann(const MatN<double>& g, const Ten4& riemann) {
  const int n = g.n;
  CurvatureBundle b;
  b.dim = n;
  b.g = g;
  b.g_inv = inverse(g);
  b.riemann = riemann;

  b.ricci = MatN<double>(n);
  for (int j = 0; j < n; ++j)
    for (int l = j; l < n; ++l) {
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) s += b.g_inv(i, k) * b.riemann(i, j, k, l);
      b.ricci(j, l) = b.ricci(l, j) = s;
    }

  b.scalar = 0.0;
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) b.scalar += b.g_inv(j, l) * b.ricci(j, l);

  b.trace_free_ricci = MatN<double>(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      b.trace_free_ricci(i, j) = b.ricci(i, j) - (b.scalar / n) * g(i, j);

  b.schouten = MatN<double>(n);
  if (n >= 3) {
    const double c = b.scalar / (2.0 * (n - 1));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) b.schouten(i, j) = (b.ricci(i, j) - c * g(i, j)) / (n - 2);
  }

  double trp = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) trp += b.g_inv(i, j) * b.schouten(i, j);
  b.sigma2 = 0.5 * (trp * trp - tensor2_norm2(b.schouten, b.g_inv));

  b.weyl = Ten4(n);
  if (n >= 4) {
    b.weyl_defined = true;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            b.weyl(i, j, k, l) =
                b.riemann(i, j, k, l) -
                (b.schouten(i, k) * g(j, l) + b.schouten(j, l) * g(i, k) -
                 b.schouten(i, l) * g(j, k) - b.schouten(j, k) * g(i, l));
  }
  return b;
}

CurvatureBundle bundle_from_derivs(const MetricDerivs& md) {
  const int n = md.dim;
  Christoffels ch = christoffels_from(md);

  // up[l][k](i,j): curvature operator components R(e_i,e_j) e_k = up e_l
  Ten4 up(n);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = ch.dgamma[i][l](j, k) - ch.dgamma[j][l](i, k);
          for (int m = 0; m < n; ++m)
            s += ch.gamma[l](i, m) * ch.gamma[m](j, k) - ch.gamma[l](j, m) * ch.gamma[m](i, k);
          up(l, k, i, j) = s;
        }

  Ten4 riem(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int m = 0; m < n; ++m) s += md.g(i, m) * up(m, j, k, l);
          riem(i, j, k, l) = s;
        }
  return bundle_from_riemann(md.g, riem);
}

CurvatureBundle curvature_at(const MetricField& field, const ChartPoint& p) {
  RENAREA_CHECK(field.derivative_order() >= 4, "metric field does not carry enough derivatives");
  RENAREA_CHECK(field.box().contains(p.coords), "chart point outside declared domain of " + field.name());
  return bundle_from_derivs(field.derivs(p));
}

double tensor2_norm2(const MatN<double>& t, const MatN<double>& gi) {
  const int n = t.n;
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) s += t(i, j) * t(k, l) * gi(i, k) * gi(j, l);
  return s;
}

double tensor4_norm2(const Ten4& t, const MatN<double>& gi) {
  const int n = t.n;
  double s = 0.0;
  // contract one pair at a time to keep this O(n^5)
  Ten4 a(n);
  for (int p = 0; p < n; ++p)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double acc = 0.0;
          for (int i = 0; i < n; ++i) acc += gi(p, i) * t(i, j, k, l);
          a(p, j, k, l) = acc;
        }
  Ten4 b(n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double acc = 0.0;
          for (int j = 0; j < n; ++j) acc += gi(q, j) * a(p, j, k, l);
          b(p, q, k, l) = acc;
        }
  Ten4 c(n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int l = 0; l < n; ++l) {
          double acc = 0.0;
          for (int k = 0; k < n; ++k) acc += gi(r, k) * b(p, q, k, l);
          c(p, q, r, l) = acc;
        }
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int l = 0; l < n; ++l)
          for (int s4 = 0; s4 < n; ++s4) s += c(p, q, r, l) * gi(l, s4) * t(p, q, r, s4);
  return s;
}

MatN<double> raise_one(const MatN<double>& t, const MatN<double>& gi) {
  const int n = t.n;
  MatN<double> r(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += t(i, k) * gi(k, j);
      r(i, j) = s;
    }
  return r;
}

RiemannSymmetryCheck riemann_symmetry_check(const Ten4& r) {
  RiemannSymmetryCheck c;
  const int n = r.n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          c.antisym_first = std::max(c.antisym_first, std::abs(r(i, j, k, l) + r(j, i, k, l)));
          c.antisym_last = std::max(c.antisym_last, std::abs(r(i, j, k, l) + r(i, j, l, k)));
          c.pair_sym = std::max(c.pair_sym, std::abs(r(i, j, k, l) - r(k, l, i, j)));
          c.first_bianchi = std::max(
              c.first_bianchi, std::abs(r(i, j, k, l) + r(i, k, l, j) + r(i, l, j, k)));
        }
  return c;
}

namespace {

// Ricci and scalar at a shifted point, for Richardson differences of curvature.
struct RicAt {
  MatN<double> ric;
  double scalar;
};
RicAt ricci_at_shift(const MetricField& field, const ChartPoint& p, int k, double h) {
  ChartPoint q = p;
  q.coords[k] += h;
  CurvatureBundle b = bundle_from_derivs(field.derivs(q));
  return {b.ricci, b.scalar};
}

}  // namespace

double contracted_bianchi_residual(const MetricField& field, const ChartPoint& p, double step) {
  const int n = field.dim();
  CurvatureBundle b = curvature_at(field, p);
  Christoffels ch = christoffels_from(field.derivs(p));

  // coordinate derivatives of Ricci and scalar with one Richardson level
  std::array<MatN<double>, kMaxDim> dric;
  VecN<double> dscal(n);
  for (int k = 0; k < n; ++k) {
    auto d1 = [&](double h) {
      RicAt a = ricci_at_shift(field, p, k, h), c = ricci_at_shift(field, p, k, -h);
      MatN<double> r(n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r(i, j) = (a.ric(i, j) - c.ric(i, j)) / (2.0 * h);
      double ds = (a.scalar - c.scalar) / (2.0 * h);
      return std::make_pair(r, ds);
    };
    auto [rc, sc] = d1(step);
    auto [rf, sf] = d1(step / 2);
    dric[k] = MatN<double>(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) dric[k](i, j) = (4.0 * rf(i, j) - rc(i, j)) / 3.0;
    dscal[k] = (4.0 * sf - sc) / 3.0;
  }

  double worst = 0.0;
  for (int j = 0; j < n; ++j) {
    double div = 0.0;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        double cov = dric[i](k, j);
        for (int m = 0; m < n; ++m)
          cov -= ch.gamma[m](i, k) * b.ricci(m, j) + ch.gamma[m](i, j) * b.ricci(k, m);
        div += b.g_inv(i, k) * cov;
      }
    worst = std::max(worst, std::abs(div - 0.5 * dscal[j]));
  }
  return worst;
}

MetricField conformal_shrink(const MetricField& g, const ScalarField& w, const std::string& name) {
  RENAREA_CHECK(g.dim() == w.dim(), "conformal factor dimension mismatch");
  MetricField gg = g;
  ScalarField ww = w;
  return MetricField(name, g.box(), g.derivative_order(), [gg, ww](const auto& x) {
    using T = std::decay_t<decltype(x[0])>;
    MatN<T> m = gg.eval(x);
    T f = ww.eval(x);
    T s = T(1.0) / (f * f);
    for (int i = 0; i < m.n; ++i)
      for (int j = 0; j < m.n; ++j) m(i, j) *= s;
    return m;
  });
}

namespace {

// V_alpha of the divergence correction term, evaluated exactly at a point.
VecN<double> sigma2_vector_field(const MetricField& field, const ScalarField& r_func,
                                 const VecN<double>& x) {
  const int n = field.dim();
  ChartPoint p{x, ""};
  MetricDerivs md = field.derivs(p);
  CurvatureBundle b = bundle_from_derivs(md);
  Christoffels ch = christoffels_from(md);
  ScalarDerivs rd = r_func.derivs(p);
  const double r = rd.v;
  RENAREA_CHECK(r > 0.0, "conformal factor must be positive");

  MatN<double> hess(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = rd.hess(i, j);
      for (int k = 0; k < n; ++k) s -= ch.gamma[k](i, j) * rd.grad[k];
      hess(i, j) = s;
    }
  VecN<double> grad_up = b.g_inv * rd.grad;
  double dr2 = dot(rd.grad, grad_up);
  double lap = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) lap += b.g_inv(i, j) * hess(i, j);

  VecN<double> v(n);
  for (int a = 0; a < n; ++a) {
    double hess_r = 0.0, ric_r = 0.0;
    for (int bi = 0; bi < n; ++bi) {
      hess_r += hess(a, bi) * grad_up[bi];
      ric_r += b.ricci(a, bi) * grad_up[bi];
    }
    v[a] = dr2 * rd.grad[a] / cube(r) - rd.grad[a] * lap / (r * r) + hess_r / (r * r) +
           ric_r / r - 0.5 * b.scalar * rd.grad[a] / r;
  }
  return v;
}

double sigma2_of(const CurvatureBundle& b) { return b.sigma2; }

}  // namespace

double sigma2_conformal_residual(const MetricField& field_compact, const ScalarField& r_func,
                                 const ChartPoint& p, double step) {
  const int n = field_compact.dim();
  RENAREA_CHECK(n == 4, "conformal sigma2 identity is specific to 4-manifolds");
  ScalarDerivs rd = r_func.derivs(p);
  RENAREA_CHECK(rd.v > 0.0, "conformal factor must be positive at the evaluation point");

  CurvatureBundle bc = curvature_at(field_compact, p);
  const double lhs = 4.0 * sigma2_of(bc);

  MetricField singular = conformal_shrink(field_compact, r_func, field_compact.name() + "_singular");
  CurvatureBundle bs = bundle_from_derivs(singular.derivs(p));
  const double r4 = std::pow(rd.v, 4);
  const double term_singular = 4.0 * sigma2_of(bs) / r4;

  // divergence of V on the compact manifold via Richardson central differences
  auto flux = [&](int k, double h) {
    VecN<double> xp = p.coords, xm = p.coords;
    xp[k] += h;
    xm[k] -= h;
    MatN<double> gp = field_compact(xp), gm = field_compact(xm);
    VecN<double> vp = sigma2_vector_field(field_compact, r_func, xp);
    VecN<double> vm = sigma2_vector_field(field_compact, r_func, xm);
    VecN<double> up = inverse(gp) * vp, um = inverse(gm) * vm;
    double fp = std::sqrt(value(det(gp))) * up[k];
    double fm = std::sqrt(value(det(gm))) * um[k];
    return (fp - fm) / (2.0 * h);
  };

  double div = 0.0;
  for (int k = 0; k < n; ++k) {
    double coarse = flux(k, step), fine = flux(k, step / 2);
    div += (4.0 * fine - coarse) / 3.0;
  }
  MatN<double> g0 = field_compact(p.coords);
  div /= std::sqrt(value(det(g0)));

  return lhs - (term_singular + 2.0 * div);
}

}  // namespace renarea
