#include "renarea/surface.hpp"

#include <cmath>

namespace renarea {

namespace {

// ambient index of a surface coordinate: x^a stay in place, r maps past x4
inline int amb_index(int alpha, int dsig) { return alpha < dsig ? alpha : dsig + 1; }

std::array<MatN<double>, kMaxDim> gamma_only(const MatN<double>& g_inv,
                                             const std::array<MatN<double>, kMaxDim>& dg, int n) {
  std::array<MatN<double>, kMaxDim> gamma;
  for (int l = 0; l < n; ++l) gamma[l] = MatN<double>(n);
  for (int l = 0; l < n; ++l)
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        double s = 0.0;
        for (int m = 0; m < n; ++m)
          s += g_inv(l, m) * (dg[j](m, k) + dg[k](m, j) - dg[m](j, k));
        gamma[l](j, k) = gamma[l](k, j) = 0.5 * s;
      }
  return gamma;
}

// MetricDerivs of g / r^2 given those of g; r is coordinate ir.
MetricDerivs conformal_derivs(const MetricDerivs& md, int ir, double r) {
  const int n = md.dim;
  const double f = 1.0 / (r * r);
  const double fr = -2.0 / (r * r * r);
  const double frr = 6.0 / (r * r * r * r);
  MetricDerivs out;
  out.dim = n;
  out.g = MatN<double>(n);
  for (int k = 0; k < n; ++k) {
    out.dg[k] = MatN<double>(n);
    for (int l = 0; l < n; ++l) out.ddg[k][l] = MatN<double>(n);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      out.g(i, j) = f * md.g(i, j);
      for (int k = 0; k < n; ++k) {
        double dk = f * md.dg[k](i, j) + (k == ir ? fr * md.g(i, j) : 0.0);
        out.dg[k](i, j) = dk;
        for (int l = 0; l < n; ++l) {
          double v = f * md.ddg[k][l](i, j);
          if (k == ir) v += fr * md.dg[l](i, j);
          if (l == ir) v += fr * md.dg[k](i, j);
          if (k == ir && l == ir) v += frr * md.g(i, j);
          out.ddg[k][l](i, j) = v;
        }
      }
    }
  return out;
}

}  // namespace

ZJet2 ExactGraph::z_jet2(const VecN<double>& x_sigma, double r) const {
  const int dY = dim_surface();
  VecN<DualHess> in(dY);
  for (int a = 0; a < dsig_; ++a) {
    DualGrad inner = DualGrad::seeded(x_sigma[a], a);
    DualHess outer(inner);
    outer.d[a] = DualGrad(1.0);
    in[a] = outer;
  }
  {
    DualGrad inner = DualGrad::seeded(r, dY - 1);
    DualHess outer(inner);
    outer.d[dY - 1] = DualGrad(1.0);
    in[dY - 1] = outer;
  }
  DualHess z = f_hess_(in);
  ZJet2 out;
  out.dsurf = dY;
  out.z = z.v.v;
  out.dz = VecN<double>(dY);
  out.ddz = MatN<double>(dY);
  for (int k = 0; k < dY; ++k) {
    out.dz[k] = z.v.d[k];
    for (int l = 0; l < dY; ++l) out.ddz(k, l) = z.d[k].d[l];
  }
  return out;
}

Jet ExactGraph::z_jet_in_r(const VecN<double>& x_sigma, int order) const {
  const int dY = dim_surface();
  VecN<Jet> in(dY);
  for (int a = 0; a < dsig_; ++a) in[a] = Jet::constant(x_sigma[a], order);
  in[dY - 1] = Jet::variable(0.0, order);
  return f_jet_(in);
}

RadialGraph::RadialGraph(int dsig, std::vector<double> r_nodes, std::vector<double> z_values,
                         double inner_slope_dlogr)
    : GraphHypersurface(dsig, r_nodes.front(), r_nodes.back()) {
  std::vector<double> u(r_nodes.size());
  for (size_t i = 0; i < r_nodes.size(); ++i) u[i] = std::log(r_nodes[i]);
  SplineBC bc = SplineBC::clamped_left(inner_slope_dlogr);
  spl_ = CubicSpline(std::move(u), std::move(z_values), bc);
}

ZJet2 RadialGraph::z_jet2(const VecN<double>&, double r) const {
  const int dY = dim_surface();
  const double u = std::log(r);
  const double z = spl_.eval(u, 0);
  const double zu = spl_.eval(u, 1);
  const double zuu = spl_.eval(u, 2);
  ZJet2 out;
  out.dsurf = dY;
  out.z = z;
  out.dz = VecN<double>(dY);
  out.ddz = MatN<double>(dY);
  out.dz[dY - 1] = zu / r;
  out.ddz(dY - 1, dY - 1) = (zuu - zu) / (r * r);
  return out;
}

GridGraph::GridGraph(std::vector<std::vector<double>> x_axes, std::vector<SplineBC> x_bcs,
                     std::vector<double> r_nodes, std::vector<double> z_values,
                     double inner_slope_ds)
    : GraphHypersurface(static_cast<int>(x_axes.size()), r_nodes.front(), r_nodes.back()) {
  std::vector<std::vector<double>> axes = std::move(x_axes);
  std::vector<double> s(r_nodes.size());
  for (size_t i = 0; i < r_nodes.size(); ++i) s[i] = r_nodes[i] * r_nodes[i];
  axes.push_back(std::move(s));
  std::vector<SplineBC> bcs = std::move(x_bcs);
  bcs.push_back(SplineBC::clamped_left(inner_slope_ds));
  spline_dim_ = static_cast<int>(axes.size());
  spl_ = TensorSpline(std::move(axes), std::move(z_values), std::move(bcs));
}

ZJet2 GridGraph::z_jet2(const VecN<double>& x_sigma, double r) const {
  const int dY = dim_surface();
  std::vector<double> x(dY);
  for (int a = 0; a < dsig_; ++a) x[a] = x_sigma[a];
  x[dY - 1] = r * r;
  std::vector<int> d(dY, 0);
  ZJet2 out;
  out.dsurf = dY;
  out.z = spl_.eval(x, d);
  out.dz = VecN<double>(dY);
  out.ddz = MatN<double>(dY);
  for (int k = 0; k < dY; ++k) {
    d.assign(dY, 0);
    d[k] = 1;
    out.dz[k] = spl_.eval(x, d);
    for (int l = k; l < dY; ++l) {
      d.assign(dY, 0);
      d[k] = 1;
      d[l] += 1;
      out.ddz(k, l) = out.ddz(l, k) = spl_.eval(x, d);
    }
  }
  // chain rule s = r^2 on the last axis
  const int ir = dY - 1;
  double zs = out.dz[ir], zss = out.ddz(ir, ir);
  out.dz[ir] = 2.0 * r * zs;
  for (int k = 0; k < ir; ++k) {
    out.ddz(k, ir) = out.ddz(ir, k) = 2.0 * r * out.ddz(k, ir);
  }
  out.ddz(ir, ir) = 4.0 * r * r * zss + 2.0 * zs;
  return out;
}

GraphFrame graph_frame(const GraphHypersurface& Y, const MetricField& gbar,
                       const VecN<double>& x_sigma, double r) {
  GraphFrame f;
  f.dsig = Y.dim_sigma();
  f.dY = f.dsig + 1;
  f.dX = f.dsig + 2;
  f.r = r;
  f.zj = Y.z_jet2(x_sigma, r);

  f.ambient_x = VecN<double>(f.dX);
  for (int a = 0; a < f.dsig; ++a) f.ambient_x[a] = x_sigma[a];
  f.ambient_x[f.dsig] = f.zj.z;
  f.ambient_x[f.dsig + 1] = r;

  f.gbar = gbar(f.ambient_x);
  f.gbar_inv = inverse(f.gbar);

  for (int al = 0; al < f.dY; ++al) {
    f.tangent[al] = VecN<double>(f.dX);
    f.tangent[al][amb_index(al, f.dsig)] = 1.0;
    f.tangent[al][f.dsig] += f.zj.dz[al];
  }

  f.hbar = MatN<double>(f.dY);
  for (int al = 0; al < f.dY; ++al)
    for (int be = al; be < f.dY; ++be) {
      double s = inner(f.gbar, f.tangent[al], f.tangent[be]);
      f.hbar(al, be) = f.hbar(be, al) = s;
    }
  f.hbar_inv = inverse(f.hbar);
  f.hplus = MatN<double>(f.dY);
  f.hplus_inv = MatN<double>(f.dY);
  for (int i = 0; i < f.dY; ++i)
    for (int j = 0; j < f.dY; ++j) {
      f.hplus(i, j) = f.hbar(i, j) / (r * r);
      f.hplus_inv(i, j) = f.hbar_inv(i, j) * (r * r);
    }
  return f;
}

MatN<double> induced_metric_at(const GraphHypersurface& Y, const MetricField& gbar,
                               const VecN<double>& x_sigma, double r) {
  GraphFrame f = graph_frame(Y, gbar, x_sigma, r);
  RENAREA_CHECK(is_positive_definite(f.hbar), "degenerate induced metric");
  return f.hbar;
}

NormalData unit_normal_at(const GraphHypersurface& Y, const MetricField& gbar,
                          const VecN<double>& x_sigma, double r) {
  GraphFrame f = graph_frame(Y, gbar, x_sigma, r);
  VecN<double> wd(f.dX);
  for (int a = 0; a < f.dsig; ++a) wd[a] = -f.zj.dz[a];
  wd[f.dsig] = 1.0;
  wd[f.dsig + 1] = -f.zj.dz[f.dY - 1];
  VecN<double> up = f.gbar_inv * wd;
  double n2 = dot(wd, up);
  RENAREA_CHECK(n2 > 0.0, "vanishing graph gradient, degenerate normal");
  double inv = 1.0 / std::sqrt(n2);
  NormalData nd;
  nd.mu_compact = VecN<double>(f.dX);
  nd.mu_singular = VecN<double>(f.dX);
  double sign = (up[f.dsig] > 0 ? 1.0 : -1.0) * Y.orientation();
  for (int c = 0; c < f.dX; ++c) {
    nd.mu_compact[c] = sign * up[c] * inv;
    nd.mu_singular[c] = r * nd.mu_compact[c];
  }
  nd.mu_compact_r = nd.mu_compact[f.dsig + 1];
  return nd;
}

SecondFundamentalData second_fundamental_form_at(const GraphHypersurface& Y,
                                                 const MetricField& gbar,
                                                 const VecN<double>& x_sigma, double r) {
  GraphFrame f = graph_frame(Y, gbar, x_sigma, r);
  NormalData nd = unit_normal_at(Y, gbar, x_sigma, r);
  ChartPoint p{f.ambient_x, ""};
  MetricDerivs md = gbar.derivs(p);
  auto gamma_bar = gamma_only(f.gbar_inv, md.dg, f.dX);

  // conformal correction to the singular scale: psi = -log r
  const int ir = f.dX - 1;
  auto gamma_plus = gamma_bar;
  for (int c = 0; c < f.dX; ++c)
    for (int i = 0; i < f.dX; ++i)
      for (int j = 0; j < f.dX; ++j) {
        double corr = 0.0;
        if (i == ir && c == j) corr += -1.0 / r;
        if (j == ir && c == i) corr += -1.0 / r;
        double up_r = f.gbar_inv(c, ir);
        corr -= f.gbar(i, j) * up_r * (-1.0 / r);
        gamma_plus[c](i, j) += corr;
      }

  const int dY = f.dY;
  SecondFundamentalData sd;
  sd.dY = dY;
  sd.B_bar_lowered = MatN<double>(dY);
  sd.B_lowered = MatN<double>(dY);
  sd.B_conformal_path = MatN<double>(dY);
  sd.B_ring = MatN<double>(dY);

  for (int al = 0; al < dY; ++al)
    for (int be = al; be < dY; ++be) {
      VecN<double> d2_bar(f.dX), d2_plus(f.dX);
      d2_bar[f.dsig] = f.zj.ddz(al, be);
      d2_plus[f.dsig] = f.zj.ddz(al, be);
      for (int c = 0; c < f.dX; ++c) {
        double sb = 0.0, sp = 0.0;
        for (int i = 0; i < f.dX; ++i)
          for (int j = 0; j < f.dX; ++j) {
            double tt = f.tangent[al][i] * f.tangent[be][j];
            sb += gamma_bar[c](i, j) * tt;
            sp += gamma_plus[c](i, j) * tt;
          }
        d2_bar[c] += sb;
        d2_plus[c] += sp;
      }
      double bb = 0.0, bp = 0.0;
      for (int cc = 0; cc < f.dX; ++cc)
        for (int dd = 0; dd < f.dX; ++dd) {
          bb += f.gbar(cc, dd) * d2_bar[cc] * nd.mu_compact[dd];
          bp += f.gbar(cc, dd) * d2_plus[cc] * nd.mu_compact[dd] / r;  // g_plus with mu = r mu_bar
        }
      sd.B_bar_lowered(al, be) = sd.B_bar_lowered(be, al) = bb;
      sd.B_lowered(al, be) = sd.B_lowered(be, al) = bp;
    }

  for (int al = 0; al < dY; ++al)
    for (int be = 0; be < dY; ++be)
      sd.B_conformal_path(al, be) =
          sd.B_bar_lowered(al, be) / r + nd.mu_compact_r / (r * r) * f.hbar(al, be);

  double H = 0.0, Hb = 0.0;
  for (int i = 0; i < dY; ++i)
    for (int j = 0; j < dY; ++j) {
      H += f.hplus_inv(i, j) * sd.B_lowered(i, j);
      Hb += f.hbar_inv(i, j) * sd.B_bar_lowered(i, j);
    }
  sd.H = H;
  sd.H_bar = Hb;

  for (int i = 0; i < dY; ++i)
    for (int j = 0; j < dY; ++j)
      sd.B_ring(i, j) = sd.B_lowered(i, j) - (H / dY) * f.hplus(i, j);

  auto invariants = [&](const MatN<double>& B, const MatN<double>& h, const MatN<double>& hi,
                        double conf_weight) {
    double trace = 0.0;
    for (int i = 0; i < dY; ++i)
      for (int j = 0; j < dY; ++j) trace += hi(i, j) * B(i, j);
    MatN<double> ring(dY);
    for (int i = 0; i < dY; ++i)
      for (int j = 0; j < dY; ++j) ring(i, j) = B(i, j) - (trace / dY) * h(i, j);
    double b2 = tensor2_norm2(ring, hi) * conf_weight;
    // mixed square (ring^2)^i_j for the second invariant
    MatN<double> up = raise_one(ring, hi);  // ring_i^j
    MatN<double> sq(dY);
    for (int i = 0; i < dY; ++i)
      for (int j = 0; j < dY; ++j) {
        double s = 0.0;
        for (int k = 0; k < dY; ++k) s += up(i, k) * up(k, j);
        sq(i, j) = s;
      }
    double b2sq = 0.0;
    for (int i = 0; i < dY; ++i)
      for (int j = 0; j < dY; ++j) b2sq += sq(i, j) * sq(j, i);
    b2sq *= conf_weight * conf_weight;
    return std::array<double, 3>{b2, b2 * b2, b2sq};
  };

  auto s_sing = invariants(sd.B_lowered, f.hplus, f.hplus_inv, 1.0);
  sd.invariant_B2 = s_sing[0];
  sd.invariant_B4 = s_sing[1];
  sd.invariant_B2sq = s_sing[2];
  auto s_comp = invariants(sd.B_bar_lowered, f.hbar, f.hbar_inv, r * r);
  sd.invariant_B2_compact = s_comp[0];
  sd.invariant_B4_compact = s_comp[1];
  sd.invariant_B2sq_compact = s_comp[2];
  return sd;
}

CurvatureBundle surface_curvature_at(const GraphHypersurface& Y, const MetricField& gbar,
                                     const VecN<double>& x_sigma, double r, bool singular_scale) {
  GraphFrame f = graph_frame(Y, gbar, x_sigma, r);
  SecondFundamentalData sd = second_fundamental_form_at(Y, gbar, x_sigma, r);
  ChartPoint p{f.ambient_x, ""};
  MetricDerivs md = gbar.derivs(p);
  if (singular_scale) md = conformal_derivs(md, f.dX - 1, r);
  CurvatureBundle ambient = bundle_from_derivs(md);

  const int dY = f.dY;
  const MatN<double>& h = singular_scale ? f.hplus : f.hbar;
  const MatN<double>& B = singular_scale ? sd.B_lowered : sd.B_bar_lowered;

  Ten4 riem(dY);
  for (int i = 0; i < dY; ++i)
    for (int j = 0; j < dY; ++j)
      for (int k = 0; k < dY; ++k)
        for (int l = 0; l < dY; ++l) {
          double proj = 0.0;
          for (int a = 0; a < f.dX; ++a)
            for (int b = 0; b < f.dX; ++b)
              for (int c = 0; c < f.dX; ++c)
                for (int d = 0; d < f.dX; ++d)
                  proj += ambient.riemann(a, b, c, d) * f.tangent[i][a] * f.tangent[j][b] *
                          f.tangent[k][c] * f.tangent[l][d];
          riem(i, j, k, l) = proj - B(i, l) * B(j, k) + B(i, k) * B(j, l);
        }
  return bundle_from_riemann(h, riem);
}

GaussResiduals gauss_identity_residuals(const GraphHypersurface& Y, const MetricField& gbar,
                                        const VecN<double>& x_sigma, double r) {
  CurvatureBundle yb = surface_curvature_at(Y, gbar, x_sigma, r, true);
  SecondFundamentalData sd = second_fundamental_form_at(Y, gbar, x_sigma, r);
  GraphFrame f = graph_frame(Y, gbar, x_sigma, r);
  const int dY = f.dY;
  double b2_full = tensor2_norm2(sd.B_lowered, f.hplus_inv);
  double c = dY * (dY - 1);
  GaussResiduals res;
  res.traced = yb.scalar + b2_full + c;
  res.squared = yb.scalar * yb.scalar - (b2_full * b2_full + 2.0 * c * b2_full + c * c);
  return res;
}

InducedFirst induced_first(const GraphHypersurface& Y, const MetricField& gbar,
                           const VecN<double>& x_sigma, double r) {
  const int dsig = Y.dim_sigma();
  const int dY = dsig + 1;
  const int dX = dsig + 2;
  ZJet2 zj = Y.z_jet2(x_sigma, r);

  VecN<DualGrad> X(dX);
  for (int a = 0; a < dsig; ++a) X[a] = DualGrad::seeded(x_sigma[a], a);
  DualGrad z(zj.z);
  for (int k = 0; k < dY; ++k) z.d[k] = zj.dz[k];
  X[dsig] = z;
  X[dsig + 1] = DualGrad::seeded(r, dY - 1);

  MatN<DualGrad> g = gbar.eval(X);

  std::array<DualGrad, kMaxDim> za;  // z_alpha with their surface derivatives
  for (int al = 0; al < dY; ++al) {
    DualGrad v(zj.dz[al]);
    for (int k = 0; k < dY; ++k) v.d[k] = zj.ddz(al, k);
    za[al] = v;
  }

  MatN<DualGrad> hb(dY);
  for (int al = 0; al < dY; ++al)
    for (int be = al; be < dY; ++be) {
      int ia = amb_index(al, dsig), ib = amb_index(be, dsig);
      DualGrad s = g(ia, ib) + g(dsig, ia) * za[be] + g(dsig, ib) * za[al] +
                   g(dsig, dsig) * za[al] * za[be];
      hb(al, be) = s;
      hb(be, al) = s;
    }

  InducedFirst out;
  out.dY = dY;
  out.h = MatN<double>(dY);
  for (int k = 0; k < dY; ++k) out.dh[k] = MatN<double>(dY);
  for (int i = 0; i < dY; ++i)
    for (int j = 0; j < dY; ++j) {
      out.h(i, j) = hb(i, j).v;
      for (int k = 0; k < dY; ++k) out.dh[k](i, j) = hb(i, j).d[k];
    }
  return out;
}

SliceData slice_data(const GraphHypersurface& Y, const MetricField& gbar,
                     const VecN<double>& x_sigma, double r) {
  const int dsig = Y.dim_sigma();
  const int dY = dsig + 1;
  InducedFirst ind = induced_first(Y, gbar, x_sigma, r);
  MatN<double> hi = inverse(ind.h);
  auto gamma = gamma_only(hi, ind.dh, dY);

  SliceData s;
  s.dsig = dsig;
  s.hbar = ind.h;
  s.hbar_inv = hi;
  const int ri = dY - 1;

  s.dr_norm2 = hi(ri, ri);
  VecN<double> grad(dY);
  for (int al = 0; al < dY; ++al) grad[al] = hi(al, ri);
  double norm = std::sqrt(s.dr_norm2);
  s.nu_bar = VecN<double>(dY);
  for (int al = 0; al < dY; ++al) s.nu_bar[al] = grad[al] / norm;

  s.kbar = MatN<double>(dsig);
  for (int a = 0; a < dsig; ++a)
    for (int b = 0; b < dsig; ++b) s.kbar(a, b) = ind.h(a, b);
  s.sqrt_det_kbar = std::sqrt(det(s.kbar));

  s.hess_r = MatN<double>(dY);
  for (int al = 0; al < dY; ++al)
    for (int be = 0; be < dY; ++be) s.hess_r(al, be) = -gamma[ri](al, be);
  s.lap_r = 0.0;
  for (int al = 0; al < dY; ++al)
    for (int be = 0; be < dY; ++be) s.lap_r += hi(al, be) * s.hess_r(al, be);

  MatN<double> kinv = inverse(s.kbar);
  s.Lbar = MatN<double>(dsig);
  for (int a = 0; a < dsig; ++a)
    for (int b = 0; b < dsig; ++b) {
      double acc = 0.0;
      for (int ga = 0; ga < dY; ++ga)
        for (int de = 0; de < dY; ++de) acc += gamma[ga](a, b) * ind.h(ga, de) * s.nu_bar[de];
      s.Lbar(a, b) = acc;
    }
  s.Hbar = 0.0;
  for (int a = 0; a < dsig; ++a)
    for (int b = 0; b < dsig; ++b) s.Hbar += kinv(a, b) * s.Lbar(a, b);
  return s;
}

BoundaryForms boundary_fundamental_forms(const MetricField& g_inf, const VecN<double>& x_sigma) {
  const int dM = g_inf.dim();
  const int dsig = dM - 1;
  VecN<double> x(dM);
  for (int a = 0; a < dsig; ++a) x[a] = x_sigma[a];
  x[dsig] = 0.0;
  ChartPoint p{x, ""};
  MetricDerivs md = g_inf.derivs(p);
  MatN<double> gi = inverse(md.g);
  auto gamma = gamma_only(gi, md.dg, dM);

  VecN<double> nu(dM);
  double nn = std::sqrt(gi(dsig, dsig));
  for (int c = 0; c < dM; ++c) nu[c] = gi(c, dsig) / nn;

  BoundaryForms bf;
  bf.II = MatN<double>(dsig);
  bf.k_inf = MatN<double>(dsig);
  for (int a = 0; a < dsig; ++a)
    for (int b = 0; b < dsig; ++b) {
      bf.k_inf(a, b) = md.g(a, b);
      double s = 0.0;
      for (int c = 0; c < dM; ++c)
        for (int d = 0; d < dM; ++d) s += gamma[c](a, b) * md.g(c, d) * nu[d];
      bf.II(a, b) = s;
    }
  MatN<double> ki = inverse(bf.k_inf);
  bf.eta = 0.0;
  for (int a = 0; a < dsig; ++a)
    for (int b = 0; b < dsig; ++b) bf.eta += ki(a, b) * bf.II(a, b);
  bf.II_ring = MatN<double>(dsig);
  for (int a = 0; a < dsig; ++a)
    for (int b = 0; b < dsig; ++b)
      bf.II_ring(a, b) = bf.II(a, b) - (bf.eta / dsig) * bf.k_inf(a, b);
  bf.II_ring_norm2 = tensor2_norm2(bf.II_ring, ki);
  return bf;
}

double extrapolate_to_zero_r2(const std::vector<double>& r, const std::vector<double>& v,
                              int n_use) {
  const int n = std::min<int>(n_use, static_cast<int>(r.size()));
  RENAREA_CHECK(n >= 3, "need at least 3 radii for the boundary extrapolation");
  // least squares fit v = c0 + c1 r^2 + c2 r^4 on the n smallest radii
  MatN<double> ata(3);
  VecN<double> atb(3);
  for (int i = 0; i < n; ++i) {
    double t = r[i] * r[i];
    double row[3] = {1.0, t, t * t};
    for (int a = 0; a < 3; ++a) {
      atb[a] += row[a] * v[i];
      for (int b = 0; b < 3; ++b) ata(a, b) += row[a] * row[b];
    }
  }
  VecN<double> c = LuN<double>(ata).solve(atb);
  return c[0];
}

double loglog_slope(const std::vector<double>& r, const std::vector<double>& v,
                    double floor_abs) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (size_t i = 0; i < r.size(); ++i) {
    if (std::abs(v[i]) <= floor_abs) continue;
    double x = std::log(r[i]), y = std::log(std::abs(v[i]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  RENAREA_CHECK(n >= 2, "not enough usable samples for a log-log slope");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace renarea
