#include "renarea/ladder.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <fstream>

namespace renarea {

EpsilonLadderFit fit_expansion(const std::vector<double>& epsilons,
                               const std::vector<double>& values, std::vector<double> basis) {
  const int n = static_cast<int>(epsilons.size());
  const int m = static_cast<int>(basis.size());
  RENAREA_CHECK(n == static_cast<int>(values.size()), "ladder sample size mismatch");
  RENAREA_CHECK(n >= m + 2, "need at least basis size + 2 ladder samples");
  bool has_zero = false;
  for (double p : basis) has_zero |= (p == 0.0);
  RENAREA_CHECK(has_zero, "expansion basis must contain the exponent 0");
  for (int i = 1; i < n; ++i)
    RENAREA_CHECK(epsilons[i] < epsilons[i - 1], "ladder epsilons must decrease strictly");

  const double e0 = epsilons.front();
  auto solve_subset = [&](const std::vector<int>& rows, double* cond) -> Eigen::VectorXd {
    Eigen::MatrixXd A(rows.size(), m);
    Eigen::VectorXd y(rows.size());
    for (size_t r = 0; r < rows.size(); ++r) {
      for (int j = 0; j < m; ++j) A(r, j) = std::pow(epsilons[rows[r]] / e0, basis[j]);
      y(r) = values[rows[r]];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (cond) *cond = svd.singularValues()(0) / svd.singularValues()(m - 1);
    Eigen::VectorXd sol = svd.solve(y);
    return sol;
  };

  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  EpsilonLadderFit fit;
  fit.epsilons = epsilons;
  fit.values = values;
  fit.basis = basis;
  Eigen::VectorXd c = solve_subset(all, &fit.condition_number);

  fit.coefficients.resize(m);
  int zero_idx = -1;
  for (int j = 0; j < m; ++j) {
    fit.coefficients[j] = c(j) / std::pow(e0, basis[j]);
    if (basis[j] == 0.0) zero_idx = j;
  }
  fit.finite_part = c(zero_idx);

  double resid = 0.0;
  for (int i = 0; i < n; ++i) {
    double pred = 0.0;
    for (int j = 0; j < m; ++j) pred += c(j) * std::pow(epsilons[i] / e0, basis[j]);
    resid = std::max(resid, std::abs(pred - values[i]) / (1.0 + std::abs(values[i])));
  }
  fit.fit_residual = resid;

  // leave-two-out spread of the finite part
  double spread = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      std::vector<int> rows;
      for (int i = 0; i < n; ++i)
        if (i != a && i != b) rows.push_back(i);
      if (static_cast<int>(rows.size()) < m) continue;
      Eigen::VectorXd cc = solve_subset(rows, nullptr);
      spread = std::max(spread, std::abs(cc(zero_idx) - fit.finite_part));
    }
  fit.finite_part_error = spread;
  return fit;
}

double fitted_coefficient(const EpsilonLadderFit& fit, double exponent) {
  for (size_t j = 0; j < fit.basis.size(); ++j)
    if (fit.basis[j] == exponent) return fit.coefficients[j];
  return 0.0;
}

void write_ladder_csv(const EpsilonLadderFit& fit, const std::string& path) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    RENAREA_CHECK(out.good(), "cannot open " + tmp);
    out << "epsilon,value\n";
    char buf[128];
    for (size_t i = 0; i < fit.epsilons.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", fit.epsilons[i], fit.values[i]);
      out << buf;
    }
  }
  RENAREA_CHECK(std::rename(tmp.c_str(), path.c_str()) == 0, "atomic rename failed for " + path);
}

// ---------------------------------------------------------------------------

RenormContext::RenormContext(const Scenario& scn, const SolveResult& result)
    : scn_(&scn), res_(result) {
  RENAREA_CHECK(scn.has_surface, "renormalization context needs a hypersurface scenario");
  RENAREA_CHECK(res_.surface, "solve result carries no surface");
  RENAREA_CHECK(res_.trajectory.has_value(),
                "renormalization needs the global profile of the solution");

  const double r0 = scn.grid.r0;
  const double eps_max = scn.ladder.eps_max_frac * r0;
  for (int k = 0; k < scn.ladder.count; ++k) {
    double e = eps_max * std::pow(scn.ladder.ratio, -k);
    if (e < 2.0 * scn.grid.r_min) break;
    ladder_.push_back(e);
  }
  RENAREA_CHECK(static_cast<int>(ladder_.size()) >= 8, "ladder does not fit above the grid floor");

  w_sigma_ = sigma_volume_weights(scn.sigma, scn.k_inf);

  // panel quadrature aligned with the ladder: [eps_k+1, eps_k] ... [eps_0, r0]
  std::vector<double> edges = ladder_;
  std::reverse(edges.begin(), edges.end());  // increasing
  edges.push_back(r0);
  const int per_panel = 12;
  for (size_t p = 0; p + 1 < edges.size(); ++p) {
    Quad1D panel = gauss_legendre(per_panel, std::log(edges[p]), std::log(edges[p + 1]));
    for (int i = 0; i < panel.size(); ++i) {
      rq_.x.push_back(std::exp(panel.x[i]));
      rq_.w.push_back(panel.w[i] * std::exp(panel.x[i]));
      panel_of_.push_back(static_cast<int>(p));
    }
  }

  const int dY = scn.surface_dim();
  const int nn = scn.sigma.size();
  cache_.resize(static_cast<size_t>(nn) * rq_.size());
  parallel_for(nn, [&](int i) {
    double det_k = det(scn.k_inf(scn.sigma.nodes[i]));
    for (int q = 0; q < rq_.size(); ++q) {
      double r = rq_.x[q];
      Cached c;
      MatN<double> hb = induced_metric_at(*res_.surface, scn.gbar, scn.sigma.nodes[i], r);
      c.dens = std::sqrt(det(hb) / det_k) * std::pow(r, -dY);
      SecondFundamentalData sd =
          second_fundamental_form_at(*res_.surface, scn.gbar, scn.sigma.nodes[i], r);
      c.b2 = sd.invariant_B2;
      c.b4 = sd.invariant_B4;
      CurvatureBundle yb = surface_curvature_at(*res_.surface, scn.gbar, scn.sigma.nodes[i], r, true);
      c.e2 = tensor2_norm2(yb.trace_free_ricci, yb.g_inv);
      c.w2 = yb.weyl_defined ? tensor4_norm2(yb.weyl, yb.g_inv) : 0.0;
      cache_[static_cast<size_t>(i) * rq_.size() + q] = c;
    }
  });

  // interior samples from the trajectory beyond the collar
  const double rho0 = (2.0 - r0) / (2.0 + r0);
  interior_ = profile_samples(scn.orbit, scn.g_ball, *res_.trajectory, rho0);

  // radial curves of |B_ring|^2 per sigma node for the flux ladder
  const int ncurve = 257;
  b2_grid_r_.resize(ncurve);
  for (int j = 0; j < ncurve; ++j) {
    double f = static_cast<double>(j) / (ncurve - 1);
    b2_grid_r_[j] = scn.grid.r_min * std::pow(r0 / scn.grid.r_min, f);
  }
  b2_radial_.resize(nn);
  parallel_for(nn, [&](int i) {
    std::vector<double> u(ncurve), v(ncurve);
    for (int j = 0; j < ncurve; ++j) {
      u[j] = std::log(b2_grid_r_[j]);
      v[j] = second_fundamental_form_at(*res_.surface, scn.gbar, scn.sigma.nodes[i], b2_grid_r_[j])
                 .invariant_B2;
    }
    b2_radial_[i] = CubicSpline(std::move(u), std::move(v), SplineBC::notaknot());
  });
}

double RenormContext::field_value(int pt, YField f) const {
  const Cached& c = cache_[pt];
  switch (f) {
    case YField::one: return 1.0;
    case YField::b2: return c.b2;
    case YField::b4: return c.b4;
    case YField::w2: return c.w2;
    case YField::e2: return c.e2;
  }
  return 0.0;
}

double RenormContext::interior_integral(YField f) const {
  auto pick = [f](const ProfileInvariants& inv) {
    switch (f) {
      case YField::one: return 1.0;
      case YField::b2: return inv.B2;
      case YField::b4: return inv.B4;
      case YField::w2: return inv.W2;
      case YField::e2: return inv.E2;
    }
    return 0.0;
  };
  return scn_->boundary_components * profile_integrate(interior_, pick);
}

double RenormContext::collar_integral(YField f, double eps) const {
  // cached panels above eps; partial panel resolved with an ad hoc rule
  const int nn = scn_->sigma.size();
  double total = 0.0;
  for (int q = 0; q < rq_.size(); ++q) {
    if (rq_.x[q] < eps) continue;
    double s = 0.0;
    for (int i = 0; i < nn; ++i)
      s += w_sigma_[i] * cache_[static_cast<size_t>(i) * rq_.size() + q].dens *
           field_value(static_cast<int>(static_cast<size_t>(i) * rq_.size() + q), f);
    total += rq_.w[q] * s;
  }
  return total;
}

double RenormContext::integrate_over_Y_eps(YField f, double eps) const {
  RENAREA_CHECK(eps >= 2.0 * scn_->grid.r_min, "epsilon below the resolved grid range");
  RENAREA_CHECK(eps < scn_->grid.r0, "epsilon above the collar");
  // exact panel alignment when eps is a ladder value; otherwise ad hoc rule
  bool aligned = false;
  for (double e : ladder_)
    if (std::abs(e - eps) < 1e-14 * e) aligned = true;
  double collar;
  if (aligned) {
    collar = collar_integral(f, eps * (1.0 - 1e-12));
  } else {
    Quad1D q = log_graded(eps, scn_->grid.r0, 14);
    const int dY = scn_->surface_dim();
    const int nn = scn_->sigma.size();
    collar = 0.0;
    for (int k = 0; k < q.size(); ++k) {
      double r = q.x[k];
      double s = 0.0;
      for (int i = 0; i < nn; ++i) {
        MatN<double> hb = induced_metric_at(*res_.surface, scn_->gbar, scn_->sigma.nodes[i], r);
        double det_k = det(scn_->k_inf(scn_->sigma.nodes[i]));
        double dens = std::sqrt(det(hb) / det_k) * std::pow(r, -dY);
        double fv = 1.0;
        if (f != YField::one) {
          SecondFundamentalData sd =
              second_fundamental_form_at(*res_.surface, scn_->gbar, scn_->sigma.nodes[i], r);
          CurvatureBundle yb =
              surface_curvature_at(*res_.surface, scn_->gbar, scn_->sigma.nodes[i], r, true);
          switch (f) {
            case YField::b2: fv = sd.invariant_B2; break;
            case YField::b4: fv = sd.invariant_B4; break;
            case YField::w2: fv = yb.weyl_defined ? tensor4_norm2(yb.weyl, yb.g_inv) : 0.0; break;
            case YField::e2: fv = tensor2_norm2(yb.trace_free_ricci, yb.g_inv); break;
            default: break;
          }
        }
        s += w_sigma_[i] * dens * fv;
      }
      collar += q.w[k] * s;
    }
  }
  return scn_->boundary_components * collar + interior_integral(f);
}

EpsilonLadderFit RenormContext::renormalized_area() const {
  std::vector<double> vals;
  for (double e : ladder_)
    vals.push_back(scn_->boundary_components * collar_integral(YField::one, e * (1.0 - 1e-12)) +
                   interior_integral(YField::one));
  std::vector<double> basis =
      scn_->dim_sigma == 3 ? std::vector<double>{-3, -1, 0, 1, 2} : std::vector<double>{-1, 0, 1};
  return fit_expansion(ladder_, vals, basis);
}

EpsilonLadderFit RenormContext::renormalized_area_diagnostic(double extra) const {
  std::vector<double> vals;
  for (double e : ladder_)
    vals.push_back(scn_->boundary_components * collar_integral(YField::one, e * (1.0 - 1e-12)) +
                   interior_integral(YField::one));
  std::vector<double> basis =
      scn_->dim_sigma == 3 ? std::vector<double>{-3, -1, 0, 1, 2} : std::vector<double>{-1, 0, 1};
  basis.push_back(extra);
  std::sort(basis.begin(), basis.end());
  return fit_expansion(ladder_, vals, basis);
}

EpsilonLadderFit RenormContext::b2_ladder() const {
  std::vector<double> vals;
  for (double e : ladder_)
    vals.push_back(scn_->boundary_components * collar_integral(YField::b2, e * (1.0 - 1e-12)) +
                   interior_integral(YField::b2));
  return fit_expansion(ladder_, vals, {-1, 0, 1});
}

double RenormContext::flux_at(double eps) const {
  // minus the outward flux of |B_ring|^2 through the eps slice, singular scale
  const int nn = scn_->sigma.size();
  const int dsig = scn_->dim_sigma;
  double total = 0.0;
  const double u = std::log(eps);
  for (int i = 0; i < nn; ++i) {
    SliceData sl = slice_data(*res_.surface, scn_->gbar, scn_->sigma.nodes[i], eps);
    double db2_dr = b2_radial_[i].eval(u, 1) / eps;
    // nu = r nu_bar; radial component dominates, tangential pieces vanish on
    // the symmetric catalog but are kept via the slice normal components
    double grad = sl.nu_bar[dsig] * db2_dr;  // surface r slot
    double ds = std::pow(eps, -dsig) * sl.sqrt_det_kbar;
    total += w_sigma_[i] / std::sqrt(det(scn_->k_inf(scn_->sigma.nodes[i]))) * ds * eps * grad;
  }
  return -scn_->boundary_components * total;
}

EpsilonLadderFit RenormContext::b2_flux_ladder() const {
  std::vector<double> vals;
  for (double e : ladder_) vals.push_back(flux_at(e));
  return fit_expansion(ladder_, vals, {-1, 0, 1});
}

RenormContext::Convergent RenormContext::convergent_integral(YField f) const {
  Convergent out;
  double eps_min = ladder_.back();
  out.value = scn_->boundary_components * collar_integral(f, scn_->grid.r_min * 1.0000001) +
              interior_integral(f);
  // tail below the grid floor from the local power behavior
  double v1 = scn_->boundary_components * collar_integral(f, eps_min * (1 - 1e-12)) +
              interior_integral(f);
  double v2 = scn_->boundary_components * collar_integral(f, 2.0 * eps_min * (1 - 1e-12)) +
              interior_integral(f);
  double doubling = std::abs(v1 - v2);
  out.tail_estimate = doubling;  // geometric bound: remaining tail below one doubling step
  return out;
}

double RenormContext::boundary_ii2() const {
  double s = 0.0;
  for (int i = 0; i < scn_->sigma.size(); ++i) {
    BoundaryForms bf = boundary_fundamental_forms(scn_->g_inf, scn_->sigma.nodes[i]);
    s += w_sigma_[i] * bf.II_ring_norm2;
  }
  return scn_->boundary_components * s;
}

RenormContext::BoundaryDensity RenormContext::boundary_density(double eps) const {
  RENAREA_CHECK(scn_->dim_sigma == 3, "curvature boundary density is specific to 4d surfaces");
  const int nn = scn_->sigma.size();
  const int dsig = scn_->dim_sigma;
  const int dY = dsig + 1;
  BoundaryDensity out;

  for (int i = 0; i < nn; ++i) {
    const VecN<double>& xs = scn_->sigma.nodes[i];
    SliceData sl = slice_data(*res_.surface, scn_->gbar, xs, eps);
    CurvatureBundle yb = surface_curvature_at(*res_.surface, scn_->gbar, xs, eps, false);

    // S_r of the slice in the compact surface
    MatN<double> kinv = inverse(sl.kbar);
    double H = sl.Hbar;
    double L2 = tensor2_norm2(sl.Lbar, kinv);
    MatN<double> Lup = raise_one(sl.Lbar, kinv);
    double trL3 = 0.0;
    for (int a = 0; a < dsig; ++a)
      for (int b = 0; b < dsig; ++b)
        for (int c = 0; c < dsig; ++c) trL3 += Lup(a, b) * Lup(b, c) * Lup(c, a);
    double ric_nn = 0.0;
    for (int al = 0; al < dY; ++al)
      for (int be = 0; be < dY; ++be) ric_nn += yb.ricci(al, be) * sl.nu_bar[al] * sl.nu_bar[be];
    // partial Ricci over slice directions contracted with the raised shape tensor
    double riem_term = 0.0;
    MatN<double> Lraised(dsig);
    for (int a = 0; a < dsig; ++a)
      for (int b = 0; b < dsig; ++b) {
        double s = 0.0;
        for (int c = 0; c < dsig; ++c)
          for (int d = 0; d < dsig; ++d) s += kinv(a, c) * kinv(b, d) * sl.Lbar(c, d);
        Lraised(a, b) = s;
      }
    for (int a = 0; a < dsig; ++a)
      for (int b = 0; b < dsig; ++b) {
        double rdadb = 0.0;
        for (int c = 0; c < dsig; ++c)
          for (int d = 0; d < dsig; ++d) rdadb += kinv(c, d) * yb.riemann(c, a, d, b);
        riem_term += rdadb * Lraised(a, b);
      }

    double sbar = yb.scalar * H - 2.0 * ric_nn * H - 2.0 * riem_term + (2.0 / 3.0) * H * H * H -
                  2.0 * H * L2 + (4.0 / 3.0) * trL3;

    // correction vector contracted with the inward slice normal
    VecN<double> grad_r(dY);
    for (int al = 0; al < dY; ++al) grad_r[al] = sl.hbar_inv(al, dY - 1);
    double t1 = 0.0, t2 = 0.0, t3 = 0.0, t4 = 0.0, t5 = 0.0;
    for (int al = 0; al < dY; ++al) {
      double r_al = (al == dY - 1) ? 1.0 : 0.0;
      double hess_gr = 0.0, ric_gr = 0.0;
      for (int be = 0; be < dY; ++be) {
        hess_gr += sl.hess_r(al, be) * grad_r[be];
        ric_gr += yb.ricci(al, be) * grad_r[be];
      }
      t1 += (sl.dr_norm2 * r_al / cube(eps)) * sl.nu_bar[al];
      t2 += (-r_al * sl.lap_r / (eps * eps)) * sl.nu_bar[al];
      t3 += (hess_gr / (eps * eps)) * sl.nu_bar[al];
      t4 += (ric_gr / eps) * sl.nu_bar[al];
      t5 += (-0.5 * yb.scalar * r_al / eps) * sl.nu_bar[al];
    }
    double correction = 2.0 * (t1 + t2 + t3 + t4 + t5);

    double wline = w_sigma_[i] / std::sqrt(det(scn_->k_inf(xs))) * sl.sqrt_det_kbar;
    out.total += wline * (sbar - correction);
    out.sbar += wline * sbar;
    out.parts["dr_norm"] += wline * 2.0 * t1;
    out.parts["laplacian"] += wline * 2.0 * t2;
    out.parts["hessian"] += wline * 2.0 * t3;
    out.parts["ricci"] += wline * 2.0 * t4;
    out.parts["scalar"] += wline * 2.0 * t5;
  }
  out.total *= scn_->boundary_components;
  out.sbar *= scn_->boundary_components;
  for (auto& kv : out.parts) kv.second *= scn_->boundary_components;
  return out;
}

EpsilonLadderFit RenormContext::boundary_term_ladder() const {
  std::vector<double> vals;
  for (double e : ladder_) vals.push_back(boundary_density(e).total);
  return fit_expansion(ladder_, vals, {-3, -2, -1, 0, 1});
}

EpsilonLadderFit RenormContext::boundary_sbar_ladder() const {
  std::vector<double> vals;
  for (double e : ladder_) vals.push_back(boundary_density(e).sbar);
  return fit_expansion(ladder_, vals, {-1, 0, 1, 2});
}

std::map<std::string, std::vector<double>> RenormContext::boundary_term_parts() const {
  std::map<std::string, std::vector<double>> out;
  for (double e : ladder_) {
    BoundaryDensity d = boundary_density(e);
    out["total"].push_back(d.total);
    out["sbar"].push_back(d.sbar);
    for (const auto& kv : d.parts) out[kv.first].push_back(kv.second);
  }
  return out;
}

// ---------------------------------------------------------------------------

EpsilonLadderFit renormalized_volume(const Scenario& scn) {
  RENAREA_CHECK(!scn.has_surface, "volume regularization expects an ambient-only entry");
  const int dM = scn.gbar.dim() - 1;
  std::vector<double> w = sigma_volume_weights(scn.sigma, scn.k_inf);

  const double eps_max = scn.ladder.eps_max_frac * scn.grid.r0;
  std::vector<double> ladder;
  for (int k = 0; k < scn.ladder.count; ++k) ladder.push_back(eps_max * std::pow(scn.ladder.ratio, -k));

  auto volume_above = [&](double eps) {
    Quad1D q = log_graded(eps, 1.999999, 14);
    double total = 0.0;
    for (int k = 0; k < q.size(); ++k) {
      double r = q.x[k];
      double s = 0.0;
      for (int i = 0; i < scn.sigma.size(); ++i) {
        VecN<double> x(dM + 1);
        for (int a = 0; a < dM; ++a) x[a] = scn.sigma.nodes[i][a];
        x[dM] = r;
        MatN<double> g = scn.gbar(x);
        MatN<double> block(dM);
        for (int a = 0; a < dM; ++a)
          for (int b = 0; b < dM; ++b) block(a, b) = g(a, b);
        double det_k = det(scn.k_inf(scn.sigma.nodes[i]));
        s += w[i] * std::sqrt(det(block) / det_k) * std::pow(r, -dM - 1);
      }
      total += q.w[k] * s;
    }
    return total;
  };

  std::vector<double> vals;
  for (double e : ladder) vals.push_back(volume_above(e));
  std::vector<double> basis;
  for (int p = -dM; p < 0; p += 2) basis.push_back(p);
  basis.push_back(0);
  basis.push_back(1);
  return fit_expansion(ladder, vals, basis);
}

double ambient_weyl_integral(const Scenario& scn) {
  RENAREA_CHECK(!scn.has_surface, "ambient integral expects an ambient-only entry");
  const int dM = scn.gbar.dim() - 1;
  std::vector<double> w = sigma_volume_weights(scn.sigma, scn.k_inf);
  Quad1D q = log_graded(2e-3, 1.99, 10);
  double total = 0.0;
  for (int k = 0; k < q.size(); ++k) {
    double r = q.x[k];
    double s = 0.0;
    for (int i = 0; i < scn.sigma.size(); ++i) {
      VecN<double> x(dM + 1);
      for (int a = 0; a < dM; ++a) x[a] = scn.sigma.nodes[i][a];
      x[dM] = r;
      ChartPoint p{x, ""};
      MetricDerivs md = scn.gbar.derivs(p);
      // singular scale curvature of g / r^2
      MetricDerivs ms = md;
      {
        const double f = 1.0 / (r * r), fr = -2.0 / cube(r), frr = 6.0 / (r * r * r * r);
        const int n = md.dim;
        for (int ii = 0; ii < n; ++ii)
          for (int jj = 0; jj < n; ++jj) {
            ms.g(ii, jj) = f * md.g(ii, jj);
            for (int kk = 0; kk < n; ++kk) {
              ms.dg[kk](ii, jj) =
                  f * md.dg[kk](ii, jj) + (kk == n - 1 ? fr * md.g(ii, jj) : 0.0);
              for (int ll = 0; ll < n; ++ll) {
                double v = f * md.ddg[kk][ll](ii, jj);
                if (kk == n - 1) v += fr * md.dg[ll](ii, jj);
                if (ll == n - 1) v += fr * md.dg[kk](ii, jj);
                if (kk == n - 1 && ll == n - 1) v += frr * md.g(ii, jj);
                ms.ddg[kk][ll](ii, jj) = v;
              }
            }
          }
      }
      CurvatureBundle b = bundle_from_derivs(ms);
      double w2 = b.weyl_defined ? tensor4_norm2(b.weyl, b.g_inv) : 0.0;
      double det_k = det(scn.k_inf(scn.sigma.nodes[i]));
      MatN<double> block(dM);
      for (int a = 0; a < dM; ++a)
        for (int bb = 0; bb < dM; ++bb) block(a, bb) = md.g(a, bb);
      s += w[i] * w2 * std::sqrt(det(block) / det_k) * std::pow(r, -dM - 1);
    }
    total += q.w[k] * s;
  }
  return total;
}

}  // namespace renarea
