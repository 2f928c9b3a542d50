#include "renarea/profile.hpp"

#include <boost/numeric/odeint.hpp>
#include <cmath>

namespace renarea {

namespace {

double omega(double a, double b) { return 2.0 / (1.0 - a * a - b * b); }

// gradient of psi = (m+n+1) log Omega + m log a + n log b
std::array<double, 2> grad_psi(const OrbitModel& om, double a, double b) {
  double rho2 = a * a + b * b;
  double f = 2.0 * (om.m + om.n + 1) / (1.0 - rho2);
  double ga = f * a, gb = f * b;
  if (om.m > 0) ga += om.m / a;
  if (om.n > 0) gb += om.n / b;
  return {ga, gb};
}

using State = std::array<double, 3>;  // a, b, theta

struct GeodesicRhs {
  const OrbitModel* om;
  void operator()(const State& s, State& ds, double) const {
    auto g = grad_psi(*om, s[0], s[1]);
    double ct = std::cos(s[2]), st = std::sin(s[2]);
    ds[0] = ct;
    ds[1] = st;
    ds[2] = -g[0] * st + g[1] * ct;
  }
};

}  // namespace

double profile_log_weight(const OrbitModel& om, double a, double b) {
  double w = (om.m + om.n + 1) * std::log(omega(a, b));
  if (om.m > 0) w += om.m * std::log(a);
  if (om.n > 0) w += om.n * std::log(b);
  return w;
}

double Trajectory::rho(int i) const {
  const auto& p = pts[i];
  return std::sqrt(p.a * p.a + p.b * p.b);
}
double Trajectory::r_of(int i) const {
  double rr = rho(i);
  return 2.0 * (1.0 - rr) / (1.0 + rr);
}
double Trajectory::z_of(double t0, int i) const {
  return std::atan2(pts[i].b, pts[i].a) - t0;
}

namespace {

Trajectory run_geodesic(const OrbitModel& om, State s, Trajectory traj, double rho_stop,
                        double tol);

}  // namespace

Trajectory integrate_profile(const OrbitModel& om, int axis, double start, double rho_stop,
                             double tol) {
  RENAREA_CHECK(axis == 0 || axis == 1, "axis must be 0 or 1");
  RENAREA_CHECK(std::abs(start) < 1.0, "start position must lie inside the ball");

  Trajectory traj;
  traj.start_axis = axis;
  traj.start_param = start;

  // regular center series: the collapsing factor forces the profile to leave
  // the axis orthogonally, with quadratic correction c
  const double delta = 1e-5;
  State s;
  if (axis == 0) {
    RENAREA_CHECK(om.n >= 1, "second factor cannot collapse for this orbit model");
    RENAREA_CHECK(start > 0.0, "collapse start must sit on the positive axis");
    double a0 = start;
    double dlog = 2.0 * (om.m + om.n + 1) * a0 / (1.0 - a0 * a0) + (om.m > 0 ? om.m / a0 : 0.0);
    double c = dlog / (2.0 * (1 + om.n));
    s = {a0 + c * delta * delta, delta, std::atan2(1.0, 2.0 * c * delta)};
  } else {
    RENAREA_CHECK(om.m >= 1, "first factor cannot collapse for this orbit model");
    double b0 = start;
    double dlog = 2.0 * (om.m + om.n + 1) * b0 / (1.0 - b0 * b0) + (om.n > 0 ? om.n / b0 : 0.0);
    double c = dlog / (2.0 * (1 + om.m));
    s = {delta, b0 + c * delta * delta, std::atan2(2.0 * c * delta, 1.0)};
  }
  return run_geodesic(om, s, std::move(traj), rho_stop, tol);
}

Trajectory integrate_profile_free(const OrbitModel& om, double a0, double b0, double theta0,
                                  double rho_stop, double tol) {
  Trajectory traj;
  traj.start_axis = -1;
  traj.start_param = a0;
  return run_geodesic(om, State{a0, b0, theta0}, std::move(traj), rho_stop, tol);
}

namespace {

Trajectory run_geodesic(const OrbitModel& om, State s, Trajectory traj, double rho_stop,
                        double tol) {
  namespace ode = boost::numeric::odeint;
  GeodesicRhs rhs{&om};
  auto stepper = ode::make_controlled<ode::runge_kutta_dopri5<State>>(tol, tol);

  double t = 0.0, h = 1e-4;
  const double rho_stop2 = rho_stop * rho_stop;
  auto push = [&](const State& st, double time) {
    ProfilePoint p;
    p.s = time;
    p.a = st[0];
    p.b = st[1];
    p.theta = st[2];
    State d;
    rhs(st, d, time);
    p.kappa = d[2];
    traj.pts.push_back(p);
  };
  push(s, t);

  const double h_max = 2e-3;  // dense samples, trapezoid interior integrals reuse them
  int guard = 0;
  while (s[0] * s[0] + s[1] * s[1] < rho_stop2) {
    RENAREA_CHECK(++guard < 2000000, "profile integration did not reach the stop radius");
    State prev = s;
    double tprev = t;
    ode::controlled_step_result res = stepper.try_step(rhs, s, t, h);
    if (res == ode::controlled_step_result::fail) continue;
    h = std::min(h, h_max);
    if (om.m > 0) RENAREA_CHECK(s[0] > -1e-9, "profile crossed the collapsed first factor axis");
    if (om.n > 0) RENAREA_CHECK(s[1] > -1e-9, "profile crossed the collapsed second factor axis");
    if (s[0] * s[0] + s[1] * s[1] >= rho_stop2) {
      // bisect the final step onto the stop circle, landing at or beyond it
      double lo = 0.0, hi = t - tprev;
      State fin = s;
      double t_fin = t;
      for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        State trial = prev;
        double tt = tprev;
        ode::runge_kutta_dopri5<State> fixed;
        fixed.do_step(rhs, trial, tt, mid);
        if (trial[0] * trial[0] + trial[1] * trial[1] >= rho_stop2) {
          hi = mid;
          fin = trial;
          t_fin = tprev + mid;
        } else {
          lo = mid;
        }
      }
      s = fin;
      t = t_fin;
      push(s, t);
      break;
    }
    push(s, t);
  }
  return traj;
}

}  // namespace

ProfileState state_at_rho(const OrbitModel& om, const Trajectory& traj, double rho_match) {
  RENAREA_CHECK(traj.pts.size() >= 2, "trajectory too short");
  // walk to the first sample beyond rho_match and refine linearly in s
  const ProfilePoint* lo = nullptr;
  const ProfilePoint* hi = nullptr;
  for (size_t i = 1; i < traj.pts.size(); ++i) {
    double r0 = std::hypot(traj.pts[i - 1].a, traj.pts[i - 1].b);
    double r1 = std::hypot(traj.pts[i].a, traj.pts[i].b);
    if ((r0 - rho_match) * (r1 - rho_match) <= 0.0) {
      lo = &traj.pts[i - 1];
      hi = &traj.pts[i];
      break;
    }
  }
  RENAREA_CHECK(lo && hi, "trajectory does not cross the requested radius");

  // cubic Hermite in arclength, then solve |gamma(s)| = rho_match
  double ds = hi->s - lo->s;
  auto hermite = [ds](double p0, double m0, double p1, double m1, double w) {
    double w2 = w * w, w3 = w2 * w;
    return (2 * w3 - 3 * w2 + 1) * p0 + (w3 - 2 * w2 + w) * ds * m0 +
           (-2 * w3 + 3 * w2) * p1 + (w3 - w2) * ds * m1;
  };
  auto state_at_w = [&](double w) {
    ProfileState st;
    st.a = hermite(lo->a, std::cos(lo->theta), hi->a, std::cos(hi->theta), w);
    st.b = hermite(lo->b, std::sin(lo->theta), hi->b, std::sin(hi->theta), w);
    st.theta = hermite(lo->theta, lo->kappa, hi->theta, hi->kappa, w);
    return st;
  };
  double wlo = 0.0, whi = 1.0;
  double r0 = std::hypot(lo->a, lo->b), r1 = std::hypot(hi->a, hi->b);
  if (r0 > r1) std::swap(wlo, whi);
  ProfileState st;
  for (int it = 0; it < 80; ++it) {
    double w = 0.5 * (wlo + whi);
    st = state_at_w(w);
    if (std::hypot(st.a, st.b) < rho_match) {
      wlo = w;
    } else {
      whi = w;
    }
  }
  st = state_at_w(0.5 * (wlo + whi));

  double rho = std::hypot(st.a, st.b);
  st.r = 2.0 * (1.0 - rho) / (1.0 + rho);
  double t_ang = std::atan2(st.b, st.a);
  st.z = t_ang - om.t0;
  double ct = std::cos(st.theta), stn = std::sin(st.theta);
  double dt_ds = (st.a * stn - st.b * ct) / (rho * rho);
  double drho_ds = (st.a * ct + st.b * stn) / rho;
  double dr_drho = -4.0 / ((1.0 + rho) * (1.0 + rho));
  st.z_r = dt_ds / (drho_ds * dr_drho);
  return st;
}

namespace {

// immersion of the orbit through (a, b) with profile second jet, into the ball
template <class T>
VecN<T> immerse(const OrbitModel& om, const ProfilePoint& pt, const VecN<T>& params) {
  // params: s, then m angles for the first factor, then n angles for the second
  T s = params[0];
  double ct = std::cos(pt.theta), st = std::sin(pt.theta);
  double app = -pt.kappa * st, bpp = pt.kappa * ct;  // second derivative of the curve
  T A = pt.a + ct * s + 0.5 * app * s * s;
  T B = pt.b + st * s + 0.5 * bpp * s * s;

  VecN<T> x(om.ambient_dim);
  int idx = 0;
  // unit sphere factor of dimension m embedded in R^{m+1}
  {
    // hyperspherical chart
    std::array<T, kMaxDim> w{};
    T radial = T(1.0);
    for (int k = 0; k < om.m; ++k) {
      T ang = params[1 + k];
      w[k] = radial * cos(ang);
      radial = radial * sin(ang);
    }
    w[om.m] = radial;
    for (int k = 0; k <= om.m; ++k) x[idx++] = A * w[k];
  }
  if (om.n >= 1) {
    std::array<T, kMaxDim> w{};
    T radial = T(1.0);
    for (int k = 0; k < om.n; ++k) {
      T ang = params[1 + om.m + k];
      w[k] = radial * cos(ang);
      radial = radial * sin(ang);
    }
    w[om.n] = radial;
    for (int k = 0; k <= om.n; ++k) x[idx++] = B * w[k];
  } else {
    x[idx++] = B;
  }
  RENAREA_CHECK(idx == om.ambient_dim, "immersion dimension bookkeeping failed");
  return x;
}

}  // namespace

ProfileInvariants profile_invariants(const OrbitModel& om, const MetricField& g_ball,
                                     const ProfilePoint& pt) {
  const int dY = om.surface_dim();
  const int dX = om.ambient_dim;

  // generic angles away from chart degeneracies
  VecN<double> params(dY);
  params[0] = 0.0;
  for (int k = 0; k < om.m + (om.n >= 1 ? om.n : 0); ++k) params[1 + k] = 0.9 + 0.13 * k;

  VecN<DualHess> seeded(dY);
  for (int i = 0; i < dY; ++i) {
    DualGrad inner = DualGrad::seeded(params[i], i);
    DualHess outer(inner);
    outer.d[i] = DualGrad(1.0);
    seeded[i] = outer;
  }
  VecN<DualHess> F = immerse(om, pt, seeded);

  VecN<double> x0(dX);
  std::array<VecN<double>, kMaxDim> T1;  // tangents
  std::array<std::array<VecN<double>, kMaxDim>, kMaxDim> T2;
  for (int i = 0; i < dY; ++i) {
    T1[i] = VecN<double>(dX);
    for (int j = 0; j < dY; ++j) T2[i][j] = VecN<double>(dX);
  }
  for (int c = 0; c < dX; ++c) {
    x0[c] = F[c].v.v;
    for (int i = 0; i < dY; ++i) {
      T1[i][c] = F[c].v.d[i];
      for (int j = 0; j < dY; ++j) T2[i][j][c] = F[c].d[i].d[j];
    }
  }

  ChartPoint p{x0, ""};
  MetricDerivs md = g_ball.derivs(p);
  MatN<double> g = md.g;
  CurvatureBundle ambient = bundle_from_derivs(md);

  // induced metric
  MatN<double> h(dY);
  for (int i = 0; i < dY; ++i)
    for (int j = i; j < dY; ++j) h(i, j) = h(j, i) = inner(g, T1[i], T1[j]);
  MatN<double> hi = inverse(h);

  // normal: push the orbit-plane normal direction and orthogonalize against
  // the tangent frame, nu = cand - T1 h^{-1} <cand, T1>
  VecN<double> cand(dX);
  {
    double ct = std::cos(pt.theta), st = std::sin(pt.theta);
    double na = -st, nb = ct;  // left normal of the profile tangent
    VecN<double> da(dX), db(dX);
    double A = pt.a, B = pt.b;
    for (int c = 0; c < dX; ++c) {
      da[c] = (A != 0.0 && c <= om.m) ? x0[c] / A : 0.0;
      db[c] = (c > om.m) ? x0[c] / B : 0.0;
    }
    for (int c = 0; c < dX; ++c) cand[c] = na * da[c] + nb * db[c];
  }
  VecN<double> coeff(dY);
  for (int i = 0; i < dY; ++i) coeff[i] = inner(g, cand, T1[i]);
  VecN<double> sol = hi * coeff;
  VecN<double> nu(dX);
  for (int c = 0; c < dX; ++c) {
    double v = cand[c];
    for (int i = 0; i < dY; ++i) v -= sol[i] * T1[i][c];
    nu[c] = v;
  }
  double nn = std::sqrt(inner(g, nu, nu));
  RENAREA_CHECK(nn > 1e-12, "degenerate normal along the profile");
  for (int c = 0; c < dX; ++c) nu[c] /= nn;

  auto gamma = christoffels_from(md).gamma;
  MatN<double> B2f(dY);
  for (int i = 0; i < dY; ++i)
    for (int j = i; j < dY; ++j) {
      VecN<double> d2 = T2[i][j];
      for (int c = 0; c < dX; ++c) {
        double s = 0.0;
        for (int a = 0; a < dX; ++a)
          for (int b = 0; b < dX; ++b) s += gamma[c](a, b) * T1[i][a] * T1[j][b];
        d2[c] += s;
      }
      double v = inner(g, d2, nu);
      B2f(i, j) = B2f(j, i) = v;
    }

  ProfileInvariants out;
  double rho = std::hypot(pt.a, pt.b);
  out.r = 2.0 * (1.0 - rho) / (1.0 + rho);
  out.area_density = om.orbit_constant * std::exp(profile_log_weight(om, pt.a, pt.b));

  double H = 0.0;
  for (int i = 0; i < dY; ++i)
    for (int j = 0; j < dY; ++j) H += hi(i, j) * B2f(i, j);
  out.H = H;

  MatN<double> ring(dY);
  for (int i = 0; i < dY; ++i)
    for (int j = 0; j < dY; ++j) ring(i, j) = B2f(i, j) - (H / dY) * h(i, j);
  out.B2 = tensor2_norm2(ring, hi);
  out.B4 = out.B2 * out.B2;
  {
    MatN<double> up = raise_one(ring, hi);
    MatN<double> sq(dY);
    for (int i = 0; i < dY; ++i)
      for (int j = 0; j < dY; ++j) {
        double s = 0.0;
        for (int k = 0; k < dY; ++k) s += up(i, k) * up(k, j);
        sq(i, j) = s;
      }
    double acc = 0.0;
    for (int i = 0; i < dY; ++i)
      for (int j = 0; j < dY; ++j) acc += sq(i, j) * sq(j, i);
    out.B2sq = acc;
  }

  Ten4 riem(dY);
  for (int i = 0; i < dY; ++i)
    for (int j = 0; j < dY; ++j)
      for (int k = 0; k < dY; ++k)
        for (int l = 0; l < dY; ++l) {
          double proj = 0.0;
          for (int a = 0; a < dX; ++a)
            for (int b = 0; b < dX; ++b)
              for (int c = 0; c < dX; ++c)
                for (int d = 0; d < dX; ++d)
                  proj += ambient.riemann(a, b, c, d) * T1[i][a] * T1[j][b] * T1[k][c] * T1[l][d];
          riem(i, j, k, l) = proj - B2f(i, l) * B2f(j, k) + B2f(i, k) * B2f(j, l);
        }
  CurvatureBundle yb = bundle_from_riemann(h, riem);
  out.R = yb.scalar;
  out.E2 = tensor2_norm2(yb.trace_free_ricci, yb.g_inv);
  out.W2 = yb.weyl_defined ? tensor4_norm2(yb.weyl, yb.g_inv) : 0.0;
  return out;
}

std::vector<ProfileSample> profile_samples(const OrbitModel& om, const MetricField& g_ball,
                                           const Trajectory& traj, double rho_cut) {
  std::vector<ProfileSample> out;
  out.reserve(traj.pts.size());
  for (const auto& pt : traj.pts) {
    if (std::hypot(pt.a, pt.b) > rho_cut) break;
    out.push_back({pt.s, profile_invariants(om, g_ball, pt)});
  }
  return out;
}

double profile_integrate(const std::vector<ProfileSample>& samples,
                         const std::function<double(const ProfileInvariants&)>& f) {
  double acc = 0.0;
  for (size_t i = 1; i < samples.size(); ++i) {
    double ds = samples[i].s - samples[i - 1].s;
    acc += 0.5 * ds *
           (f(samples[i - 1].inv) * samples[i - 1].inv.area_density +
            f(samples[i].inv) * samples[i].inv.area_density);
  }
  return acc;
}

}  // namespace renarea
