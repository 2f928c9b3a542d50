#include <doctest.h>

#include <random>

#include "renarea/curvature.hpp"
#include "renarea/scenario.hpp"

using namespace renarea;

namespace {

MetricField euclidean_field(int dim) {
  ChartBox b;
  b.dim = dim;
  b.name = "euclidean";
  for (int i = 0; i < dim; ++i) {
    b.lo[i] = -10;
    b.hi[i] = 10;
  }
  return MetricField("euclidean", b, 6, [dim](const auto& x) {
    using T = std::decay_t<decltype(x[0])>;
    MatN<T> g = MatN<T>::identity(dim);
    g(0, 0) += T(0.0) * x[0];  // keep the dependence formally alive
    return g;
  });
}

// smooth random perturbation of the flat metric, positive definite for small eps
MetricField random_bumpy_field(int dim, unsigned long long seed, double eps = 0.05) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> amp, phase;
  std::vector<std::vector<double>> wave;
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      amp.push_back(eps * dist(rng));
      phase.push_back(dist(rng) * 3.0);
      std::vector<double> k(dim);
      for (int d = 0; d < dim; ++d) k[d] = dist(rng);
      wave.push_back(k);
    }
  ChartBox b;
  b.dim = dim;
  b.name = "bumpy";
  for (int i = 0; i < dim; ++i) {
    b.lo[i] = -10;
    b.hi[i] = 10;
  }
  return MetricField("bumpy", b, 6, [dim, amp, phase, wave](const auto& x) {
    using T = std::decay_t<decltype(x[0])>;
    MatN<T> g = MatN<T>::identity(dim);
    int idx = 0;
    for (int i = 0; i < dim; ++i)
      for (int j = i; j < dim; ++j) {
        T ph = T(phase[idx]);
        for (int d = 0; d < dim; ++d) ph += wave[idx][d] * x[d];
        T bump = amp[idx] * sin(ph);
        g(i, j) += bump;
        if (i != j) g(j, i) += bump;
        ++idx;
      }
    return g;
  });
}

MetricField ball_field(int dim) { return build_scenario("hyperbolic_ball_5d").g_ball; }

}  // namespace

TEST_CASE("euclidean curvature vanishes") {
  MetricField g = euclidean_field(4);
  ChartPoint p = make_point({0.3, -0.2, 1.0, 0.4});
  CHECK(metric_at(g, p)(0, 0) == 1.0);
  CurvatureBundle b = curvature_at(g, p);
  CHECK(std::abs(b.scalar) < 1e-12);
  double worst = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) worst = std::max(worst, std::abs(b.riemann(i, j, k, l)));
  CHECK(worst < 1e-12);
}

TEST_CASE("ball model 5d hyperbolic curvature") {
  Scenario ball = build_scenario("hyperbolic_ball_5d");
  ChartPoint p = make_point({0.21, -0.13, 0.04, 0.17, -0.3});
  MatN<double> g0 = metric_at(ball.g_ball, make_point({0, 0, 0, 0, 0}));
  CHECK(g0(0, 0) == doctest::Approx(4.0));

  CurvatureBundle b = curvature_at(ball.g_ball, p);
  CHECK(b.scalar == doctest::Approx(-20.0).epsilon(1e-9));
  // Einstein: Ric = -4 g
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      CHECK(b.ricci(i, j) == doctest::Approx(-4.0 * b.g(i, j)).epsilon(1e-8).scale(1.0));
  CHECK(tensor4_norm2(b.weyl, b.g_inv) < 1e-12);

  // component-wise match with the constant curvature form
  Ten4 exact = space_form_riemann(b.g, -1.0);
  double worst = 0.0;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      for (int k = 0; k < 5; ++k)
        for (int l = 0; l < 5; ++l)
          worst = std::max(worst, std::abs(b.riemann(i, j, k, l) - exact(i, j, k, l)));
  CHECK(worst < 1e-6);
}

TEST_CASE("finite difference path reproduces the ball curvature") {
  ChartBox box;
  box.dim = 5;
  box.name = "ball5_fd";
  for (int i = 0; i < 5; ++i) {
    box.lo[i] = -1;
    box.hi[i] = 1;
  }
  MetricField fd = MetricField::finite_difference("ball_fd", box, [](const VecN<double>& x) {
    double rho2 = 0.0;
    for (int i = 0; i < 5; ++i) rho2 += x[i] * x[i];
    double f = 2.0 / (1.0 - rho2);
    MatN<double> g(5);
    for (int i = 0; i < 5; ++i) g(i, i) = f * f;
    return g;
  });
  ChartPoint p = make_point({0.2, -0.1, 0.05, 0.15, -0.25});
  CurvatureBundle b = curvature_at(fd, p);
  CHECK(b.scalar == doctest::Approx(-20.0).epsilon(1e-4));
}

TEST_CASE("4d hyperbolic slice forms") {
  // unit ball model of the 4d hyperbolic space
  ChartBox box;
  box.dim = 4;
  box.name = "ball4";
  for (int i = 0; i < 4; ++i) {
    box.lo[i] = -1;
    box.hi[i] = 1;
  }
  MetricField g("ball4", box, 6, [](const auto& x) {
    using T = std::decay_t<decltype(x[0])>;
    T rho2 = T(0.0);
    for (int i = 0; i < 4; ++i) rho2 += x[i] * x[i];
    T f = 2.0 / (1.0 - rho2);
    MatN<T> m(4);
    for (int i = 0; i < 4; ++i) m(i, i) = f * f;
    return m;
  });
  ChartPoint p = make_point({0.1, 0.2, -0.15, 0.05});
  CurvatureBundle b = curvature_at(g, p);
  CHECK(b.scalar == doctest::Approx(-12.0).epsilon(1e-9));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      CHECK(b.ricci(i, j) == doctest::Approx(-3.0 * b.g(i, j)).epsilon(1e-8).scale(1.0));
      CHECK(b.schouten(i, j) == doctest::Approx(-0.5 * b.g(i, j)).epsilon(1e-8).scale(1.0));
    }
  CHECK(b.sigma2 == doctest::Approx(1.5).epsilon(1e-8));
  CHECK(4.0 * b.sigma2 == doctest::Approx(6.0).epsilon(1e-8));
}

TEST_CASE("normal form chart matches the ball model through the chart map") {
  Scenario eq = build_scenario("equatorial_s3");
  // phi: (chi1, chi2, phi, lat, r) -> ball point rho(r) * omega(angles)
  auto embed = [](const auto& c) {
    using T = std::decay_t<decltype(c[0])>;
    T rho = (2.0 - c[4]) / (2.0 + c[4]);
    T cl = cos(c[3]), sl = sin(c[3]);
    T s1 = sin(c[0]), c1 = cos(c[0]);
    T s2 = sin(c[1]), c2 = cos(c[1]);
    VecN<T> x(5);
    x[0] = rho * cl * c1;
    x[1] = rho * cl * s1 * c2;
    x[2] = rho * cl * s1 * s2 * cos(c[2]);
    x[3] = rho * cl * s1 * s2 * sin(c[2]);
    x[4] = rho * sl;
    return x;
  };
  ChartPoint q = make_point({1.2, 1.4, 0.7, 0.25, 1.0});

  // pull the ball metric back by the chart map, jacobian by duals
  VecN<DualGrad> seeded = grad_seed(q.coords);
  VecN<DualGrad> ximg = embed(seeded);
  VecN<double> x0(5);
  MatN<double> jac(5);
  for (int c = 0; c < 5; ++c) {
    x0[c] = ximg[c].v;
    for (int k = 0; k < 5; ++k) jac(c, k) = ximg[c].d[k];
  }
  MatN<double> gb = eq.g_ball(x0);
  MatN<double> pulled(5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      double s = 0.0;
      for (int c = 0; c < 5; ++c)
        for (int d = 0; d < 5; ++d) s += jac(c, i) * gb(c, d) * jac(d, j);
      pulled(i, j) = s;
    }
  // compact scale: gbar = r^2 g_ball-pullback
  MatN<double> gbar = eq.gbar(q.coords);
  const double r2 = q.coords[4] * q.coords[4];
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      CHECK(gbar(i, j) == doctest::Approx(r2 * pulled(i, j)).epsilon(1e-11).scale(1.0));

  // angular block scale at r = 1 is (3/4)^2 times the boundary value
  MatN<double> at_r1 = eq.gbar(q.coords);
  VecN<double> x_bdry = q.coords;
  x_bdry[4] = 1e-7;
  MatN<double> at_r0 = eq.gbar(x_bdry);
  CHECK(at_r1(0, 0) / at_r0(0, 0) == doctest::Approx(0.5625).epsilon(1e-6));
}

TEST_CASE("riemann symmetries and bianchi on a random metric") {
  MetricField g = random_bumpy_field(4, 777);
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> dist(-1.5, 1.5);
  for (int trial = 0; trial < 4; ++trial) {
    VecN<double> x(4);
    for (int i = 0; i < 4; ++i) x[i] = dist(rng);
    ChartPoint p{x, ""};
    CurvatureBundle b = curvature_at(g, p);
    RiemannSymmetryCheck sym = riemann_symmetry_check(b.riemann);
    CHECK(sym.antisym_first < 1e-11);
    CHECK(sym.antisym_last < 1e-11);
    CHECK(sym.pair_sym < 1e-11);
    CHECK(sym.first_bianchi < 1e-11);

    // trace-free parts
    double tr_e = 0.0, w_trace = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) tr_e += b.g_inv(i, j) * b.trace_free_ricci(i, j);
    CHECK(std::abs(tr_e) < 1e-11);
    for (int j = 0; j < 4; ++j)
      for (int l = 0; l < 4; ++l) {
        double s = 0.0;
        for (int i = 0; i < 4; ++i)
          for (int k = 0; k < 4; ++k) s += b.g_inv(i, k) * b.weyl(i, j, k, l);
        w_trace = std::max(w_trace, std::abs(s));
      }
    CHECK(w_trace < 1e-10);

    // |Ric|^2 = |E|^2 + R^2/4 in dimension 4
    double ric2 = tensor2_norm2(b.ricci, b.g_inv);
    double e2 = tensor2_norm2(b.trace_free_ricci, b.g_inv);
    CHECK(ric2 == doctest::Approx(e2 + b.scalar * b.scalar / 4.0).epsilon(1e-12));

    CHECK(contracted_bianchi_residual(g, p, 0.02) < 1e-7);
  }
}

TEST_CASE("weyl norm carries conformal weight -4") {
  MetricField g = random_bumpy_field(4, 909);
  ScalarField w("w", 4, [](const auto& x) {
    using T = std::decay_t<decltype(x[0])>;
    return 0.8 + 0.2 * sin(x[0] + 0.5 * x[1]) + 0.1 * cos(x[2] - x[3]);
  });
  MetricField shrunk = conformal_shrink(g, w, "shrunk");
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int trial = 0; trial < 3; ++trial) {
    VecN<double> x(4);
    for (int i = 0; i < 4; ++i) x[i] = dist(rng);
    ChartPoint p{x, ""};
    CurvatureBundle bg = curvature_at(g, p);
    CurvatureBundle bs = curvature_at(shrunk, p);
    double w4 = std::pow(w(x), 4);
    double lhs = tensor4_norm2(bs.weyl, bs.g_inv);
    double rhs = w4 * tensor4_norm2(bg.weyl, bg.g_inv);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-6));
  }
}

TEST_CASE("conformal sigma2 identity") {
  SUBCASE("trivial conformal factor") {
    MetricField g = random_bumpy_field(4, 321);
    ScalarField one("one", 4, [](const auto& x) {
      using T = std::decay_t<decltype(x[0])>;
      return T(1.0) + T(0.0) * x[0];
    });
    ChartPoint p = make_point({0.2, -0.4, 0.6, 0.1});
    CHECK(std::abs(sigma2_conformal_residual(g, one, p)) < 1e-9);
  }
  SUBCASE("compactified geodesic slice") {
    MetricField hbar = geodesic_slice_compact_4d();
    ScalarField r = radial_coordinate_field(4);
    ChartPoint p = make_point({1.3, 1.1, 0.8, 0.6});
    double res = sigma2_conformal_residual(hbar, r, p);
    CHECK(std::abs(res) < 1e-5);
  }
  SUBCASE("random metric and random conformal factor") {
    MetricField g = random_bumpy_field(4, 555, 0.03);
    ScalarField r("rf", 4, [](const auto& x) {
      using T = std::decay_t<decltype(x[0])>;
      return 0.9 + 0.15 * sin(x[0] - 0.3 * x[3]) + 0.1 * cos(x[1] + x[2]);
    });
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 3; ++trial) {
      VecN<double> x(4);
      for (int i = 0; i < 4; ++i) x[i] = dist(rng);
      ChartPoint p{x, ""};
      CurvatureBundle b = curvature_at(g, p);
      double scale = std::max(1.0, std::abs(4.0 * b.sigma2));
      CHECK(std::abs(sigma2_conformal_residual(g, r, p)) / scale < 1e-5);
    }
  }
}

TEST_CASE("domain and definiteness guards") {
  MetricField g = euclidean_field(3);
  ChartPoint outside = make_point({11.0, 0.0, 0.0});
  CHECK_THROWS_AS(metric_at(g, outside), Error);
  (void)ball_field;
}
