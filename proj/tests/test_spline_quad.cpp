#include <doctest.h>

#include <cmath>

#include "renarea/quadrature.hpp"
#include "renarea/scenario.hpp"
#include "renarea/spline.hpp"

using namespace renarea;

TEST_CASE("cubic spline reproduces nodes and stays C2") {
  std::vector<double> x, y;
  for (int i = 0; i <= 20; ++i) {
    double t = 0.1 * i;
    x.push_back(t);
    y.push_back(std::sin(1.7 * t) + 0.3 * t * t);
  }
  CubicSpline s(x, y, SplineBC::notaknot());
  for (size_t i = 0; i < x.size(); ++i) CHECK(s.eval(x[i]) == doctest::Approx(y[i]).epsilon(1e-14));
  // continuity of value/first/second derivative across a node
  double xn = x[7], d = 1e-10;
  for (int ord = 0; ord <= 2; ++ord)
    CHECK(s.eval(xn - d, ord) == doctest::Approx(s.eval(xn + d, ord)).epsilon(1e-6));
  // interior accuracy
  CHECK(s.eval(1.234) == doctest::Approx(std::sin(1.7 * 1.234) + 0.3 * 1.234 * 1.234).epsilon(1e-5));
  CHECK(s.eval(1.234, 1) ==
        doctest::Approx(1.7 * std::cos(1.7 * 1.234) + 0.6 * 1.234).epsilon(1e-3));
}

TEST_CASE("clamped end honors the prescribed slope") {
  std::vector<double> x, y;
  for (int i = 0; i <= 10; ++i) {
    x.push_back(0.2 * i);
    y.push_back(std::exp(0.5 * x.back()));
  }
  SplineBC bc = SplineBC::clamped_left(0.5);  // exact derivative at 0
  CubicSpline s(x, y, bc);
  CHECK(s.eval(0.0, 1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("periodic spline wraps") {
  std::vector<double> x, y;
  const int n = 24;
  for (int i = 0; i <= n; ++i) {
    x.push_back(2 * kPi * i / n);
    y.push_back(std::sin(x.back()) + 0.5 * std::cos(2 * x.back()));
  }
  CubicSpline s(x, y, SplineBC::periodic());
  CHECK(s.eval(0.0, 1) == doctest::Approx(s.eval(2 * kPi, 1)).epsilon(1e-10));
  CHECK(s.eval(-0.3) == doctest::Approx(s.eval(2 * kPi - 0.3)).epsilon(1e-12));
  CHECK(s.eval(1.0) == doctest::Approx(std::sin(1.0) + 0.5 * std::cos(2.0)).epsilon(1e-4));
}

TEST_CASE("tensor spline interpolates a product surface") {
  std::vector<double> ax, ay;
  for (int i = 0; i <= 8; ++i) ax.push_back(0.125 * i);
  for (int j = 0; j <= 9; ++j) ay.push_back(0.1 * j);
  std::vector<double> vals;
  for (double u : ax)
    for (double v : ay) vals.push_back(std::sin(u) * std::exp(v));
  TensorSpline ts({ax, ay}, vals, {SplineBC::notaknot(), SplineBC::notaknot()});
  CHECK(ts.eval({0.4, 0.55}, {0, 0}) == doctest::Approx(std::sin(0.4) * std::exp(0.55)).epsilon(1e-6));
  CHECK(ts.eval({0.4, 0.55}, {1, 0}) == doctest::Approx(std::cos(0.4) * std::exp(0.55)).epsilon(1e-4));
  CHECK(ts.eval({0.4, 0.55}, {1, 1}) == doctest::Approx(std::cos(0.4) * std::exp(0.55)).epsilon(1e-3));
}

TEST_CASE("gauss rule integrates smooth functions to machine precision") {
  Quad1D q = gauss_legendre(16, 0.0, kPi);
  double v = integrate(q, [](double x) { return std::sin(x); });
  CHECK(v == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("log graded rule handles a steep power") {
  Quad1D q = log_graded(1e-4, 1.0, 10);
  double v = integrate(q, [](double r) { return std::pow(r, -1.5); });
  double exact = 2.0 * (std::pow(1e-4, -0.5) - 1.0);
  CHECK(v == doctest::Approx(exact).epsilon(1e-11));
}

TEST_CASE("refinement of the singular area integrand converges at high order") {
  auto closed_form = [](double a, double b) {
    auto F = [](double r) {
      return -1.0 / (3 * r * r * r) + 0.75 / r + (3.0 / 16.0) * r - r * r * r / 192.0;
    };
    return F(b) - F(a);
  };
  auto numeric = [](double a, double b, int per_octave) {
    Quad1D q = log_graded(a, b, per_octave);
    return integrate(q, [](double r) {
      double w = 1.0 - r * r / 4.0;
      return w * w * w / (r * r * r * r);
    });
  };
  double exact = closed_form(0.01, 0.8);
  double e4 = std::abs(numeric(0.01, 0.8, 4) - exact);
  double e8 = std::abs(numeric(0.01, 0.8, 8) - exact);
  CHECK(std::abs(numeric(0.01, 0.8, 12) - exact) / exact < 1e-6);
  CHECK(e4 / std::max(e8, 1e-16) > 16.0);  // at least fourth order in the node count
}

TEST_CASE("sigma charts integrate to the right volumes") {
  Scenario eq = build_scenario("equatorial_s3");
  double vol = sigma_integrate(eq.sigma, eq.k_inf, [](const VecN<double>&) { return 1.0; });
  CHECK(vol == doctest::Approx(2 * kPi * kPi).epsilon(1e-9));

  Scenario cl = build_scenario("clifford_s2xs1");
  double volc = sigma_integrate(cl.sigma, cl.k_inf, [](const VecN<double>&) { return 1.0; });
  double exact = 4 * kPi * (2.0 / 3.0) * 2 * kPi / std::sqrt(3.0);
  CHECK(volc == doctest::Approx(exact).epsilon(1e-9));

  Scenario cap = build_scenario("cap_circle_2d");
  double voll = sigma_integrate(cap.sigma, cap.k_inf, [](const VecN<double>&) { return 1.0; });
  CHECK(voll == doctest::Approx(2 * kPi * std::cos(0.25)).epsilon(1e-12));
}
