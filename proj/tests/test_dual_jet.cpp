#include <doctest.h>

#include <random>

#include "renarea/field.hpp"

using namespace renarea;

namespace {

template <class T>
T sample_function(const T& x, const T& y) {
  return sin(x * y) + exp(0.3 * x) / (1.0 + y * y) + sqrt(2.0 + x) * log(1.5 + y);
}

}  // namespace

TEST_CASE("first order duals match analytic derivatives") {
  double x = 0.7, y = -0.4, h = 1e-6;
  DualGrad dx = DualGrad::seeded(x, 0), dy = DualGrad::seeded(y, 1);
  DualGrad r = sample_function(dx, dy);
  double fdx = (sample_function(x + h, y) - sample_function(x - h, y)) / (2 * h);
  double fdy = (sample_function(x, y + h) - sample_function(x, y - h)) / (2 * h);
  CHECK(r.v == doctest::Approx(sample_function(x, y)).epsilon(1e-14));
  CHECK(r.d[0] == doctest::Approx(fdx).epsilon(1e-8));
  CHECK(r.d[1] == doctest::Approx(fdy).epsilon(1e-8));
}

TEST_CASE("nested duals give exact second derivatives") {
  double x = 0.3, y = 0.9, h = 1e-4;
  VecN<double> p(2);
  p[0] = x;
  p[1] = y;
  DualHess hx(DualGrad::seeded(x, 0));
  hx.d[0] = DualGrad(1.0);
  DualHess hy(DualGrad::seeded(y, 1));
  hy.d[1] = DualGrad(1.0);
  DualHess r = sample_function(hx, hy);
  auto f = [](double a, double b) { return sample_function(a, b); };
  double fxx = (f(x + h, y) - 2 * f(x, y) + f(x - h, y)) / (h * h);
  double fxy = (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h)) / (4 * h * h);
  CHECK(r.d[0].d[0] == doctest::Approx(fxx).epsilon(1e-6));
  CHECK(r.d[0].d[1] == doctest::Approx(fxy).epsilon(1e-6));
  CHECK(r.d[0].d[1] == doctest::Approx(r.d[1].d[0]).epsilon(1e-14));
}

TEST_CASE("asin dual derivative") {
  DualGrad x = DualGrad::seeded(0.4, 0);
  DualGrad r = asin(x);
  CHECK(r.d[0] == doctest::Approx(1.0 / std::sqrt(1.0 - 0.16)).epsilon(1e-14));
}

TEST_CASE("jet products truncate exactly") {
  Jet a = Jet::constant(1.0, 4);
  a.at(2) = 1.0;  // 1 + r^2
  Jet b = Jet::constant(1.0, 4);
  b.at(2) = -1.0;  // 1 - r^2
  Jet p = a * b;
  CHECK(p[0] == 1.0);
  CHECK(p[2] == 0.0);
  CHECK(p[4] == -1.0);
}

TEST_CASE("jet square root of 1 + 2 r^2") {
  Jet a = Jet::constant(1.0, 4);
  a.at(2) = 2.0;
  Jet s = sqrt(a);
  CHECK(s[0] == doctest::Approx(1.0));
  CHECK(s[2] == doctest::Approx(1.0));
  CHECK(s[4] == doctest::Approx(-0.5));
}

TEST_CASE("jet derivative of (1 - r^2/4)^3") {
  Jet r2 = Jet::constant(1.0, 6);
  r2.at(2) = -0.25;
  Jet w = r2 * r2 * r2;
  CHECK(w[2] == doctest::Approx(-0.75));
  CHECK(w[4] == doctest::Approx(3.0 / 16.0));
  CHECK(w[6] == doctest::Approx(-1.0 / 64.0));
  Jet d = ddr(w);
  CHECK(d[1] == doctest::Approx(-1.5));
  CHECK(d[3] == doctest::Approx(3.0 / 4.0));
  CHECK(d[5] == doctest::Approx(-3.0 / 32.0));
}

TEST_CASE("jet ring axioms on random series") {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    auto rand_jet = [&](double c0) {
      Jet j = Jet::constant(c0, 6);
      for (int k = 1; k <= 6; ++k) j.at(k) = dist(rng);
      return j;
    };
    Jet a = rand_jet(dist(rng));
    Jet b = rand_jet(dist(rng));
    Jet c = rand_jet(dist(rng));

    Jet lhs = (a + b) * c;
    Jet rhs = a * c + b * c;
    for (int k = 0; k <= 6; ++k) CHECK(lhs[k] == doctest::Approx(rhs[k]).epsilon(1e-13));

    Jet assoc1 = (a * b) * c;
    Jet assoc2 = a * (b * c);
    for (int k = 0; k <= 6; ++k)
      CHECK(assoc1[k] == doctest::Approx(assoc2[k]).epsilon(1e-12).scale(1.0 + std::abs(assoc1[k])));

    Jet d = rand_jet(2.0 + std::abs(dist(rng)));
    Jet q = a / d;
    Jet back = q * d;
    for (int k = 0; k <= 6; ++k)
      CHECK(back[k] == doctest::Approx(a[k]).epsilon(1e-12).scale(1.0 + std::abs(a[k])));
  }
}

TEST_CASE("jet transcendental consistency") {
  Jet u = Jet::variable(0.0, 6);
  u.at(2) = 0.3;
  Jet s, c;
  sincos(u, s, c);
  Jet one = s * s + c * c;
  CHECK(one[0] == doctest::Approx(1.0));
  for (int k = 1; k <= 6; ++k) CHECK(one[k] == doctest::Approx(0.0).epsilon(1e-14));

  Jet e = exp(u);
  Jet l = log(e);
  for (int k = 0; k <= 6; ++k) CHECK(l[k] == doctest::Approx(u[k]).epsilon(1e-13));

  Jet back = sin(asin(0.2 + 0.5 * Jet::variable(0.0, 6)));
  CHECK(back[0] == doctest::Approx(0.2));
  CHECK(back[1] == doctest::Approx(0.5));
  for (int k = 2; k <= 6; ++k) CHECK(back[k] == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("jet division needs an invertible constant term") {
  Jet a = Jet::constant(1.0, 3);
  Jet b = Jet::variable(0.0, 3);
  CHECK_THROWS_AS(a / b, Error);
  CHECK_NOTHROW(div_by_var(b));
}

TEST_CASE("duals over jets differentiate series coefficients") {
  // d/dc of (c + r)^2 at c = 2 is 2 (2 + r)
  DualJet c(Jet::constant(2.0, 3));
  c.d[0] = Jet::constant(1.0, 3);
  DualJet r(Jet::variable(0.0, 3));
  DualJet f = (c + r) * (c + r);
  CHECK(f.v[0] == doctest::Approx(4.0));
  CHECK(f.v[1] == doctest::Approx(4.0));
  CHECK(f.d[0][0] == doctest::Approx(4.0));
  CHECK(f.d[0][1] == doctest::Approx(2.0));
}
