#include <doctest.h>

#include <cmath>

#include "renarea/expand.hpp"
#include "renarea/solver.hpp"

using namespace renarea;

TEST_CASE("graph expansion of the geodesic slice vanishes") {
  Scenario eq = build_scenario("equatorial_s3");
  GraphExpansion ge = expand_minimal_graph(eq, 4);
  REQUIRE(ge.order == 4);
  for (int k = 1; k <= 4; ++k)
    for (double c : ge.coefficients[k]) CHECK(std::abs(c) < 1e-12);
}

TEST_CASE("cap graph expansion reproduces the closed form jet") {
  Scenario cap = build_scenario("spherical_cap");
  const double t = std::tan(0.3);
  GraphExpansion ge = expand_minimal_graph(cap, 4);
  REQUIRE(ge.order == 4);
  for (int i = 0; i < cap.sigma.size(); ++i) {
    CHECK(std::abs(ge.coefficients[1][i]) < 1e-11);
    // quadratic coefficient is eta / 6
    CHECK(ge.coefficients[2][i] == doctest::Approx(cap.eta_expected / 6.0).epsilon(1e-10));
    CHECK(ge.coefficients[2][i] == doctest::Approx(t / 2.0).epsilon(1e-10));
    CHECK(std::abs(ge.coefficients[3][i]) < 1e-10);
    // quartic coefficient of the closed form cap: (t + t^3)/8
    CHECK(ge.coefficients[4][i] == doctest::Approx((t + t * t * t) / 8.0).epsilon(1e-9));
  }
}

TEST_CASE("two dimensional expansion carries eta over two") {
  Scenario cap = build_scenario("cap_circle_2d");
  GraphExpansion ge = expand_minimal_graph(cap, 4);
  REQUIRE(ge.order == 2);  // higher orders hit the free coefficient
  for (int i = 0; i < cap.sigma.size(); ++i) {
    CHECK(std::abs(ge.coefficients[1][i]) < 1e-12);
    CHECK(ge.coefficients[2][i] == doctest::Approx(cap.eta_expected / 2.0).epsilon(1e-10));
    CHECK(ge.coefficients[2][i] == doctest::Approx(std::tan(0.25) / 2.0).epsilon(1e-10));
  }
}

TEST_CASE("clifford expansion is the cone and the branches enter at the free order") {
  // the cone over the minimal boundary solves the equation formally, so every
  // determined coefficient vanishes; the smooth fillings deviate first at the
  // order of the free coefficient, one above the surface dimension
  Scenario cl = build_scenario("clifford_s2xs1");
  GraphExpansion ge = expand_minimal_graph(cl, 4);
  for (int k = 1; k <= 4; ++k)
    for (double c : ge.coefficients[k]) CHECK(std::abs(c) < 1e-10);

  SolveResult res = solve_cohomogeneity_one(cl);
  std::vector<double> rs, zs;
  for (double r = 0.02; r < 0.12; r *= 1.2) {
    rs.push_back(r);
    zs.push_back(res.surface->z_jet2(cl.sigma_sample, r).z);
  }
  CHECK(std::abs(zs.back()) > 1e-8);
  CHECK(loglog_slope(rs, zs, 1e-14) == doctest::Approx(5.0).epsilon(0.06));

  // quadratic coefficient of the numeric solution is consistent with zero
  std::vector<double> ratio;
  for (size_t i = 0; i < rs.size(); ++i) ratio.push_back(zs[i] / (rs[i] * rs[i]));
  double c2 = extrapolate_to_zero_r2(rs, ratio, static_cast<int>(rs.size()));
  CHECK(std::abs(c2) < 1e-4);
}

TEST_CASE("cap quartic coefficient matches a numeric fit of the solved cap") {
  Scenario cap = build_scenario("spherical_cap");
  SolveResult res = solve_cohomogeneity_one(cap);
  const double t = std::tan(0.3);
  std::vector<double> rs, vals;
  for (double r = 0.05; r < 0.16; r *= 1.15) {
    rs.push_back(r);
    double z = res.surface->z_jet2(cap.sigma_sample, r).z;
    vals.push_back((z - (t / 2.0) * r * r) / (r * r * r * r));
  }
  double fitted = extrapolate_to_zero_r2(rs, vals, static_cast<int>(rs.size()));
  CHECK(fitted == doctest::Approx((t + t * t * t) / 8.0).epsilon(0.01));
}

TEST_CASE("area form expansion of the geodesic slice") {
  Scenario eq = build_scenario("equatorial_s3");
  GraphExpansion ge = expand_minimal_graph(eq, 4);
  AreaFormExpansion af = expand_area_form(eq, ge, 4);
  for (int i = 0; i < eq.sigma.size(); ++i) {
    CHECK(af.coefficients[0][i] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(af.coefficients[1][i]) < 1e-12);
    CHECK(af.coefficients[2][i] == doctest::Approx(-0.75).epsilon(1e-9));
    CHECK(std::abs(af.coefficients[3][i]) < 1e-10);
    CHECK(af.coefficients[4][i] == doctest::Approx(3.0 / 16.0).epsilon(1e-8));
  }
}

TEST_CASE("area form expansion of the cap keeps even parity") {
  Scenario cap = build_scenario("spherical_cap");
  GraphExpansion ge = expand_minimal_graph(cap, 4);
  AreaFormExpansion af = expand_area_form(cap, ge, 3);
  for (int i = 0; i < cap.sigma.size(); ++i) {
    CHECK(af.coefficients[0][i] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(af.coefficients[1][i]) < 1e-11);
    CHECK(std::abs(af.coefficients[3][i]) < 1e-9);
  }
}

TEST_CASE("volume form expansion of the 4d slice") {
  Scenario h4 = build_scenario("hyperbolic_4d");
  VolumeFormExpansion vf = expand_volume_form(h4, 4);
  for (int i = 0; i < h4.sigma.size(); ++i) {
    CHECK(vf.coefficients[0][i] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(std::abs(vf.coefficients[1][i]) < 1e-13);
    CHECK(vf.coefficients[2][i] == doctest::Approx(-0.75).epsilon(1e-12));
    CHECK(std::abs(vf.coefficients[3][i]) < 1e-13);
    CHECK(vf.coefficients[4][i] == doctest::Approx(3.0 / 16.0).epsilon(1e-12));
  }
}

TEST_CASE("volume form of a flat product ambient is trivial") {
  Scenario toy;
  toy.id = "flat_toy";
  toy.dim_sigma = 3;
  toy.has_surface = false;
  ChartBox b;
  b.dim = 4;
  b.name = "flat4";
  for (int i = 0; i < 4; ++i) {
    b.lo[i] = i == 3 ? 1e-9 : -5.0;
    b.hi[i] = 5.0;
  }
  toy.gbar = MetricField("flat_product", b, 6, [](const auto& x) {
    using T = std::decay_t<decltype(x[0])>;
    MatN<T> g = MatN<T>::identity(4);
    g(0, 0) += T(0.0) * x[0];
    return g;
  });
  SigmaChart chart;
  chart.dim = 3;
  chart.axes = {gauss_legendre(3, 0.1, 1.0), gauss_legendre(3, 0.1, 1.0),
                gauss_legendre(3, 0.1, 1.0)};
  chart.periodic = {false, false, false};
  chart.build_lattice();
  toy.sigma = chart;
  VolumeFormExpansion vf = expand_volume_form(toy, 4);
  for (int i = 0; i < toy.sigma.size(); ++i) {
    CHECK(vf.coefficients[0][i] == doctest::Approx(1.0));
    for (int k = 1; k <= 4; ++k) CHECK(std::abs(vf.coefficients[k][i]) < 1e-14);
  }
}
