#include <doctest.h>

#include <cmath>

#include "renarea/ladder.hpp"

using namespace renarea;

namespace {

// antiderivative of (1 - r^2/4)^3 r^{-4}
double tg_antiderivative(double r) {
  return -1.0 / (3.0 * r * r * r) + 0.75 / r + (3.0 / 16.0) * r - r * r * r / 192.0;
}

}  // namespace

TEST_CASE("expansion fit recovers basis members exactly") {
  std::vector<double> eps, vals;
  for (int k = 0; k < 10; ++k) {
    double e = 0.2 * std::pow(2.0, -k);
    eps.push_back(e);
    vals.push_back(std::pow(e, -3) + 2.0 / e + 5.0 + e);
  }
  EpsilonLadderFit fit = fit_expansion(eps, vals, {-3, -1, 0, 1});
  // conditioning of the steep basis bounds the achievable recovery
  CHECK(fit.finite_part == doctest::Approx(5.0).epsilon(1e-8));
  CHECK(fitted_coefficient(fit, -3.0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(fitted_coefficient(fit, -1.0) == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(fit.fit_residual < 1e-7);

  // a benign basis reproduces span members to full precision
  std::vector<double> eps2, vals2;
  for (int k = 0; k < 9; ++k) {
    double e = 0.3 * std::pow(2.0, -k);
    eps2.push_back(e);
    vals2.push_back(4.0 / e - 1.5 + 0.25 * e);
  }
  EpsilonLadderFit fit2 = fit_expansion(eps2, vals2, {-1, 0, 1});
  CHECK(fit2.finite_part == doctest::Approx(-1.5).epsilon(1e-10));
  CHECK(fit2.fit_residual < 1e-12);
}

TEST_CASE("expansion fit tolerates a small smooth remainder") {
  std::vector<double> eps, vals;
  for (int k = 0; k < 10; ++k) {
    double e = 0.25 * std::pow(2.0, -k);
    eps.push_back(e);
    vals.push_back(1.0 / e + 7.0 + 0.3 * e * e * std::sin(3.0 * e));
  }
  EpsilonLadderFit fit = fit_expansion(eps, vals, {-1, 0, 1});
  CHECK(std::abs(fit.finite_part - 7.0) <= std::max(fit.finite_part_error * 3.0, 2e-4));
}

TEST_CASE("fit input validation") {
  std::vector<double> eps = {0.1, 0.05, 0.025, 0.02, 0.01, 0.005};
  std::vector<double> vals(6, 1.0);
  CHECK_THROWS_AS(fit_expansion(eps, vals, {-1, 1}), Error);  // no zero exponent
  std::vector<double> eps_bad = {0.1, 0.2, 0.05, 0.01, 0.005, 0.001};
  CHECK_THROWS_AS(fit_expansion(eps_bad, vals, {-1, 0}), Error);
}

TEST_CASE("regularized integrals of the geodesic slice") {
  Scenario eq = build_scenario("equatorial_s3");
  SolveResult res = solve_cohomogeneity_one(eq);
  RenormContext ctx(eq, res);

  SUBCASE("closed form of the truncated area") {
    for (double e : {0.05, 0.11, 0.2}) {
      double got = ctx.integrate_over_Y_eps(YField::one, e);
      double expect = 2 * kPi * kPi * (tg_antiderivative(2.0) - tg_antiderivative(e));
      CHECK(got == doctest::Approx(expect).epsilon(1e-6));
    }
    CHECK(ctx.integrate_over_Y_eps(YField::b2, 0.1) == doctest::Approx(0.0).epsilon(1e-12));
  }

  SUBCASE("renormalized area ladder") {
    EpsilonLadderFit fit = ctx.renormalized_area();
    CHECK(fit.finite_part == doctest::Approx(4.0 * kPi * kPi / 3.0).epsilon(0.005));
    CHECK(fitted_coefficient(fit, -3.0) ==
          doctest::Approx(2.0 * kPi * kPi / 3.0).epsilon(1e-4));
    CHECK(fitted_coefficient(fit, -1.0) ==
          doctest::Approx(-1.5 * kPi * kPi).epsilon(1e-3));
    // forbidden exponent stays consistent with zero
    EpsilonLadderFit diag = ctx.renormalized_area_diagnostic(-2.0);
    double scale = std::abs(fit.finite_part);
    CHECK(std::abs(fitted_coefficient(diag, -2.0)) * 0.1 < 0.005 * scale);
  }

  SUBCASE("window invariance of the finite part") {
    EpsilonLadderFit full = ctx.renormalized_area();
    std::vector<double> sub_eps(full.epsilons.begin() + 1, full.epsilons.end());
    std::vector<double> sub_vals(full.values.begin() + 1, full.values.end());
    EpsilonLadderFit sub = fit_expansion(sub_eps, sub_vals, full.basis);
    CHECK(std::abs(sub.finite_part - full.finite_part) <=
          std::max(3.0 * (full.finite_part_error + sub.finite_part_error), 5e-4));
  }

  SUBCASE("second fundamental form ladders vanish identically") {
    // the numerically solved slice is zero to solver noise; the r^{-4} area
    // weight amplifies that noise near the inner cutoff, setting the floor
    EpsilonLadderFit b2 = ctx.b2_ladder();
    CHECK(std::abs(b2.finite_part) < 1e-5);
    CHECK(std::abs(fitted_coefficient(b2, -1.0)) < 1e-6);
    EpsilonLadderFit flux = ctx.b2_flux_ladder();
    CHECK(std::abs(flux.finite_part) < 1e-3);
    auto w2 = ctx.convergent_integral(YField::w2);
    CHECK(std::abs(w2.value) < 1e-10);
    auto e2 = ctx.convergent_integral(YField::e2);
    CHECK(std::abs(e2.value) < 1e-9);
  }

  SUBCASE("boundary curvature density has no finite part") {
    EpsilonLadderFit bt = ctx.boundary_term_ladder();
    // closed form for this slice: 2 pi^2 (-2 e^-3 + 4.5 e^-1 + 1.125 e - e^3/32)
    CHECK(fitted_coefficient(bt, -3.0) == doctest::Approx(-4.0 * kPi * kPi).epsilon(1e-4));
    CHECK(fitted_coefficient(bt, -1.0) == doctest::Approx(9.0 * kPi * kPi).epsilon(1e-3));
    double scale = std::abs(fitted_coefficient(bt, -1.0)) / bt.epsilons.front();
    CHECK(std::abs(fitted_coefficient(bt, -2.0)) < 1e-6 * scale);
    CHECK(std::abs(bt.finite_part) < 1e-3 * scale);
    EpsilonLadderFit sb = ctx.boundary_sbar_ladder();
    std::vector<double> absvals = sb.values;
    CHECK(loglog_slope(sb.epsilons, absvals, 1e-12) == doctest::Approx(1.0).epsilon(0.03));
  }
}

TEST_CASE("regularized integrals of the clifford branches") {
  Scenario cl = build_scenario("clifford_s2xs1");
  SolveResult res = solve_cohomogeneity_one(cl);  // circle factor collapse
  RenormContext ctx(cl, res);
  const double ii2 = 16.0 * kPi * kPi / std::sqrt(3.0);

  CHECK(ctx.boundary_ii2() == doctest::Approx(ii2).epsilon(1e-9));

  EpsilonLadderFit b2 = ctx.b2_ladder();
  CHECK(fitted_coefficient(b2, -1.0) == doctest::Approx(ii2).epsilon(0.02));

  EpsilonLadderFit flux = ctx.b2_flux_ladder();
  CHECK(fitted_coefficient(flux, -1.0) == doctest::Approx(-2.0 * ii2).epsilon(0.02));
  CHECK(std::abs(flux.finite_part) <= 0.02 * ii2);

  // |B_ring|^2 approaches |II_ring|^2 r^2 near the boundary
  std::vector<double> rs, vals;
  for (double r = 0.004; r < 0.02; r *= 1.3) {
    SecondFundamentalData sd =
        second_fundamental_form_at(*res.surface, cl.gbar, cl.sigma_sample, r);
    rs.push_back(r);
    vals.push_back(sd.invariant_B2 / (r * r));
  }
  double lead = extrapolate_to_zero_r2(rs, vals, static_cast<int>(rs.size()));
  CHECK(lead == doctest::Approx(3.0).epsilon(0.02));
  CHECK(loglog_slope(rs, vals, 1e-12) < 0.5);  // bounded ratio, slope of B2 itself is 2
}

TEST_CASE("two dimensional disk area") {
  Scenario disk = build_scenario("geodesic_circle_2d");
  SolveResult res = solve_cohomogeneity_one(disk);
  RenormContext ctx(disk, res);
  EpsilonLadderFit fit = ctx.renormalized_area();
  CHECK(fit.finite_part == doctest::Approx(-2.0 * kPi).epsilon(0.005));
  CHECK(fitted_coefficient(fit, -1.0) == doctest::Approx(2.0 * kPi).epsilon(1e-4));
}

TEST_CASE("renormalized volume of the 4d slice") {
  Scenario h4 = build_scenario("hyperbolic_4d");
  EpsilonLadderFit vol = renormalized_volume(h4);
  CHECK(vol.finite_part == doctest::Approx(4.0 * kPi * kPi / 3.0).epsilon(0.005));
  CHECK(ambient_weyl_integral(h4) < 1e-8);
}
