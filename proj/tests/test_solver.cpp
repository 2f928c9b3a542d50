#include <doctest.h>

#include <cmath>

#include "renarea/solver.hpp"

using namespace renarea;

namespace {

std::shared_ptr<ExactGraph> scaled_cubic(int dsig, double delta) {
  return std::make_shared<ExactGraph>(dsig, 1e-4, 1.5, [delta, dsig](const auto& x) {
    using T = std::decay_t<decltype(x[0])>;
    T r = x[dsig];
    return delta * r * r * r;
  });
}

std::shared_ptr<ExactGraph> quadratic_graph(int dsig, double c) {
  return std::make_shared<ExactGraph>(dsig, 1e-5, 1.5, [c, dsig](const auto& x) {
    using T = std::decay_t<decltype(x[0])>;
    T r = x[dsig];
    return c * r * r;
  });
}

VecN<double> sample_point3() {
  VecN<double> xs(3);
  xs[0] = 1.4;
  xs[1] = 1.3;
  xs[2] = 1.0;
  return xs;
}

}  // namespace

TEST_CASE("graph equation residual vanishes on the geodesic slice") {
  Scenario eq = build_scenario("equatorial_s3");
  VecN<double> xs = sample_point3();
  for (double r : {0.01, 0.2, 0.8}) {
    CHECK(std::abs(minimal_residual_at(*eq.exact_solution, eq.gbar, xs, r)) < 1e-11);
  }
}

TEST_CASE("graph equation residual vanishes on the closed form cap") {
  Scenario cap = build_scenario("spherical_cap");
  VecN<double> xs = sample_point3();
  for (double r : {0.01, 0.2, 0.7}) {
    CHECK(std::abs(minimal_residual_at(*cap.exact_solution, cap.gbar, xs, r)) < 1e-10);
  }
}

TEST_CASE("residual responds linearly to a cubic perturbation") {
  Scenario eq = build_scenario("equatorial_s3");
  VecN<double> xs = sample_point3();
  double r = 0.4;
  double r1 = minimal_residual_at(*scaled_cubic(3, 1e-4), eq.gbar, xs, r);
  double r2 = minimal_residual_at(*scaled_cubic(3, 2e-4), eq.gbar, xs, r);
  CHECK(std::abs(r1) > 1e-9);
  CHECK(r2 / r1 == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("quadratic coefficient eta over six kills the leading obstruction") {
  Scenario cap = build_scenario("spherical_cap");
  VecN<double> xs = sample_point3();
  const double good = cap.eta_expected / 6.0;
  auto zgood = quadratic_graph(3, good);
  auto zbad = quadratic_graph(3, 1.5 * good);

  std::vector<double> rs = {4e-3, 2e-3, 1e-3, 5e-4};
  std::vector<double> vg, vb;
  for (double r : rs) {
    vg.push_back(std::abs(minimal_residual_at(*zgood, cap.gbar, xs, r)));
    vb.push_back(std::abs(minimal_residual_at(*zbad, cap.gbar, xs, r)));
  }
  // residual of the correct jet decays at least linearly; the wrong
  // coefficient leaves a nonvanishing obstruction
  CHECK(loglog_slope(rs, vg, 1e-15) >= 0.9);
  CHECK(std::abs(loglog_slope(rs, vb, 1e-15)) < 0.2);
  CHECK(vb.back() > 100.0 * vg.back());
}

TEST_CASE("residual is proportional to the mean curvature") {
  Scenario eq = build_scenario("equatorial_s3");
  VecN<double> xs = sample_point3();
  double r = 0.5;
  auto g1 = scaled_cubic(3, 1e-4);
  auto g2 = scaled_cubic(3, 1e-5);
  double res1 = minimal_residual_at(*g1, eq.gbar, xs, r);
  double res2 = minimal_residual_at(*g2, eq.gbar, xs, r);
  double h1 = second_fundamental_form_at(*g1, eq.gbar, xs, r).H;
  double h2 = second_fundamental_form_at(*g2, eq.gbar, xs, r).H;
  // the normalization factor is a smooth nonvanishing function of the point
  CHECK(res1 / h1 == doctest::Approx(res2 / h2).epsilon(1e-3));
  CHECK(std::abs(res1 / h1) > 1e-6);
}

TEST_CASE("radial reduction reproduces the cap profile") {
  Scenario cap = build_scenario("spherical_cap");
  auto exact = cap.exact_solution;
  VecN<double> xs = sample_point3();
  double r_from = 0.7;
  ZJet2 z0 = exact->z_jet2(xs, r_from);
  std::vector<double> record = {0.5, 0.2, 0.05, 0.01, 1e-3};
  RadialSolution sol =
      integrate_radial_graph(cap, r_from, z0.z, z0.dz[3] * r_from, record, 1e-12);
  for (size_t i = 0; i < record.size(); ++i) {
    double expect = exact->z_jet2(xs, record[i]).z;
    CHECK(sol.z[i] == doctest::Approx(expect).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("cohomogeneity one solve of the geodesic slice is identically zero") {
  Scenario eq = build_scenario("equatorial_s3");
  SolveResult res = solve_cohomogeneity_one(eq);
  CHECK(res.chi == 1);
  VecN<double> xs = sample_point3();
  double worst = 0.0;
  for (double r = eq.grid.r_min * 1.01; r < eq.grid.r0; r *= 1.7)
    worst = std::max(worst, std::abs(res.surface->z_jet2(xs, r).z));
  CHECK(worst < 1e-10);
}

TEST_CASE("cohomogeneity one solve matches the closed form cap") {
  Scenario cap = build_scenario("spherical_cap");
  SolveResult res = solve_cohomogeneity_one(cap);
  CHECK(res.residual_norm < 1e-8);
  VecN<double> xs = sample_point3();
  double worst = 0.0;
  for (double r = cap.grid.r_min * 1.01; r < cap.grid.r0 * 0.999; r *= 1.5) {
    double got = res.surface->z_jet2(xs, r).z;
    double expect = cap.exact_solution->z_jet2(xs, r).z;
    worst = std::max(worst, std::abs(got - expect));
  }
  CHECK(worst < 1e-5);
}

TEST_CASE("clifford scenario branches solve and collapse distinctly") {
  Scenario cl = build_scenario("clifford_s2xs1");
  BranchScan scan = scan_cohomogeneity_branches(cl);
  REQUIRE(scan.branches.size() == 2);
  const SolveResult& first = scan.branches[0];
  const SolveResult& second = scan.branches[1];
  CHECK(first.collapse_info == "circle_factor_collapses");
  CHECK(first.chi == 2);
  CHECK(second.collapse_info == "sphere_factor_collapses");
  CHECK(second.chi == 0);
  CHECK(first.residual_norm < 1e-8);
  CHECK(second.residual_norm < 1e-8);

  // both solutions satisfy the continuum equation along the collar
  VecN<double> xs = sample_point3();
  for (const SolveResult* res : {&first, &second}) {
    double worst = 0.0;
    for (double r = 3e-3; r < cl.grid.r0 * 0.99; r *= 1.6)
      worst = std::max(worst, std::abs(minimal_residual_at(*res->surface, cl.gbar, xs, r)));
    CHECK(worst < 2e-5);  // spline representation of the radial profile
  }
}

TEST_CASE("full grid newton solve of the geodesic slice") {
  Scenario eq = build_scenario("equatorial_s3");
  SolveResult res = solve_graph(eq);
  CHECK(res.residual_norm <= eq.solve.tol * 10);
  VecN<double> xs = sample_point3();
  double worst = 0.0;
  for (double r = 0.015; r < eq.grid.r0 * 0.98; r *= 1.6)
    worst = std::max(worst, std::abs(res.surface->z_jet2(xs, r).z));
  CHECK(worst < 1e-8);
}

TEST_CASE("full grid newton solve matches the cap oracle") {
  Scenario cap = build_scenario("spherical_cap");
  SolveResult res = solve_graph(cap);
  CHECK(res.residual_norm <= cap.solve.tol * 10);
  VecN<double> xs(3);
  xs[0] = 1.55;
  xs[1] = 1.45;
  xs[2] = 1.05;
  double worst = 0.0;
  for (double r = 0.02; r < cap.grid.r0 * 0.98; r *= 1.4) {
    double got = res.surface->z_jet2(xs, r).z;
    double expect = cap.exact_solution->z_jet2(xs, r).z;
    worst = std::max(worst, std::abs(got - expect));
  }
  CHECK(worst < 1e-5);
}

TEST_CASE("grid and symmetry reductions agree on the clifford scenario") {
  Scenario cl = build_scenario("clifford_s2xs1");
  SolveResult sym = solve_cohomogeneity_one(cl);
  SolveResult grid = solve_graph(cl);  // outer data from the symmetric solve
  VecN<double> xs(3);
  xs[0] = 1.5;
  xs[1] = 0.95;
  xs[2] = 1.15;
  double worst = 0.0;
  for (double r = 0.02; r < cl.grid.r0 * 0.98; r *= 1.4)
    worst = std::max(worst,
                     std::abs(grid.surface->z_jet2(xs, r).z - sym.surface->z_jet2(xs, r).z));
  CHECK(worst < 1e-5);
}

TEST_CASE("halving the grid spacing cuts the truncation residual by three or more") {
  Scenario cap = build_scenario("spherical_cap");
  double coarse = discrete_residual_norm(cap, *cap.exact_solution, 25);
  double fine = discrete_residual_norm(cap, *cap.exact_solution, 49);
  CHECK(coarse / fine >= 3.0);
}

TEST_CASE("two dimensional scenarios solve") {
  SUBCASE("geodesic disk") {
    Scenario disk = build_scenario("geodesic_circle_2d");
    SolveResult res = solve_cohomogeneity_one(disk);
    CHECK(res.chi == 1);
    VecN<double> xs(1);
    xs[0] = 0.8;
    CHECK(std::abs(res.surface->z_jet2(xs, 0.3).z) < 1e-10);
  }
  SUBCASE("cap disk against the closed form") {
    Scenario cap = build_scenario("cap_circle_2d");
    SolveResult res = solve_cohomogeneity_one(cap);
    VecN<double> xs(1);
    xs[0] = 0.8;
    double worst = 0.0;
    for (double r = 0.01; r < cap.grid.r0 * 0.99; r *= 1.5)
      worst = std::max(worst,
                       std::abs(res.surface->z_jet2(xs, r).z - cap.exact_solution->z_jet2(xs, r).z));
    CHECK(worst < 1e-6);
  }
  SUBCASE("rotational annulus between two circles") {
    Scenario ann = build_scenario("annulus_2d");
    SolveResult res = solve_cohomogeneity_one(ann);
    CHECK(res.chi == 0);
    CHECK(res.collapse_info == "none");
    CHECK(res.residual_norm < 1e-8);
    // catenoid type profile bends away from its boundary circle
    VecN<double> xs(1);
    xs[0] = 0.8;
    double z_mid = res.surface->z_jet2(xs, ann.grid.r0 * 0.9).z;
    CHECK(std::abs(z_mid) > 1e-4);
  }
}
