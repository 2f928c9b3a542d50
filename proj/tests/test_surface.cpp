#include <doctest.h>

#include <cmath>

#include "renarea/quadrature.hpp"
#include "renarea/scenario.hpp"
#include "renarea/surface.hpp"

using namespace renarea;

namespace {

MetricField flat_product_field(int dsig) {
  const int dX = dsig + 2;
  ChartBox b;
  b.dim = dX;
  b.name = "flat_product";
  for (int i = 0; i < dX; ++i) {
    b.lo[i] = i + 1 == dX ? 1e-9 : -5.0;
    b.hi[i] = 5.0;
  }
  return MetricField("flat_product", b, 6, [dX](const auto& x) {
    using T = std::decay_t<decltype(x[0])>;
    MatN<T> g = MatN<T>::identity(dX);
    g(0, 0) += T(0.0) * x[0];
    return g;
  });
}

std::shared_ptr<ExactGraph> tilted_plane(int dsig, double c) {
  return std::make_shared<ExactGraph>(dsig, 1e-4, 2.0, [c](const auto& x) {
    using T = std::decay_t<decltype(x[0])>;
    return c * x[0];
  });
}

std::shared_ptr<ExactGraph> cubic_bump(int dsig, double delta) {
  return std::make_shared<ExactGraph>(dsig, 1e-4, 1.5, [delta, dsig](const auto& x) {
    using T = std::decay_t<decltype(x[0])>;
    T r = x[dsig];
    return delta * r * r * r;
  });
}

const double kLat0 = 0.3;

}  // namespace

TEST_CASE("induced metric of the zero graph reproduces the slice blocks") {
  Scenario eq = build_scenario("equatorial_s3");
  VecN<double> xs(3);
  xs[0] = 1.2;
  xs[1] = 1.4;
  xs[2] = 0.7;
  double r = 0.9;
  MatN<double> h = induced_metric_at(*eq.exact_solution, eq.gbar, xs, r);
  double w2 = std::pow(1.0 - r * r / 4.0, 2);
  CHECK(h(3, 3) == doctest::Approx(1.0).epsilon(1e-13));      // radial direction
  CHECK(h(0, 0) == doctest::Approx(w2).epsilon(1e-13));       // chi1 block of the 3-sphere
  CHECK(h(0, 3) == doctest::Approx(0.0).epsilon(1e-13));
  CHECK(h(1, 1) == doctest::Approx(w2 * std::pow(std::sin(1.2), 2)).epsilon(1e-12));
}

TEST_CASE("tilted plane in a flat ambient") {
  MetricField flat = flat_product_field(3);
  auto plane = tilted_plane(3, 0.4);
  VecN<double> xs(3);
  xs[0] = 0.3;
  xs[1] = -0.2;
  xs[2] = 0.8;
  MatN<double> h = induced_metric_at(*plane, flat, xs, 1.0);
  CHECK(h(0, 0) == doctest::Approx(1.0 + 0.16).epsilon(1e-14));
  CHECK(h(0, 1) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(h(3, 3) == doctest::Approx(1.0).epsilon(1e-14));
  // plane is totally geodesic in flat space
  SecondFundamentalData sd = second_fundamental_form_at(*plane, flat, xs, 1.0);
  CHECK(std::abs(sd.H) < 1e-13);
  CHECK(sd.invariant_B2 < 1e-24);
}

TEST_CASE("unit normal is orthogonal and oriented") {
  Scenario cap = build_scenario("spherical_cap");
  VecN<double> xs(3);
  xs[0] = 1.1;
  xs[1] = 1.3;
  xs[2] = 0.5;
  for (double r : {0.05, 0.3, 0.7}) {
    GraphFrame f = graph_frame(*cap.exact_solution, cap.gbar, xs, r);
    NormalData nd = unit_normal_at(*cap.exact_solution, cap.gbar, xs, r);
    CHECK(inner(f.gbar, nd.mu_compact, nd.mu_compact) == doctest::Approx(1.0).epsilon(1e-12));
    for (int al = 0; al < 4; ++al)
      CHECK(std::abs(inner(f.gbar, nd.mu_compact, f.tangent[al])) < 1e-10);
    CHECK(nd.mu_compact[3] > 0.0);  // oriented toward increasing x4
  }
}

TEST_CASE("boundary fundamental forms across the catalog") {
  SUBCASE("equatorial sphere is totally geodesic") {
    Scenario eq = build_scenario("equatorial_s3");
    BoundaryForms bf = boundary_fundamental_forms(eq.g_inf, eq.sigma.nodes[17]);
    CHECK(std::abs(bf.eta) < 1e-12);
    CHECK(bf.II_ring_norm2 < 1e-24);
  }
  SUBCASE("cap boundary is umbilic with eta 3 tan(lat)") {
    Scenario cap = build_scenario("spherical_cap");
    for (int i : {3, 100, 400}) {
      BoundaryForms bf = boundary_fundamental_forms(cap.g_inf, cap.sigma.nodes[i]);
      CHECK(bf.eta == doctest::Approx(3.0 * std::tan(kLat0)).epsilon(1e-10));
      CHECK(bf.II_ring_norm2 < 1e-20);
    }
  }
  SUBCASE("generalized clifford boundary is minimal with |II|^2 = 3") {
    Scenario cl = build_scenario("clifford_s2xs1");
    for (int i : {5, 222, 410}) {
      BoundaryForms bf = boundary_fundamental_forms(cl.g_inf, cl.sigma.nodes[i]);
      CHECK(std::abs(bf.eta) < 1e-12);
      CHECK(bf.II_ring_norm2 == doctest::Approx(3.0).epsilon(1e-11));
    }
    double total = 0.0;
    std::vector<double> w = sigma_volume_weights(cl.sigma, cl.k_inf);
    for (int i = 0; i < cl.sigma.size(); ++i)
      total += w[i] * boundary_fundamental_forms(cl.g_inf, cl.sigma.nodes[i]).II_ring_norm2;
    CHECK(total == doctest::Approx(16.0 * kPi * kPi / std::sqrt(3.0)).epsilon(1e-9));
  }
  SUBCASE("circle boundaries in the 2d mode") {
    Scenario disk = build_scenario("geodesic_circle_2d");
    BoundaryForms b0 = boundary_fundamental_forms(disk.g_inf, disk.sigma.nodes[3]);
    CHECK(std::abs(b0.eta) < 1e-13);
    Scenario cap2 = build_scenario("cap_circle_2d");
    BoundaryForms b1 = boundary_fundamental_forms(cap2.g_inf, cap2.sigma.nodes[3]);
    CHECK(b1.eta == doctest::Approx(std::tan(0.25)).epsilon(1e-11));
    CHECK(b1.II_ring_norm2 < 1e-24);  // one dimensional boundaries are umbilic
  }
}

TEST_CASE("second fundamental form of the geodesic slice vanishes in both scales") {
  Scenario eq = build_scenario("equatorial_s3");
  VecN<double> xs(3);
  xs[0] = 1.5;
  xs[1] = 1.0;
  xs[2] = 2.2;
  for (double r : {0.02, 0.4, 1.1}) {
    SecondFundamentalData sd = second_fundamental_form_at(*eq.exact_solution, eq.gbar, xs, r);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        CHECK(std::abs(sd.B_lowered(i, j)) < 1e-11);
        CHECK(std::abs(sd.B_bar_lowered(i, j)) < 1e-11);
      }
  }
}

TEST_CASE("geodesic cap stays totally geodesic through the graph machinery") {
  // strong end-to-end check of normals, Christoffel symbols and curvature
  Scenario cap = build_scenario("spherical_cap");
  VecN<double> xs(3);
  xs[0] = 1.2;
  xs[1] = 1.5;
  xs[2] = 0.9;
  for (double r : {0.05, 0.2, 0.6}) {
    SecondFundamentalData sd = second_fundamental_form_at(*cap.exact_solution, cap.gbar, xs, r);
    CHECK(std::abs(sd.H) < 1e-9);
    CHECK(sd.invariant_B2 < 1e-18);
    GaussResiduals gr = gauss_identity_residuals(*cap.exact_solution, cap.gbar, xs, r);
    CHECK(std::abs(gr.traced) < 1e-8);
    CHECK(std::abs(gr.squared) < 1e-6);
    CurvatureBundle yb = surface_curvature_at(*cap.exact_solution, cap.gbar, xs, r, true);
    CHECK(yb.scalar == doctest::Approx(-12.0).epsilon(1e-9));
  }
}

TEST_CASE("conformal change law for the second fundamental form") {
  // non-geodesic graph: both computation paths must agree componentwise
  Scenario eq = build_scenario("equatorial_s3");
  auto bump = cubic_bump(3, 0.08);
  VecN<double> xs(3);
  xs[0] = 1.4;
  xs[1] = 1.2;
  xs[2] = 1.8;
  for (double r : {0.1, 0.5, 0.9}) {
    SecondFundamentalData sd = second_fundamental_form_at(*bump, eq.gbar, xs, r);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        CHECK(sd.B_lowered(i, j) ==
              doctest::Approx(sd.B_conformal_path(i, j)).epsilon(1e-9).scale(1.0));
    CHECK(sd.invariant_B2 == doctest::Approx(sd.invariant_B2_compact).epsilon(1e-10).scale(1.0));
    CHECK(sd.invariant_B4 == doctest::Approx(sd.invariant_B4_compact).epsilon(1e-10).scale(1.0));
    CHECK(sd.invariant_B2sq == doctest::Approx(sd.invariant_B2sq_compact).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("traced gauss residual grows quadratically with the perturbation") {
  // the traced identity fails exactly by the squared mean curvature
  Scenario eq = build_scenario("equatorial_s3");
  VecN<double> xs(3);
  xs[0] = 1.3;
  xs[1] = 1.1;
  xs[2] = 0.4;
  double r = 0.5;
  auto b1 = cubic_bump(3, 1e-3);
  auto b2 = cubic_bump(3, 2e-3);
  double t1 = std::abs(gauss_identity_residuals(*b1, eq.gbar, xs, r).traced);
  double t2 = std::abs(gauss_identity_residuals(*b2, eq.gbar, xs, r).traced);
  CHECK(t2 / t1 == doctest::Approx(4.0).epsilon(0.05));
  SecondFundamentalData sd = second_fundamental_form_at(*b1, eq.gbar, xs, r);
  CHECK(t1 == doctest::Approx(sd.H * sd.H).epsilon(1e-4));
}

TEST_CASE("slice data of the geodesic slice matches closed forms") {
  Scenario eq = build_scenario("equatorial_s3");
  VecN<double> xs(3);
  xs[0] = 1.2;
  xs[1] = 1.4;
  xs[2] = 0.7;
  double r = 0.6;
  SliceData sl = slice_data(*eq.exact_solution, eq.gbar, xs, r);
  double f = 1.0 - r * r / 4.0;
  CHECK(sl.dr_norm2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sl.lap_r == doctest::Approx(-3.0 * r / (2.0 * f)).epsilon(1e-10));
  // slice shape: L = r/(2f) k
  MatN<double> kinv = inverse(sl.kbar);
  double kappa = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) kappa += kinv(a, b) * sl.Lbar(a, b);
  CHECK(kappa == doctest::Approx(3.0 * r / (2.0 * f)).epsilon(1e-10));
  CHECK(sl.Hbar == doctest::Approx(3.0 * r / (2.0 * f)).epsilon(1e-10));
  CHECK(std::abs(sl.hess_r(3, 3)) < 1e-11);
}

TEST_CASE("cap slice sees the quadratic graph in |dr|^2") {
  Scenario cap = build_scenario("spherical_cap");
  VecN<double> xs(3);
  xs[0] = 1.2;
  xs[1] = 1.4;
  xs[2] = 0.7;
  std::vector<double> rs, dev;
  for (double r = 0.01; r < 0.2; r *= 1.4) {
    SliceData sl = slice_data(*cap.exact_solution, cap.gbar, xs, r);
    rs.push_back(r);
    dev.push_back(std::abs(sl.dr_norm2 - 1.0));
  }
  double slope = loglog_slope(rs, dev, 1e-14);
  CHECK(slope == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("boundary extrapolation utilities") {
  std::vector<double> r = {0.01, 0.02, 0.03, 0.04, 0.05};
  std::vector<double> v;
  for (double x : r) v.push_back(3.0 - 2.0 * x * x + 0.7 * x * x * x * x);
  CHECK(extrapolate_to_zero_r2(r, v) == doctest::Approx(3.0).epsilon(1e-10));

  std::vector<double> rr, vv;
  for (double x = 0.01; x < 0.3; x *= 1.3) {
    rr.push_back(x);
    vv.push_back(2.5 * std::pow(x, 3.0) * (1 + 0.1 * x));
  }
  CHECK(loglog_slope(rr, vv, 1e-14) == doctest::Approx(3.0).epsilon(0.02));
}
