#include "renarea/scenario.hpp"

#include <cmath>
#include <map>

namespace renarea {

namespace {

ChartBox box_nd(std::initializer_list<std::array<double, 3>> spec, const std::string& name) {
  // each entry: lo, hi, periodic flag
  ChartBox b;
  b.dim = static_cast<int>(spec.size());
  b.name = name;
  int i = 0;
  for (const auto& e : spec) {
    b.lo[i] = e[0];
    b.hi[i] = e[1];
    b.periodic[i] = e[2] != 0.0;
    ++i;
  }
  return b;
}

// unit ball model of hyperbolic space, cartesian chart
MetricField make_ball_metric(int dim) {
  ChartBox b;
  b.dim = dim;
  b.name = "ball" + std::to_string(dim);
  for (int i = 0; i < dim; ++i) {
    b.lo[i] = -1.0;
    b.hi[i] = 1.0;
  }
  return MetricField("hyperbolic_ball_" + std::to_string(dim) + "d", b, 6, [dim](const auto& x) {
    using T = std::decay_t<decltype(x[0])>;
    T rho2 = T(0.0);
    for (int i = 0; i < dim; ++i) rho2 += x[i] * x[i];
    T f = 2.0 / (1.0 - rho2);
    T f2 = f * f;
    MatN<T> g(dim);
    for (int i = 0; i < dim; ++i) g(i, i) = f2;
    return g;
  });
}

// round 3-sphere block in hyperspherical coordinates chi1, chi2, phi
template <class T>
void add_s3_block(MatN<T>& g, const T& chi1, const T& chi2, const T& scale2, int offset) {
  T s1 = sin(chi1);
  T s2 = sin(chi2);
  g(offset + 0, offset + 0) = scale2;
  g(offset + 1, offset + 1) = scale2 * s1 * s1;
  g(offset + 2, offset + 2) = scale2 * s1 * s1 * s2 * s2;
}

// normal form metric dr^2 + (1 - r^2/4)^2 gM for the rotational family:
// coordinates (chi1, chi2, phi, x4, r), boundary latitude lat0
MetricField make_rotational_gbar(double lat0) {
  ChartBox b = box_nd({{0.0, kPi, 0}, {0.0, kPi, 0}, {0.0, 2 * kPi, 1}, {-0.75, 0.75, 0}, {1e-7, 1.9, 0}},
                      "rotational_collar");
  return MetricField("hyperbolic_normal_form_5d", b, 6, [lat0](const auto& x) {
    using T = std::decay_t<decltype(x[0])>;
    MatN<T> g(5);
    T r = x[4];
    T w = 1.0 - r * r / 4.0;
    T w2 = w * w;
    T c = cos(x[3] + lat0);
    add_s3_block(g, x[0], x[1], w2 * c * c, 0);
    g(3, 3) = w2;
    g(4, 4) = T(1.0);
    return g;
  });
}

MetricField make_rotational_ginf(double lat0) {
  ChartBox b = box_nd({{0.0, kPi, 0}, {0.0, kPi, 0}, {0.0, 2 * kPi, 1}, {-0.75, 0.75, 0}},
                      "rotational_boundary");
  return MetricField("round_s4", b, 6, [lat0](const auto& x) {
    using T = std::decay_t<decltype(x[0])>;
    MatN<T> g(4);
    T c = cos(x[3] + lat0);
    add_s3_block(g, x[0], x[1], c * c, 0);
    g(3, 3) = T(1.0);
    return g;
  });
}

MetricField make_rotational_kinf(double lat0) {
  ChartBox b = box_nd({{0.0, kPi, 0}, {0.0, kPi, 0}, {0.0, 2 * kPi, 1}}, "rotational_sigma");
  const double c2 = std::cos(lat0) * std::cos(lat0);
  return MetricField("round_s3_scaled", b, 6, [c2](const auto& x) {
    using T = std::decay_t<decltype(x[0])>;
    MatN<T> g(3);
    add_s3_block(g, x[0], x[1], T(c2), 0);
    return g;
  });
}

// clifford family: coordinates (theta, phi, psi, x4, r), orbit angle t0
MetricField make_clifford_gbar(double t0) {
  ChartBox b = box_nd({{0.0, kPi, 0}, {0.0, 2 * kPi, 1}, {0.0, 2 * kPi, 1}, {-0.55, 0.55, 0}, {1e-7, 1.9, 0}},
                      "clifford_collar");
  return MetricField("hyperbolic_normal_form_5d", b, 6, [t0](const auto& x) {
    using T = std::decay_t<decltype(x[0])>;
    MatN<T> g(5);
    T r = x[4];
    T w = 1.0 - r * r / 4.0;
    T w2 = w * w;
    T c = cos(x[3] + t0);
    T s = sin(x[3] + t0);
    T st = sin(x[0]);
    g(0, 0) = w2 * c * c;
    g(1, 1) = w2 * c * c * st * st;
    g(2, 2) = w2 * s * s;
    g(3, 3) = w2;
    g(4, 4) = T(1.0);
    return g;
  });
}

MetricField make_clifford_ginf(double t0) {
  ChartBox b = box_nd({{0.0, kPi, 0}, {0.0, 2 * kPi, 1}, {0.0, 2 * kPi, 1}, {-0.55, 0.55, 0}},
                      "clifford_boundary");
  return MetricField("round_s4", b, 6, [t0](const auto& x) {
    using T = std::decay_t<decltype(x[0])>;
    MatN<T> g(4);
    T c = cos(x[3] + t0);
    T s = sin(x[3] + t0);
    T st = sin(x[0]);
    g(0, 0) = c * c;
    g(1, 1) = c * c * st * st;
    g(2, 2) = s * s;
    g(3, 3) = T(1.0);
    return g;
  });
}

MetricField make_clifford_kinf(double t0) {
  ChartBox b = box_nd({{0.0, kPi, 0}, {0.0, 2 * kPi, 1}, {0.0, 2 * kPi, 1}}, "clifford_sigma");
  const double c2 = std::cos(t0) * std::cos(t0);
  const double s2 = std::sin(t0) * std::sin(t0);
  return MetricField("clifford_orbit", b, 6, [c2, s2](const auto& x) {
    using T = std::decay_t<decltype(x[0])>;
    MatN<T> g(3);
    T st = sin(x[0]);
    g(0, 0) = T(c2);
    g(1, 1) = c2 * st * st;
    g(2, 2) = T(s2);
    return g;
  });
}

// two dimensional mode: coordinates (phi, x4, r) in H^3
MetricField make_2d_gbar(double lat0) {
  ChartBox b = box_nd({{0.0, 2 * kPi, 1}, {-0.9, 0.9, 0}, {1e-7, 1.9, 0}}, "h3_collar");
  return MetricField("hyperbolic_normal_form_3d", b, 6, [lat0](const auto& x) {
    using T = std::decay_t<decltype(x[0])>;
    MatN<T> g(3);
    T r = x[2];
    T w = 1.0 - r * r / 4.0;
    T w2 = w * w;
    T c = cos(x[1] + lat0);
    g(0, 0) = w2 * c * c;
    g(1, 1) = w2;
    g(2, 2) = T(1.0);
    return g;
  });
}

MetricField make_2d_ginf(double lat0) {
  ChartBox b = box_nd({{0.0, 2 * kPi, 1}, {-0.9, 0.9, 0}}, "s2_boundary");
  return MetricField("round_s2", b, 6, [lat0](const auto& x) {
    using T = std::decay_t<decltype(x[0])>;
    MatN<T> g(2);
    T c = cos(x[1] + lat0);
    g(0, 0) = c * c;
    g(1, 1) = T(1.0);
    return g;
  });
}

MetricField make_2d_kinf(double lat0) {
  ChartBox b = box_nd({{0.0, 2 * kPi, 1}}, "circle_sigma");
  const double c2 = std::cos(lat0) * std::cos(lat0);
  return MetricField("circle_scaled", b, 6, [c2](const auto& x) {
    using T = std::decay_t<decltype(x[0])>;
    MatN<T> g(1);
    g(0, 0) = T(c2);
    return g;
  });
}

// 4d normal form for the volume mode, coordinates (chi1, chi2, phi, r)
MetricField make_h4_gbar() {
  ChartBox b = box_nd({{0.0, kPi, 0}, {0.0, kPi, 0}, {0.0, 2 * kPi, 1}, {1e-7, 1.9, 0}}, "h4_collar");
  return MetricField("hyperbolic_normal_form_4d", b, 6, [](const auto& x) {
    using T = std::decay_t<decltype(x[0])>;
    MatN<T> g(4);
    T r = x[3];
    T w = 1.0 - r * r / 4.0;
    add_s3_block(g, x[0], x[1], w * w, 0);
    g(3, 3) = T(1.0);
    return g;
  });
}

SigmaChart make_s3_chart(int n_polar = 8, int n_azimuth = 8) {
  SigmaChart c;
  c.dim = 3;
  c.axes = {gauss_legendre(n_polar, 0.0, kPi), gauss_legendre(n_polar, 0.0, kPi),
            trapezoid_periodic(n_azimuth, 0.0, 2 * kPi)};
  c.periodic = {false, false, true};
  c.build_lattice();
  return c;
}

SigmaChart make_clifford_chart(int n_polar = 8, int n_azimuth = 8) {
  SigmaChart c;
  c.dim = 3;
  c.axes = {gauss_legendre(n_polar, 0.0, kPi), trapezoid_periodic(n_azimuth, 0.0, 2 * kPi),
            trapezoid_periodic(n_azimuth, 0.0, 2 * kPi)};
  c.periodic = {false, true, true};
  c.build_lattice();
  return c;
}

SigmaChart make_circle_chart(int n = 16) {
  SigmaChart c;
  c.dim = 1;
  c.axes = {trapezoid_periodic(n, 0.0, 2 * kPi)};
  c.periodic = {true};
  c.build_lattice();
  return c;
}

std::shared_ptr<const ExactGraph> make_zero_graph(int dsig, double rmin, double rmax) {
  return std::make_shared<ExactGraph>(dsig, rmin, rmax, [](const auto& x) {
    using T = std::decay_t<decltype(x[0])>;
    return T(0.0) * x[0];
  });
}

// geodesic cap through the latitude lat0 circle or sphere; ball model gives
// sin(lat) = sin(lat0) (1 + rho^2) / (2 rho) along the surface
std::shared_ptr<const ExactGraph> make_cap_graph(int dsig, double lat0, double rmin, double rmax) {
  const double s0 = std::sin(lat0);
  return std::make_shared<ExactGraph>(dsig, rmin, rmax, [s0, lat0, dsig](const auto& x) {
    using T = std::decay_t<decltype(x[0])>;
    T r = x[dsig];  // radial slot
    T rho = (2.0 - r) / (2.0 + r);
    T u = s0 * (1.0 + rho * rho) / (2.0 * rho);
    return asin(u) - lat0;
  });
}

Scenario base_rotational_5d(const std::string& id, double lat0) {
  Scenario s;
  s.id = id;
  s.dim_sigma = 3;
  s.gbar = make_rotational_gbar(lat0);
  s.g_inf = make_rotational_ginf(lat0);
  s.k_inf = make_rotational_kinf(lat0);
  s.g_ball = make_ball_metric(5);
  s.sigma = make_s3_chart();
  s.grid.x_shape = {4, 4, 4};
  s.grid.x_lo = {1.3, 1.2, 0.8};
  s.grid.x_hi = {1.8, 1.7, 1.3};
  s.grid.nr = 48;
  s.grid.r0 = 0.8;
  s.symmetry = Symmetry::rotational;
  s.sigma_sample = VecN<double>(3);
  s.sigma_sample[0] = 1.45;
  s.sigma_sample[1] = 1.35;
  s.sigma_sample[2] = 1.05;
  s.orbit.m = 3;
  s.orbit.n = 0;
  s.orbit.ambient_dim = 5;
  s.orbit.orbit_constant = 2.0 * kPi * kPi;
  s.orbit.t0 = lat0;
  s.eta_expected = 3.0 * std::tan(lat0);
  s.chi_hint = 1;
  if (lat0 == 0.0) {
    s.exact_solution = make_zero_graph(3, s.grid.r_min, s.grid.r0);
  } else {
    s.exact_solution = make_cap_graph(3, lat0, s.grid.r_min, s.grid.r0);
  }
  return s;
}

Scenario base_2d(const std::string& id, double lat0) {
  Scenario s;
  s.id = id;
  s.dim_sigma = 1;
  s.gbar = make_2d_gbar(lat0);
  s.g_inf = make_2d_ginf(lat0);
  s.k_inf = make_2d_kinf(lat0);
  s.g_ball = make_ball_metric(3);
  s.sigma = make_circle_chart();
  s.grid.x_shape = {5};
  s.grid.x_lo = {0.5};
  s.grid.x_hi = {1.5};
  s.grid.nr = 64;
  s.grid.r0 = 0.8;
  s.symmetry = Symmetry::rotational;
  s.sigma_sample = VecN<double>(1);
  s.sigma_sample[0] = 1.0;
  s.orbit.m = 1;
  s.orbit.n = 0;
  s.orbit.ambient_dim = 3;
  s.orbit.orbit_constant = 2.0 * kPi;
  s.orbit.t0 = lat0;
  s.eta_expected = std::tan(lat0);
  s.chi_hint = 1;
  if (lat0 == 0.0) {
    s.exact_solution = make_zero_graph(1, s.grid.r_min, s.grid.r0);
  } else {
    s.exact_solution = make_cap_graph(1, lat0, s.grid.r_min, s.grid.r0);
  }
  return s;
}

const double kCliffordAngle = std::atan(1.0 / std::sqrt(2.0));

Scenario make_clifford_scenario() {
  Scenario s;
  s.id = "clifford_s2xs1";
  s.dim_sigma = 3;
  s.gbar = make_clifford_gbar(kCliffordAngle);
  s.g_inf = make_clifford_ginf(kCliffordAngle);
  s.k_inf = make_clifford_kinf(kCliffordAngle);
  s.g_ball = make_ball_metric(5);
  s.sigma = make_clifford_chart();
  s.grid.x_shape = {4, 4, 4};
  s.grid.x_lo = {1.2, 0.7, 0.9};
  s.grid.x_hi = {1.8, 1.2, 1.4};
  s.grid.nr = 48;
  s.grid.r0 = 0.4;
  s.symmetry = Symmetry::clifford_type;
  s.sigma_sample = VecN<double>(3);
  s.sigma_sample[0] = 1.5;
  s.sigma_sample[1] = 0.95;
  s.sigma_sample[2] = 1.15;
  s.orbit.m = 2;
  s.orbit.n = 1;
  s.orbit.ambient_dim = 5;
  s.orbit.orbit_constant = 8.0 * kPi * kPi;
  s.orbit.t0 = kCliffordAngle;
  s.eta_expected = 0.0;
  s.chi_hint = 0;  // inferred from the collapsing factor
  return s;
}

Scenario make_annulus_scenario() {
  Scenario s = base_2d("annulus_2d", 0.35);
  s.exact_solution.reset();
  s.chi_hint = 0;
  s.boundary_components = 2;
  s.grid.r0 = 0.6;
  return s;
}

Scenario make_h4_scenario() {
  Scenario s;
  s.id = "hyperbolic_4d";
  s.dim_sigma = 3;
  s.has_surface = false;
  s.gbar = make_h4_gbar();
  s.g_inf = MetricField();  // boundary objects unused in volume mode
  s.k_inf = make_rotational_kinf(0.0);
  s.g_ball = make_ball_metric(4);
  s.sigma = make_s3_chart();
  s.grid.r0 = 0.8;
  s.chi_hint = 1;
  return s;
}

Scenario make_ball5_scenario() {
  Scenario s;
  s.id = "hyperbolic_ball_5d";
  s.dim_sigma = 3;
  s.has_surface = false;
  s.gbar = make_rotational_gbar(0.0);
  s.g_ball = make_ball_metric(5);
  s.sigma = make_s3_chart();
  s.chi_hint = 1;
  return s;
}

}  // namespace

const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries = {
      {"equatorial_s3", "hyperbolic_normal_form_5d", "equatorial_sphere", 1,
       "totally geodesic slice, closed form throughout"},
      {"spherical_cap", "hyperbolic_normal_form_5d", "spherical_cap(0.3)", 1,
       "umbilic round boundary, nonzero mean curvature, closed form cap"},
      {"clifford_s2xs1", "hyperbolic_normal_form_5d", "clifford_type", std::nullopt,
       "minimal non-umbilic boundary, cohomogeneity one solve"},
      {"geodesic_circle_2d", "hyperbolic_3d", "geodesic_circle", 1,
       "two dimensional mode, totally geodesic disk"},
      {"cap_circle_2d", "hyperbolic_3d", "spherical_cap(0.25)", 1,
       "two dimensional mode, geodesic cap disk"},
      {"annulus_2d", "hyperbolic_3d", "custom_rotational(0.35)", 0,
       "two dimensional mode, rotational catenoid between two circles"},
      {"hyperbolic_4d", "hyperbolic_4d", "none", 1, "volume mode"},
      {"hyperbolic_ball_5d", "hyperbolic_ball_5d", "none", 1, "curvature kernel reference chart"},
  };
  return entries;
}

Scenario build_scenario(const std::string& id) {
  if (id == "equatorial_s3") return base_rotational_5d(id, 0.0);
  if (id == "spherical_cap") return base_rotational_5d(id, 0.3);
  if (id == "clifford_s2xs1") return make_clifford_scenario();
  if (id == "geodesic_circle_2d") return base_2d(id, 0.0);
  if (id == "cap_circle_2d") return base_2d(id, 0.25);
  if (id == "annulus_2d") return make_annulus_scenario();
  if (id == "hyperbolic_4d") return make_h4_scenario();
  if (id == "hyperbolic_ball_5d") return make_ball5_scenario();
  throw Error("unknown catalog id: " + id);
}

CatalogValidation validate_catalog_entry(const std::string& id) {
  CatalogValidation v;
  v.id = id;
  Scenario s = build_scenario(id);
  if (!s.has_surface) {
    v.ok = true;
    v.detail = "ambient-only entry";
    return v;
  }
  double worst_eta = 0.0, worst_ring = 0.0;
  for (int i = 0; i < s.sigma.size(); ++i) {
    BoundaryForms bf = boundary_fundamental_forms(s.g_inf, s.sigma.nodes[i]);
    worst_eta = std::max(worst_eta, std::abs(bf.eta - s.eta_expected));
    if (std::abs(s.eta_expected) > 0) worst_ring = std::max(worst_ring, bf.II_ring_norm2);
  }
  v.eta_deviation = worst_eta;
  v.umbilic_norm = worst_ring;
  v.ok = worst_eta <= 1e-8 && worst_ring <= 1e-8;
  v.detail = v.ok ? "boundary mean curvature matches the catalog value"
                  : "boundary validation failed";
  return v;
}

MetricField geodesic_slice_compact_4d() {
  Scenario s = make_h4_scenario();
  return s.gbar;
}

ScalarField radial_coordinate_field(int dim) {
  return ScalarField("r", dim, [dim](const auto& x) { return x[dim - 1]; });
}

}  // namespace renarea
