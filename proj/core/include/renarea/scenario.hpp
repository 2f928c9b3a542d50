#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "renarea/field.hpp"
#include "renarea/profile.hpp"
#include "renarea/quadrature.hpp"
#include "renarea/surface.hpp"

namespace renarea {

enum class Symmetry { none, rotational, clifford_type };

struct GridSpec {
  std::vector<int> x_shape;  // PDE lattice shape over the Sigma chart box
  std::vector<double> x_lo, x_hi;
  int nr = 64;              // PDE radial nodes, uniform in r^2
  double r_pde_min = 0.01;  // inner cutoff of the PDE grid (jet Dirichlet data)
  int nr_dense = 4096;      // log spaced radial nodes of the production surface
  double r_min = 1e-4;
  double r0 = 0.8;
};

struct LadderSpec {
  double eps_max_frac = 0.25;  // eps_max = frac * r0
  int count = 10;
  double ratio = 2.0;
};

struct SolveSpec {
  double tol = 1e-10;
  int max_iter = 30;
  int max_line_search = 12;
  double ode_tol = 1e-12;
  double r_match = 0.02;  // handoff radius of the shooting functional
};

struct Scenario {
  std::string id;
  int dim_sigma = 3;  // 1 or 3
  bool has_surface = true;

  MetricField gbar;    // compact normal form on (x^a..., x4, r)
  MetricField g_inf;   // boundary metric on (x^a..., x4)
  MetricField k_inf;   // metric of Sigma on (x^a...)
  MetricField g_ball;  // ball model ambient in cartesian coordinates

  SigmaChart sigma;
  GridSpec grid;
  LadderSpec ladder;
  SolveSpec solve;

  Symmetry symmetry = Symmetry::rotational;
  OrbitModel orbit;
  VecN<double> sigma_sample;  // regular chart point used by symmetric reductions
  double eta_expected = 0.0;
  int chi_hint = 0;  // 0: infer from the collapse structure
  int boundary_components = 1;
  int pinned_axis = -1;  // fix the collapsing factor; -1 scans branches

  std::shared_ptr<const ExactGraph> exact_solution;

  int ambient_dim() const { return dim_sigma + 2; }
  int surface_dim() const { return dim_sigma + 1; }
  // generalized quadratic graph coefficient eta / (2 dim_sigma)
  double z2_coefficient() const { return eta_expected / (2.0 * dim_sigma); }
};

struct CatalogEntry {
  std::string id;
  std::string ambient;
  std::string boundary;
  std::optional<int> chi_hint;
  std::string notes;
};

const std::vector<CatalogEntry>& catalog_entries();
Scenario build_scenario(const std::string& id);

struct CatalogValidation {
  std::string id;
  bool ok = false;
  double eta_deviation = 0.0;      // max |eta - expected| over Sigma samples
  double umbilic_norm = 0.0;       // max |II_ring|^2 for umbilic entries
  std::string detail;
};
CatalogValidation validate_catalog_entry(const std::string& id);

// 4d compactified slice geometry of the totally geodesic configuration,
// used by the conformal sigma2 identity checks
MetricField geodesic_slice_compact_4d();
ScalarField radial_coordinate_field(int dim);

}  // namespace renarea
