#pragma once

#include <map>

#include "renarea/solver.hpp"

namespace renarea {

struct EpsilonLadderFit {
  std::vector<double> epsilons;       // strictly decreasing
  std::vector<double> values;
  std::vector<double> basis;          // exponents, must contain 0
  std::vector<double> coefficients;   // value(eps) ~ sum coefficients[j] eps^basis[j]
  double condition_number = 0.0;
  double fit_residual = 0.0;
  double finite_part = 0.0;
  double finite_part_error = 0.0;     // leave-two-out spread
};

EpsilonLadderFit fit_expansion(const std::vector<double>& epsilons,
                               const std::vector<double>& values, std::vector<double> basis);

// coefficient of the given exponent, 0 when the exponent is not in the basis
double fitted_coefficient(const EpsilonLadderFit& fit, double exponent);

void write_ladder_csv(const EpsilonLadderFit& fit, const std::string& path);

enum class YField { one, b2, b4, w2, e2 };

// Regularized integrals over Y cap {r >= eps}: panel quadrature on the collar
// aligned with the ladder, interior contributions from the profile model.
class RenormContext {
 public:
  RenormContext(const Scenario& scn, const SolveResult& result);

  const Scenario& scenario() const { return *scn_; }
  const SolveResult& result() const { return res_; }
  const std::vector<double>& ladder_epsilons() const { return ladder_; }

  double integrate_over_Y_eps(YField f, double eps) const;
  double interior_integral(YField f) const;

  EpsilonLadderFit renormalized_area() const;
  // same fit with a diagnostic exponent added to the basis
  EpsilonLadderFit renormalized_area_diagnostic(double extra_exponent) const;

  EpsilonLadderFit b2_ladder() const;
  EpsilonLadderFit b2_flux_ladder() const;

  struct Convergent {
    double value = 0.0;
    double tail_estimate = 0.0;
  };
  Convergent convergent_integral(YField f) const;

  double boundary_ii2() const;  // ∮ |II_ring|^2 over the asymptotic boundary

  EpsilonLadderFit boundary_term_ladder() const;   // curvature boundary density fit
  EpsilonLadderFit boundary_sbar_ladder() const;
  std::map<std::string, std::vector<double>> boundary_term_parts() const;

 private:
  double collar_integral(YField f, double eps) const;
  double field_value(int pt_index, YField f) const;
  double flux_at(double eps) const;
  struct BoundaryDensity {
    double total = 0.0;
    double sbar = 0.0;
    std::map<std::string, double> parts;
  };
  BoundaryDensity boundary_density(double eps) const;

  const Scenario* scn_;
  SolveResult res_;
  std::vector<double> ladder_;
  std::vector<double> w_sigma_;

  // collar quadrature: panel nodes between consecutive ladder levels plus the
  // top panel up to r0; per point cached fields
  Quad1D rq_;
  std::vector<int> panel_of_;  // panel index of each quadrature node
  struct Cached {
    double dens = 0.0;  // sqrt(det hbar / det k_inf) * r^{-dY}
    double b2 = 0.0, b4 = 0.0, w2 = 0.0, e2 = 0.0;
  };
  std::vector<Cached> cache_;  // sigma-major: [i * rq + q]

  std::vector<ProfileSample> interior_;
  std::vector<CubicSpline> b2_radial_;  // per sigma node, |B_ring|^2 against log r
  std::vector<double> b2_grid_r_;
};

// volume regularization for an ambient-only catalog entry
EpsilonLadderFit renormalized_volume(const Scenario& scn);
double ambient_weyl_integral(const Scenario& scn);

}  // namespace renarea
