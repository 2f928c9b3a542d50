#pragma once

#include "renarea/scenario.hpp"

namespace renarea {

// ambient metric and its coordinate partials at a surface point, generic scalar
template <class T>
struct AmbientEval {
  int dX = 0;
  MatN<T> g;
  std::array<MatN<T>, kMaxDim> dg;
};

AmbientEval<double> ambient_eval(const MetricField& gbar, const VecN<double>& ambient_x);
// same, carrying sensitivity to a perturbation of the ambient point along dir
AmbientEval<DualSeed> ambient_eval_seeded(const MetricField& gbar, const VecN<double>& ambient_x,
                                          const VecN<double>& dir);
// series in r along the graph x4 = z(r) over a fixed Sigma point
AmbientEval<Jet> ambient_eval_jet(const MetricField& gbar, const VecN<double>& x_sigma,
                                  const Jet& z_jet);

// Euler-Lagrange expression of the area functional for the graph, multiplied
// by r (all catalog uses; keeps the expression regular near r = 0).
// r_scalar is the radial coordinate as a T scalar (the series variable for jets).
template <class T>
T graph_residual_times_r(int dsig, const AmbientEval<T>& amb, const VecN<T>& dz,
                         const MatN<T>& ddz, const T& r_scalar);

// plain residual of the displayed equation at a point of the surface
double minimal_residual_at(const GraphHypersurface& Y, const MetricField& gbar,
                           const VecN<double>& x_sigma, double r);

struct SolveResult {
  std::shared_ptr<GraphHypersurface> surface;
  double residual_norm = 0.0;
  int iterations = 0;
  std::string collapse_info;  // which orbit factor degenerates, or "none"
  int collapse_axis = -1;
  int chi = 0;
  double shoot_param = 0.0;
  std::optional<Trajectory> trajectory;
};

// all branches found over the scanned shooting interval
struct BranchScan {
  std::vector<SolveResult> branches;
  const SolveResult& best() const;  // placeholder ordering, pipeline reselects
};

SolveResult solve_cohomogeneity_one(const Scenario& scn);
BranchScan scan_cohomogeneity_branches(const Scenario& scn);

struct GraphSolveOptions {
  std::optional<std::function<double(const VecN<double>&, double)>> outer_bc;
  std::optional<std::function<double(const VecN<double>&, double)>> wall_bc;  // Dirichlet walls
  bool neumann_walls = true;
};
SolveResult solve_graph(const Scenario& scn, const GraphSolveOptions& opt = {});

// discrete residual of a given surface on the scenario grid (convergence checks)
double discrete_residual_norm(const Scenario& scn, const GraphHypersurface& Y, int nr_override = 0);

// radial reduction: integrate z(r) of the symmetric graph equation between radii,
// recording values at requested nodes; state is (z, dz/dlog r)
struct RadialSolution {
  std::vector<double> r;
  std::vector<double> z;
  std::vector<double> z_u;  // dz/dlog r
};
RadialSolution integrate_radial_graph(const Scenario& scn, double r_from, double z0, double zu0,
                                      const std::vector<double>& record_r, double tol);

}  // namespace renarea
