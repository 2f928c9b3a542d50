#pragma once

#include <functional>
#include <memory>

#include "renarea/curvature.hpp"
#include "renarea/field.hpp"
#include "renarea/spline.hpp"

namespace renarea {

// Value, gradient and hessian of the graph function z at one point of the
// (x^a, r) domain. Index order: surface coordinates first, r last.
struct ZJet2 {
  int dsurf = 0;  // dsig + 1
  double z = 0.0;
  VecN<double> dz;
  MatN<double> ddz;
};

// A hypersurface given as x^4 = z(x^a, r) over a boundary chart times a radial
// interval. Concrete backends: closed forms, radial profiles, solver grids.
class GraphHypersurface {
 public:
  virtual ~GraphHypersurface() = default;

  int dim_sigma() const { return dsig_; }
  int dim_surface() const { return dsig_ + 1; }
  double r_min() const { return r_min_; }
  double r_max() const { return r_max_; }
  int orientation() const { return orientation_; }

  virtual ZJet2 z_jet2(const VecN<double>& x_sigma, double r) const = 0;

 protected:
  GraphHypersurface(int dsig, double rmin, double rmax, int orientation = +1)
      : dsig_(dsig), r_min_(rmin), r_max_(rmax), orientation_(orientation) {}

  int dsig_;
  double r_min_, r_max_;
  int orientation_;
};

// z given in closed form; derivatives by forward mode duals, exact.
class ExactGraph : public GraphHypersurface {
 public:
  template <class F>
  ExactGraph(int dsig, double rmin, double rmax, F f)
      : GraphHypersurface(dsig, rmin, rmax),
        f_hess_([f](const VecN<DualHess>& x) { return f(x); }),
        f_jet_([f](const VecN<Jet>& x) { return f(x); }) {}

  ZJet2 z_jet2(const VecN<double>& x_sigma, double r) const override;
  Jet z_jet_in_r(const VecN<double>& x_sigma, int order) const;

 private:
  std::function<DualHess(const VecN<DualHess>&)> f_hess_;
  std::function<Jet(const VecN<Jet>&)> f_jet_;
};

// Radial graph z(r), stored as a spline in log r. Used for cohomogeneity one
// solutions; x derivatives vanish.
class RadialGraph : public GraphHypersurface {
 public:
  RadialGraph(int dsig, std::vector<double> r_nodes, std::vector<double> z_values,
              double inner_slope_dlogr);

  ZJet2 z_jet2(const VecN<double>& x_sigma, double r) const override;
  const CubicSpline& spline() const { return spl_; }

 private:
  CubicSpline spl_;  // z as a function of u = log r
};

// Full grid graph from the PDE solver; radial axis splined in s = r^2 to
// match the solver grid.
class GridGraph : public GraphHypersurface {
 public:
  GridGraph(std::vector<std::vector<double>> x_axes, std::vector<SplineBC> x_bcs,
            std::vector<double> r_nodes, std::vector<double> z_values,
            double inner_slope_ds);

  ZJet2 z_jet2(const VecN<double>& x_sigma, double r) const override;

 private:
  TensorSpline spl_;  // axes: x..., s = r^2
  int spline_dim_;
};

// ---------------------------------------------------------------------------

// Tangent frame and induced data of the graph at one point, compact scale.
struct GraphFrame {
  int dsig = 0;
  int dY = 0;    // dsig + 1
  int dX = 0;    // dsig + 2
  double r = 0.0;
  VecN<double> ambient_x;  // (x^a..., z, r)
  ZJet2 zj;
  // tangent[al][c]: ambient components of the pushforward of d_alpha
  std::array<VecN<double>, kMaxDim> tangent;
  MatN<double> gbar;      // ambient compact metric at the point
  MatN<double> gbar_inv;
  MatN<double> hbar;      // induced compact metric, surface indices
  MatN<double> hbar_inv;
  MatN<double> hplus;     // singular induced metric
  MatN<double> hplus_inv;
};

GraphFrame graph_frame(const GraphHypersurface& Y, const MetricField& gbar,
                       const VecN<double>& x_sigma, double r);

MatN<double> induced_metric_at(const GraphHypersurface& Y, const MetricField& gbar,
                               const VecN<double>& x_sigma, double r);

// gplus-unit normal, ambient components; compact variant is r times singular.
struct NormalData {
  VecN<double> mu_singular;   // g_plus unit
  VecN<double> mu_compact;    // gbar unit (= r * mu_singular)
  double mu_compact_r;        // dr(mu_compact)
};
NormalData unit_normal_at(const GraphHypersurface& Y, const MetricField& gbar,
                          const VecN<double>& x_sigma, double r);

struct SecondFundamentalData {
  int dY = 0;
  MatN<double> B_lowered;         // singular scale, direct computation
  MatN<double> B_bar_lowered;     // compact scale
  MatN<double> B_conformal_path;  // Bbar/r + (mu_bar(r)/r^2) hbar
  MatN<double> B_ring;            // trace free part, singular scale
  double H = 0.0;                 // tr_{h+} B
  double H_bar = 0.0;
  double invariant_B2 = 0.0;      // |B̊|² in the singular scale
  double invariant_B4 = 0.0;
  double invariant_B2sq = 0.0;    // |B̊²|²
  double invariant_B2_compact = 0.0;  // same invariants built in the compact scale
  double invariant_B4_compact = 0.0;
  double invariant_B2sq_compact = 0.0;
};

SecondFundamentalData second_fundamental_form_at(const GraphHypersurface& Y,
                                                 const MetricField& gbar,
                                                 const VecN<double>& x_sigma, double r);

// Intrinsic curvature of the surface in the requested scale via the ambient
// curvature and the second fundamental form.
CurvatureBundle surface_curvature_at(const GraphHypersurface& Y, const MetricField& gbar,
                                     const VecN<double>& x_sigma, double r, bool singular_scale);

// traced and squared pointwise identities for a minimal surface in a 5d
// hyperbolic ambient (and their lower dimensional analogues)
struct GaussResiduals {
  double traced = 0.0;   // R_Y + |B|^2 + d(d-1)
  double squared = 0.0;  // R_Y^2 - (|B|^4 + 2d(d-1)|B|^2 + (d(d-1))^2)
};
GaussResiduals gauss_identity_residuals(const GraphHypersurface& Y, const MetricField& gbar,
                                        const VecN<double>& x_sigma, double r);

// induced metric with first derivatives along surface coordinates
struct InducedFirst {
  int dY = 0;
  MatN<double> h;
  std::array<MatN<double>, kMaxDim> dh;
};
InducedFirst induced_first(const GraphHypersurface& Y, const MetricField& gbar,
                           const VecN<double>& x_sigma, double r);

// level set r = const inside the surface: unit normal, induced metric, shape
struct SliceData {
  int dsig = 0;
  VecN<double> nu_bar;  // surface components, compact scale, points to larger r
  MatN<double> kbar;    // slice metric
  double sqrt_det_kbar = 0.0;
  MatN<double> Lbar;  // shape of the slice in the surface, compact scale
  double Hbar = 0.0;
  double dr_norm2 = 0.0;  // |dr|^2 on the surface
  double lap_r = 0.0;     // Laplacian of r on the surface, compact scale
  MatN<double> hess_r;    // Hessian of r on the surface
  MatN<double> hbar, hbar_inv;
};
SliceData slice_data(const GraphHypersurface& Y, const MetricField& gbar,
                     const VecN<double>& x_sigma, double r);

// Boundary objects of Sigma = {x4 = 0} inside (M, g_inf).
struct BoundaryForms {
  MatN<double> II;
  MatN<double> II_ring;
  MatN<double> k_inf;
  double eta = 0.0;
  double II_ring_norm2 = 0.0;
};
BoundaryForms boundary_fundamental_forms(const MetricField& g_inf, const VecN<double>& x_sigma);

// polynomial extrapolation in r^2 to r = 0 from the smallest sample radii
double extrapolate_to_zero_r2(const std::vector<double>& r, const std::vector<double>& v,
                              int n_use = 5);

// least squares log-log slope of |v| against r over a window
double loglog_slope(const std::vector<double>& r, const std::vector<double>& v,
                    double floor_abs = 1e-13);

}  // namespace renarea
