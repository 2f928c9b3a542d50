#pragma once

#include <optional>
#include <vector>

#include "renarea/curvature.hpp"
#include "renarea/field.hpp"

namespace renarea {

// Two factor orbit geometry in the unit ball model: orbits are products of
// round spheres with radii proportional to a and b, weight a^m b^n.
struct OrbitModel {
  int m = 0;                    // first factor dimension (weight exponent of a)
  int n = 0;                    // second factor dimension (weight exponent of b)
  int ambient_dim = 0;          // m + n + 2: orbit plus the two slice directions
  double orbit_constant = 1.0;  // volume of the unit orbit product
  double t0 = 0.0;              // boundary angle of the asymptotic orbit

  int surface_dim() const { return m + n + 1; }
};

struct ProfilePoint {
  double s = 0.0;  // euclidean arclength parameter
  double a = 0.0, b = 0.0;
  double theta = 0.0;  // tangent direction angle
  double kappa = 0.0;  // curvature of the trajectory at the point
};

struct Trajectory {
  std::vector<ProfilePoint> pts;
  int start_axis = -1;  // 0: started on b = 0 (second factor collapses), 1: a = 0
  double start_param = 0.0;

  double rho(int i) const;
  // normal-form radial coordinate and graph value at sample i
  double r_of(int i) const;
  double z_of(double t0, int i) const;
};

// conformal weight exponent: e^psi = Omega^{m+n+1} a^m b^n
double profile_log_weight(const OrbitModel& om, double a, double b);

// geodesic of the weighted length functional, from an axis start
// axis = 0: start at (a0, 0) moving into b > 0 (needs n >= 1)
// axis = 1: start at (0, b0) moving into a > 0 (needs m >= 1)
Trajectory integrate_profile(const OrbitModel& om, int axis, double start, double rho_stop,
                             double tol = 1e-12);

// same geodesic flow from an arbitrary regular interior start
Trajectory integrate_profile_free(const OrbitModel& om, double a0, double b0, double theta0,
                                  double rho_stop, double tol = 1e-12);

// state of the trajectory where rho crosses rho_match (interpolated on the ODE)
struct ProfileState {
  double a, b, theta;
  double r, z, z_r;  // graph data in the normal-form chart relative to t0
};
ProfileState state_at_rho(const OrbitModel& om, const Trajectory& traj, double rho_match);

// pointwise invariants of the invariant hypersurface at one profile sample,
// singular scale, via the ball model immersion
struct ProfileInvariants {
  double r = 0.0;
  double area_density = 0.0;  // dA/ds, orbit volume included
  double H = 0.0;
  double B2 = 0.0, B4 = 0.0, B2sq = 0.0;  // trace free second fundamental form
  double R = 0.0;
  double E2 = 0.0;
  double W2 = 0.0;
};
ProfileInvariants profile_invariants(const OrbitModel& om, const MetricField& g_ball,
                                     const ProfilePoint& pt);

// cached invariants along the trajectory, restricted to rho <= rho_cut
struct ProfileSample {
  double s = 0.0;
  ProfileInvariants inv;
};
std::vector<ProfileSample> profile_samples(const OrbitModel& om, const MetricField& g_ball,
                                           const Trajectory& traj, double rho_cut);

// trapezoid integral of f against the area density over cached samples
double profile_integrate(const std::vector<ProfileSample>& samples,
                         const std::function<double(const ProfileInvariants&)>& f);

}  // namespace renarea
