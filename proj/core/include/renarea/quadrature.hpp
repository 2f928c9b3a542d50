#pragma once

#include <functional>
#include <vector>

#include "renarea/field.hpp"

namespace renarea {

struct Quad1D {
  std::vector<double> x, w;
  int size() const { return static_cast<int>(x.size()); }
};

Quad1D gauss_legendre(int n, double a, double b);
// Uniform rule for smooth periodic integrands over one period.
Quad1D trapezoid_periodic(int n, double a, double b);
// Composite Gauss rule on [a, b] graded geometrically, for integrands with
// power behavior near a << b.
Quad1D log_graded(double a, double b, int nodes_per_octave = 10);

double integrate(const Quad1D& q, const std::function<double(double)>& f);

// Boundary manifold chart: quadrature lattice plus the metric on it.
struct SigmaChart {
  int dim = 0;
  std::vector<Quad1D> axes;            // per-axis rules (lattice)
  std::vector<bool> periodic;
  std::vector<VecN<double>> nodes;     // flattened lattice nodes
  std::vector<double> coord_weights;   // product of axis weights
  double volume = 0.0;                 // filled by finalize() given k_inf

  int size() const { return static_cast<int>(nodes.size()); }
  void build_lattice();
};

// integral over Sigma of f against the volume form of k_inf
double sigma_integrate(const SigmaChart& chart, const MetricField& k_inf,
                       const std::function<double(const VecN<double>&)>& f);

// per-node volume weights w_i * sqrt(det k_inf(x_i))
std::vector<double> sigma_volume_weights(const SigmaChart& chart, const MetricField& k_inf);

}  // namespace renarea
