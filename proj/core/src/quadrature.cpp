#include "renarea/quadrature.hpp"

#include <cmath>

namespace renarea {

Quad1D gauss_legendre(int n, double a, double b) {
  RENAREA_CHECK(n >= 1, "quadrature order must be positive");
  Quad1D q;
  q.x.resize(n);
  q.w.resize(n);
  // Newton iteration on Legendre polynomials, standard construction.
  for (int i = 0; i < n; ++i) {
    double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double p0 = 0.0, p1 = 0.0, dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      p0 = 1.0;
      p1 = 0.0;
      for (int k = 0; k < n; ++k) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k + 1.0) * t * p1 - k * p2) / (k + 1.0);
      }
      dp = n * (t * p0 - p1) / (t * t - 1.0);
      double step = p0 / dp;
      t -= step;
      if (std::abs(step) < 1e-15) break;
    }
    q.x[i] = 0.5 * (a + b) + 0.5 * (b - a) * t;
    q.w[i] = (b - a) / ((1.0 - t * t) * dp * dp);
  }
  return q;
}

Quad1D trapezoid_periodic(int n, double a, double b) {
  Quad1D q;
  q.x.resize(n);
  q.w.assign(n, (b - a) / n);
  for (int i = 0; i < n; ++i) q.x[i] = a + (b - a) * i / n;
  return q;
}

Quad1D log_graded(double a, double b, int nodes_per_octave) {
  RENAREA_CHECK(a > 0.0 && b > a, "log graded rule needs 0 < a < b");
  int octaves = std::max(1, static_cast<int>(std::ceil(std::log2(b / a))));
  double la = std::log(a), lb = std::log(b);
  Quad1D q;
  for (int k = 0; k < octaves; ++k) {
    double u0 = la + (lb - la) * k / octaves;
    double u1 = la + (lb - la) * (k + 1) / octaves;
    Quad1D panel = gauss_legendre(nodes_per_octave, u0, u1);
    for (int i = 0; i < panel.size(); ++i) {
      double r = std::exp(panel.x[i]);
      q.x.push_back(r);
      q.w.push_back(panel.w[i] * r);  // du = dr / r
    }
  }
  return q;
}

double integrate(const Quad1D& q, const std::function<double(double)>& f) {
  double s = 0.0;
  for (int i = 0; i < q.size(); ++i) s += q.w[i] * f(q.x[i]);
  return s;
}

void SigmaChart::build_lattice() {
  nodes.clear();
  coord_weights.clear();
  std::vector<int> idx(dim, 0);
  while (true) {
    VecN<double> x(dim);
    double w = 1.0;
    for (int a = 0; a < dim; ++a) {
      x[a] = axes[a].x[idx[a]];
      w *= axes[a].w[idx[a]];
    }
    nodes.push_back(x);
    coord_weights.push_back(w);
    int a = dim - 1;
    while (a >= 0) {
      if (++idx[a] < axes[a].size()) break;
      idx[a] = 0;
      --a;
    }
    if (a < 0) break;
  }
}

std::vector<double> sigma_volume_weights(const SigmaChart& chart, const MetricField& k_inf) {
  std::vector<double> w(chart.size());
  for (int i = 0; i < chart.size(); ++i) {
    MatN<double> k = k_inf(chart.nodes[i]);
    w[i] = chart.coord_weights[i] * std::sqrt(det(k));
  }
  return w;
}

double sigma_integrate(const SigmaChart& chart, const MetricField& k_inf,
                       const std::function<double(const VecN<double>&)>& f) {
  std::vector<double> w = sigma_volume_weights(chart, k_inf);
  double s = 0.0;
  for (int i = 0; i < chart.size(); ++i) s += w[i] * f(chart.nodes[i]);
  return s;
}

}  // namespace renarea
