#include "renarea/expand.hpp"

#include <cmath>

#include "renarea/solver.hpp"

namespace renarea {

namespace {

// quadratic Lagrange derivative weights at x0 for three arbitrary nodes
struct ThreePoint {
  std::array<int, 3> idx{};
  std::array<double, 3> w1{};
  std::array<double, 3> w2{};
};

ThreePoint three_point(const std::vector<double>& x, int i, bool periodic, double period) {
  const int n = static_cast<int>(x.size());
  ThreePoint tp;
  std::array<double, 3> xs{};
  if (periodic) {
    tp.idx = {(i - 1 + n) % n, i, (i + 1) % n};
    xs = {i - 1 < 0 ? x[tp.idx[0]] - period : x[tp.idx[0]], x[i],
          i + 1 >= n ? x[tp.idx[2]] + period : x[tp.idx[2]]};
  } else if (i == 0) {
    tp.idx = {0, 1, 2};
    xs = {x[0], x[1], x[2]};
  } else if (i == n - 1) {
    tp.idx = {n - 3, n - 2, n - 1};
    xs = {x[n - 3], x[n - 2], x[n - 1]};
  } else {
    tp.idx = {i - 1, i, i + 1};
    xs = {x[i - 1], x[i], x[i + 1]};
  }
  const double x0 = x[i];
  for (int k = 0; k < 3; ++k) {
    int a = (k + 1) % 3, b = (k + 2) % 3;
    double denom = (xs[k] - xs[a]) * (xs[k] - xs[b]);
    tp.w1[k] = (2.0 * x0 - xs[a] - xs[b]) / denom;
    tp.w2[k] = 2.0 / denom;
  }
  return tp;
}

// per-axis derivative of a field of jets over the Sigma lattice
std::vector<Jet> lattice_derivative(const SigmaChart& chart, const std::vector<Jet>& field,
                                    int axis, bool second) {
  const int dim = chart.dim;
  std::vector<int> shape(dim);
  for (int a = 0; a < dim; ++a) shape[a] = chart.axes[a].size();
  std::vector<Jet> out(field.size());

  std::vector<int> ix(dim, 0);
  for (size_t f = 0; f < field.size(); ++f) {
    const auto& xs = chart.axes[axis].x;
    double period = 0.0;
    if (chart.periodic[axis]) period = 2.0 * kPi;
    ThreePoint tp = three_point(xs, ix[axis], chart.periodic[axis], period);
    Jet acc;
    for (int k = 0; k < 3; ++k) {
      std::vector<int> jx = ix;
      jx[axis] = tp.idx[k];
      int flat = 0;
      for (int a = 0; a < dim; ++a) flat = flat * shape[a] + jx[a];
      acc += (second ? tp.w2[k] : tp.w1[k]) * field[flat];
    }
    out[f] = acc;
    for (int a = dim - 1; a >= 0; --a) {
      if (++ix[a] < shape[a]) break;
      ix[a] = 0;
    }
  }
  return out;
}

// times-r residual jets over the lattice for the given coefficient table
std::vector<Jet> residual_jets(const Scenario& scn,
                               const std::vector<std::vector<double>>& coeffs, int work_order) {
  const int dsig = scn.dim_sigma;
  const int dY = dsig + 1;
  const int nnodes = scn.sigma.size();

  std::vector<Jet> zf(nnodes);
  for (int i = 0; i < nnodes; ++i) {
    std::vector<double> c(work_order + 1, 0.0);
    for (size_t k = 0; k < coeffs.size() && k <= static_cast<size_t>(work_order); ++k)
      c[k] = coeffs[k][i];
    zf[i] = Jet(std::move(c));
  }

  std::vector<std::vector<Jet>> dx(dsig), dxx(dsig);
  for (int a = 0; a < dsig; ++a) {
    dx[a] = lattice_derivative(scn.sigma, zf, a, false);
    dxx[a] = lattice_derivative(scn.sigma, zf, a, true);
  }
  // mixed second derivatives via first derivative fields
  std::vector<std::vector<std::vector<Jet>>> dmix(dsig);
  for (int a = 0; a < dsig; ++a) {
    dmix[a].resize(dsig);
    for (int b = a + 1; b < dsig; ++b) dmix[a][b] = lattice_derivative(scn.sigma, dx[a], b, false);
  }

  std::vector<Jet> res(nnodes);
  for (int i = 0; i < nnodes; ++i) {
    AmbientEval<Jet> amb = ambient_eval_jet(scn.gbar, scn.sigma.nodes[i], zf[i]);
    VecN<Jet> dz(dY);
    MatN<Jet> ddz(dY);
    for (int a = 0; a < dsig; ++a) {
      dz[a] = dx[a][i];
      ddz(a, a) = dxx[a][i];
      for (int b = a + 1; b < dsig; ++b) {
        ddz(a, b) = dmix[a][b][i];
        ddz(b, a) = ddz(a, b);
      }
      ddz(a, dY - 1) = ddr(dx[a][i]);
      ddz(dY - 1, a) = ddz(a, dY - 1);
    }
    dz[dY - 1] = ddr(zf[i]);
    ddz(dY - 1, dY - 1) = ddr(dz[dY - 1]);
    res[i] = graph_residual_times_r<Jet>(dsig, amb, dz, ddz, Jet::variable(0.0, work_order));
  }
  return res;
}

}  // namespace

GraphExpansion expand_minimal_graph(const Scenario& scn, int order) {
  RENAREA_CHECK(order >= 1, "expansion order must be positive");
  const int dY = scn.surface_dim();
  const int k_max = std::min(order, dY);  // the next coefficient is free data
  const int work_order = k_max + 3;
  const int nnodes = scn.sigma.size();

  GraphExpansion out;
  out.order = k_max;
  out.coefficients.assign(k_max + 1, std::vector<double>(nnodes, 0.0));

  for (int k = 1; k <= k_max; ++k) {
    out.coefficients[k].assign(nnodes, 0.0);
    std::vector<Jet> r0 = residual_jets(scn, out.coefficients, work_order);
    out.coefficients[k].assign(nnodes, 1.0);
    std::vector<Jet> r1 = residual_jets(scn, out.coefficients, work_order);
    for (int i = 0; i < nnodes; ++i) {
      // the residual was premultiplied by r: order k-2 appears at k-1
      double c0 = r0[i][k - 1];
      double c1 = r1[i][k - 1];
      RENAREA_CHECK(std::abs(c1 - c0) > 1e-10,
                    "order-by-order system singular at order " + std::to_string(k));
      out.coefficients[k][i] = -c0 / (c1 - c0);
    }
  }
  return out;
}

AreaFormExpansion expand_area_form(const Scenario& scn, const GraphExpansion& graph, int order) {
  const int dsig = scn.dim_sigma;
  const int dY = dsig + 1;
  const int work_order = order + 1;
  const int nnodes = scn.sigma.size();

  std::vector<Jet> zf(nnodes);
  for (int i = 0; i < nnodes; ++i) {
    std::vector<double> c(work_order + 1, 0.0);
    for (size_t k = 0; k < graph.coefficients.size() && k <= static_cast<size_t>(work_order); ++k)
      c[k] = graph.coefficients[k][i];
    zf[i] = Jet(std::move(c));
  }
  std::vector<std::vector<Jet>> dx(dsig);
  for (int a = 0; a < dsig; ++a) dx[a] = lattice_derivative(scn.sigma, zf, a, false);

  AreaFormExpansion out;
  out.order = order;
  out.coefficients.assign(order + 1, std::vector<double>(nnodes, 0.0));

  for (int i = 0; i < nnodes; ++i) {
    AmbientEval<Jet> amb = ambient_eval_jet(scn.gbar, scn.sigma.nodes[i], zf[i]);
    const int i4 = dsig;
    VecN<Jet> dz(dY);
    for (int a = 0; a < dsig; ++a) dz[a] = dx[a][i];
    dz[dY - 1] = ddr(zf[i]);

    MatN<Jet> h(dY);
    auto amb_index = [&](int al) { return al < dsig ? al : dsig + 1; };
    for (int al = 0; al < dY; ++al)
      for (int be = al; be < dY; ++be) {
        int ia = amb_index(al), ib = amb_index(be);
        Jet v = amb.g(ia, ib) + amb.g(i4, ia) * dz[be] + amb.g(i4, ib) * dz[al] +
                amb.g(i4, i4) * dz[al] * dz[be];
        h(al, be) = v;
        h(be, al) = v;
      }
    Jet det_h = det(h);

    MatN<Jet> h0(dsig);
    for (int a = 0; a < dsig; ++a)
      for (int b = 0; b < dsig; ++b) h0(a, b) = Jet(h(a, b)[0], work_order);
    Jet det_h0 = det(h0);

    Jet ratio = sqrt(det_h / det_h0);
    for (int k = 0; k <= order; ++k) out.coefficients[k][i] = ratio[k];
  }
  return out;
}

VolumeFormExpansion expand_volume_form(const Scenario& scn, int order) {
  RENAREA_CHECK(!scn.has_surface, "volume form expansion expects an ambient-only scenario");
  const int dM = scn.gbar.dim() - 1;
  const int nnodes = scn.sigma.size();
  VolumeFormExpansion out;
  out.order = order;
  out.coefficients.assign(order + 1, std::vector<double>(nnodes, 0.0));

  for (int i = 0; i < nnodes; ++i) {
    VecN<Jet> in(dM + 1);
    for (int a = 0; a < dM; ++a) in[a] = Jet::constant(scn.sigma.nodes[i][a], order + 1);
    in[dM] = Jet::variable(0.0, order + 1);
    MatN<Jet> g = scn.gbar.eval(in);
    MatN<Jet> gr(dM), g0(dM);
    for (int a = 0; a < dM; ++a)
      for (int b = 0; b < dM; ++b) {
        gr(a, b) = g(a, b);
        g0(a, b) = Jet(g(a, b)[0], order + 1);
      }
    Jet ratio = sqrt(det(gr) / det(g0));
    for (int k = 0; k <= order; ++k) out.coefficients[k][i] = ratio[k];
  }
  return out;
}

}  // namespace renarea
