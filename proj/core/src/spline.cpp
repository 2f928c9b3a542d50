#include "renarea/spline.hpp"

#include <algorithm>
#include <cmath>

namespace renarea {

namespace {

// Banded Gaussian elimination, bandwidth 2, no pivoting. Spline systems are
// diagonally dominant apart from the not-a-knot rows, which stay well scaled.
std::vector<double> solve_band2(std::vector<std::array<double, 5>> band, std::vector<double> rhs) {
  const int n = static_cast<int>(rhs.size());
  auto at = [&](int i, int j) -> double& { return band[i][j - i + 2]; };
  for (int k = 0; k < n; ++k) {
    RENAREA_CHECK(std::abs(at(k, k)) > 1e-300, "singular band system in spline build");
    for (int i = k + 1; i <= std::min(n - 1, k + 2); ++i) {
      double f = at(i, k) / at(k, k);
      if (f == 0.0) continue;
      for (int j = k; j <= std::min(n - 1, k + 2); ++j) at(i, j) -= f * at(k, j);
      rhs[i] -= f * rhs[k];
    }
  }
  std::vector<double> x(n);
  for (int i = n - 1; i >= 0; --i) {
    double s = rhs[i];
    for (int j = i + 1; j <= std::min(n - 1, i + 2); ++j) s -= at(i, j) * x[j];
    x[i] = s / at(i, i);
  }
  return x;
}

// Cyclic tridiagonal solve via Sherman-Morrison. a: sub, b: diag, c: super,
// with wrap entries a[0] (row 0, col n-1) and c[n-1] (row n-1, col 0).
std::vector<double> solve_cyclic_tridiag(const std::vector<double>& a, const std::vector<double>& b,
                                         const std::vector<double>& c, std::vector<double> rhs) {
  const int n = static_cast<int>(rhs.size());
  double alpha = a[0], beta = c[n - 1];
  double gamma = -b[0];
  std::vector<double> bmod = b;
  bmod[0] -= gamma;
  bmod[n - 1] -= alpha * beta / gamma;

  auto tri = [&](std::vector<double> r) {
    std::vector<double> d = bmod, x(n);
    for (int i = 1; i < n; ++i) {
      double f = a[i] / d[i - 1];
      d[i] -= f * c[i - 1];
      r[i] -= f * r[i - 1];
    }
    x[n - 1] = r[n - 1] / d[n - 1];
    for (int i = n - 2; i >= 0; --i) x[i] = (r[i] - c[i] * x[i + 1]) / d[i];
    return x;
  };

  std::vector<double> u(n, 0.0);
  u[0] = gamma;
  u[n - 1] = alpha;
  std::vector<double> x = tri(std::move(rhs));
  std::vector<double> z = tri(std::move(u));
  double fact = (x[0] + beta * x[n - 1] / gamma) / (1.0 + z[0] + beta * z[n - 1] / gamma);
  for (int i = 0; i < n; ++i) x[i] -= fact * z[i];
  return x;
}

}  // namespace

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y, SplineBC bc)
    : x_(std::move(x)), y_(std::move(y)) {
  const int n = static_cast<int>(x_.size());
  RENAREA_CHECK(n >= 3, "cubic spline needs at least 3 nodes");
  RENAREA_CHECK(y_.size() == x_.size(), "spline node/value size mismatch");
  for (int i = 0; i + 1 < n; ++i)
    RENAREA_CHECK(x_[i + 1] > x_[i], "spline nodes must be strictly increasing");

  std::vector<double> h(n - 1);
  for (int i = 0; i + 1 < n; ++i) h[i] = x_[i + 1] - x_[i];

  periodic_ = (bc.left == SplineEnd::periodic);
  if (periodic_) {
    RENAREA_CHECK(std::abs(y_.front() - y_.back()) < 1e-12 * (1.0 + std::abs(y_.front())),
                  "periodic spline data must wrap around");
    // unknowns M_0..M_{n-2}, with M_{n-1} = M_0
    const int m = n - 1;
    std::vector<double> a(m), b(m), c(m), r(m);
    for (int i = 0; i < m; ++i) {
      double hm = h[(i - 1 + m) % m], hp = h[i];
      double ym = y_[(i - 1 + m) % m], y0 = y_[i], yp = y_[i + 1];
      a[i] = hm / 6.0;
      b[i] = (hm + hp) / 3.0;
      c[i] = hp / 6.0;
      r[i] = (yp - y0) / hp - (y0 - ym) / hm;
    }
    std::vector<double> sol = solve_cyclic_tridiag(a, b, c, r);
    m_.assign(n, 0.0);
    for (int i = 0; i < m; ++i) m_[i] = sol[i];
    m_[n - 1] = sol[0];
    return;
  }

  std::vector<std::array<double, 5>> band(n, {0, 0, 0, 0, 0});
  std::vector<double> rhs(n, 0.0);
  auto at = [&](int i, int j) -> double& { return band[i][j - i + 2]; };

  for (int i = 1; i + 1 < n; ++i) {
    at(i, i - 1) = h[i - 1] / 6.0;
    at(i, i) = (h[i - 1] + h[i]) / 3.0;
    at(i, i + 1) = h[i] / 6.0;
    rhs[i] = (y_[i + 1] - y_[i]) / h[i] - (y_[i] - y_[i - 1]) / h[i - 1];
  }
  switch (bc.left) {
    case SplineEnd::natural:
      at(0, 0) = 1.0;
      break;
    case SplineEnd::clamped:
      at(0, 0) = h[0] / 3.0;
      at(0, 1) = h[0] / 6.0;
      rhs[0] = (y_[1] - y_[0]) / h[0] - bc.left_slope;
      break;
    case SplineEnd::not_a_knot:
      at(0, 0) = h[1];
      at(0, 1) = -(h[0] + h[1]);
      at(0, 2) = h[0];
      break;
    default:
      RENAREA_CHECK(false, "mixed periodic spline ends are not supported");
  }
  switch (bc.right) {
    case SplineEnd::natural:
      at(n - 1, n - 1) = 1.0;
      break;
    case SplineEnd::clamped:
      at(n - 1, n - 2) = h[n - 2] / 6.0;
      at(n - 1, n - 1) = h[n - 2] / 3.0;
      rhs[n - 1] = bc.right_slope - (y_[n - 1] - y_[n - 2]) / h[n - 2];
      break;
    case SplineEnd::not_a_knot:
      at(n - 1, n - 3) = h[n - 2];
      at(n - 1, n - 2) = -(h[n - 3] + h[n - 2]);
      at(n - 1, n - 1) = h[n - 3];
      break;
    default:
      RENAREA_CHECK(false, "mixed periodic spline ends are not supported");
  }
  m_ = solve_band2(std::move(band), std::move(rhs));
}

double CubicSpline::eval(double x, int derivative) const {
  const int n = static_cast<int>(x_.size());
  double xx = x;
  if (periodic_) {
    double period = x_.back() - x_.front();
    xx = std::fmod(x - x_.front(), period);
    if (xx < 0) xx += period;
    xx += x_.front();
  }
  int i = static_cast<int>(std::upper_bound(x_.begin(), x_.end(), xx) - x_.begin()) - 1;
  i = std::clamp(i, 0, n - 2);
  double h = x_[i + 1] - x_[i];
  double A = (x_[i + 1] - xx) / h, B = (xx - x_[i]) / h;
  switch (derivative) {
    case 0:
      return A * y_[i] + B * y_[i + 1] +
             ((A * A * A - A) * m_[i] + (B * B * B - B) * m_[i + 1]) * h * h / 6.0;
    case 1:
      return (y_[i + 1] - y_[i]) / h +
             (-(3.0 * A * A - 1.0) * m_[i] + (3.0 * B * B - 1.0) * m_[i + 1]) * h / 6.0;
    case 2:
      return A * m_[i] + B * m_[i + 1];
    default:
      RENAREA_CHECK(false, "spline derivative order must be 0, 1 or 2");
      return 0.0;
  }
}

TensorSpline::TensorSpline(std::vector<std::vector<double>> axes, std::vector<double> values,
                           std::vector<SplineBC> bcs)
    : axes_(std::move(axes)), values_(std::move(values)), bcs_(std::move(bcs)) {
  RENAREA_CHECK(!axes_.empty() && axes_.size() <= 4, "tensor spline supports 1 to 4 axes");
  RENAREA_CHECK(bcs_.size() == axes_.size(), "one boundary condition per axis required");
  size_t total = 1;
  stride_.assign(axes_.size(), 1);
  for (int a = static_cast<int>(axes_.size()) - 1; a >= 0; --a) {
    stride_[a] = static_cast<int>(total);
    total *= axes_[a].size();
  }
  RENAREA_CHECK(values_.size() == total, "tensor spline value count mismatch");
}

double TensorSpline::eval_rec(int axis, int offset, const std::vector<double>& x,
                              const std::vector<int>& deriv) const {
  const auto& nodes = axes_[axis];
  const int n = static_cast<int>(nodes.size());
  std::vector<double> line(n);
  if (axis + 1 == dim()) {
    for (int i = 0; i < n; ++i) line[i] = values_[offset + i * stride_[axis]];
  } else {
    for (int i = 0; i < n; ++i)
      line[i] = eval_rec(axis + 1, offset + i * stride_[axis], x, deriv);
  }
  CubicSpline s(nodes, std::move(line), bcs_[axis]);
  return s.eval(x[axis], deriv[axis]);
}

double TensorSpline::eval(const std::vector<double>& x, const std::vector<int>& deriv) const {
  RENAREA_CHECK(static_cast<int>(x.size()) == dim(), "tensor spline evaluation dimension mismatch");
  return eval_rec(0, 0, x, deriv);
}

}  // namespace renarea
