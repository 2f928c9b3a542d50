#pragma once

#include <cmath>
#include <vector>

#include "renarea/common.hpp"

namespace renarea {

// Truncated power series in one formal variable, coefficients 0..N.
// Arithmetic never reads past the truncation order.
class Jet {
 public:
  Jet() : c_(1, 0.0) {}
  explicit Jet(std::vector<double> coeffs) : c_(std::move(coeffs)) {
    RENAREA_CHECK(!c_.empty(), "jet needs at least the constant coefficient");
  }
  Jet(double constant, int order = 0) : c_(order + 1, 0.0) { c_[0] = constant; }

  static Jet constant(double v, int order) { return Jet(v, order); }
  static Jet variable(double v, int order) {
    Jet r(v, order);
    if (order >= 1) r.c_[1] = 1.0;
    return r;
  }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  double operator[](int k) const { return k <= order() ? c_[k] : 0.0; }
  double& at(int k) { return c_[k]; }
  const std::vector<double>& coeffs() const { return c_; }

  Jet truncated(int order) const {
    std::vector<double> r(order + 1, 0.0);
    for (int k = 0; k <= order && k <= this->order(); ++k) r[k] = c_[k];
    return Jet(std::move(r));
  }

  double eval(double t) const {
    double r = 0.0;
    for (int k = order(); k >= 0; --k) r = r * t + c_[k];
    return r;
  }

  Jet& operator+=(const Jet& o) {
    grow(o.order());
    for (int k = 0; k <= o.order(); ++k) c_[k] += o.c_[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    grow(o.order());
    for (int k = 0; k <= o.order(); ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Jet& operator*=(const Jet& o);
  Jet& operator/=(const Jet& o);

 private:
  void grow(int order) {
    if (order > this->order()) c_.resize(order + 1, 0.0);
  }
  std::vector<double> c_;
};

inline int joint_order(const Jet& a, const Jet& b) { return std::max(a.order(), b.order()); }

inline Jet operator+(Jet a, const Jet& b) { return a += b; }
inline Jet operator-(Jet a, const Jet& b) { return a -= b; }
inline Jet operator-(const Jet& a) {
  std::vector<double> r(a.coeffs());
  for (auto& x : r) x = -x;
  return Jet(std::move(r));
}

inline Jet operator*(const Jet& a, const Jet& b) {
  int n = joint_order(a, b);
  std::vector<double> r(n + 1, 0.0);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; i + j <= n; ++j) r[i + j] += a[i] * b[j];
  return Jet(std::move(r));
}

inline Jet operator/(const Jet& a, const Jet& b) {
  RENAREA_CHECK(b[0] != 0.0, "jet division by series with zero constant term");
  int n = joint_order(a, b);
  std::vector<double> q(n + 1, 0.0);
  for (int k = 0; k <= n; ++k) {
    double s = a[k];
    for (int j = 0; j < k; ++j) s -= q[j] * b[k - j];
    q[k] = s / b[0];
  }
  return Jet(std::move(q));
}

inline Jet& Jet::operator*=(const Jet& o) { return *this = *this * o; }
inline Jet& Jet::operator/=(const Jet& o) { return *this = *this / o; }

inline Jet operator+(Jet a, double b) { a.at(0) += b; return a; }
inline Jet operator+(double a, Jet b) { b.at(0) += a; return b; }
inline Jet operator-(Jet a, double b) { a.at(0) -= b; return a; }
inline Jet operator-(double a, const Jet& b) { return Jet(a, b.order()) - b; }
inline Jet operator*(const Jet& a, double b) {
  std::vector<double> r(a.coeffs());
  for (auto& x : r) x *= b;
  return Jet(std::move(r));
}
inline Jet operator*(double a, const Jet& b) { return b * a; }
inline Jet operator/(const Jet& a, double b) { return a * (1.0 / b); }
inline Jet operator/(double a, const Jet& b) { return Jet(a, b.order()) / b; }

// d/dt of the series. The top coefficient of the result is not determined by
// the input truncation and is set to zero.
inline Jet ddr(const Jet& a) {
  int n = a.order();
  std::vector<double> r(n + 1, 0.0);
  for (int k = 0; k + 1 <= n; ++k) r[k] = (k + 1) * a[k + 1];
  return Jet(std::move(r));
}

// Division by the series variable itself; requires a vanishing constant term.
inline Jet div_by_var(const Jet& a, double tol = 1e-12) {
  RENAREA_CHECK(std::abs(a[0]) <= tol, "series has nonzero constant term, not divisible by the variable");
  int n = a.order();
  std::vector<double> r(n + 1, 0.0);
  for (int k = 0; k + 1 <= n; ++k) r[k] = a[k + 1];
  return Jet(std::move(r));
}

// a(b(t)) for b with zero constant term.
inline Jet compose(const Jet& a, const Jet& b) {
  RENAREA_CHECK(b[0] == 0.0, "jet composition needs inner series with zero constant term");
  int n = joint_order(a, b);
  Jet r(a[a.order()], n);
  for (int k = a.order() - 1; k >= 0; --k) r = r * b + a[k];
  return r.truncated(n);
}

inline Jet sqrt(const Jet& a) {
  RENAREA_CHECK(a[0] > 0.0, "jet sqrt needs positive constant term");
  int n = a.order();
  std::vector<double> s(n + 1, 0.0);
  s[0] = std::sqrt(a[0]);
  for (int k = 1; k <= n; ++k) {
    double acc = a[k];
    for (int j = 1; j < k; ++j) acc -= s[j] * s[k - j];
    s[k] = acc / (2.0 * s[0]);
  }
  return Jet(std::move(s));
}

inline Jet exp(const Jet& u) {
  int n = u.order();
  std::vector<double> e(n + 1, 0.0);
  e[0] = std::exp(u[0]);
  for (int k = 1; k <= n; ++k) {
    double acc = 0.0;
    for (int j = 1; j <= k; ++j) acc += j * u[j] * e[k - j];
    e[k] = acc / k;
  }
  return Jet(std::move(e));
}

inline Jet log(const Jet& u) {
  RENAREA_CHECK(u[0] > 0.0, "jet log needs positive constant term");
  int n = u.order();
  std::vector<double> l(n + 1, 0.0);
  l[0] = std::log(u[0]);
  for (int k = 1; k <= n; ++k) {
    double acc = k * u[k];
    for (int j = 1; j < k; ++j) acc -= j * l[j] * u[k - j];
    l[k] = acc / (k * u[0]);
  }
  return Jet(std::move(l));
}

// sin and cos from the coupled first order recurrences.
inline void sincos(const Jet& u, Jet& s_out, Jet& c_out) {
  int n = u.order();
  std::vector<double> s(n + 1, 0.0), c(n + 1, 0.0);
  s[0] = std::sin(u[0]);
  c[0] = std::cos(u[0]);
  for (int k = 1; k <= n; ++k) {
    double as = 0.0, ac = 0.0;
    for (int j = 1; j <= k; ++j) {
      as += j * u[j] * c[k - j];
      ac -= j * u[j] * s[k - j];
    }
    s[k] = as / k;
    c[k] = ac / k;
  }
  s_out = Jet(std::move(s));
  c_out = Jet(std::move(c));
}

inline Jet sin(const Jet& u) {
  Jet s, c;
  sincos(u, s, c);
  return s;
}
inline Jet cos(const Jet& u) {
  Jet s, c;
  sincos(u, s, c);
  return c;
}
inline Jet tan(const Jet& u) {
  Jet s, c;
  sincos(u, s, c);
  return s / c;
}

inline Jet asin(const Jet& u) {
  int n = u.order();
  Jet w = 1.0 / sqrt(1.0 - u * u);  // derivative factor
  std::vector<double> a(n + 1, 0.0);
  a[0] = std::asin(u[0]);
  for (int k = 1; k <= n; ++k) {
    double acc = 0.0;
    for (int j = 1; j <= k; ++j) acc += j * u[j] * w[k - j];
    a[k] = acc / k;
  }
  return Jet(std::move(a));
}

inline Jet atan(const Jet& u) {
  int n = u.order();
  Jet w = 1.0 / (1.0 + u * u);
  std::vector<double> a(n + 1, 0.0);
  a[0] = std::atan(u[0]);
  for (int k = 1; k <= n; ++k) {
    double acc = 0.0;
    for (int j = 1; j <= k; ++j) acc += j * u[j] * w[k - j];
    a[k] = acc / k;
  }
  return Jet(std::move(a));
}

inline double value(const Jet& a) { return a[0]; }
inline bool operator<(const Jet& a, const Jet& b) { return a[0] < b[0]; }
inline bool operator>(const Jet& a, const Jet& b) { return a[0] > b[0]; }

}  // namespace renarea
