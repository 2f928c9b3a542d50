#pragma once

#include <array>
#include <cmath>
#include <type_traits>
#include <utility>

namespace renarea {

// Forward-mode derivative scalar: a value carrying N partial derivatives.
// Nesting Dual<Dual<double,N>,N> yields exact second derivatives.
template <class T, int N>
struct Dual {
  T v{};
  std::array<T, N> d{};

  Dual() = default;
  Dual(double c) : v(c) {}  // NOLINT: implicit promotion of constants
  template <class U = T, class = std::enable_if_t<!std::is_same_v<U, double>>>
  Dual(T value) : v(std::move(value)) {}  // NOLINT

  static Dual seeded(T value, int slot) {
    Dual r(std::move(value));
    r.d[slot] = T(1.0);
    return r;
  }

  Dual& operator+=(const Dual& o) {
    v += o.v;
    for (int i = 0; i < N; ++i) d[i] += o.d[i];
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    for (int i = 0; i < N; ++i) d[i] -= o.d[i];
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    for (int i = 0; i < N; ++i) d[i] = d[i] * o.v + v * o.d[i];
    v *= o.v;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    T inv = T(1.0) / o.v;
    T q = v * inv;
    for (int i = 0; i < N; ++i) d[i] = (d[i] - q * o.d[i]) * inv;
    v = q;
    return *this;
  }
};

template <class T, int N>
Dual<T, N> operator+(Dual<T, N> a, const Dual<T, N>& b) { return a += b; }
template <class T, int N>
Dual<T, N> operator-(Dual<T, N> a, const Dual<T, N>& b) { return a -= b; }
template <class T, int N>
Dual<T, N> operator*(Dual<T, N> a, const Dual<T, N>& b) { return a *= b; }
template <class T, int N>
Dual<T, N> operator/(Dual<T, N> a, const Dual<T, N>& b) { return a /= b; }

template <class T, int N>
Dual<T, N> operator+(Dual<T, N> a, double b) { return a += Dual<T, N>(b); }
template <class T, int N>
Dual<T, N> operator+(double a, Dual<T, N> b) { return b += Dual<T, N>(a); }
template <class T, int N>
Dual<T, N> operator-(Dual<T, N> a, double b) { return a -= Dual<T, N>(b); }
template <class T, int N>
Dual<T, N> operator-(double a, const Dual<T, N>& b) { return Dual<T, N>(a) -= b; }
template <class T, int N>
Dual<T, N> operator*(Dual<T, N> a, double b) { return a *= Dual<T, N>(b); }
template <class T, int N>
Dual<T, N> operator*(double a, Dual<T, N> b) { return b *= Dual<T, N>(a); }
template <class T, int N>
Dual<T, N> operator/(Dual<T, N> a, double b) { return a /= Dual<T, N>(b); }
template <class T, int N>
Dual<T, N> operator/(double a, const Dual<T, N>& b) { return Dual<T, N>(a) /= b; }

template <class T, int N>
Dual<T, N> operator-(const Dual<T, N>& a) {
  Dual<T, N> r;
  r.v = -a.v;
  for (int i = 0; i < N; ++i) r.d[i] = -a.d[i];
  return r;
}

// Plain value of a (possibly nested) derivative scalar.
inline double value(double x) { return x; }
template <class T, int N>
double value(const Dual<T, N>& x) { return value(x.v); }

template <class T, int N>
bool operator<(const Dual<T, N>& a, const Dual<T, N>& b) { return value(a) < value(b); }
template <class T, int N>
bool operator>(const Dual<T, N>& a, const Dual<T, N>& b) { return value(a) > value(b); }

namespace detail {
template <class T, int N, class F, class DF>
Dual<T, N> lift(const Dual<T, N>& x, F f, DF df) {
  Dual<T, N> r;
  r.v = f(x.v);
  T s = df(x.v);
  for (int i = 0; i < N; ++i) r.d[i] = s * x.d[i];
  return r;
}
}  // namespace detail

using std::asin;
using std::atan;
using std::cos;
using std::cosh;
using std::exp;
using std::log;
using std::sin;
using std::sinh;
using std::sqrt;
using std::tan;

template <class T, int N>
Dual<T, N> sqrt(const Dual<T, N>& x) {
  Dual<T, N> r;
  r.v = sqrt(x.v);
  T s = T(0.5) / r.v;
  for (int i = 0; i < N; ++i) r.d[i] = s * x.d[i];
  return r;
}
template <class T, int N>
Dual<T, N> sin(const Dual<T, N>& x) {
  return detail::lift(x, [](const T& u) { return sin(u); }, [](const T& u) { return cos(u); });
}
template <class T, int N>
Dual<T, N> cos(const Dual<T, N>& x) {
  return detail::lift(x, [](const T& u) { return cos(u); }, [](const T& u) { return -sin(u); });
}
template <class T, int N>
Dual<T, N> tan(const Dual<T, N>& x) {
  return sin(x) / cos(x);
}
template <class T, int N>
Dual<T, N> exp(const Dual<T, N>& x) {
  Dual<T, N> r;
  r.v = exp(x.v);
  for (int i = 0; i < N; ++i) r.d[i] = r.v * x.d[i];
  return r;
}
template <class T, int N>
Dual<T, N> log(const Dual<T, N>& x) {
  return detail::lift(x, [](const T& u) { return log(u); }, [](const T& u) { return T(1.0) / u; });
}
template <class T, int N>
Dual<T, N> asin(const Dual<T, N>& x) {
  return detail::lift(
      x, [](const T& u) { return asin(u); },
      [](const T& u) { return T(1.0) / sqrt(T(1.0) - u * u); });
}
template <class T, int N>
Dual<T, N> atan(const Dual<T, N>& x) {
  return detail::lift(
      x, [](const T& u) { return atan(u); },
      [](const T& u) { return T(1.0) / (T(1.0) + u * u); });
}
template <class T, int N>
Dual<T, N> sinh(const Dual<T, N>& x) {
  return detail::lift(x, [](const T& u) { return sinh(u); }, [](const T& u) { return cosh(u); });
}
template <class T, int N>
Dual<T, N> cosh(const Dual<T, N>& x) {
  return detail::lift(x, [](const T& u) { return cosh(u); }, [](const T& u) { return sinh(u); });
}

template <class T>
T sqr(const T& x) { return x * x; }
template <class T>
T cube(const T& x) { return x * x * x; }

// Scalar types used across field evaluation.
constexpr int kMaxDim = 5;
using DualSeed = Dual<double, 1>;            // one tagged direction
using DualGrad = Dual<double, kMaxDim>;      // gradient in chart coordinates
using DualHess = Dual<DualGrad, kMaxDim>;    // value + gradient + hessian

}  // namespace renarea
