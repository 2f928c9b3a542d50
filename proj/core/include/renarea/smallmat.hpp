#pragma once

#include <array>
#include <cmath>

#include "renarea/common.hpp"
#include "renarea/dual.hpp"

namespace renarea {

// Fixed-capacity dense vector/matrix over a generic scalar, sized at runtime.
// Dimensions here never exceed the ambient chart dimension.
template <class T>
struct VecN {
  int n = 0;
  std::array<T, kMaxDim> a{};

  VecN() = default;
  explicit VecN(int dim) : n(dim) {
    for (int i = 0; i < n; ++i) a[i] = T(0.0);
  }
  T& operator[](int i) { return a[i]; }
  const T& operator[](int i) const { return a[i]; }
};

template <class T>
struct MatN {
  int n = 0;
  std::array<std::array<T, kMaxDim>, kMaxDim> m{};

  MatN() = default;
  explicit MatN(int dim) : n(dim) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m[i][j] = T(0.0);
  }
  static MatN identity(int dim) {
    MatN r(dim);
    for (int i = 0; i < dim; ++i) r.m[i][i] = T(1.0);
    return r;
  }
  T& operator()(int i, int j) { return m[i][j]; }
  const T& operator()(int i, int j) const { return m[i][j]; }
};

template <class T>
VecN<T> operator*(const MatN<T>& g, const VecN<T>& v) {
  VecN<T> r(g.n);
  for (int i = 0; i < g.n; ++i) {
    T s = T(0.0);
    for (int j = 0; j < g.n; ++j) s += g(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

template <class T>
T dot(const VecN<T>& a, const VecN<T>& b) {
  T s = T(0.0);
  for (int i = 0; i < a.n; ++i) s += a[i] * b[i];
  return s;
}

template <class T>
T inner(const MatN<T>& g, const VecN<T>& a, const VecN<T>& b) {
  T s = T(0.0);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) s += g(i, j) * a[i] * b[j];
  return s;
}

// LU with partial pivoting on the value part; works for duals and jets.
template <class T>
struct LuN {
  MatN<T> lu;
  std::array<int, kMaxDim> perm{};
  int sign = 1;

  explicit LuN(const MatN<T>& a) : lu(a) {
    int n = a.n;
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int k = 0; k < n; ++k) {
      int p = k;
      double best = std::abs(value(lu(k, k)));
      for (int i = k + 1; i < n; ++i) {
        double cand = std::abs(value(lu(i, k)));
        if (cand > best) { best = cand; p = i; }
      }
      RENAREA_CHECK(best > 0.0, "singular matrix in LU factorization");
      if (p != k) {
        std::swap(lu.m[p], lu.m[k]);
        std::swap(perm[p], perm[k]);
        sign = -sign;
      }
      T inv = T(1.0) / lu(k, k);
      for (int i = k + 1; i < n; ++i) {
        lu(i, k) *= inv;
        for (int j = k + 1; j < n; ++j) lu(i, j) -= lu(i, k) * lu(k, j);
      }
    }
  }

  T det() const {
    T d = T(static_cast<double>(sign));
    for (int i = 0; i < lu.n; ++i) d *= lu(i, i);
    return d;
  }

  VecN<T> solve(const VecN<T>& b) const {
    int n = lu.n;
    VecN<T> x(n);
    for (int i = 0; i < n; ++i) x[i] = b[perm[i]];
    for (int i = 1; i < n; ++i)
      for (int j = 0; j < i; ++j) x[i] -= lu(i, j) * x[j];
    for (int i = n - 1; i >= 0; --i) {
      for (int j = i + 1; j < n; ++j) x[i] -= lu(i, j) * x[j];
      x[i] /= lu(i, i);
    }
    return x;
  }

  MatN<T> inverse() const {
    int n = lu.n;
    MatN<T> r(n);
    for (int j = 0; j < n; ++j) {
      VecN<T> e(n);
      e[j] = T(1.0);
      VecN<T> col = solve(e);
      for (int i = 0; i < n; ++i) r(i, j) = col[i];
    }
    return r;
  }
};

template <class T>
T det(const MatN<T>& a) { return LuN<T>(a).det(); }

template <class T>
MatN<T> inverse(const MatN<T>& a) { return LuN<T>(a).inverse(); }

inline bool is_symmetric(const MatN<double>& a, double tol) {
  for (int i = 0; i < a.n; ++i)
    for (int j = i + 1; j < a.n; ++j)
      if (std::abs(a(i, j) - a(j, i)) > tol) return false;
  return true;
}

// Positive definiteness via Cholesky attempt.
inline bool is_positive_definite(const MatN<double>& a) {
  MatN<double> c = a;
  for (int k = 0; k < a.n; ++k) {
    for (int j = 0; j < k; ++j) c(k, k) -= c(k, j) * c(k, j);
    if (c(k, k) <= 0.0) return false;
    c(k, k) = std::sqrt(c(k, k));
    for (int i = k + 1; i < a.n; ++i) {
      for (int j = 0; j < k; ++j) c(i, k) -= c(i, j) * c(k, j);
      c(i, k) /= c(k, k);
    }
  }
  return true;
}

}  // namespace renarea
