#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "renarea/common.hpp"
#include "renarea/dual.hpp"
#include "renarea/jet.hpp"
#include "renarea/smallmat.hpp"

namespace renarea {

using DualJet = Dual<Jet, 1>;  // series value with one tagged direction

struct ChartBox {
  int dim = 0;
  std::array<double, kMaxDim> lo{};
  std::array<double, kMaxDim> hi{};
  std::array<bool, kMaxDim> periodic{};
  std::string name;

  bool contains(const VecN<double>& x, double slack = 0.0) const {
    if (x.n != dim) return false;
    for (int i = 0; i < dim; ++i) {
      if (periodic[i]) continue;
      if (x[i] < lo[i] - slack || x[i] > hi[i] + slack) return false;
    }
    return true;
  }
};

struct ChartPoint {
  VecN<double> coords;
  std::string chart_id;
};

inline ChartPoint make_point(std::initializer_list<double> xs, std::string chart = {}) {
  ChartPoint p;
  p.coords.n = static_cast<int>(xs.size());
  int i = 0;
  for (double v : xs) p.coords[i++] = v;
  p.chart_id = std::move(chart);
  return p;
}

// Metric value with first and second coordinate derivatives at a point.
struct MetricDerivs {
  int dim = 0;
  MatN<double> g;
  std::array<MatN<double>, kMaxDim> dg;    // dg[k](i,j) = d_k g_ij
  std::array<std::array<MatN<double>, kMaxDim>, kMaxDim> ddg;
};

struct ScalarDerivs {
  int dim = 0;
  double v = 0.0;
  VecN<double> grad;
  MatN<double> hess;
};

// A chart domain with a smooth matrix-valued map. The same evaluation code is
// instantiated for plain doubles, tagged duals, nested duals and series jets,
// so exact derivatives of any catalog metric are available everywhere.
class MetricField {
 public:
  template <class F>
  MetricField(std::string name, ChartBox box, int derivative_order, F f)
      : name_(std::move(name)),
        box_(box),
        derivative_order_(derivative_order),
        f_d_([f](const VecN<double>& x) { return f(x); }),
        f_seed_([f](const VecN<DualSeed>& x) { return f(x); }),
        f_grad_([f](const VecN<DualGrad>& x) { return f(x); }),
        f_hess_([f](const VecN<DualHess>& x) { return f(x); }),
        f_jet_([f](const VecN<Jet>& x) { return f(x); }),
        f_djet_([f](const VecN<DualJet>& x) { return f(x); }) {}

  MetricField() = default;

  // Finite difference variant: only plain evaluation is provided analytically;
  // derivatives fall back to Richardson central differences.
  template <class F>
  static MetricField finite_difference(std::string name, ChartBox box, F f, double scale = 1.0) {
    MetricField r;
    r.name_ = std::move(name);
    r.box_ = box;
    r.derivative_order_ = 4;
    r.fd_mode_ = true;
    r.fd_scale_ = scale;
    r.f_d_ = [f](const VecN<double>& x) { return f(x); };
    return r;
  }

  const std::string& name() const { return name_; }
  const ChartBox& box() const { return box_; }
  int dim() const { return box_.dim; }
  int derivative_order() const { return derivative_order_; }
  bool finite_difference_mode() const { return fd_mode_; }

  MatN<double> operator()(const VecN<double>& x) const { return f_d_(x); }

  template <class T>
  MatN<T> eval(const VecN<T>& x) const {
    RENAREA_CHECK(!fd_mode_, "derivative evaluation unavailable for finite-difference fields");
    if constexpr (std::is_same_v<T, double>) return f_d_(x);
    else if constexpr (std::is_same_v<T, DualSeed>) return f_seed_(x);
    else if constexpr (std::is_same_v<T, DualGrad>) return f_grad_(x);
    else if constexpr (std::is_same_v<T, DualHess>) return f_hess_(x);
    else if constexpr (std::is_same_v<T, DualJet>) return f_djet_(x);
    else return f_jet_(x);
  }

  MatN<double> eval(const VecN<double>& x) const { return f_d_(x); }

  MetricDerivs derivs(const ChartPoint& p) const;

 private:
  std::string name_;
  ChartBox box_;
  int derivative_order_ = 6;
  bool fd_mode_ = false;
  double fd_scale_ = 1.0;

  std::function<MatN<double>(const VecN<double>&)> f_d_;
  std::function<MatN<DualSeed>(const VecN<DualSeed>&)> f_seed_;
  std::function<MatN<DualGrad>(const VecN<DualGrad>&)> f_grad_;
  std::function<MatN<DualHess>(const VecN<DualHess>&)> f_hess_;
  std::function<MatN<Jet>(const VecN<Jet>&)> f_jet_;
  std::function<MatN<DualJet>(const VecN<DualJet>&)> f_djet_;
};

class ScalarField {
 public:
  template <class F>
  ScalarField(std::string name, int dim, F f)
      : name_(std::move(name)),
        dim_(dim),
        f_d_([f](const VecN<double>& x) { return f(x); }),
        f_seed_([f](const VecN<DualSeed>& x) { return f(x); }),
        f_grad_([f](const VecN<DualGrad>& x) { return f(x); }),
        f_hess_([f](const VecN<DualHess>& x) { return f(x); }),
        f_jet_([f](const VecN<Jet>& x) { return f(x); }),
        f_djet_([f](const VecN<DualJet>& x) { return f(x); }) {}

  ScalarField() = default;

  int dim() const { return dim_; }
  double operator()(const VecN<double>& x) const { return f_d_(x); }

  template <class T>
  T eval(const VecN<T>& x) const {
    if constexpr (std::is_same_v<T, double>) return f_d_(x);
    else if constexpr (std::is_same_v<T, DualSeed>) return f_seed_(x);
    else if constexpr (std::is_same_v<T, DualGrad>) return f_grad_(x);
    else if constexpr (std::is_same_v<T, DualHess>) return f_hess_(x);
    else if constexpr (std::is_same_v<T, DualJet>) return f_djet_(x);
    else return f_jet_(x);
  }

  ScalarDerivs derivs(const ChartPoint& p) const;

 private:
  std::string name_;
  int dim_ = 0;
  std::function<double(const VecN<double>&)> f_d_;
  std::function<DualSeed(const VecN<DualSeed>&)> f_seed_;
  std::function<DualGrad(const VecN<DualGrad>&)> f_grad_;
  std::function<DualHess(const VecN<DualHess>&)> f_hess_;
  std::function<Jet(const VecN<Jet>&)> f_jet_;
  std::function<DualJet(const VecN<DualJet>&)> f_djet_;
};

// Seeded coordinates for nested differentiation.
inline VecN<DualHess> hess_seed(const VecN<double>& x) {
  VecN<DualHess> r(x.n);
  for (int i = 0; i < x.n; ++i) {
    DualGrad inner = DualGrad::seeded(x[i], i);
    DualHess outer(inner);
    outer.d[i] = DualGrad(1.0);
    r[i] = outer;
  }
  return r;
}

inline VecN<DualGrad> grad_seed(const VecN<double>& x) {
  VecN<DualGrad> r(x.n);
  for (int i = 0; i < x.n; ++i) r[i] = DualGrad::seeded(x[i], i);
  return r;
}

// metric value at a chart point, with basic sanity checks
MatN<double> metric_at(const MetricField& field, const ChartPoint& p);
MatN<double> metric_inverse_at(const MetricField& field, const ChartPoint& p);

}  // namespace renarea
