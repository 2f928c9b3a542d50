#pragma once

#include <vector>

#include "renarea/common.hpp"

namespace renarea {

enum class SplineEnd { natural, not_a_knot, clamped, periodic };

struct SplineBC {
  SplineEnd left = SplineEnd::not_a_knot;
  SplineEnd right = SplineEnd::not_a_knot;
  double left_slope = 0.0;   // used when left == clamped
  double right_slope = 0.0;  // used when right == clamped

  static SplineBC notaknot() { return {}; }
  static SplineBC clamped_left(double slope) {
    SplineBC bc;
    bc.left = SplineEnd::clamped;
    bc.left_slope = slope;
    return bc;
  }
  static SplineBC periodic() {
    SplineBC bc;
    bc.left = bc.right = SplineEnd::periodic;
    return bc;
  }
};

// C2 cubic interpolation through (x_i, y_i); reproduces nodal values exactly.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y, SplineBC bc = {});

  double eval(double x, int derivative = 0) const;
  double operator()(double x) const { return eval(x, 0); }

  const std::vector<double>& nodes() const { return x_; }
  const std::vector<double>& values() const { return y_; }

 private:
  std::vector<double> x_, y_, m_;  // m_: second derivatives at nodes
  bool periodic_ = false;
};

// Tensor product spline on a rectilinear grid, dimensions 1..4. Evaluation is
// by iterated one dimensional interpolation; meant for verification paths,
// not inner loops.
class TensorSpline {
 public:
  TensorSpline() = default;
  TensorSpline(std::vector<std::vector<double>> axes, std::vector<double> values,
               std::vector<SplineBC> bcs);

  int dim() const { return static_cast<int>(axes_.size()); }

  // derivative order per axis, each 0..2, total order <= 2
  double eval(const std::vector<double>& x, const std::vector<int>& deriv) const;
  double operator()(const std::vector<double>& x) const {
    return eval(x, std::vector<int>(x.size(), 0));
  }

 private:
  double eval_rec(int axis, int offset, const std::vector<double>& x,
                  const std::vector<int>& deriv) const;

  std::vector<std::vector<double>> axes_;
  std::vector<double> values_;  // row major, last axis fastest
  std::vector<SplineBC> bcs_;
  std::vector<int> stride_;
};

}  // namespace renarea
