#pragma once

#include "renarea/field.hpp"
#include "renarea/smallmat.hpp"

namespace renarea {

struct Ten4 {
  int n = 0;
  std::array<std::array<std::array<std::array<double, kMaxDim>, kMaxDim>, kMaxDim>, kMaxDim> t{};

  Ten4() = default;
  explicit Ten4(int dim) : n(dim) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) t[i][j][k][l] = 0.0;
  }
  double& operator()(int i, int j, int k, int l) { return t[i][j][k][l]; }
  double operator()(int i, int j, int k, int l) const { return t[i][j][k][l]; }
};

struct Christoffels {
  int n = 0;
  // gamma[l](j,k) = Gamma^l_jk
  std::array<MatN<double>, kMaxDim> gamma;
  // dgamma[i][l](j,k) = d_i Gamma^l_jk
  std::array<std::array<MatN<double>, kMaxDim>, kMaxDim> dgamma;
};

// All curvature objects of a metric at one point, indices fully lowered.
// Sign conventions: space forms satisfy Riem(i,j,k,l) = K (g_ik g_jl - g_il g_jk),
// so hyperbolic d-space has scalar curvature -d(d-1).
struct CurvatureBundle {
  int dim = 0;
  Ten4 riemann;
  MatN<double> ricci;
  double scalar = 0.0;
  Ten4 weyl;
  bool weyl_defined = false;  // false in dimension <= 3, weyl kept zero there
  MatN<double> schouten;      // dim 4: (Ric - R/6 g)/2; generic formula otherwise
  MatN<double> trace_free_ricci;
  double sigma2 = 0.0;        // sigma_2 of the Schouten endomorphism
  MatN<double> g;
  MatN<double> g_inv;
};

Christoffels christoffels_from(const MetricDerivs& md);
CurvatureBundle bundle_from_derivs(const MetricDerivs& md);
// contractions and decompositions from an already known lowered Riemann tensor
CurvatureBundle bundle_from_riemann(const MatN<double>& g, const Ten4& riemann);
CurvatureBundle curvature_at(const MetricField& field, const ChartPoint& p);

// Riemann of a constant curvature space in the bundle's convention.
Ten4 space_form_riemann(const MatN<double>& g, double K);

double tensor2_norm2(const MatN<double>& t, const MatN<double>& g_inv);
double tensor4_norm2(const Ten4& t, const MatN<double>& g_inv);
MatN<double> raise_one(const MatN<double>& t, const MatN<double>& g_inv);  // t_i^j

// max |R_ijkl + R_jikl|, |R_ijkl - R_klij|, first Bianchi violation
struct RiemannSymmetryCheck {
  double antisym_first = 0.0;
  double antisym_last = 0.0;
  double pair_sym = 0.0;
  double first_bianchi = 0.0;
};
RiemannSymmetryCheck riemann_symmetry_check(const Ten4& r);

// |del^i Ric_ij - 1/2 del_j R| via Richardson differences of exact pointwise Ricci.
double contracted_bianchi_residual(const MetricField& field, const ChartPoint& p, double step);

// Pointwise residual of the conformal sigma_2 identity relating the compact
// metric, its conformal rescale by 1/r^2, and a divergence correction term.
// Returns lhs - rhs; the divergence is evaluated with Richardson differences.
double sigma2_conformal_residual(const MetricField& field_compact, const ScalarField& r_func,
                                 const ChartPoint& p, double step = 0.005);

// Conformal rescale g -> g / w^2 as a new field (used for singular-scale checks).
MetricField conformal_shrink(const MetricField& g, const ScalarField& w, const std::string& name);

}  // namespace renarea
