#pragma once

#include <map>
#include <string>

#include "renarea/ladder.hpp"

namespace renarea {

struct TermValue {
  double value = 0.0;
  double error = 0.0;
};

// One verified identity: named terms, signed residual, pass flag.
struct VerificationReport {
  std::string identity_id;
  std::map<std::string, TermValue> terms;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::map<std::string, std::string> provenance;
};

std::string report_to_json(const VerificationReport& rep);
VerificationReport report_from_json(const std::string& text);
void write_report(const VerificationReport& rep, const std::string& path);

// Gauss-Bonnet balance of the renormalized area against the curvature terms.
VerificationReport verify_area_identity(const RenormContext& ctx);

// Divergence structure of the regularized second fundamental form integrals
// and the umbilicity dichotomy.
VerificationReport verify_b2_characterization(const RenormContext& ctx);

// Vanishing finite part of the curvature boundary density.
VerificationReport verify_boundary_finite_part(const RenormContext& ctx);

// Two dimensional area balance.
VerificationReport verify_area_2d(const RenormContext& ctx);

// Four dimensional volume balance for an ambient-only entry.
VerificationReport verify_volume_identity(const Scenario& scn);

// Pointwise identities on a solved surface: traced and squared Gauss
// relations, conformal invariance of the second fundamental form invariants,
// agreement of the two computation paths for it.
VerificationReport pointwise_identity_suite(const Scenario& scn, const SolveResult& result);

// Boundary decay orders of the compactified geometry.
VerificationReport decay_order_suite(const Scenario& scn, const SolveResult& result);

// Pointwise conformal identity for sigma2 on a compact 4d field at random
// interior sample points.
VerificationReport verify_sigma2_identity(const MetricField& compact_4d, const ScalarField& r_func,
                                          int n_points, unsigned long long seed);

// radial scan of pointwise quantities, maxima over a boundary subsample
struct SurfaceScan {
  std::vector<double> r;
  std::vector<double> traced, squared;
  std::vector<double> hrr_minus_one;
  std::vector<double> b_agreement;
  std::vector<double> conf_b2, conf_b4, conf_b2sq, conf_weyl;
  std::vector<double> weyl_mixed_dev, weyl_b2_dev;  // ambient contractions across scales
  std::vector<double> scalar_compact, ricci_nn_compact;
  std::vector<double> b2;
};
SurfaceScan scan_surface(const Scenario& scn, const SolveResult& result, int nr = 33);

}  // namespace renarea
