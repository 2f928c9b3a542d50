#pragma once

#include "renarea/jet.hpp"
#include "renarea/scenario.hpp"

namespace renarea {

// Formal expansions in r over the Sigma lattice. Coefficients are fields
// sampled at the chart nodes; order by order solves are pointwise.
struct GraphExpansion {
  int order = 0;
  // coefficients[k][node]: coefficient of r^k of the graph function
  std::vector<std::vector<double>> coefficients;
};

// Substitutes a series ansatz into the graph equation and solves order by
// order. Orders above the surface dimension hit the free coefficient of the
// expansion and are not determined; the order is clamped accordingly.
GraphExpansion expand_minimal_graph(const Scenario& scn, int order);

struct AreaFormExpansion {
  int order = 0;
  // coefficients[k][node] of (det hbar / det h0)^{1/2}
  std::vector<std::vector<double>> coefficients;
};

// expansion of the area form ratio along a given graph expansion
AreaFormExpansion expand_area_form(const Scenario& scn, const GraphExpansion& graph, int order);

// volume form ratio coefficients for an ambient-only scenario
struct VolumeFormExpansion {
  int order = 0;
  std::vector<std::vector<double>> coefficients;  // of (det g_r / det g_0)^{1/2}
};
VolumeFormExpansion expand_volume_form(const Scenario& scn, int order);

}  // namespace renarea
