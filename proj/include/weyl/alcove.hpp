#pragma once

#include <vector>

#include "weyl/root_system.hpp"

namespace weyl {

// Wall-distance coordinates t_j(h) = <alpha_j, h> + [j == 0], j = 0..r.
// They satisfy t_0 + sum_j m_j t_j = 1, and the closed fundamental alcove
// is exactly {t_j >= 0 for all j}.
dvec t_coords(const RootSystem& rs, const dvec& h_ambient);

// A torus point carried in both coordinate systems.
struct AlcovePoint {
  dvec h;  // ambient, in the Cartan span
  dvec t;  // size r+1
};

// Reconstruct h from the independent coordinates t_1..t_r (t_0 follows from
// the affine relation).
AlcovePoint point_from_t(const RootSystem& rs, const dvec& t_1_to_r);
AlcovePoint point_from_h(const RootSystem& rs, const dvec& h_ambient);

// Default barycentric threshold: 1/(4 * max mark * rank).  Small enough that
// every cell stays uniformly clear of the walls it is supposed to avoid.
double default_barycentric_c(const RootSystem& rs);

struct BssCell {
  bool outside = false;
  NodeMask K = 0;  // walls within the fixed distance c
  NodeMask J = 0;  // walls within the semiclassical distance 1/N
};

// Classify h into its barycentric-semiclassical cell: J = {j : t_j <= 1/N},
// K = {j : t_j <= c}, or OUTSIDE when some t_j < 0.  Requires N > 1/c so
// that J is always contained in K.
BssCell classify_bss(const RootSystem& rs, const dvec& h, int N, double c);

// The membership predicate of the (K, J) cell, stated independently of
// classify_bss so the partition property is testable.
bool bss_cell_contains(const RootSystem& rs, NodeMask K, NodeMask J, const dvec& h,
                       int N, double c);

// Nodes whose wall distance vanishes to within tol.
NodeMask facet_of(const RootSystem& rs, const dvec& h, double tol);

// Affine parametrization of the facet A_J = {t_j = 0 for j in J, t >= 0} by
// the free wall distances.  One complement node (the smallest, unless
// overridden) is dependent through the affine relation.  The chart domain in
// the free coordinates is {t_f >= 0, sum_f m_f t_f <= 1}.
struct FacetChart {
  NodeMask J = 0;
  std::vector<int> free_nodes;
  int dep_node = 0;
  std::vector<dvec> columns;  // d h / d t_f
  dvec offset;
  double volume_scale = 1.0;  // sqrt Gram det: chart Lebesgue -> induced Riemannian

  int dim() const { return int(free_nodes.size()); }
  dvec map(const dvec& t_free) const;
  // Lebesgue volume of the chart domain in the free t coordinates.
  double t_volume(const RootSystem& rs) const;
};

FacetChart facet_chart(const RootSystem& rs, NodeMask J);
FacetChart facet_chart(const RootSystem& rs, NodeMask J, int dep_node);

// Ordered-distance chain region inside A_J: with perm0 = (j_0,...,j_r) and
// J = {j_{k+1},...,j_r}, tests 1/N < t_{j_k} <= ... <= t_{j_1} <= c.
bool sharpness_region_contains(const RootSystem& rs, NodeMask J,
                               const std::vector<int>& perm0, double c, int N,
                               const dvec& h);

}  // namespace weyl
