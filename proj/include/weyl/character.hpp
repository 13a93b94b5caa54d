#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "weyl/alcove.hpp"
#include "weyl/root_system.hpp"
#include "weyl/weyl_group.hpp"

namespace weyl {

using cplx = std::complex<double>;

// All torus evaluation uses the normalization in which the exponential
// e^{alpha(H)/2} - e^{-alpha(H)/2} reads 2i sin(pi <alpha, h>); lattice
// translations then shift the wall distances t_j by integers.

enum class CharRegime { REGULAR_RATIO, FACET_LIMIT, ALTERNATING_SUM };

struct CharValue {
  cplx value;
  CharRegime regime;
};

// Product over the chosen positive roots of 2i sin(pi <alpha, h>).
// Defaults to the standard positive system.
cplx weyl_denominator(const RootSystem& rs, const dvec& h);
cplx weyl_denominator(const RootSystem& rs, const dvec& h,
                      const std::vector<int>& positive_roots);

// Positive system containing the parabolic positives of every subset of I:
// a root is positive when its first nonzero coefficient over the ordered
// basis {alpha_j : j in I} is positive.  I must have |I| = r and be proper.
// Returns root indices.
std::vector<int> lex_positive_system(const RootSystem& rs, NodeMask I);

// Some r-subset of {0..r} containing K (K proper); drops the largest
// admissible node outside K.
NodeMask extend_to_basis(const RootSystem& rs, NodeMask K);

// Splits the denominator over a positive system containing the K-parabolic
// positives: upper = product over the J-span roots, lower = over the rest,
// between = over (K-span minus J-span).  upper * lower equals the
// denominator taken over the same positive system (returned in `positive`).
struct DeltaFactors {
  cplx upper;    // over the positive roots inside the J-span
  cplx lower;    // over the remaining positive roots
  cplx between;  // over K-span positives outside the J-span
  std::vector<int> positive;  // the positive system used (root indices)
};

DeltaFactors delta_factors(const RootSystem& rs, NodeMask J, NodeMask K, const dvec& h);

// |prod over positive roots outside the J-span of 2 sin(pi <alpha, h>)|;
// independent of the choice of positive system.
double delta_lower_abs(const RootSystem& rs, NodeMask J, const dvec& h);

// chi_{N rho} on the torus.  Total function: at points where every sine
// factor is regular it evaluates the ratio delta(Nh)/delta(h); near a facet
// it switches to the limiting magnitude N^{|pos roots in the J-span|} *
// |delta_J(N h*)| / |delta_J(h*)| at the projected facet point h*.
CharValue char_Nrho(const RootSystem& rs, const dvec& h, int N);

// Facet-limit magnitude evaluated directly for h on the facet A_J.
double char_Nrho_facet_abs(const RootSystem& rs, NodeMask J, const dvec& h, int N);

// General character by the alternating sum over W.  mu in ambient
// coordinates.  Near-singular points fall back to a two-point perturbation
// average (diagnostic only).
CharValue char_mu(const RootSystem& rs, const WeylGroup& W, const dvec& h, const dvec& mu);

// Character of the subsystem on the J-span, evaluated at the orthogonal
// projection of h; gamma must lie in the span of {alpha_j : j in J}.
cplx char_subsystem(const RootSystem& rs, NodeMask J, const dvec& h, const dvec& gamma,
                    std::uint64_t cap);

// Relative defect |lhs - rhs| / |lhs| of the parabolic decomposition of
// chi_mu through the J-span subsystem at a regular point h.
double decomposition_residual(const RootSystem& rs, const WeylGroup& W, const dvec& h,
                              const dvec& mu, NodeMask J);

struct DimValue {
  Rat value;
  bool singular;
};

// prod (alpha, mu) / prod (alpha, rho) over the positive roots; exact.
// Singular mu gives {0, true}.
DimValue weyl_dimension(const RootSystem& rs, const RatVec& mu);
double weyl_dimension_d(const RootSystem& rs, const dvec& mu);

// Weight utilities.
RatVec weight_from_fundamental(const RootSystem& rs, const std::vector<Rat>& coeffs);
dvec coroot_translation_d(const RootSystem& rs, int j);  // 2 alpha_j / (alpha_j, alpha_j)

}  // namespace weyl
