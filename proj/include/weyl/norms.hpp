#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "weyl/alcove.hpp"
#include "weyl/root_system.hpp"

namespace weyl {

enum class QuadScheme { TENSOR_GAUSS, MONTE_CARLO };

struct QuadratureSpec {
  QuadScheme scheme = QuadScheme::TENSOR_GAUSS;
  double q_res = 8.0;           // panels per unit length scale with q_res * N
  std::uint64_t seed = 0x5EED;  // Monte Carlo only
  double inset_factor = 0.1;    // boundary inset = inset_factor / (q_res * N)
  std::size_t node_budget = 50'000'000;
  int workers = 1;
  bool estimate_error = true;  // re-run at half resolution for err_est
  int mc_samples = 200'000;
  int mc_batches = 16;
};

struct NormResult {
  double value = 0;
  double err_est = 0;
  std::size_t nodes = 0;
};

// All integrals below are taken in the wall-distance coordinates of the
// facet chart (Lebesgue in t).  In this normalization the full-alcove L2
// mass of chi_{N rho} is exactly N for A_1, and the |delta|^2-weighted
// alcove integral, scaled by |W| / (Cartan index), reproduces the unit
// L2 norm of characters on the group.

// ( integral_{A_J} |chi_{N rho}|^p )^{1/p}.  p = infinity gives the max
// over quadrature nodes.  TENSOR_GAUSS supports facet dimension <= 2.
NormResult lp_norm_facet(const RootSystem& rs, NodeMask J, double p, int N,
                         const QuadratureSpec& quad);

// ( (|W|/index) * integral_{A_J} |chi_{N rho}|^p |delta_J|^2 )^{1/p}:
// the norm on the conjugation orbit of the facet, up to the orbit constant.
NormResult lp_norm_weighted(const RootSystem& rs, NodeMask J, double p, int N,
                            const QuadratureSpec& quad);

// Restriction to the ordered-distance region 1/N < t_{j_k} <= ... <= t_{j_1} <= c
// inside A_J, where J is the size-(r-k) tail of perm0.
NormResult lp_norm_region(const RootSystem& rs, NodeMask J, const std::vector<int>& perm0,
                          double c, double p, int N, const QuadratureSpec& quad);

// Lebesgue volume of the facet chart domain in the free t coordinates.
double facet_measure(const RootSystem& rs, NodeMask J);

// dim of the conjugation orbit of a k-dimensional subset of A_J.
long orbit_dimension(const RootSystem& rs, NodeMask J, int k);

enum class Bound {
  CharacterSubmanifold,     // characters on k-submanifolds of a torus
  MatrixCoefficientSum,     // sums of matrix coefficients, p >= 2
  LaplaceEigenfunction,     // general eigenfunctions, p >= 2
  InvariantSubmanifold,     // conjugation orbits, p >= 2, needs (n, k)
  InvariantSubmanifoldL2,   // the p = 2 orbit bound, needs (n, k)
  GlobalCharacter,          // whole-group character bound, p >= 2
};

struct Predicted {
  double exponent = 0;
  double log_power = 0;
};

// The growth exponent (and log power) of the selected bound at (k, n, p).
// n is used only by the invariant-submanifold bounds.
Predicted predicted_exponent(const RootSystem& rs, Bound b, int k, long n, double p);

struct ScanResult {
  std::vector<int> N_values;
  std::vector<double> norms;
  double fitted_slope = 0;
  double slope_stderr = 0;
  double predicted = 0;
  double log_power = 0;
  bool log_corrected = false;
  bool dropped_first = false;  // transient guard removed the smallest N
};

// Least-squares slope of log norm against log N; optionally divides out the
// predicted (log N)^log_power first.
ScanResult scan_exponent(const std::function<double(int)>& norm_at_N, double p,
                         const std::vector<int>& N_list, Predicted pred,
                         bool log_correct);

// ( integral over 1/N < s_k <= ... <= s_1 <= c of prod s_i^{-a_i p} )^{1/p},
// by iterated panel quadrature in log coordinates.  Requires a_1 > ... > a_k > 0.
double nested_power_integral(const std::vector<double>& a, double p, double N, double c);

}  // namespace weyl
