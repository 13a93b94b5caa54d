#include "weyl/character.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace weyl {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
// regime switch for char_Nrho, relative to the oscillation scale 1/N
constexpr double kSingBase = 1e-8;

cplx unit_phase(double x) { return {std::cos(x), std::sin(x)}; }

// alternating sum over a group: sum det(s) e^{2 pi i <s mu, h>},
// compensated to keep cancellation error down for larger groups
cplx alternating_sum(const WeylGroup& W, const dvec& mu, const dvec& h) {
  cplx sum = 0, comp = 0;
  for (std::size_t s = 0; s < W.size(); ++s) {
    const dmat& m = W.mats_d[s];
    double phase = 0;
    for (std::size_t i = 0; i < h.size(); ++i) phase += ddot(m[i], h) * mu[i];
    // <s mu, h> = <mu, s^{-1} h> = sum_i mu_i (s h ... ); matrices are
    // orthogonal so <s mu, h> = <mu, s^T h>; m[i] is row i of s, and
    // ddot(m[i], h) is (s h)_i only if we apply rows -- here we need s^T h,
    // handled by summing mu_i * (row_i . h) = mu^T s h = <s^T mu, h>.
    // Generated groups are closed under inverse, so summing over s^T mu
    // ranges over the same group; dets match since det s = det s^T.
    cplx term = double(W.dets[s]) * unit_phase(kTwoPi * phase);
    cplx y = term - comp;
    cplx t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

// orthogonal projector onto span{alpha_j : j in J}
dmat span_projector(const RootSystem& rs, NodeMask J) {
  std::vector<dvec> basis;
  Echelon e;
  for (int j : mask_nodes(J)) {
    if (e.contains(rs.alpha(j))) continue;
    e.add_row(rs.alpha(j));
    basis.push_back(rs.alpha_d(j));
  }
  int dim = rs.ambient_dim;
  int k = int(basis.size());
  dmat proj(dim, dvec(dim, 0.0));
  if (k == 0) return proj;
  // P = B (B^T B)^{-1} B^T via solving small Gram systems
  dmat gram(k, dvec(k));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) gram[i][j] = ddot(basis[i], basis[j]);
  // invert gram (k <= 8) by Gauss-Jordan
  dmat inv(k, dvec(k, 0.0));
  for (int i = 0; i < k; ++i) inv[i][i] = 1.0;
  for (int c = 0; c < k; ++c) {
    int piv = c;
    for (int r2 = c + 1; r2 < k; ++r2)
      if (std::abs(gram[r2][c]) > std::abs(gram[piv][c])) piv = r2;
    std::swap(gram[piv], gram[c]);
    std::swap(inv[piv], inv[c]);
    double f = gram[c][c];
    for (int j = 0; j < k; ++j) {
      gram[c][j] /= f;
      inv[c][j] /= f;
    }
    for (int r2 = 0; r2 < k; ++r2) {
      if (r2 == c) continue;
      double g = gram[r2][c];
      for (int j = 0; j < k; ++j) {
        gram[r2][j] -= g * gram[c][j];
        inv[r2][j] -= g * inv[c][j];
      }
    }
  }
  for (int p = 0; p < dim; ++p)
    for (int q = 0; q < dim; ++q) {
      double s = 0;
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) s += basis[i][p] * inv[i][j] * basis[j][q];
      proj[p][q] = s;
    }
  return proj;
}

dvec apply_mat(const dmat& m, const dvec& v) {
  dvec out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = ddot(m[i], v);
  return out;
}

// Fold h into the closed fundamental alcove by affine wall reflections.
// chi_{N rho} is exactly invariant under these moves.
dvec fold_to_alcove(const RootSystem& rs, dvec h) {
  constexpr double tol = 1e-12;
  for (int iter = 0; iter < 4096; ++iter) {
    dvec t = t_coords(rs, h);
    int worst = -1;
    double worst_t = -tol;
    for (int j = 0; j <= rs.rank; ++j)
      if (t[j] < worst_t) {
        worst_t = t[j];
        worst = j;
      }
    if (worst < 0) return h;
    const dvec& a = rs.alpha_d(worst);
    double norm2 = ddot(a, a);
    // reflect in the wall {t_worst = 0}: h -> h - t_worst * 2 a / (a,a)
    daxpy(-2.0 * worst_t / norm2, a, h);
  }
  throw InternalConsistencyError("fold_to_alcove: did not converge");
}

}  // namespace

cplx weyl_denominator(const RootSystem& rs, const dvec& h) {
  cplx prod = 1;
  for (int k = 0; k < rs.num_positive(); ++k) {
    double u = ddot(rs.positive_root_d(k), h);
    prod *= cplx(0.0, 2.0 * std::sin(kPi * u));
  }
  return prod;
}

cplx weyl_denominator(const RootSystem& rs, const dvec& h,
                      const std::vector<int>& positive_roots) {
  cplx prod = 1;
  for (int idx : positive_roots) {
    double u = ddot(rs.roots_d[idx], h);
    prod *= cplx(0.0, 2.0 * std::sin(kPi * u));
  }
  return prod;
}

std::vector<int> lex_positive_system(const RootSystem& rs, NodeMask I) {
  auto nodes = mask_nodes(I);
  if (int(nodes.size()) != rs.rank)
    throw ValidationError("lex_positive_system: need exactly r basis nodes");
  std::vector<RatVec> basis;
  for (int j : nodes) basis.push_back(rs.alpha(j));
  std::vector<int> out;
  for (int idx = 0; idx < int(rs.roots.size()); ++idx) {
    auto c = solve_coords(basis, rs.roots[idx]);
    if (!c) throw ValidationError("lex_positive_system: basis does not span the roots");
    for (const Rat& x : *c) {
      if (x.is_zero()) continue;
      if (x.sign() > 0) out.push_back(idx);
      break;
    }
  }
  if (2 * out.size() != rs.roots.size())
    throw InternalConsistencyError("lex positive system is not half the roots");
  return out;
}

NodeMask extend_to_basis(const RootSystem& rs, NodeMask K) {
  NodeMask full = full_mask(rs.rank);
  if (K == full) throw ValidationError("extend_to_basis: K must be proper");
  NodeMask I = K;
  int need = rs.rank - __builtin_popcount(K);
  for (int j = rs.rank; j >= 0 && need > 0; --j) {
    NodeMask bit = NodeMask(1) << j;
    if ((I & bit) == 0 && (I | bit) != full) {
      I |= bit;
      --need;
    }
  }
  if (__builtin_popcount(I) != rs.rank)
    throw InternalConsistencyError("extend_to_basis failed");
  return I;
}

DeltaFactors delta_factors(const RootSystem& rs, NodeMask J, NodeMask K, const dvec& h) {
  if ((J & ~K) != 0) throw ValidationError("delta_factors: J must be contained in K");
  if (K == full_mask(rs.rank))
    throw ValidationError("delta_factors: K must be a proper subset");

  // positive system from a basis extending K; for subsets of the finite
  // nodes this is the standard one
  std::vector<int> positive;
  if ((K & 1) == 0 && __builtin_popcount(K) <= rs.rank) {
    positive.reserve(rs.num_positive());
    for (int k : rs.positive_idx) positive.push_back(k);
  } else {
    positive = lex_positive_system(rs, extend_to_basis(rs, K));
  }

  const SubsystemTable& tbl = rs.subsystems();
  DeltaFactors f;
  f.upper = f.lower = f.between = 1;
  for (int idx : positive) {
    double u = ddot(rs.roots_d[idx], h);
    cplx factor(0.0, 2.0 * std::sin(kPi * u));
    bool inJ = tbl.in_span(J, idx);
    bool inK = tbl.in_span(K, idx);
    if (inJ)
      f.upper *= factor;
    else
      f.lower *= factor;
    if (inK && !inJ) f.between *= factor;
  }
  f.positive = std::move(positive);
  return f;
}

double delta_lower_abs(const RootSystem& rs, NodeMask J, const dvec& h) {
  const SubsystemTable& tbl = rs.subsystems();
  double prod = 1;
  for (int k = 0; k < rs.num_positive(); ++k) {
    int idx = rs.positive_idx[k];
    if (tbl.in_span(J, idx)) continue;
    double u = ddot(rs.roots_d[idx], h);
    prod *= std::abs(2.0 * std::sin(kPi * u));
  }
  return prod;
}

double char_Nrho_facet_abs(const RootSystem& rs, NodeMask J, const dvec& h, int N) {
  const SubsystemTable& tbl = rs.subsystems();
  double prod = std::pow(double(N), tbl.count(J));
  for (int k = 0; k < rs.num_positive(); ++k) {
    int idx = rs.positive_idx[k];
    if (tbl.in_span(J, idx)) continue;
    double u = ddot(rs.roots_d[idx], h);
    prod *= std::abs(std::sin(double(N) * kPi * u) / std::sin(kPi * u));
  }
  return prod;
}

CharValue char_Nrho(const RootSystem& rs, const dvec& h_in, int N) {
  if (N <= 0) throw ValidationError("char_Nrho: N must be a positive integer");
  dvec h = fold_to_alcove(rs, project_to_cartan(rs, h_in));
  double eps = kSingBase / double(N);

  double ratio = 1;
  bool regular = true;
  for (int k = 0; k < rs.num_positive() && regular; ++k) {
    double u = ddot(rs.positive_root_d(k), h);
    double s = std::sin(kPi * u);
    if (std::abs(s) <= eps)
      regular = false;
    else
      ratio *= std::sin(double(N) * kPi * u) / s;
  }
  if (regular) return {cplx(ratio, 0.0), CharRegime::REGULAR_RATIO};

  // near a facet: collect the vanishing wall directions and evaluate the
  // limiting magnitude at the on-facet projection
  dvec t = t_coords(rs, h);
  NodeMask J = 0;
  for (int j = 0; j <= rs.rank; ++j)
    if (std::abs(std::sin(kPi * t[j])) <= eps) J |= NodeMask(1) << j;
  if (J == full_mask(rs.rank)) J &= ~NodeMask(1);  // vertex: drop node 0
  if (J == 0)
    throw InternalConsistencyError("char_Nrho: singular factor without a facet");

  FacetChart ch = facet_chart(rs, J);
  dvec t_free(ch.free_nodes.size());
  for (std::size_t i = 0; i < ch.free_nodes.size(); ++i) {
    int f = ch.free_nodes[i];
    t_free[i] = (f == ch.dep_node) ? 0.0 : t[f];
  }
  dvec h_star = ch.map(t_free);
  return {cplx(char_Nrho_facet_abs(rs, J, h_star, N), 0.0), CharRegime::FACET_LIMIT};
}

CharValue char_mu(const RootSystem& rs, const WeylGroup& W, const dvec& h_in,
                  const dvec& mu) {
  dvec h = project_to_cartan(rs, h_in);
  cplx den = weyl_denominator(rs, h);
  if (std::abs(den) > 1e-8) {
    cplx num = alternating_sum(W, mu, h);
    return {num / den, CharRegime::ALTERNATING_SUM};
  }
  // perturbation average off the singular set; diagnostic fallback only
  std::uint64_t state = 0x243F6A8885A308D3ULL;
  auto next = [&state] {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return double(state >> 11) * 0x1.0p-53;
  };
  dvec v(rs.ambient_dim);
  for (auto& x : v) x = next() - 0.5;
  v = project_to_cartan(rs, v);
  double nv = dnorm(v);
  if (nv < 1e-12) v = rs.dual_basis_d[0], nv = dnorm(v);
  double epsh = 1e-5 / nv;
  cplx acc = 0;
  for (double sgn : {1.0, -1.0}) {
    dvec hp = h;
    daxpy(sgn * epsh, v, hp);
    acc += alternating_sum(W, mu, hp) / weyl_denominator(rs, hp);
  }
  return {acc / 2.0, CharRegime::ALTERNATING_SUM};
}

cplx char_subsystem(const RootSystem& rs, NodeMask J, const dvec& h, const dvec& gamma,
                    std::uint64_t cap) {
  if (J == 0) return 1.0;
  WeylGroup WJ = reflection_subgroup(rs, J, cap);

  dmat proj = span_projector(rs, J);
  dvec hJ = apply_mat(proj, project_to_cartan(rs, h));

  // own positive system of the span subsystem: first nonzero coefficient
  // over the ordered {alpha_j : j in J} determines the sign
  auto nodes = mask_nodes(J);
  std::vector<RatVec> jbasis;
  Echelon e;
  std::vector<int> indep;
  for (int j : nodes) {
    if (e.contains(rs.alpha(j))) continue;
    e.add_row(rs.alpha(j));
    jbasis.push_back(rs.alpha(j));
  }
  const SubsystemTable& tbl = rs.subsystems();
  cplx den = 1;
  for (int idx : tbl.members[J]) {
    auto c = solve_coords(jbasis, rs.roots[idx]);
    if (!c) throw InternalConsistencyError("char_subsystem: member outside span");
    int sign = 0;
    for (const Rat& x : *c) {
      if (x.is_zero()) continue;
      sign = x.sign();
      break;
    }
    if (sign <= 0) continue;
    double u = ddot(rs.roots_d[idx], hJ);
    den *= cplx(0.0, 2.0 * std::sin(kPi * u));
  }

  cplx num = alternating_sum(WJ, gamma, hJ);
  if (std::abs(den) < 1e-13)
    throw PreconditionError("char_subsystem: singular point for the subsystem");
  return num / den;
}

double decomposition_residual(const RootSystem& rs, const WeylGroup& W, const dvec& h_in,
                              const dvec& mu, NodeMask J) {
  if (J == full_mask(rs.rank))
    throw ValidationError("decomposition_residual: J must be a proper subset");
  dvec h = project_to_cartan(rs, h_in);

  DeltaFactors df = delta_factors(rs, J, J, h);
  cplx den = df.upper * df.lower;
  if (std::abs(den) < 1e-10)
    throw PreconditionError("decomposition_residual: sample a regular point");
  cplx lhs = alternating_sum(W, mu, h) / den;

  dmat proj = span_projector(rs, J);
  dvec hJ = apply_mat(proj, h);
  dvec hPerp = dsub(h, hJ);

  std::uint64_t wj_order = std::max<std::uint64_t>(64, W.size());
  WeylGroup WJ = reflection_subgroup(rs, J, wj_order);

  cplx acc = 0, comp = 0;
  for (std::size_t s = 0; s < W.size(); ++s) {
    // s^T mu ranges over the orbit as s does; see alternating_sum
    const dmat& m = W.mats_d[s];
    dvec smu(rs.ambient_dim, 0.0);
    for (int i = 0; i < rs.ambient_dim; ++i) daxpy(mu[i], m[i], smu);
    dvec smuJ = apply_mat(proj, smu);
    double phase = kTwoPi * ddot(smu, hPerp);
    cplx term = double(W.dets[s]) * unit_phase(phase);
    if (J != 0) {
      cplx numJ = alternating_sum(WJ, smuJ, hJ);
      // chi^J = numJ / delta^J(hJ); the upper factor from delta_factors is
      // exactly that subsystem denominator evaluated at h (equal on hJ)
      term *= numJ;
    }
    cplx y = term - comp;
    cplx t = acc + y;
    comp = (t - acc) - y;
    acc = t;
  }

  cplx rhs;
  if (J == 0) {
    rhs = acc / (double(WJ.size()) * df.lower);
  } else {
    rhs = acc / (double(WJ.size()) * df.lower * df.upper);
  }
  return std::abs(lhs - rhs) / std::abs(lhs);
}

DimValue weyl_dimension(const RootSystem& rs, const RatVec& mu) {
  Rat num(1), den(1);
  bool singular = false;
  for (int k = 0; k < rs.num_positive(); ++k) {
    Rat a = rv_dot(rs.positive_root(k), mu);
    if (a.is_zero()) singular = true;
    num *= a;
    den *= rv_dot(rs.positive_root(k), rs.weyl_vector);
  }
  if (singular) return {Rat(0), true};
  return {num / den, false};
}

double weyl_dimension_d(const RootSystem& rs, const dvec& mu) {
  double prod = 1;
  for (int k = 0; k < rs.num_positive(); ++k) {
    const dvec& a = rs.positive_root_d(k);
    prod *= ddot(a, mu) / ddot(a, rs.rho_d);
  }
  return prod;
}

RatVec weight_from_fundamental(const RootSystem& rs, const std::vector<Rat>& coeffs) {
  if (int(coeffs.size()) != rs.rank)
    throw ValidationError("weight_from_fundamental: need r coefficients");
  // fundamental weights w_i solve 2(w_i, a_j)/(a_j, a_j) = delta_ij
  RatMat m(rs.rank, RatVec(rs.rank));
  for (int i = 0; i < rs.rank; ++i)
    for (int j = 0; j < rs.rank; ++j)
      m[i][j] = Rat(2) * rv_dot(rs.simple[i], rs.simple[j]) / rv_dot(rs.simple[j], rs.simple[j]);
  // mu = sum_i c_i w_i = sum_j x_j alpha_j with C^T x = c
  RatMat mt(rs.rank, RatVec(rs.rank));
  for (int i = 0; i < rs.rank; ++i)
    for (int j = 0; j < rs.rank; ++j) mt[i][j] = m[j][i];
  RatVec x = rm_apply(rm_inverse(mt), coeffs);
  RatVec mu(rs.ambient_dim);
  for (int j = 0; j < rs.rank; ++j) mu = rv_add(mu, rv_scale(x[j], rs.simple[j]));
  return mu;
}

dvec coroot_translation_d(const RootSystem& rs, int j) {
  const dvec& a = rs.alpha_d(j);
  return dscale(2.0 / ddot(a, a), a);
}

}  // namespace weyl
