#include "weyl/alcove.hpp"

#include <algorithm>
#include <cmath>

namespace weyl {

dvec t_coords(const RootSystem& rs, const dvec& h_ambient) {
  dvec h = project_to_cartan(rs, h_ambient);
  dvec t(rs.rank + 1);
  t[0] = ddot(rs.lowest_d, h) + 1.0;
  for (int j = 1; j <= rs.rank; ++j) t[j] = ddot(rs.simple_d[j - 1], h);
  return t;
}

AlcovePoint point_from_t(const RootSystem& rs, const dvec& t_1_to_r) {
  if (int(t_1_to_r.size()) != rs.rank)
    throw ValidationError("point_from_t: expected t_1..t_r");
  AlcovePoint p;
  p.h.assign(rs.ambient_dim, 0.0);
  for (int j = 0; j < rs.rank; ++j) daxpy(t_1_to_r[j], rs.dual_basis_d[j], p.h);
  p.t.resize(rs.rank + 1);
  double s = 0;
  for (int j = 1; j <= rs.rank; ++j) {
    p.t[j] = t_1_to_r[j - 1];
    s += double(rs.mark(j)) * p.t[j];
  }
  p.t[0] = 1.0 - s;
  return p;
}

AlcovePoint point_from_h(const RootSystem& rs, const dvec& h_ambient) {
  AlcovePoint p;
  p.h = project_to_cartan(rs, h_ambient);
  p.t = t_coords(rs, p.h);
  return p;
}

double default_barycentric_c(const RootSystem& rs) {
  long mmax = 1;
  for (long m : rs.marks) mmax = std::max(mmax, m);
  return 1.0 / (4.0 * double(mmax) * double(rs.rank));
}

BssCell classify_bss(const RootSystem& rs, const dvec& h, int N, double c) {
  if (!(c > 0) || N <= 0 || double(N) <= 1.0 / c)
    throw PreconditionError("classify_bss: need N > 1/c > 0");
  dvec t = t_coords(rs, h);
  BssCell cell;
  for (int j = 0; j <= rs.rank; ++j) {
    if (t[j] < 0) {
      cell.outside = true;
      return cell;
    }
    if (t[j] <= 1.0 / double(N)) cell.J |= NodeMask(1) << j;
    if (t[j] <= c) cell.K |= NodeMask(1) << j;
  }
  return cell;
}

bool bss_cell_contains(const RootSystem& rs, NodeMask K, NodeMask J, const dvec& h,
                       int N, double c) {
  dvec t = t_coords(rs, h);
  double invN = 1.0 / double(N);
  for (int j = 0; j <= rs.rank; ++j) {
    if (t[j] < 0) return false;
    bool inJ = (J >> j) & 1, inK = (K >> j) & 1;
    if (inJ && !(t[j] <= invN)) return false;
    if (inK && !inJ && !(invN < t[j] && t[j] <= c)) return false;
    if (!inK && !(t[j] > c)) return false;
  }
  return true;
}

NodeMask facet_of(const RootSystem& rs, const dvec& h, double tol) {
  dvec t = t_coords(rs, h);
  NodeMask m = 0;
  for (int j = 0; j <= rs.rank; ++j)
    if (std::abs(t[j]) <= tol) m |= NodeMask(1) << j;
  return m;
}

dvec FacetChart::map(const dvec& t_free) const {
  if (t_free.size() != free_nodes.size())
    throw ValidationError("FacetChart::map: wrong parameter count");
  dvec h = offset;
  for (std::size_t i = 0; i < t_free.size(); ++i) daxpy(t_free[i], columns[i], h);
  return h;
}

double FacetChart::t_volume(const RootSystem& rs) const {
  // simplex {t_f >= 0, sum m_f t_f <= 1} has volume (1/dim!) * prod 1/m_f
  double v = 1.0;
  for (std::size_t i = 0; i < free_nodes.size(); ++i)
    v /= double(rs.mark(free_nodes[i])) * double(i + 1);
  return v;
}

FacetChart facet_chart(const RootSystem& rs, NodeMask J) {
  NodeMask comp = full_mask(rs.rank) & ~J;
  if (comp == 0) throw ValidationError("facet_chart: J must be a proper subset");
  return facet_chart(rs, J, mask_nodes(comp).front());
}

FacetChart facet_chart(const RootSystem& rs, NodeMask J, int dep_node) {
  NodeMask full = full_mask(rs.rank);
  if ((J & ~full) != 0) throw ValidationError("facet_chart: node out of range");
  if (J == full) throw ValidationError("facet_chart: J must be a proper subset");
  if (dep_node < 0 || dep_node > rs.rank || ((J >> dep_node) & 1))
    throw ValidationError("facet_chart: dependent node must lie outside J");

  FacetChart ch;
  ch.J = J;
  ch.dep_node = dep_node;
  for (int j = 0; j <= rs.rank; ++j)
    if (j != dep_node && !((J >> j) & 1)) ch.free_nodes.push_back(j);

  // h is recovered from (t_1,...,t_r); t_0 never enters the reconstruction.
  // dep = 0:   h = sum_f t_f v_f                 (free nodes are >= 1)
  // dep = d>0: t_d = (1 - sum_f m_f t_f)/m_d, so
  //            h = v_d/m_d + sum_f t_f (v_f - (m_f/m_d) v_d),
  //            with v_0 read as the zero vector (t_0 is not a coordinate of h).
  ch.offset.assign(rs.ambient_dim, 0.0);
  if (dep_node == 0) {
    for (int f : ch.free_nodes) ch.columns.push_back(rs.dual_basis_d[f - 1]);
  } else {
    const dvec& vd = rs.dual_basis_d[dep_node - 1];
    double md = double(rs.mark(dep_node));
    ch.offset = dscale(1.0 / md, vd);
    for (int f : ch.free_nodes) {
      dvec col(rs.ambient_dim, 0.0);
      if (f != 0) col = rs.dual_basis_d[f - 1];
      daxpy(-double(rs.mark(f)) / md, vd, col);
      ch.columns.push_back(std::move(col));
    }
  }

  int dim = ch.dim();
  if (dim == 0) {
    ch.volume_scale = 1.0;
    return ch;
  }
  dmat gram(dim, dvec(dim));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) gram[i][j] = ddot(ch.columns[i], ch.columns[j]);
  // Cholesky-free determinant via Gaussian elimination (dim <= 8)
  double det = 1.0;
  for (int c = 0; c < dim; ++c) {
    int piv = c;
    for (int r2 = c + 1; r2 < dim; ++r2)
      if (std::abs(gram[r2][c]) > std::abs(gram[piv][c])) piv = r2;
    std::swap(gram[piv], gram[c]);
    if (piv != c) det = -det;
    det *= gram[c][c];
    for (int r2 = c + 1; r2 < dim; ++r2) {
      double f = gram[r2][c] / gram[c][c];
      for (int k = c; k < dim; ++k) gram[r2][k] -= f * gram[c][k];
    }
  }
  ch.volume_scale = std::sqrt(std::abs(det));
  return ch;
}

bool sharpness_region_contains(const RootSystem& rs, NodeMask J,
                               const std::vector<int>& perm0, double c, int N,
                               const dvec& h) {
  if (int(perm0.size()) != rs.rank + 1)
    throw ValidationError("sharpness_region_contains: bad permutation");
  int k = rs.rank - int(mask_nodes(J).size());
  NodeMask tail = 0;
  for (int i = k + 1; i <= rs.rank; ++i) tail |= NodeMask(1) << perm0[i];
  if (tail != J)
    throw ValidationError(
        "sharpness_region_contains: J must be the size-(r-k) tail of perm0");

  dvec t = t_coords(rs, h);
  double invN = 1.0 / double(N);
  double prev = c;  // chain: 1/N < t_{j_k} <= ... <= t_{j_1} <= c
  for (int i = 1; i <= k; ++i) {
    double ti = t[perm0[i]];
    if (!(ti <= prev)) return false;
    prev = ti;
  }
  return prev > invN;
}

}  // namespace weyl
