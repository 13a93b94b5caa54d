#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "weyl/rational.hpp"

namespace weyl {

using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;  // row-major
using dvec = std::vector<double>;
using dmat = std::vector<dvec>;

// ---- exact vector ops ----

inline Rat rv_dot(const RatVec& a, const RatVec& b) {
  Rat s;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline RatVec rv_add(const RatVec& a, const RatVec& b) {
  RatVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline RatVec rv_sub(const RatVec& a, const RatVec& b) {
  RatVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline RatVec rv_scale(const Rat& c, const RatVec& a) {
  RatVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
  return r;
}

inline RatVec rv_neg(const RatVec& a) { return rv_scale(Rat(-1), a); }

inline bool rv_is_zero(const RatVec& a) {
  for (const Rat& x : a)
    if (!x.is_zero()) return false;
  return true;
}

inline dvec rv_to_d(const RatVec& a) {
  dvec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i].to_double();
  return r;
}

// Lexicographic coordinate order; used to store roots deterministically.
inline bool rv_lex_less(const RatVec& a, const RatVec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

// ---- exact matrix ops ----

inline RatMat rm_identity(std::size_t n) {
  RatMat m(n, RatVec(n));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = Rat(1);
  return m;
}

inline RatMat rm_mul(const RatMat& a, const RatMat& b) {
  std::size_t n = a.size(), k = b.size(), m = b[0].size();
  RatMat r(n, RatVec(m));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l) {
      if (a[i][l].is_zero()) continue;
      for (std::size_t j = 0; j < m; ++j) r[i][j] += a[i][l] * b[l][j];
    }
  return r;
}

inline RatVec rm_apply(const RatMat& a, const RatVec& v) {
  RatVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = rv_dot(a[i], v);
  return r;
}

inline Rat rm_det(RatMat m) {
  std::size_t n = m.size();
  Rat det(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col].is_zero()) ++piv;
    if (piv == n) return Rat(0);
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = -det;
    }
    det *= m[col][col];
    Rat inv = Rat(1) / m[col][col];
    for (std::size_t row = col + 1; row < n; ++row) {
      if (m[row][col].is_zero()) continue;
      Rat f = m[row][col] * inv;
      for (std::size_t j = col; j < n; ++j) m[row][j] -= f * m[col][j];
    }
  }
  return det;
}

inline RatMat rm_inverse(RatMat m) {
  std::size_t n = m.size();
  RatMat inv = rm_identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col].is_zero()) ++piv;
    if (piv == n) throw ValidationError("rm_inverse: singular matrix");
    std::swap(m[piv], m[col]);
    std::swap(inv[piv], inv[col]);
    Rat f = Rat(1) / m[col][col];
    for (std::size_t j = 0; j < n; ++j) {
      m[col][j] *= f;
      inv[col][j] *= f;
    }
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || m[row][col].is_zero()) continue;
      Rat g = m[row][col];
      for (std::size_t j = 0; j < n; ++j) {
        m[row][j] -= g * m[col][j];
        inv[row][j] -= g * inv[col][j];
      }
    }
  }
  return inv;
}

// Row echelon form over the rationals with remembered pivot columns.
// reduce() answers span-membership queries; coords_in_span() recovers the
// coefficients of a member in the original (independent) generator set.
class Echelon {
 public:
  void add_row(RatVec v) {
    RatVec coeff(n_added_ + 1);
    coeff[n_added_] = Rat(1);
    reduce_tracked(v, coeff);
    ++n_added_;
    for (auto& c : coeffs_) c.resize(n_added_);
    if (!rv_is_zero(v)) {
      std::size_t p = 0;
      while (v[p].is_zero()) ++p;
      Rat f = Rat(1) / v[p];
      rows_.push_back(rv_scale(f, v));
      coeff.resize(n_added_);
      coeffs_.push_back(rv_scale(f, coeff));
      pivots_.push_back(p);
    }
  }

  std::size_t rank() const { return rows_.size(); }

  bool contains(const RatVec& v) const {
    RatVec r = v;
    reduce_plain(r);
    return rv_is_zero(r);
  }

  // Coefficients of v over the added generators, if v lies in their span.
  // Only meaningful when the generators were linearly independent.
  std::optional<RatVec> coords_in_span(const RatVec& v) const {
    RatVec r = v;
    RatVec coeff(n_added_);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const Rat& c = r[pivots_[i]];
      if (c.is_zero()) continue;
      Rat f = c;
      for (std::size_t j = 0; j < r.size(); ++j) r[j] -= f * rows_[i][j];
      for (std::size_t j = 0; j < n_added_; ++j) coeff[j] += f * coeffs_[i][j];
    }
    if (!rv_is_zero(r)) return std::nullopt;
    return coeff;
  }

 private:
  void reduce_plain(RatVec& v) const {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const Rat& c = v[pivots_[i]];
      if (c.is_zero()) continue;
      Rat f = c;
      for (std::size_t j = 0; j < v.size(); ++j) v[j] -= f * rows_[i][j];
    }
  }

  void reduce_tracked(RatVec& v, RatVec& coeff) const {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const Rat& c = v[pivots_[i]];
      if (c.is_zero()) continue;
      Rat f = c;
      for (std::size_t j = 0; j < v.size(); ++j) v[j] -= f * rows_[i][j];
      for (std::size_t j = 0; j < coeffs_[i].size(); ++j)
        coeff[j] -= f * coeffs_[i][j];
    }
  }

  std::vector<RatVec> rows_;
  std::vector<RatVec> coeffs_;  // rows_[i] = sum_j coeffs_[i][j] * generator_j
  std::vector<std::size_t> pivots_;
  std::size_t n_added_ = 0;
};

// Solve sum_j c_j basis[j] = target exactly; nullopt when inconsistent.
inline std::optional<RatVec> solve_coords(const std::vector<RatVec>& basis,
                                          const RatVec& target) {
  Echelon e;
  for (const auto& b : basis) e.add_row(b);
  if (e.rank() != basis.size())
    throw ValidationError("solve_coords: dependent basis");
  return e.coords_in_span(target);
}

// ---- double-precision helpers ----

inline double ddot(const dvec& a, const dvec& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline void daxpy(double c, const dvec& x, dvec& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += c * x[i];
}

inline dvec dscale(double c, const dvec& a) {
  dvec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
  return r;
}

inline dvec dadd(const dvec& a, const dvec& b) {
  dvec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline dvec dsub(const dvec& a, const dvec& b) {
  dvec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline double dnorm(const dvec& a) { return std::sqrt(ddot(a, a)); }

}  // namespace weyl
