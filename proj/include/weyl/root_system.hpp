#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "weyl/linalg.hpp"

namespace weyl {

enum class Family : char { A = 'A', B = 'B', C = 'C', D = 'D', E = 'E', F = 'F', G = 'G' };

Family family_from_char(char c);
inline char family_char(Family f) { return static_cast<char>(f); }

// Node subsets of the extended simple system {alpha_0, ..., alpha_r} are
// bitmasks with bit j = node j.
using NodeMask = std::uint32_t;

inline NodeMask full_mask(int rank) { return (NodeMask(1) << (rank + 1)) - 1; }
std::vector<int> mask_nodes(NodeMask m);
NodeMask nodes_mask(const std::vector<int>& nodes);
std::string mask_str(NodeMask m);  // "0:2" style, "-" for empty

struct RootSystem;

// Per-subset data for every J subset of {0..r}: which roots lie in the
// rational span of {alpha_j : j in J}, and the positive-root count.
// Index by NodeMask.
struct SubsystemTable {
  int rank = 0;
  std::vector<int> pos_counts;                 // size 2^(r+1)
  std::vector<std::vector<int>> members;       // root indices, both signs
  std::vector<std::vector<char>> is_member;    // [mask][root index]

  int count(NodeMask m) const { return pos_counts[m]; }
  bool in_span(NodeMask m, int root_idx) const { return is_member[m][root_idx] != 0; }
};

struct RootSystem {
  Family family;
  int rank = 0;
  int ambient_dim = 0;

  std::vector<RatVec> roots;       // all of the system, lex-sorted, deduplicated
  std::vector<int> positive_idx;   // indices into roots
  std::vector<RatVec> simple;      // alpha_1..alpha_r
  RatVec lowest;                   // alpha_0 = -(highest root)
  std::vector<long> marks;         // m_1..m_r, highest = sum m_j alpha_j
  RatVec weyl_vector;              // rho = half-sum of positive roots
  int highest_pos = -1;            // position in positive_idx of the highest root

  // simple-root coordinates of each positive root (nonnegative integers)
  std::vector<std::vector<long>> pos_coords;

  // numeric caches
  std::vector<dvec> roots_d;
  std::vector<dvec> simple_d;
  dvec lowest_d;
  dvec rho_d;
  std::vector<dvec> dual_basis_d;  // v_j with <alpha_i, v_j> = delta_ij in the Cartan span
  dmat cartan_proj_d;              // orthogonal projector onto the Cartan span

  int num_positive() const { return int(positive_idx.size()); }
  int group_dim() const { return rank + int(roots.size()); }

  const RatVec& alpha(int j) const { return j == 0 ? lowest : simple[j - 1]; }
  const dvec& alpha_d(int j) const { return j == 0 ? lowest_d : simple_d[j - 1]; }
  long mark(int j) const { return j == 0 ? 1 : marks[j - 1]; }
  const RatVec& positive_root(int k) const { return roots[positive_idx[k]]; }
  const dvec& positive_root_d(int k) const { return roots_d[positive_idx[k]]; }

  std::string name() const { return std::string(1, family_char(family)) + std::to_string(rank); }

  // Built lazily, thread-safe; the table is immutable once built.
  const SubsystemTable& subsystems() const;

 private:
  mutable std::shared_ptr<SubsystemTable> table_;
  mutable std::once_flag table_once_;
  friend RootSystem build_root_system(Family, int);
};

// Exact Euclidean realization with the usual coordinates: A_r in R^{r+1},
// B/C/D_r in R^r, G_2 in the sum-zero plane of R^3, F_4 in R^4, E_6/7/8 in R^8.
RootSystem build_root_system(Family f, int rank);
RootSystem build_root_system(char f, int rank);

// Roots lying in the rational span of {alpha_j : j in J}, J a proper subset.
std::vector<int> parabolic_subsystem(const RootSystem& rs, NodeMask J);

SubsystemTable build_subsystem_table(const RootSystem& rs);

// Cartan integers 2(a_i,a_j)/(a_j,a_j) of the simple system.
RatMat cartan_matrix(const RootSystem& rs);

// Determinant of the Cartan matrix = index of the root lattice in the
// weight lattice (connection index).
long cartan_index(const RootSystem& rs);

// |W| from the classification; does not generate the group.
std::uint64_t weyl_order(Family f, int rank);
inline std::uint64_t weyl_order(const RootSystem& rs) { return weyl_order(rs.family, rs.rank); }

// Orthogonal projection of an ambient vector onto the Cartan span.
dvec project_to_cartan(const RootSystem& rs, const dvec& h);

// JSON text: family, rank, dims, marks, roots as "p/q" strings.
std::string root_system_json(const RootSystem& rs);

}  // namespace weyl
