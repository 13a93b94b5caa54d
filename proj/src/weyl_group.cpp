#include "weyl/weyl_group.hpp"

#include <map>
#include <unordered_map>

namespace weyl {

namespace {

// hash a root permutation (the action of a group element on the root list)
struct PermHash {
  std::size_t operator()(const std::vector<std::uint16_t>& p) const {
    std::size_t h = 1469598103934665603ULL;
    for (std::uint16_t x : p) {
      h ^= x;
      h *= 1099511628211ULL;
    }
    return h;
  }
};

dmat to_dmat(const RatMat& m) {
  dmat out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = rv_to_d(m[i]);
  return out;
}

WeylGroup generate(const RootSystem& rs, const std::vector<int>& gen_nodes,
                   std::uint64_t cap) {
  if (cap == 0) throw ValidationError("weyl_group: cap must be positive");

  int dim = rs.ambient_dim;
  std::size_t n_roots = rs.roots.size();
  std::map<RatVec, int, decltype(&rv_lex_less)> root_index(&rv_lex_less);
  for (std::size_t i = 0; i < n_roots; ++i) root_index.emplace(rs.roots[i], int(i));

  // generator matrices and their root permutations
  std::vector<RatMat> gens;
  std::vector<std::vector<std::uint16_t>> gen_perms;
  for (int j : gen_nodes) {
    RatMat s = simple_reflection(rs, j);
    std::vector<std::uint16_t> perm(n_roots);
    for (std::size_t i = 0; i < n_roots; ++i) {
      auto it = root_index.find(rm_apply(s, rs.roots[i]));
      if (it == root_index.end())
        throw InternalConsistencyError("reflection does not permute the roots");
      perm[i] = std::uint16_t(it->second);
    }
    gens.push_back(std::move(s));
    gen_perms.push_back(std::move(perm));
  }

  WeylGroup W;
  std::vector<std::vector<std::uint16_t>> perms;
  std::unordered_map<std::vector<std::uint16_t>, std::size_t, PermHash> seen;

  std::vector<std::uint16_t> id_perm(n_roots);
  for (std::size_t i = 0; i < n_roots; ++i) id_perm[i] = std::uint16_t(i);
  perms.push_back(id_perm);
  seen.emplace(id_perm, 0);
  W.mats.push_back(rm_identity(dim));
  W.dets.push_back(1);

  for (std::size_t head = 0; head < perms.size(); ++head) {
    for (std::size_t gi = 0; gi < gens.size(); ++gi) {
      std::vector<std::uint16_t> child(n_roots);
      const auto& gp = gen_perms[gi];
      const auto& pp = perms[head];
      for (std::size_t i = 0; i < n_roots; ++i) child[i] = gp[pp[i]];
      auto [it, inserted] = seen.emplace(child, perms.size());
      if (!inserted) continue;
      if (perms.size() >= cap)
        throw CapExceededError(
            "weyl_group: closure exceeds cap " + std::to_string(cap), perms.size() + 1);
      perms.push_back(std::move(child));
      W.mats.push_back(rm_mul(gens[gi], W.mats[head]));
      W.dets.push_back(std::int8_t(-W.dets[head]));
    }
  }

  W.mats_d.reserve(W.mats.size());
  for (const auto& m : W.mats) W.mats_d.push_back(to_dmat(m));
  return W;
}

}  // namespace

RatMat simple_reflection(const RootSystem& rs, int j) {
  if (j < 0 || j > rs.rank) throw ValidationError("simple_reflection: bad node index");
  const RatVec& a = rs.alpha(j);
  Rat norm2 = rv_dot(a, a);
  int dim = rs.ambient_dim;
  RatMat s = rm_identity(dim);
  for (int p = 0; p < dim; ++p)
    for (int q = 0; q < dim; ++q) s[p][q] -= Rat(2) * a[p] * a[q] / norm2;
  return s;
}

WeylGroup weyl_group(const RootSystem& rs, std::uint64_t cap) {
  std::vector<int> nodes(rs.rank);
  for (int j = 1; j <= rs.rank; ++j) nodes[j - 1] = j;
  return generate(rs, nodes, cap);
}

WeylGroup reflection_subgroup(const RootSystem& rs, NodeMask J, std::uint64_t cap) {
  if ((J & ~full_mask(rs.rank)) != 0)
    throw ValidationError("reflection_subgroup: node out of range");
  return generate(rs, mask_nodes(J), cap);
}

}  // namespace weyl
