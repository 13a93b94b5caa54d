#include "weyl/root_system.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace weyl {

Family family_from_char(char c) {
  switch (c) {
    case 'A': case 'a': return Family::A;
    case 'B': case 'b': return Family::B;
    case 'C': case 'c': return Family::C;
    case 'D': case 'd': return Family::D;
    case 'E': case 'e': return Family::E;
    case 'F': case 'f': return Family::F;
    case 'G': case 'g': return Family::G;
  }
  throw ValidationError(std::string("unknown family '") + c + "'");
}

std::vector<int> mask_nodes(NodeMask m) {
  std::vector<int> v;
  for (int j = 0; m != 0; ++j, m >>= 1)
    if (m & 1) v.push_back(j);
  return v;
}

NodeMask nodes_mask(const std::vector<int>& nodes) {
  NodeMask m = 0;
  for (int j : nodes) m |= NodeMask(1) << j;
  return m;
}

std::string mask_str(NodeMask m) {
  if (m == 0) return "-";
  std::string s;
  for (int j : mask_nodes(m)) {
    if (!s.empty()) s += ":";
    s += std::to_string(j);
  }
  return s;
}

namespace {

void check_rank(Family f, int rank) {
  bool ok = false;
  switch (f) {
    case Family::A: ok = rank >= 1; break;
    case Family::B: ok = rank >= 2; break;
    case Family::C: ok = rank >= 3; break;
    case Family::D: ok = rank >= 4; break;
    case Family::E: ok = rank == 6 || rank == 7 || rank == 8; break;
    case Family::F: ok = rank == 4; break;
    case Family::G: ok = rank == 2; break;
  }
  if (!ok)
    throw ValidationError("invalid rank " + std::to_string(rank) + " for family " +
                          std::string(1, family_char(f)) +
                          " (A r>=1, B r>=2, C r>=3, D r>=4, E r in {6,7,8}, F r=4, G r=2)");
  if (rank > 12) throw ValidationError("rank too large (limit 12)");
}

RatVec unit(int dim, int i, Rat c = Rat(1)) {
  RatVec v(dim);
  v[i] = c;
  return v;
}

std::vector<RatVec> e8_roots() {
  std::vector<RatVec> out;
  for (int i = 0; i < 8; ++i)
    for (int j = i + 1; j < 8; ++j)
      for (int si : {1, -1})
        for (int sj : {1, -1}) {
          RatVec v(8);
          v[i] = Rat(si);
          v[j] = Rat(sj);
          out.push_back(v);
        }
  for (int bits = 0; bits < 256; ++bits) {
    int minus = __builtin_popcount(bits);
    if (minus % 2 != 0) continue;
    RatVec v(8);
    for (int i = 0; i < 8; ++i) v[i] = Rat((bits >> i) & 1 ? -1 : 1, 2);
    out.push_back(v);
  }
  return out;
}

std::vector<RatVec> e8_simple() {
  std::vector<RatVec> s;
  RatVec a1(8);
  a1[0] = Rat(1, 2);
  a1[7] = Rat(1, 2);
  for (int i = 1; i <= 6; ++i) a1[i] = Rat(-1, 2);
  s.push_back(a1);
  RatVec a2(8);
  a2[0] = Rat(1);
  a2[1] = Rat(1);
  s.push_back(a2);
  for (int k = 0; k < 6; ++k) {
    RatVec a(8);
    a[k] = Rat(-1);
    a[k + 1] = Rat(1);
    s.push_back(a);
  }
  return s;  // a3..a8 are e_{k+1} - e_k for k = 1..6
}

struct Generated {
  std::vector<RatVec> roots;
  std::vector<RatVec> simple;
};

Generated generate(Family f, int rank) {
  Generated g;
  switch (f) {
    case Family::A: {
      int n = rank + 1;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (i != j) g.roots.push_back(rv_sub(unit(n, i), unit(n, j)));
      for (int i = 0; i < rank; ++i)
        g.simple.push_back(rv_sub(unit(n, i), unit(n, i + 1)));
      break;
    }
    case Family::B:
    case Family::C:
    case Family::D: {
      int n = rank;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          for (int si : {1, -1})
            for (int sj : {1, -1}) {
              RatVec v(n);
              v[i] = Rat(si);
              v[j] = Rat(sj);
              g.roots.push_back(v);
            }
      if (f == Family::B)
        for (int i = 0; i < n; ++i)
          for (int s : {1, -1}) g.roots.push_back(unit(n, i, Rat(s)));
      if (f == Family::C)
        for (int i = 0; i < n; ++i)
          for (int s : {1, -1}) g.roots.push_back(unit(n, i, Rat(2 * s)));
      for (int i = 0; i < rank - 1; ++i)
        g.simple.push_back(rv_sub(unit(n, i), unit(n, i + 1)));
      if (f == Family::B) g.simple.push_back(unit(n, rank - 1));
      if (f == Family::C) g.simple.push_back(unit(n, rank - 1, Rat(2)));
      if (f == Family::D) g.simple.push_back(rv_add(unit(n, rank - 2), unit(n, rank - 1)));
      break;
    }
    case Family::G: {
      auto add_pm = [&](std::initializer_list<int> cs) {
        RatVec v(3);
        int i = 0;
        for (int c : cs) v[i++] = Rat(c);
        g.roots.push_back(v);
        g.roots.push_back(rv_neg(v));
      };
      add_pm({1, -1, 0});
      add_pm({0, 1, -1});
      add_pm({1, 0, -1});
      add_pm({2, -1, -1});
      add_pm({-1, 2, -1});
      add_pm({-1, -1, 2});
      g.simple.push_back(RatVec{Rat(1), Rat(-1), Rat(0)});
      g.simple.push_back(RatVec{Rat(-2), Rat(1), Rat(1)});
      break;
    }
    case Family::F: {
      for (int i = 0; i < 4; ++i)
        for (int s : {1, -1}) g.roots.push_back(unit(4, i, Rat(s)));
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
          for (int si : {1, -1})
            for (int sj : {1, -1}) {
              RatVec v(4);
              v[i] = Rat(si);
              v[j] = Rat(sj);
              g.roots.push_back(v);
            }
      for (int bits = 0; bits < 16; ++bits) {
        RatVec v(4);
        for (int i = 0; i < 4; ++i) v[i] = Rat((bits >> i) & 1 ? -1 : 1, 2);
        g.roots.push_back(v);
      }
      g.simple.push_back(rv_sub(unit(4, 1), unit(4, 2)));
      g.simple.push_back(rv_sub(unit(4, 2), unit(4, 3)));
      g.simple.push_back(unit(4, 3));
      g.simple.push_back(RatVec{Rat(1, 2), Rat(-1, 2), Rat(-1, 2), Rat(-1, 2)});
      break;
    }
    case Family::E: {
      auto all = e8_roots();
      auto s8 = e8_simple();
      g.simple.assign(s8.begin(), s8.begin() + rank);
      if (rank == 8) {
        g.roots = all;
      } else {
        Echelon span;
        for (const auto& a : g.simple) span.add_row(a);
        for (const auto& r : all)
          if (span.contains(r)) g.roots.push_back(r);
      }
      break;
    }
  }
  return g;
}

}  // namespace

RootSystem build_root_system(Family f, int rank) {
  check_rank(f, rank);
  RootSystem rs;
  rs.family = f;
  rs.rank = rank;

  Generated g = generate(f, rank);
  rs.simple = std::move(g.simple);
  rs.roots = std::move(g.roots);
  std::sort(rs.roots.begin(), rs.roots.end(), rv_lex_less);
  rs.roots.erase(std::unique(rs.roots.begin(), rs.roots.end()), rs.roots.end());
  rs.ambient_dim = int(rs.roots.front().size());

  // positivity and integer coordinates over the simple system
  Echelon basis;
  for (const auto& a : rs.simple) basis.add_row(a);
  if (basis.rank() != std::size_t(rank))
    throw InternalConsistencyError("simple system not independent");

  long best_height = -1;
  for (int idx = 0; idx < int(rs.roots.size()); ++idx) {
    auto c = basis.coords_in_span(rs.roots[idx]);
    if (!c) throw InternalConsistencyError("root outside simple-root span");
    bool nonneg = true, nonpos = true;
    std::vector<long> ic(rank);
    long height = 0;
    for (int j = 0; j < rank; ++j) {
      const Rat& x = (*c)[j];
      if (!x.is_integer()) throw InternalConsistencyError("non-integer root coordinate");
      ic[j] = x.num();
      height += ic[j];
      nonneg = nonneg && ic[j] >= 0;
      nonpos = nonpos && ic[j] <= 0;
    }
    if (!nonneg && !nonpos)
      throw InternalConsistencyError("root with mixed-sign coordinates");
    if (nonneg && height > 0) {
      if (height > best_height) {
        best_height = height;
        rs.highest_pos = int(rs.positive_idx.size());
      }
      rs.positive_idx.push_back(idx);
      rs.pos_coords.push_back(std::move(ic));
    }
  }
  if (2 * rs.num_positive() != int(rs.roots.size()))
    throw InternalConsistencyError("positive roots are not half the system");

  const auto& theta_coords = rs.pos_coords[rs.highest_pos];
  rs.marks.assign(theta_coords.begin(), theta_coords.end());
  for (long m : rs.marks)
    if (m <= 0) throw InternalConsistencyError("nonpositive mark");
  rs.lowest = rv_neg(rs.roots[rs.positive_idx[rs.highest_pos]]);

  rs.weyl_vector = RatVec(rs.ambient_dim);
  for (int k = 0; k < rs.num_positive(); ++k)
    rs.weyl_vector = rv_add(rs.weyl_vector, rs.positive_root(k));
  rs.weyl_vector = rv_scale(Rat(1, 2), rs.weyl_vector);

  // numeric caches
  rs.roots_d.reserve(rs.roots.size());
  for (const auto& r : rs.roots) rs.roots_d.push_back(rv_to_d(r));
  for (const auto& a : rs.simple) rs.simple_d.push_back(rv_to_d(a));
  rs.lowest_d = rv_to_d(rs.lowest);
  rs.rho_d = rv_to_d(rs.weyl_vector);

  // dual basis v_j ( <alpha_i, v_j> = delta_ij ) and Cartan projector,
  // both computed exactly then dropped to doubles
  RatMat gram(rank, RatVec(rank));
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j) gram[i][j] = rv_dot(rs.simple[i], rs.simple[j]);
  RatMat ginv = rm_inverse(gram);
  rs.dual_basis_d.assign(rank, dvec(rs.ambient_dim, 0.0));
  for (int j = 0; j < rank; ++j) {
    RatVec vj(rs.ambient_dim);
    for (int i = 0; i < rank; ++i) vj = rv_add(vj, rv_scale(ginv[i][j], rs.simple[i]));
    rs.dual_basis_d[j] = rv_to_d(vj);
  }
  rs.cartan_proj_d.assign(rs.ambient_dim, dvec(rs.ambient_dim, 0.0));
  for (int j = 0; j < rank; ++j) {
    dvec aj = rs.simple_d[j];
    for (int p = 0; p < rs.ambient_dim; ++p)
      for (int q = 0; q < rs.ambient_dim; ++q)
        rs.cartan_proj_d[p][q] += rs.dual_basis_d[j][p] * aj[q];
  }
  return rs;
}

RootSystem build_root_system(char f, int rank) {
  return build_root_system(family_from_char(f), rank);
}

const SubsystemTable& RootSystem::subsystems() const {
  std::call_once(table_once_, [this] {
    table_ = std::make_shared<SubsystemTable>(build_subsystem_table(*this));
  });
  return *table_;
}

std::vector<int> parabolic_subsystem(const RootSystem& rs, NodeMask J) {
  NodeMask full = full_mask(rs.rank);
  if ((J & ~full) != 0) throw ValidationError("parabolic_subsystem: node out of range");
  if (J == full)
    throw ValidationError("parabolic_subsystem: J must be a proper subset of {0..r}");
  Echelon span;
  for (int j : mask_nodes(J)) span.add_row(rs.alpha(j));
  std::vector<int> out;
  for (int idx = 0; idx < int(rs.roots.size()); ++idx)
    if (span.contains(rs.roots[idx])) out.push_back(idx);
  return out;
}

SubsystemTable build_subsystem_table(const RootSystem& rs) {
  SubsystemTable t;
  t.rank = rs.rank;
  std::size_t n_masks = std::size_t(1) << (rs.rank + 1);
  std::size_t n_roots = rs.roots.size();
  t.pos_counts.assign(n_masks, 0);
  t.members.resize(n_masks);
  t.is_member.assign(n_masks, std::vector<char>(n_roots, 0));

  // positivity lookup: root index -> is positive
  std::vector<char> is_pos(n_roots, 0);
  for (int k : rs.positive_idx) is_pos[k] = 1;

  for (NodeMask m = 0; m < n_masks; ++m) {
    Echelon span;
    for (int j : mask_nodes(m)) span.add_row(rs.alpha(j));
    if (span.rank() == std::size_t(rs.rank)) {
      // full-rank span captures the whole system
      t.members[m].resize(n_roots);
      for (std::size_t i = 0; i < n_roots; ++i) {
        t.members[m][i] = int(i);
        t.is_member[m][i] = 1;
      }
      t.pos_counts[m] = rs.num_positive();
      continue;
    }
    int pos = 0;
    for (std::size_t i = 0; i < n_roots; ++i) {
      if (span.contains(rs.roots[i])) {
        t.members[m].push_back(int(i));
        t.is_member[m][i] = 1;
        pos += is_pos[i];
      }
    }
    t.pos_counts[m] = pos;
  }
  return t;
}

RatMat cartan_matrix(const RootSystem& rs) {
  RatMat c(rs.rank, RatVec(rs.rank));
  for (int i = 0; i < rs.rank; ++i)
    for (int j = 0; j < rs.rank; ++j)
      c[i][j] = Rat(2) * rv_dot(rs.simple[i], rs.simple[j]) /
                rv_dot(rs.simple[j], rs.simple[j]);
  return c;
}

long cartan_index(const RootSystem& rs) {
  Rat d = rm_det(cartan_matrix(rs));
  if (!d.is_integer() || d.num() <= 0)
    throw InternalConsistencyError("Cartan determinant not a positive integer");
  return d.num();
}

std::uint64_t weyl_order(Family f, int rank) {
  check_rank(f, rank);
  auto fact = [](int n) {
    std::uint64_t r = 1;
    for (int i = 2; i <= n; ++i) r *= std::uint64_t(i);
    return r;
  };
  switch (f) {
    case Family::A: return fact(rank + 1);
    case Family::B:
    case Family::C: return (std::uint64_t(1) << rank) * fact(rank);
    case Family::D: return (std::uint64_t(1) << (rank - 1)) * fact(rank);
    case Family::E:
      if (rank == 6) return 51840;
      if (rank == 7) return 2903040;
      return 696729600;
    case Family::F: return 1152;
    case Family::G: return 12;
  }
  return 0;
}

dvec project_to_cartan(const RootSystem& rs, const dvec& h) {
  if (int(h.size()) != rs.ambient_dim)
    throw ValidationError("project_to_cartan: wrong dimension");
  dvec out(rs.ambient_dim, 0.0);
  for (int i = 0; i < rs.ambient_dim; ++i) out[i] = ddot(rs.cartan_proj_d[i], h);
  return out;
}

std::string root_system_json(const RootSystem& rs) {
  nlohmann::json j;
  j["family"] = std::string(1, family_char(rs.family));
  j["rank"] = rs.rank;
  j["ambient_dim"] = rs.ambient_dim;
  j["group_dim"] = rs.group_dim();
  j["num_roots"] = rs.roots.size();
  j["num_positive"] = rs.num_positive();
  j["marks"] = rs.marks;
  auto vec_json = [](const RatVec& v) {
    std::vector<std::string> s;
    s.reserve(v.size());
    for (const Rat& x : v) s.push_back(x.str());
    return s;
  };
  for (const auto& a : rs.simple) j["simple_roots"].push_back(vec_json(a));
  j["lowest_root"] = vec_json(rs.lowest);
  j["weyl_vector"] = vec_json(rs.weyl_vector);
  j["weyl_order"] = weyl_order(rs);
  j["cartan_index"] = cartan_index(rs);
  return j.dump(2);
}

}  // namespace weyl
