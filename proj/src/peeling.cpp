#include "weyl/peeling.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace weyl {

namespace {

void check_perm(const RootSystem& rs, const std::vector<int>& perm) {
  if (int(perm.size()) != rs.rank + 1)
    throw ValidationError("peeling: permutation must list all of {0..r}");
  NodeMask seen = 0;
  for (int j : perm) {
    if (j < 0 || j > rs.rank || (seen & (NodeMask(1) << j)))
      throw ValidationError("peeling: not a permutation of {0..r}");
    seen |= NodeMask(1) << j;
  }
}

// n-sequence for one deletion order, via memoized subset counts
inline void n_sequence(const SubsystemTable& table, int total_pos,
                       const std::vector<int>& perm, std::vector<long>& n) {
  int r = int(perm.size()) - 1;
  NodeMask tail = 0;
  // I_i = {j_{i+1},...,j_r}; build tails from the back
  for (int i = r; i >= 0; --i) {
    n[i] = total_pos - table.count(tail);
    tail |= NodeMask(1) << perm[i];
  }
}

}  // namespace

PeelingProfile peeling_profile(const RootSystem& rs, const SubsystemTable& table,
                               const std::vector<int>& perm) {
  check_perm(rs, perm);
  PeelingProfile p;
  p.perm = perm;
  p.n.resize(rs.rank + 1);
  n_sequence(table, rs.num_positive(), perm, p.n);
  p.q.resize(rs.rank + 1);
  long prev = 0;
  for (int i = 0; i <= rs.rank; ++i) {
    p.q[i] = p.n[i] - prev;
    prev = p.n[i];
  }
  return p;
}

OptimalPeeling optimal_peeling(const RootSystem& rs, const SubsystemTable& table) {
  int r = rs.rank;
  int total = rs.num_positive();

  std::vector<int> perm(r + 1);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<long> n(r + 1), best(r + 1, long(total) + 1);

  // pass 1: coordinatewise minimum over all permutations
  do {
    n_sequence(table, total, perm, n);
    for (int i = 0; i <= r; ++i) best[i] = std::min(best[i], n[i]);
  } while (std::next_permutation(perm.begin(), perm.end()));

  // pass 2: first (lex-smallest) permutation achieving the minimum everywhere
  std::iota(perm.begin(), perm.end(), 0);
  do {
    n_sequence(table, total, perm, n);
    if (n == best) {
      OptimalPeeling opt;
      opt.perm = perm;
      opt.q.resize(r + 1);
      long prev = 0;
      for (int i = 0; i <= r; ++i) {
        opt.q[i] = best[i] - prev;
        prev = best[i];
      }
      return opt;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  throw InternalConsistencyError(
      "optimal_peeling: no permutation attains the coordinatewise-minimal "
      "n-sequence for " + rs.name());
}

PeelingReport verify_peeling_inequality(const RootSystem& rs, const SubsystemTable& table,
                                        const std::vector<int>& perm0) {
  check_perm(rs, perm0);
  int r = rs.rank;
  int total = rs.num_positive();

  std::vector<long> n0(r + 1);
  n_sequence(table, total, perm0, n0);

  PeelingReport rep;
  rep.pass = true;
  rep.equality_counts.assign(r + 1, 0);

  std::vector<int> perm(r + 1);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<long> n(r + 1);
  do {
    n_sequence(table, total, perm, n);
    ++rep.permutations_checked;
    for (int i = 0; i <= r; ++i) {
      if (n[i] == n0[i]) ++rep.equality_counts[i];
      if (n0[i] > n[i] && rep.pass) {
        rep.pass = false;
        std::ostringstream os;
        os << rs.name() << ": n_" << i << "(perm0)=" << n0[i] << " > " << n[i]
           << " at perm";
        for (int j : perm) os << ' ' << j;
        rep.first_failure = os.str();
      }
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return rep;
}

CriticalExponents critical_exponents(const RootSystem& rs) {
  auto opt = optimal_peeling(rs, rs.subsystems());
  CriticalExponents ce;
  ce.p.resize(rs.rank + 1);
  ce.k_over_pk.resize(rs.rank + 1);
  ce.p[0] = Rat(0);
  ce.k_over_pk[0] = 0;
  long cum = 0;
  for (int k = 1; k <= rs.rank; ++k) {
    cum += opt.q[k];
    ce.k_over_pk[k] = cum;
    ce.p[k] = Rat(k, cum);
  }
  long d = rs.group_dim();
  if (ce.p[rs.rank] != Rat(2L * rs.rank, d - rs.rank))
    throw InternalConsistencyError("critical_exponents: p_r != 2r/(d-r) for " + rs.name());
  return ce;
}

Comparison complexity_compare(const RootSystem& a, const RootSystem& b) {
  auto qa = optimal_peeling(a, a.subsystems()).q;
  auto qb = optimal_peeling(b, b.subsystems()).q;
  int m = std::min(a.rank, b.rank);
  bool le = true, ge = true;
  long sa = 0, sb = 0;
  for (int i = 0; i < m; ++i) {
    sa += qa[a.rank - i];
    sb += qb[b.rank - i];
    le = le && sa <= sb;
    ge = ge && sa >= sb;
  }
  if (le && ge) return Comparison::EQUIV;
  if (le) return Comparison::LE;
  if (ge) return Comparison::GE;
  return Comparison::INCOMPARABLE;
}

const char* comparison_str(Comparison c) {
  switch (c) {
    case Comparison::LE: return "LE";
    case Comparison::GE: return "GE";
    case Comparison::EQUIV: return "EQUIV";
    case Comparison::INCOMPARABLE: return "INCOMPARABLE";
  }
  return "?";
}

}  // namespace weyl
