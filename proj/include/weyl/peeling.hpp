#pragma once

#include <cstdint>
#include <vector>

#include "weyl/root_system.hpp"

namespace weyl {

// A deletion order (j_0,...,j_r) of the extended-diagram nodes together with
// its peeling data: n_i = |pos roots| - |pos roots of the subsystem on the
// undeleted tail {j_{i+1},...,j_r}|, and increments q_i = n_i - n_{i-1}.
struct PeelingProfile {
  std::vector<int> perm;
  std::vector<long> n;  // size r+1
  std::vector<long> q;  // size r+1, q[0] = n[0]
};

PeelingProfile peeling_profile(const RootSystem& rs, const SubsystemTable& table,
                               const std::vector<int>& perm);

struct OptimalPeeling {
  std::vector<int> perm;  // lexicographically smallest achiever
  std::vector<long> q;    // q_0..q_r with q_0 = 0
};

// Exhaustive search over all (r+1)! deletion orders for one whose n-sequence
// is coordinatewise minimal.  Such an order exists for every irreducible
// system; if none is found the construction is broken and an
// InternalConsistencyError is thrown.
OptimalPeeling optimal_peeling(const RootSystem& rs, const SubsystemTable& table);

struct PeelingReport {
  bool pass = false;
  std::uint64_t permutations_checked = 0;
  std::vector<std::uint64_t> equality_counts;  // per index i: #perms with n_i equal
  std::string first_failure;                   // empty when pass
};

// Re-checks n_i(perm0) <= n_i(perm) for every permutation.
PeelingReport verify_peeling_inequality(const RootSystem& rs, const SubsystemTable& table,
                                        const std::vector<int>& perm0);

// p_k = k / (q_1 + ... + q_k) over the optimal peeling numbers, with
// p_0 = 0 and p_r = 2r/(d-r).
struct CriticalExponents {
  std::vector<Rat> p;            // index 0..r, p[0] = 0
  std::vector<long> k_over_pk;   // index 0..r, entry k = q_1+...+q_k
};

CriticalExponents critical_exponents(const RootSystem& rs);

enum class Comparison { LE, GE, EQUIV, INCOMPARABLE };

// Preorder on irreducible systems: compare partial sums of the reversed
// optimal peeling sequences, out to the smaller rank.
Comparison complexity_compare(const RootSystem& a, const RootSystem& b);

const char* comparison_str(Comparison c);

}  // namespace weyl
