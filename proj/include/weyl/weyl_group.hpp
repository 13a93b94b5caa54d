#pragma once

#include <cstdint>
#include <vector>

#include "weyl/root_system.hpp"

namespace weyl {

// A finite reflection group as a list of exact orthogonal matrices on the
// ambient space, with determinants.  Elements are deduplicated by their
// action on the root set.
struct WeylGroup {
  std::vector<RatMat> mats;
  std::vector<std::int8_t> dets;
  std::vector<dmat> mats_d;

  std::size_t size() const { return mats.size(); }
};

// Reflection in alpha_j; j = 0 means the lowest root (same reflection as
// the highest root).
RatMat simple_reflection(const RootSystem& rs, int j);

// Closure of the simple reflections under composition.  Throws
// CapExceededError (with the partial count) once more than `cap` elements
// have been found.
WeylGroup weyl_group(const RootSystem& rs, std::uint64_t cap);

// Subgroup generated by the reflections {s_j : j in J}.
WeylGroup reflection_subgroup(const RootSystem& rs, NodeMask J, std::uint64_t cap);

}  // namespace weyl
