#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace weyl {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input: bad (family, rank) pair, bad permutation, improper subset, ...
struct ValidationError : Error {
  using Error::Error;
};

// Weyl group closure grew past the configured cap; carries the partial count.
struct CapExceededError : Error {
  std::uint64_t partial_count;
  CapExceededError(const std::string& msg, std::uint64_t partial)
      : Error(msg), partial_count(partial) {}
};

// Operation needs a resource the caller did not grant (full Weyl group, ...).
struct CapabilityError : Error {
  using Error::Error;
};

// Node budget or similar limit exceeded.
struct ResourceError : Error {
  using Error::Error;
};

// Integration domain came out empty; distinct from a zero norm.
struct EmptyRegionError : Error {
  using Error::Error;
};

struct PreconditionError : Error {
  using Error::Error;
};

struct RangeError : Error {
  using Error::Error;
};

// A structural self-check failed; indicates a construction bug, not bad input.
struct InternalConsistencyError : Error {
  using Error::Error;
};

struct OverflowError : Error {
  using Error::Error;
};

}  // namespace weyl
