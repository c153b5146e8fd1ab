#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qproc {

// Thrown when a path-space operation would materialize more paths than
// the configured cap allows. m^(n+1) growth is the hard wall of this
// code base; failing loudly beats thrashing.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(int m, int rank, std::uint64_t required, std::uint64_t cap)
      : std::runtime_error("path budget exceeded: m=" + std::to_string(m) +
                           ", n=" + std::to_string(rank) + " needs " +
                           std::to_string(required) + " paths, cap is " +
                           std::to_string(cap)),
        m(m),
        rank(rank),
        required(required),
        cap(cap) {}

  int m;
  int rank;
  std::uint64_t required;
  std::uint64_t cap;
};

}  // namespace qproc
