#pragma once

#include <cstdint>

namespace snapmem {

/** Optional operation counters for cost measurements. */
struct OpCounter {
  std::uint64_t weight_updates = 0;
  std::uint64_t pair_checks = 0;
  std::uint64_t edge_inspections = 0;
  std::uint64_t vertex_expansions = 0;

  std::uint64_t total() const { return weight_updates + pair_checks + edge_inspections + vertex_expansions; }
  void reset() { *this = OpCounter{}; }
};

} // namespace snapmem
