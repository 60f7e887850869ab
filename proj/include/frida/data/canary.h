#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "frida/data/dataset.h"

namespace frida::data {

struct CanaryBatch {
  std::vector<std::size_t> pool_indices;
  Dataset samples;
};

// Server-held canary pool cut into per-round disjoint windows of constant
// size. Window order is a seeded permutation of the pool, so round t's window
// never overlaps rounds 1..t-1 and every client sees the same window.
class CanarySet {
 public:
  CanarySet(Dataset pool, std::size_t window_size, std::uint64_t seed);

  const Dataset& pool() const { return pool_; }
  std::size_t window_size() const { return window_size_; }
  // Number of complete windows the pool can serve.
  std::size_t max_rounds() const;

  // Round index t is 1-based. Throws PoolExhausted when t * c > |pool|.
  CanaryBatch window(std::size_t t) const;
  // c samples drawn uniformly without replacement from pool \ window(t).
  CanaryBatch complement(std::size_t t, Rng& rng) const;

 private:
  Dataset pool_;
  std::size_t window_size_;
  std::vector<std::size_t> order_;
};

}  // namespace frida::data
