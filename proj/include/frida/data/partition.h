#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "frida/data/dataset.h"

namespace frida::data {

struct PartitionScheme {
  enum class Kind { kIid, kDirichlet };
  Kind kind = Kind::kIid;
  double alpha = 1.0;  // Dirichlet concentration, used when kind == kDirichlet

  static PartitionScheme iid() { return {Kind::kIid, 1.0}; }
  static PartitionScheme dirichlet(double alpha) { return {Kind::kDirichlet, alpha}; }
  std::string to_string() const;
};

struct Partition {
  std::vector<std::vector<std::size_t>> client_indices;
  PartitionScheme scheme;

  std::size_t num_clients() const { return client_indices.size(); }
};

// Splits ds into n_clients equal-size, disjoint shards of floor(|ds|/n)
// samples. Dirichlet shards draw per-client label proportions from
// Dirichlet(alpha * 1), turn them into label quotas by largest-remainder
// rounding, and backfill any label shortfall from the remaining pool.
Partition partition(const Dataset& ds, std::size_t n_clients, PartitionScheme scheme,
                    std::uint64_t seed);

// Largest-remainder rounding of proportions (need not be normalized) to
// integer counts summing to total. Ties go to the lower index.
std::vector<std::size_t> largest_remainder(const std::vector<double>& proportions,
                                           std::size_t total);

std::vector<double> sample_dirichlet(std::size_t dim, double alpha, Rng& rng);

}  // namespace frida::data
