#include "frida/data/partition.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "frida/common/errors.h"

namespace frida::data {

std::string PartitionScheme::to_string() const {
  if (kind == Kind::kIid) return "iid";
  char buf[64];
  std::snprintf(buf, sizeof buf, "dirichlet(%.17g)", alpha);
  return buf;
}

std::vector<std::size_t> largest_remainder(const std::vector<double>& proportions,
                                           std::size_t total) {
  const double sum = std::accumulate(proportions.begin(), proportions.end(), 0.0);
  std::vector<std::size_t> counts(proportions.size(), 0);
  if (proportions.empty()) return counts;
  if (!(sum > 0.0)) {
    // Degenerate: spread evenly.
    std::vector<double> even(proportions.size(), 1.0);
    return largest_remainder(even, total);
  }
  std::vector<double> remainder(proportions.size());
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < proportions.size(); ++i) {
    const double exact = proportions[i] / sum * static_cast<double>(total);
    counts[i] = static_cast<std::size_t>(std::floor(exact));
    remainder[i] = exact - std::floor(exact);
    assigned += counts[i];
  }
  std::vector<std::size_t> order(proportions.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t k = 0; assigned < total; k = (k + 1) % order.size(), ++assigned) {
    ++counts[order[k]];
  }
  return counts;
}

std::vector<double> sample_dirichlet(std::size_t dim, double alpha, Rng& rng) {
  if (!(alpha > 0.0)) throw InvalidInput("sample_dirichlet: alpha must be positive");
  std::gamma_distribution<double> gamma(alpha, 1.0);
  std::vector<double> p(dim);
  double sum = 0.0;
  for (auto& x : p) {
    x = gamma(rng);
    sum += x;
  }
  if (!(sum > 0.0)) {
    // All draws underflowed (tiny alpha): the limit puts all mass on one label.
    std::fill(p.begin(), p.end(), 0.0);
    p[std::uniform_int_distribution<std::size_t>(0, dim - 1)(rng)] = 1.0;
    return p;
  }
  for (auto& x : p) x /= sum;
  return p;
}

Partition partition(const Dataset& ds, std::size_t n_clients, PartitionScheme scheme,
                    std::uint64_t seed) {
  if (n_clients < 2) throw InvalidInput("partition: need at least 2 clients");
  const std::size_t per_client = ds.size() / n_clients;
  if (per_client < 1) throw InvalidInput("partition: fewer samples than clients");
  Rng rng(seed);
  Partition out;
  out.scheme = scheme;
  out.client_indices.resize(n_clients);

  if (scheme.kind == PartitionScheme::Kind::kIid) {
    std::vector<std::size_t> all(ds.size());
    std::iota(all.begin(), all.end(), 0);
    std::shuffle(all.begin(), all.end(), rng);
    for (std::size_t c = 0; c < n_clients; ++c) {
      out.client_indices[c].assign(all.begin() + static_cast<std::ptrdiff_t>(c * per_client),
                                   all.begin() + static_cast<std::ptrdiff_t>((c + 1) * per_client));
    }
    return out;
  }

  const auto l = static_cast<std::size_t>(ds.num_labels);
  std::vector<std::vector<std::size_t>> pools(l);
  for (std::size_t i = 0; i < ds.size(); ++i) pools[static_cast<std::size_t>(ds.labels[i])].push_back(i);
  for (auto& p : pools) std::shuffle(p.begin(), p.end(), rng);

  for (std::size_t c = 0; c < n_clients; ++c) {
    const auto proportions = sample_dirichlet(l, scheme.alpha, rng);
    const auto quota = largest_remainder(proportions, per_client);
    auto& mine = out.client_indices[c];
    for (std::size_t y = 0; y < l; ++y) {
      const std::size_t take = std::min(quota[y], pools[y].size());
      mine.insert(mine.end(), pools[y].end() - static_cast<std::ptrdiff_t>(take), pools[y].end());
      pools[y].resize(pools[y].size() - take);
    }
    // Backfill from whichever labels still have samples, largest pool first.
    while (mine.size() < per_client) {
      std::size_t best = l;
      for (std::size_t y = 0; y < l; ++y) {
        if (!pools[y].empty() && (best == l || pools[y].size() > pools[best].size())) best = y;
      }
      if (best == l) throw InvalidInput("partition: pool exhausted while backfilling");
      mine.push_back(pools[best].back());
      pools[best].pop_back();
    }
    std::shuffle(mine.begin(), mine.end(), rng);
  }
  return out;
}

}  // namespace frida::data
