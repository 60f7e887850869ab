#include "frida/data/canary.h"

#include <algorithm>
#include <numeric>
#include <string>

#include "frida/common/errors.h"

namespace frida::data {

CanarySet::CanarySet(Dataset pool, std::size_t window_size, std::uint64_t seed)
    : pool_(std::move(pool)), window_size_(window_size) {
  if (window_size_ == 0) throw InvalidInput("CanarySet: window size must be positive");
  order_.resize(pool_.size());
  std::iota(order_.begin(), order_.end(), 0);
  Rng rng(seed);
  std::shuffle(order_.begin(), order_.end(), rng);
}

std::size_t CanarySet::max_rounds() const { return pool_.size() / window_size_; }

CanaryBatch CanarySet::window(std::size_t t) const {
  if (t == 0) throw InvalidInput("CanarySet::window: rounds are 1-based");
  if (t * window_size_ > pool_.size()) {
    throw PoolExhausted("canary pool of " + std::to_string(pool_.size()) +
                        " samples cannot serve round " + std::to_string(t) + " with window " +
                        std::to_string(window_size_));
  }
  CanaryBatch b;
  b.pool_indices.assign(order_.begin() + static_cast<std::ptrdiff_t>((t - 1) * window_size_),
                        order_.begin() + static_cast<std::ptrdiff_t>(t * window_size_));
  b.samples = pool_.subset(b.pool_indices);
  return b;
}

CanaryBatch CanarySet::complement(std::size_t t, Rng& rng) const {
  const CanaryBatch member = window(t);
  if (pool_.size() < 2 * window_size_) {
    throw PoolExhausted("canary pool too small for a complement window");
  }
  std::vector<std::size_t> rest;
  rest.reserve(pool_.size() - window_size_);
  const auto lo = (t - 1) * window_size_;
  for (std::size_t k = 0; k < order_.size(); ++k) {
    if (k < lo || k >= lo + window_size_) rest.push_back(order_[k]);
  }
  // Partial Fisher-Yates: first c entries become a uniform sample.
  for (std::size_t i = 0; i < window_size_; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, rest.size() - 1);
    std::swap(rest[i], rest[pick(rng)]);
  }
  CanaryBatch b;
  b.pool_indices.assign(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(window_size_));
  b.samples = pool_.subset(b.pool_indices);
  return b;
}

}  // namespace frida::data
