#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace frida {

using Rng = std::mt19937_64;

// splitmix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Purpose tags keep streams for different consumers apart even when the
// remaining coordinates coincide.
enum class Stream : std::uint64_t {
  kModelInit = 1,
  kTask = 2,
  kClientData = 3,
  kPartition = 4,
  kCanary = 5,
  kTestData = 6,
  kAuxiliary = 7,
  kClientRound = 8,
  kServerRound = 9,
};

// Seed derived from (master, purpose, coordinates...). Changing any
// coordinate yields an unrelated stream, so e.g. one client's role never
// perturbs another client's randomness.
inline std::uint64_t derive_seed(std::uint64_t master, Stream purpose,
                                 std::initializer_list<std::uint64_t> coords = {}) {
  std::uint64_t h = mix64(master ^ mix64(static_cast<std::uint64_t>(purpose)));
  for (auto c : coords) h = mix64(h ^ mix64(c + 0x632be59bd9b4e019ULL));
  return h;
}

inline Rng make_rng(std::uint64_t master, Stream purpose,
                    std::initializer_list<std::uint64_t> coords = {}) {
  return Rng(derive_seed(master, purpose, coords));
}

}  // namespace frida
