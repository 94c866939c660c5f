#pragma once

#include <cstdint>
#include <random>

namespace tagwalk {

using Engine = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent random streams carved out of one master seed.
enum class Stream : std::uint64_t {
  graph = 1,
  walks = 2,
  visit_probs = 3,
  similarity = 4,
  replicas = 5,
};

// Seed for item `index` of `stream`. Depends only on its arguments, so the
// values drawn for a walk never depend on which thread runs it.
constexpr std::uint64_t derive_seed(std::uint64_t master, Stream stream,
                                    std::uint64_t index = 0) noexcept {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ static_cast<std::uint64_t>(stream));
  return splitmix64(h ^ splitmix64(index));
}

inline Engine make_engine(std::uint64_t seed) { return Engine{seed}; }

}  // namespace tagwalk
