#pragma once

#include <cstdint>
#include <random>

namespace cra {

using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of snapshot `index` under `master`. Independent of which worker runs it.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

/// Counter-based uniform on the open interval (0, 1), keyed by (key, a, b).
///
/// Lets several policies see the same fading and coin draws for the same
/// (transmitter, receiver) pair without consuming a sequential stream.
constexpr double keyed_uniform(std::uint64_t key, std::uint64_t a, std::uint64_t b) {
  const std::uint64_t h =
      splitmix64(key ^ splitmix64(a * 0xd1b54a32d192ed03ULL ^ splitmix64(b + 0x8cb92ba72f3d8dd7ULL)));
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace cra
