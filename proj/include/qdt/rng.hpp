#pragma once

#include <cstdint>
#include <string_view>

namespace qdt {

// FNV-1a, used to key per-example random streams off stable string ids.
inline std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

// SplitMix64. Small, fast, and stable across platforms, which matters
// because generated training data must be byte-identical for a fixed seed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1) with 53 bits of precision.
  double next_unit() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t next_below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

  // Derives an independent stream, used to give each example its own seed.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 mixer(seed ^ (0x632be59bd9b4e019ULL + stream));
    mixer.next();
    return mixer.next();
  }

 private:
  std::uint64_t state_;
};

}  // namespace qdt
