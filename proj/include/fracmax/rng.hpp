#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace fracmax::rng {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// FNV-1a; stable across platforms, unlike std::hash.
constexpr std::uint64_t tag_hash(std::string_view tag) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Key of a named substream: master seed, tag and a list of integer ids.
std::uint64_t substream_key(std::uint64_t seed, std::string_view tag,
                            std::initializer_list<std::uint64_t> ids = {}) noexcept;

/// A random stream owned by exactly one consumer.
///
/// Streams are derived from (seed, tag, ids) so that results never depend on
/// the order in which replicates or draws are executed.
class Stream {
 public:
  explicit Stream(std::uint64_t key);

  Engine& engine() noexcept { return engine_; }

  double uniform() { return unif_(engine_); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unif_(engine_); }
  double normal() { return normal_(engine_); }

 private:
  Engine engine_;
  std::uniform_real_distribution<double> unif_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

inline Stream substream(std::uint64_t seed, std::string_view tag,
                        std::initializer_list<std::uint64_t> ids = {}) {
  return Stream(substream_key(seed, tag, ids));
}

}  // namespace fracmax::rng
