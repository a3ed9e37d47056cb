#include "fracmax/rng.hpp"

#include <array>

namespace fracmax::rng {

std::uint64_t substream_key(std::uint64_t seed, std::string_view tag,
                            std::initializer_list<std::uint64_t> ids) noexcept {
  std::uint64_t key = mix64(seed ^ 0x6a09e667f3bcc908ULL);
  key = mix64(key ^ tag_hash(tag));
  for (std::uint64_t id : ids) key = mix64(key ^ mix64(id + 0x3c6ef372fe94f82bULL));
  return key;
}

Stream::Stream(std::uint64_t key) {
  std::array<std::uint32_t, 8> words{};
  std::uint64_t s = key;
  for (std::size_t i = 0; i < words.size(); i += 2) {
    s = mix64(s);
    words[i] = static_cast<std::uint32_t>(s);
    words[i + 1] = static_cast<std::uint32_t>(s >> 32);
  }
  std::seed_seq seq(words.begin(), words.end());
  engine_.seed(seq);
}

}  // namespace fracmax::rng
