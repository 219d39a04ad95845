#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace mmcmc {

// Platform-independent seed mixing (FNV-1a over the inputs, finished with a
// splitmix64 avalanche). Used to give every fit a seed that depends only on
// where it sits in the segment tree, never on scheduling.
class SeedHasher {
public:
  explicit SeedHasher(std::uint64_t master);

  SeedHasher &add(std::uint64_t value);
  SeedHasher &add(std::string_view text);
  SeedHasher &add(std::span<const std::uint32_t> path);

  std::uint64_t finish() const;

private:
  void mix_byte(unsigned char b);
  std::uint64_t state_;
};

std::uint64_t splitmix64(std::uint64_t x);

} // namespace mmcmc
