#include "seed.hpp"

namespace mmcmc {

namespace {
constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;
} // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

SeedHasher::SeedHasher(std::uint64_t master) : state_(kFnvOffset) {
  add(master);
}

void SeedHasher::mix_byte(unsigned char b) {
  state_ ^= b;
  state_ *= kFnvPrime;
}

SeedHasher &SeedHasher::add(std::uint64_t value) {
  for (int i = 0; i < 8; ++i)
    mix_byte(static_cast<unsigned char>(value >> (8 * i)));
  return *this;
}

SeedHasher &SeedHasher::add(std::string_view text) {
  add(static_cast<std::uint64_t>(text.size()));
  for (char c : text)
    mix_byte(static_cast<unsigned char>(c));
  return *this;
}

SeedHasher &SeedHasher::add(std::span<const std::uint32_t> path) {
  add(static_cast<std::uint64_t>(path.size()));
  for (auto p : path)
    add(static_cast<std::uint64_t>(p));
  return *this;
}

std::uint64_t SeedHasher::finish() const { return splitmix64(state_); }

} // namespace mmcmc
