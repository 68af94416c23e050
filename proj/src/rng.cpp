#include "hut/rng.hpp"

namespace hut {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial,
                          std::string_view stage, std::uint64_t lane) {
  std::uint64_t state = master;
  std::uint64_t out = splitmix64(state);
  state ^= fnv1a(stage);
  out ^= splitmix64(state);
  state ^= trial;
  out ^= splitmix64(state);
  state ^= lane;
  out ^= splitmix64(state);
  return out;
}

double Stream::uniform01() {
  // 53-bit mantissa, offset half a step: values are (i + 0.5) / 2^53, so the
  // result can never be exactly 0 or 1.
  const std::uint64_t bits = eng_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

std::size_t Stream::uniform_index(std::size_t n) {
  return static_cast<std::size_t>(uniform01() * static_cast<double>(n));
}

}  // namespace hut
