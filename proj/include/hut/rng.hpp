#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace hut {

/// Execution policy for kernels that have both a serial reference path and an
/// OpenMP path. Both must produce identical results; tests assert this.
enum class Exec { Serial, Parallel };

std::uint64_t splitmix64(std::uint64_t& state);

/// Collapses (master seed, trial index, stage tag, lane) into one engine seed.
/// Every randomized stage owns its own stream so that stages never share or
/// reorder draws.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial,
                          std::string_view stage, std::uint64_t lane = 0);

/// Sequential random stream. Draws are strictly ordered within one stream;
/// concurrent workers must each derive their own.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : eng_(seed) {}

  static Stream derive(std::uint64_t master, std::uint64_t trial,
                       std::string_view stage, std::uint64_t lane = 0) {
    return Stream(derive_seed(master, trial, stage, lane));
  }

  std::uint64_t next_u64() { return eng_(); }

  /// Uniform on (0,1), both endpoints excluded.
  double uniform01();

  /// Uniform on (-1/2, 1/2), both endpoints excluded.
  double uniform_symmetric() { return uniform01() - 0.5; }

  /// Uniform index in [0, n).
  std::size_t uniform_index(std::size_t n);

 private:
  std::mt19937_64 eng_;
};

}  // namespace hut
