#pragma once

#include <cstdint>

#include "hut/core.hpp"

namespace hut {

enum class Profile { RightSkewed, Bimodal, Uniform };

constexpr double kSpeedCap = 130.0;

// Synthetic per-record speed readings in [0, kSpeedCap], one decimal place.
// RightSkewed piles mass at low speeds with a long tail, Bimodal mixes an
// urban and a highway mode, Uniform spreads evenly. Deterministic under seed.
Dataset gen_speeds(std::size_t n, Profile profile, std::uint64_t seed);

// Histogram view of a speed dataset; delegates to build_histogram.
Dataset gen_counting(const Dataset& ds, double bin_width);

const char* profile_name(Profile profile);
Profile profile_from_name(const std::string& name);

}  // namespace hut
