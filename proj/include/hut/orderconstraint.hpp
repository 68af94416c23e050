#pragma once

#include <cstddef>
#include <vector>

#include "hut/core.hpp"

namespace hut {

/// One pooled block of an isotonic fit: positions [start, end) share `mean`.
struct IsotonicBlock {
  std::size_t start = 0;
  std::size_t end = 0;
  double mean = 0.0;
};

struct IsotonicFit {
  std::vector<double> input;
  std::vector<double> output;  // nondecreasing, L2-closest to input
  std::vector<IsotonicBlock> blocks;
};

/// L2 projection onto the nondecreasing cone, by pool-adjacent-violators.
/// The result is idempotent and matches the min-max closed form
/// out[i] = min over j>=i of (max over k<=j of mean(input[k..j])).
IsotonicFit isotonic_l2(const std::vector<double>& noised_sorted);

/// Restores the pre-noise sort order of a noised response: rearranges values
/// into sorted positions via `perm` (recorded before noising), fits, and
/// scatters back. Reads only the noised values and the permutation.
QueryResponse apply_order_constraint(const QueryResponse& noised,
                                     const std::vector<std::size_t>& perm);

}  // namespace hut
