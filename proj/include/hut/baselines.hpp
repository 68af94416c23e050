#pragma once

#include <cstdint>
#include <vector>

#include "hut/core.hpp"
#include "hut/microagg.hpp"

namespace hut {

/// Consecutive blocks of the sorted small batch, all of size
/// ceil(|small| / k) except possibly the last.
struct FixedSizeClustering {
  std::size_t block_size = 0;
  /// Block lengths in sorted order; sums to |small|.
  std::vector<std::size_t> blocks;
};

FixedSizeClustering fixed_size_blocks(std::size_t n_small, int k);

/// Consecutive runs of the ascending small values; each run is closed once
/// its sum exceeds the threshold, so every group's sum is above it except
/// possibly the final partial group.
struct KAggregationGrouping {
  double sum_threshold = 0.0;
  /// Half-open (start, end) ranges over the sorted small batch.
  std::vector<std::pair<std::size_t, std::size_t>> groups;
};

KAggregationGrouping k_aggregation_groups(const std::vector<double>& sorted_small,
                                          double sum_threshold);

/// Baseline: fixed-size micro-aggregation plus Laplace noise, no order
/// constraint. Block sensitivity is the block max (1 for histograms).
QueryResponse fixed_size_pipeline(const Dataset& ds, const Params& params,
                                  std::uint64_t trial);

/// Baseline: small values are aggregated until their sum exceeds the
/// threshold; each group is answered as one noised aggregate spread evenly
/// over its members. Large values are noised individually.
QueryResponse k_aggregation_pipeline(const Dataset& ds, const Params& params,
                                     std::uint64_t trial);

}  // namespace hut
