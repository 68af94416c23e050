#include "hut/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hut/mechanism.hpp"

namespace hut {

namespace {

// Positions of the small batch ordered by value, ties by original order.
std::vector<std::size_t> value_order(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });
  return order;
}

double global_bound(const Partition& part, DatasetKind kind) {
  if (kind == DatasetKind::CountingHistogram) return 1.0;
  double bound = 0.0;
  for (double v : part.small_values) bound = std::max(bound, v);
  for (double v : part.large_values) bound = std::max(bound, v);
  return bound;
}

}  // namespace

FixedSizeClustering fixed_size_blocks(std::size_t n_small, int k) {
  if (k < 1) throw ConfigError("k must be at least 1");
  if (n_small < static_cast<std::size_t>(k)) {
    throw ConfigError("k exceeds the size of the to-be-clustered batch");
  }
  FixedSizeClustering out;
  out.block_size = (n_small + static_cast<std::size_t>(k) - 1) /
                   static_cast<std::size_t>(k);
  std::size_t remaining = n_small;
  while (remaining > 0) {
    const std::size_t len = std::min(out.block_size, remaining);
    out.blocks.push_back(len);
    remaining -= len;
  }
  return out;
}

KAggregationGrouping k_aggregation_groups(const std::vector<double>& sorted_small,
                                          double sum_threshold) {
  KAggregationGrouping out;
  out.sum_threshold = sum_threshold;
  std::size_t start = 0;
  double sum = 0.0;
  for (std::size_t i = 0; i < sorted_small.size(); ++i) {
    sum += sorted_small[i];
    if (sum > sum_threshold) {
      out.groups.emplace_back(start, i + 1);
      start = i + 1;
      sum = 0.0;
    }
  }
  if (start < sorted_small.size()) {
    out.groups.emplace_back(start, sorted_small.size());  // final partial group
  }
  return out;
}

QueryResponse fixed_size_pipeline(const Dataset& ds, const Params& params,
                                  std::uint64_t trial) {
  params.validate();
  if (ds.records.empty()) throw DataError("cannot protect an empty dataset");
  Partition part = threshold_split(ds, params.p);
  const std::size_t n_small = part.small_values.size();
  const FixedSizeClustering clustering = fixed_size_blocks(n_small, params.k);

  const std::vector<std::size_t> order = value_order(part.small_values);
  // Block of each small record plus the per-block bound (the block max, which
  // in sorted order is the last member).
  std::vector<std::size_t> block_of(n_small);
  std::vector<double> block_bound(clustering.blocks.size(), 0.0);
  for (std::size_t rank = 0; rank < n_small; ++rank) {
    const std::size_t b = rank / clustering.block_size;
    block_of[order[rank]] = b;
    block_bound[b] = std::max(block_bound[b], part.small_values[order[rank]]);
  }
  if (ds.kind == DatasetKind::CountingHistogram) {
    std::fill(block_bound.begin(), block_bound.end(), 1.0);
  }
  const double big = global_bound(part, ds.kind);

  LaplaceNoiser noiser(params.epsilon, params.seed, trial);
  QueryResponse out;
  out.values.resize(part.total());
  for (std::size_t s = 0; s < n_small; ++s) {
    out.values[part.small_indices[s]] =
        part.small_values[s] +
        noiser.noise_for(part.small_indices[s], block_bound[block_of[s]]);
  }
  for (std::size_t l = 0; l < part.large_indices.size(); ++l) {
    out.values[part.large_indices[l]] =
        part.large_values[l] + noiser.noise_for(part.large_indices[l], big);
  }
  out.provenance = Provenance::PostProcessed;
  return out;
}

QueryResponse k_aggregation_pipeline(const Dataset& ds, const Params& params,
                                     std::uint64_t trial) {
  params.validate();
  if (ds.records.empty()) throw DataError("cannot protect an empty dataset");
  Partition part = threshold_split(ds, params.p);
  const std::size_t n_small = part.small_values.size();

  const std::vector<std::size_t> order = value_order(part.small_values);
  std::vector<double> sorted_small(n_small);
  for (std::size_t rank = 0; rank < n_small; ++rank) {
    sorted_small[rank] = part.small_values[order[rank]];
  }
  const KAggregationGrouping grouping =
      k_aggregation_groups(sorted_small, part.threshold_value);
  const double big = global_bound(part, ds.kind);

  LaplaceNoiser noiser(params.epsilon, params.seed, trial);
  QueryResponse out;
  out.values.resize(part.total());
  for (const auto& [start, end] : grouping.groups) {
    double sum = 0.0;
    for (std::size_t rank = start; rank < end; ++rank) sum += sorted_small[rank];
    const double bound =
        ds.kind == DatasetKind::CountingHistogram ? 1.0 : sum;
    // The group draws on the slot of its lowest-value member.
    const double noisy_aggregate =
        sum + noiser.noise_for(part.small_indices[order[start]], bound);
    const double member = noisy_aggregate / static_cast<double>(end - start);
    for (std::size_t rank = start; rank < end; ++rank) {
      out.values[part.small_indices[order[rank]]] = member;
    }
  }
  for (std::size_t l = 0; l < part.large_indices.size(); ++l) {
    out.values[part.large_indices[l]] =
        part.large_values[l] + noiser.noise_for(part.large_indices[l], big);
  }
  out.provenance = Provenance::Noised;
  return out;
}

}  // namespace hut
