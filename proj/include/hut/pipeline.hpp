#pragma once

#include <cstdint>

#include "hut/core.hpp"
#include "hut/mechanism.hpp"
#include "hut/microagg.hpp"
#include "hut/orderconstraint.hpp"

namespace hut {

/// Output of one protection run. Keeps the Noised intermediate next to the
/// PostProcessed release so utility gains can be attributed to clustering
/// and order constraining separately.
struct ProtectedDataset {
  QueryResponse noised;
  QueryResponse post;
  Partition partition;
  ClusterSensitivity sensitivity;
};

/// Full pipeline: sort, threshold split, k-means on the small batch,
/// per-cluster Laplace noise, order-constrained post-processing.
/// Deterministic given (params.seed, trial), whichever Exec policy runs it.
ProtectedDataset hut_protect(const Dataset& ds, const Params& params,
                             std::uint64_t trial, Exec exec = Exec::Parallel);

/// Counting-query variant: identical stages with every sensitivity bound
/// fixed at 1; clustering operates on the bin counts.
ProtectedDataset protect_counting(const Dataset& ds, const Params& params,
                                  std::uint64_t trial, Exec exec = Exec::Parallel);

}  // namespace hut
