#pragma once

#include <cstdint>
#include <vector>

#include "hut/core.hpp"
#include "hut/rng.hpp"

namespace hut {

/// A dataset split at the p-th percentile of values, with cluster structure
/// on the small-value side. Indices refer to the original record order.
struct Partition {
  std::vector<std::size_t> small_indices;
  std::vector<double> small_values;
  std::vector<std::size_t> large_indices;
  std::vector<double> large_values;
  double threshold_value = 0.0;

  /// Cluster id per small record; centroids are stored nondecreasing.
  std::vector<int> assignments;
  std::vector<double> centroids;

  std::size_t total() const { return small_indices.size() + large_indices.size(); }

  /// Throws ContractError unless the split covers 0..n-1 exactly once, every
  /// small value is <= threshold < every large value, and (when clustered)
  /// assignments are valid, clusters non-empty, centroids nondecreasing.
  void validate(std::size_t n) const;
};

/// Per-cluster noising bounds for the small batch plus the global bound used
/// for the not-clustered batch. For counting histograms all bounds are 1.
struct ClusterSensitivity {
  std::vector<double> per_cluster;
  double global = 0.0;
};

/// Splits at the empirical p-quantile (nearest rank). Small-side membership
/// is value <= threshold, so ties go to the small batch.
Partition threshold_split(const Dataset& ds, double p);

struct KMeansOptions {
  int restarts = 10;
  int max_iters = 100;
  double tol = 1e-9;
};

struct KMeansResult {
  std::vector<int> assignments;
  std::vector<double> centroids;  // nondecreasing
  double wcss = 0.0;
};

/// Seeded k-means++ with restarts; keeps the lowest within-cluster sum of
/// squares, ties broken by lowest restart index. Deterministic given `seed`,
/// whichever Exec policy runs it.
KMeansResult kmeans_1d(const std::vector<double>& values, int k,
                       std::uint64_t seed, Exec exec = Exec::Parallel,
                       const KMeansOptions& opts = {});

/// One Lloyd run from a k-means++ seeding drawn off `stream`. Exposed so
/// tests and benchmarks can compare restarts individually.
KMeansResult kmeans_single_restart(const std::vector<double>& values, int k,
                                   Stream& stream, const KMeansOptions& opts = {});

double wcss_of(const std::vector<double>& values,
               const std::vector<int>& assignments,
               const std::vector<double>& centroids);

ClusterSensitivity sensitivity_bounds(const Partition& part, DatasetKind kind);

}  // namespace hut
