#include "hut/microagg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hut {

void Partition::validate(std::size_t n) const {
  if (total() != n) throw ContractError("partition does not cover the dataset");
  std::vector<bool> seen(n, false);
  for (std::size_t i : small_indices) {
    if (i >= n || seen[i]) throw ContractError("partition indices not a cover");
    seen[i] = true;
  }
  for (std::size_t i : large_indices) {
    if (i >= n || seen[i]) throw ContractError("partition indices not a cover");
    seen[i] = true;
  }
  for (double v : small_values) {
    if (v > threshold_value) throw ContractError("small value above threshold");
  }
  for (double v : large_values) {
    if (v <= threshold_value) throw ContractError("large value not above threshold");
  }
  if (!centroids.empty()) {
    if (assignments.size() != small_values.size()) {
      throw ContractError("assignments not aligned to small batch");
    }
    std::vector<std::size_t> sizes(centroids.size(), 0);
    for (int a : assignments) {
      if (a < 0 || static_cast<std::size_t>(a) >= centroids.size()) {
        throw ContractError("assignment references missing centroid");
      }
      ++sizes[static_cast<std::size_t>(a)];
    }
    for (std::size_t s : sizes) {
      if (s == 0) throw ContractError("empty cluster");
    }
    if (!std::is_sorted(centroids.begin(), centroids.end())) {
      throw ContractError("centroids not nondecreasing");
    }
  }
}

Partition threshold_split(const Dataset& ds, double p) {
  if (ds.records.empty()) throw ContractError("threshold_split: empty dataset");
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("p must lie in (0,1)");

  const std::size_t n = ds.size();
  std::vector<double> sorted = ds.values();
  std::sort(sorted.begin(), sorted.end());
  // Nearest-rank quantile: the ceil(p*n)-th smallest value.
  std::size_t rank = static_cast<std::size_t>(
      std::ceil(p * static_cast<double>(n)));
  if (rank < 1) rank = 1;
  if (rank > n) rank = n;

  Partition part;
  part.threshold_value = sorted[rank - 1];
  for (std::size_t i = 0; i < n; ++i) {
    const double v = ds.records[i].value;
    if (v <= part.threshold_value) {
      part.small_indices.push_back(i);
      part.small_values.push_back(v);
    } else {
      part.large_indices.push_back(i);
      part.large_values.push_back(v);
    }
  }
  if (part.small_indices.empty()) {
    throw ConfigError("threshold leaves the to-be-clustered batch empty");
  }
  return part;
}

namespace {

void assign_nearest(const std::vector<double>& values,
                    const std::vector<double>& centroids,
                    std::vector<int>& assignments) {
  const int k = static_cast<int>(centroids.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    int best = 0;
    double best_d = std::abs(values[i] - centroids[0]);
    for (int c = 1; c < k; ++c) {
      const double d = std::abs(values[i] - centroids[c]);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    assignments[i] = best;
  }
}

// Reseeds every empty cluster with the point farthest from its current
// centroid, drawing only from clusters that can spare a point.
void repair_empty_clusters(const std::vector<double>& values,
                           std::vector<double>& centroids,
                           std::vector<int>& assignments) {
  const std::size_t k = centroids.size();
  std::vector<std::size_t> sizes(k, 0);
  for (int a : assignments) ++sizes[static_cast<std::size_t>(a)];
  for (std::size_t e = 0; e < k; ++e) {
    while (sizes[e] == 0) {
      std::size_t donor = values.size();
      double far_d = -1.0;
      for (std::size_t i = 0; i < values.size(); ++i) {
        const std::size_t c = static_cast<std::size_t>(assignments[i]);
        if (sizes[c] < 2) continue;
        const double d = std::abs(values[i] - centroids[c]);
        if (d > far_d) {
          far_d = d;
          donor = i;
        }
      }
      if (donor == values.size()) return;  // n == k singletons, nothing empty
      --sizes[static_cast<std::size_t>(assignments[donor])];
      assignments[donor] = static_cast<int>(e);
      centroids[e] = values[donor];
      ++sizes[e];
    }
  }
}

void update_means(const std::vector<double>& values,
                  const std::vector<int>& assignments,
                  std::vector<double>& centroids) {
  std::vector<double> sum(centroids.size(), 0.0);
  std::vector<std::size_t> cnt(centroids.size(), 0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    sum[static_cast<std::size_t>(assignments[i])] += values[i];
    ++cnt[static_cast<std::size_t>(assignments[i])];
  }
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    if (cnt[c] > 0) centroids[c] = sum[c] / static_cast<double>(cnt[c]);
  }
}

std::vector<double> kmeanspp_seed(const std::vector<double>& values, int k,
                                  Stream& stream) {
  const std::size_t n = values.size();
  std::vector<double> centroids;
  centroids.reserve(static_cast<std::size_t>(k));
  centroids.push_back(values[stream.uniform_index(n)]);
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = values[i] - centroids[0];
    d2[i] = d * d;
  }
  while (centroids.size() < static_cast<std::size_t>(k)) {
    double total = 0.0;
    for (double d : d2) total += d;
    std::size_t chosen;
    if (total > 0.0) {
      const double target = stream.uniform01() * total;
      double acc = 0.0;
      chosen = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc >= target) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = stream.uniform_index(n);
    }
    const double c = values[chosen];
    centroids.push_back(c);
    for (std::size_t i = 0; i < n; ++i) {
      const double d = values[i] - c;
      d2[i] = std::min(d2[i], d * d);
    }
  }
  return centroids;
}

// Relabels clusters so centroids come out nondecreasing.
void sort_labels(std::vector<double>& centroids, std::vector<int>& assignments) {
  const std::size_t k = centroids.size();
  std::vector<int> order(k);
  for (std::size_t c = 0; c < k; ++c) order[c] = static_cast<int>(c);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return centroids[static_cast<std::size_t>(a)] <
           centroids[static_cast<std::size_t>(b)];
  });
  std::vector<int> relabel(k);
  std::vector<double> sorted_c(k);
  for (std::size_t pos = 0; pos < k; ++pos) {
    relabel[static_cast<std::size_t>(order[pos])] = static_cast<int>(pos);
    sorted_c[pos] = centroids[static_cast<std::size_t>(order[pos])];
  }
  centroids = std::move(sorted_c);
  for (int& a : assignments) a = relabel[static_cast<std::size_t>(a)];
}

}  // namespace

double wcss_of(const std::vector<double>& values,
               const std::vector<int>& assignments,
               const std::vector<double>& centroids) {
  double total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - centroids[static_cast<std::size_t>(assignments[i])];
    total += d * d;
  }
  return total;
}

KMeansResult kmeans_single_restart(const std::vector<double>& values, int k,
                                   Stream& stream, const KMeansOptions& opts) {
  if (k < 1) throw ConfigError("k must be at least 1");
  if (values.size() < static_cast<std::size_t>(k)) {
    throw ConfigError("k-means needs at least k points");
  }

  std::vector<double> centroids = kmeanspp_seed(values, k, stream);
  std::vector<int> assignments(values.size(), 0);
  std::vector<double> previous(centroids.size());
  for (int iter = 0; iter < opts.max_iters; ++iter) {
    assign_nearest(values, centroids, assignments);
    repair_empty_clusters(values, centroids, assignments);
    previous = centroids;
    update_means(values, assignments, centroids);
    double moved = 0.0;
    for (std::size_t c = 0; c < centroids.size(); ++c) {
      moved = std::max(moved, std::abs(centroids[c] - previous[c]));
    }
    if (moved < opts.tol) break;
  }

  // Final pass pins the assignment to the converged centroids, then labels
  // clusters in value order.
  assign_nearest(values, centroids, assignments);
  repair_empty_clusters(values, centroids, assignments);
  update_means(values, assignments, centroids);
  sort_labels(centroids, assignments);

  KMeansResult result;
  result.wcss = wcss_of(values, assignments, centroids);
  result.assignments = std::move(assignments);
  result.centroids = std::move(centroids);
  return result;
}

KMeansResult kmeans_1d(const std::vector<double>& values, int k,
                       std::uint64_t seed, Exec exec, const KMeansOptions& opts) {
  if (k < 1) throw ConfigError("k must be at least 1");
  if (values.size() < static_cast<std::size_t>(k)) {
    throw ConfigError("k-means needs at least k points");
  }
  std::vector<KMeansResult> runs(static_cast<std::size_t>(opts.restarts));
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < opts.restarts; ++r) {
      Stream stream(derive_seed(seed, static_cast<std::uint64_t>(r), "restart"));
      runs[static_cast<std::size_t>(r)] =
          kmeans_single_restart(values, k, stream, opts);
    }
  } else {
    for (int r = 0; r < opts.restarts; ++r) {
      Stream stream(derive_seed(seed, static_cast<std::uint64_t>(r), "restart"));
      runs[static_cast<std::size_t>(r)] =
          kmeans_single_restart(values, k, stream, opts);
    }
  }
  // Lowest WCSS wins; ties go to the lowest restart index, so the pick does
  // not depend on completion order.
  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r) {
    if (runs[r].wcss < runs[best].wcss) best = r;
  }
  return runs[best];
}

ClusterSensitivity sensitivity_bounds(const Partition& part, DatasetKind kind) {
  if (part.centroids.empty() ||
      part.assignments.size() != part.small_values.size()) {
    throw ContractError("sensitivity_bounds: partition has no clustering");
  }
  ClusterSensitivity sens;
  if (kind == DatasetKind::CountingHistogram) {
    sens.per_cluster.assign(part.centroids.size(), 1.0);
    sens.global = 1.0;
    return sens;
  }
  sens.per_cluster.assign(part.centroids.size(), 0.0);
  for (std::size_t i = 0; i < part.small_values.size(); ++i) {
    auto& bound = sens.per_cluster[static_cast<std::size_t>(part.assignments[i])];
    bound = std::max(bound, part.small_values[i]);
  }
  sens.global = 0.0;
  for (double v : part.small_values) sens.global = std::max(sens.global, v);
  for (double v : part.large_values) sens.global = std::max(sens.global, v);
  return sens;
}

}  // namespace hut
