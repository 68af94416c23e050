#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "hut/microagg.hpp"

using namespace hut;

namespace {

Dataset from_values(const std::vector<double>& values, DatasetKind kind) {
  Dataset ds;
  ds.kind = kind;
  for (std::size_t i = 0; i < values.size(); ++i) {
    ds.records.push_back({"r" + std::to_string(i), values[i]});
  }
  return ds;
}

// The optimal 1-D clustering uses contiguous runs of the sorted values, so
// the exact minimum WCSS is found by enumerating cut positions.
double oracle_wcss(std::vector<double> values, int k) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  double best = 1e300;
  std::vector<std::size_t> cuts(static_cast<std::size_t>(k) - 1);
  const auto sse_of = [&](std::size_t a, std::size_t b) {  // [a, b)
    double sum = 0.0;
    for (std::size_t i = a; i < b; ++i) sum += values[i];
    const double mean = sum / static_cast<double>(b - a);
    double sse = 0.0;
    for (std::size_t i = a; i < b; ++i) sse += (values[i] - mean) * (values[i] - mean);
    return sse;
  };
  const auto recurse = [&](auto&& self, std::size_t depth, std::size_t from) -> void {
    if (depth == cuts.size()) {
      double total = 0.0;
      std::size_t start = 0;
      for (std::size_t c : cuts) {
        total += sse_of(start, c);
        start = c;
      }
      total += sse_of(start, n);
      best = std::min(best, total);
      return;
    }
    for (std::size_t c = from; c + (cuts.size() - depth) <= n; ++c) {
      cuts[depth] = c;
      self(self, depth + 1, c + 1);
    }
  };
  if (k == 1) return sse_of(0, n);
  recurse(recurse, 0, 1);
  return best;
}

}  // namespace

TEST_CASE("threshold split at the nearest-rank quantile, ties going small") {
  const Dataset ds = from_values({7, 1, 2, 2, 5, 9}, DatasetKind::SimpleValues);

  Partition part = threshold_split(ds, 0.5);
  // rank ceil(0.5 * 6) = 3 -> third smallest value 2; every 2 stays small.
  CHECK(part.threshold_value == 2.0);
  CHECK(part.small_indices == std::vector<std::size_t>{1, 2, 3});
  CHECK(part.small_values == std::vector<double>{1, 2, 2});
  CHECK(part.large_indices == std::vector<std::size_t>{0, 4, 5});
  CHECK(part.total() == 6);
  CHECK_NOTHROW(part.validate(6));

  part = threshold_split(ds, 0.9);  // rank 6 -> threshold 9 -> nothing large
  CHECK(part.large_indices.empty());
  CHECK(part.small_indices.size() == 6);

  CHECK_THROWS_AS(threshold_split(ds, 0.0), ConfigError);
  CHECK_THROWS_AS(threshold_split(ds, 1.0), ConfigError);
}

TEST_CASE("partition validation catches broken invariants") {
  const Dataset ds = from_values({1, 2, 3, 4}, DatasetKind::SimpleValues);
  Partition part = threshold_split(ds, 0.5);

  Partition missing = part;
  missing.small_indices.pop_back();
  missing.small_values.pop_back();
  CHECK_THROWS_AS(missing.validate(4), ContractError);

  Partition crossed = part;
  std::swap(crossed.small_values[0], crossed.large_values[0]);
  CHECK_THROWS_AS(crossed.validate(4), ContractError);
}

TEST_CASE("clustering finds the exact optimum on separated groups") {
  const std::vector<double> values = {10.1, 0.2, 10.0, 0.1, 20.5, 0.3, 20.4};
  const KMeansResult result = kmeans_1d(values, 3, 7);
  CHECK(result.wcss == doctest::Approx(oracle_wcss(values, 3)).epsilon(1e-9));
  // Labels follow value order: the three 0.x records share cluster 0.
  CHECK(result.assignments == std::vector<int>{1, 0, 1, 0, 2, 0, 2});
  REQUIRE(result.centroids.size() == 3);
  CHECK(result.centroids[0] == doctest::Approx(0.2));
  CHECK(result.centroids[1] == doctest::Approx(10.05));
  CHECK(result.centroids[2] == doctest::Approx(20.45));
}

TEST_CASE("restarts never beat the exhaustive optimum and usually reach it") {
  Stream stream(555);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 4 + stream.uniform_index(5);  // 4..8
    const int k = 2 + static_cast<int>(stream.uniform_index(3));  // 2..4
    if (static_cast<std::size_t>(k) > n) continue;
    std::vector<double> values(n);
    for (double& v : values) v = 100.0 * stream.uniform01();
    KMeansOptions opts;
    opts.restarts = 30;
    const double found = kmeans_1d(values, k, 1000 + t, Exec::Serial, opts).wcss;
    const double exact = oracle_wcss(values, k);
    CHECK(found >= exact - 1e-9);
    CHECK(found <= exact + 1e-6);  // small instances: restarts reach the optimum
  }
}

TEST_CASE("clusters are contiguous in value order") {
  Stream stream(77);
  std::vector<double> values(60);
  for (double& v : values) v = 50.0 * stream.uniform01();
  const KMeansResult result = kmeans_1d(values, 6, 3);
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = 0; j < values.size(); ++j) {
      if (values[i] < values[j]) CHECK(result.assignments[i] <= result.assignments[j]);
    }
  }
  CHECK(std::is_sorted(result.centroids.begin(), result.centroids.end()));
}

TEST_CASE("degenerate inputs stay valid") {
  // All-identical values cannot fill every cluster with distinct points.
  const KMeansResult flat = kmeans_1d({3, 3, 3, 3}, 2, 5);
  CHECK(flat.wcss == 0.0);
  std::vector<int> seen(2, 0);
  for (int a : flat.assignments) ++seen[static_cast<std::size_t>(a)];
  CHECK(seen[0] > 0);
  CHECK(seen[1] > 0);

  // One point per cluster.
  const KMeansResult exact = kmeans_1d({5, 1, 9}, 3, 5);
  CHECK(exact.wcss == 0.0);
  CHECK(exact.assignments == std::vector<int>{1, 0, 2});
}

TEST_CASE("serial and parallel execution agree draw for draw") {
  Stream stream(4242);
  std::vector<double> values(200);
  for (double& v : values) v = 130.0 * stream.uniform01();
  for (int k : {2, 7, 20}) {
    const KMeansResult serial = kmeans_1d(values, k, 11, Exec::Serial);
    const KMeansResult parallel = kmeans_1d(values, k, 11, Exec::Parallel);
    CHECK(serial.assignments == parallel.assignments);
    CHECK(serial.centroids == parallel.centroids);
    CHECK(serial.wcss == parallel.wcss);
  }
}

TEST_CASE("same seed reproduces the same clustering") {
  std::vector<double> values = {4, 8, 15, 16, 23, 42, 4.2, 7.9};
  const KMeansResult a = kmeans_1d(values, 3, 123);
  const KMeansResult b = kmeans_1d(values, 3, 123);
  CHECK(a.assignments == b.assignments);
  CHECK(a.centroids == b.centroids);
}

TEST_CASE("sensitivity bounds are cluster maxima, or all ones for counts") {
  const Dataset ds = from_values({1, 2, 50, 60, 3, 70}, DatasetKind::SimpleValues);
  Partition part = threshold_split(ds, 0.5);  // small: {1, 2, 3}
  const KMeansResult clusters = kmeans_1d(part.small_values, 2, 9);
  part.assignments = clusters.assignments;
  part.centroids = clusters.centroids;

  const ClusterSensitivity sens = sensitivity_bounds(part, DatasetKind::SimpleValues);
  REQUIRE(sens.per_cluster.size() == 2);
  for (std::size_t c = 0; c < 2; ++c) {
    double cluster_max = 0.0;
    for (std::size_t s = 0; s < part.small_values.size(); ++s) {
      if (static_cast<std::size_t>(part.assignments[s]) == c) {
        cluster_max = std::max(cluster_max, part.small_values[s]);
      }
    }
    CHECK(sens.per_cluster[c] == cluster_max);
  }
  CHECK(sens.global == 70.0);

  const ClusterSensitivity counting =
      sensitivity_bounds(part, DatasetKind::CountingHistogram);
  CHECK(counting.global == 1.0);
  for (double b : counting.per_cluster) CHECK(b == 1.0);

  Partition unclustered = threshold_split(ds, 0.5);
  CHECK_THROWS_AS(sensitivity_bounds(unclustered, DatasetKind::SimpleValues),
                  ContractError);
}
