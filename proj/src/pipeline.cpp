#include "hut/pipeline.hpp"

namespace hut {

ProtectedDataset hut_protect(const Dataset& ds, const Params& params,
                             std::uint64_t trial, Exec exec) {
  params.validate();
  if (ds.records.empty()) throw DataError("cannot protect an empty dataset");

  const SortResult sorted = sort_ascending(ds);

  ProtectedDataset out;
  out.partition = threshold_split(ds, params.p);
  if (out.partition.small_values.size() < static_cast<std::size_t>(params.k)) {
    throw ConfigError("k exceeds the size of the to-be-clustered batch");
  }
  KMeansResult clusters =
      kmeans_1d(out.partition.small_values, params.k,
                derive_seed(params.seed, trial, "kmeans"), exec);
  out.partition.assignments = std::move(clusters.assignments);
  out.partition.centroids = std::move(clusters.centroids);

  out.sensitivity = sensitivity_bounds(out.partition, ds.kind);
  LaplaceNoiser noiser(params.epsilon, params.seed, trial);
  out.noised = noise_partition(out.partition, out.sensitivity, noiser);
  out.post = apply_order_constraint(out.noised, sorted.perm);
  return out;
}

ProtectedDataset protect_counting(const Dataset& ds, const Params& params,
                                  std::uint64_t trial, Exec exec) {
  if (ds.kind != DatasetKind::CountingHistogram) {
    throw ContractError("protect_counting: dataset must be a counting histogram");
  }
  return hut_protect(ds, params, trial, exec);
}

}  // namespace hut
