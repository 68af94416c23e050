#include "hut/mechanism.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hut {

double laplace_sample(Stream& stream, double b) {
  if (!(b > 0.0)) throw ContractError("laplace_sample: scale must be positive");
  const double u = stream.uniform_symmetric();
  const double sign = u < 0.0 ? -1.0 : 1.0;
  return -b * sign * std::log(1.0 - 2.0 * std::abs(u));
}

LaplaceNoiser::LaplaceNoiser(double epsilon, std::uint64_t master_seed,
                             std::uint64_t trial, std::string_view stage)
    : epsilon_(epsilon),
      master_seed_(master_seed),
      trial_(trial),
      stage_(stage) {
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
}

double LaplaceNoiser::noise_for(std::size_t slot, double sensitivity) const {
  if (sensitivity < 0.0) throw ContractError("negative sensitivity bound");
  Stream stream = Stream::derive(master_seed_, trial_, stage_, slot);
  const double u = stream.uniform_symmetric();
  if (sensitivity == 0.0) return 0.0;
  const double b = sensitivity / epsilon_;
  const double sign = u < 0.0 ? -1.0 : 1.0;
  return -b * sign * std::log(1.0 - 2.0 * std::abs(u));
}

QueryResponse noise_partition(const Partition& part,
                              const ClusterSensitivity& sens,
                              const LaplaceNoiser& noiser) {
  const std::size_t n = part.total();
  part.validate(n);
  if (sens.per_cluster.size() != part.centroids.size()) {
    throw ContractError("noise_partition: sensitivity not aligned to clusters");
  }
  QueryResponse out;
  out.provenance = Provenance::Noised;
  out.values.resize(n);

  for (std::size_t s = 0; s < part.small_indices.size(); ++s) {
    const double bound =
        sens.per_cluster[static_cast<std::size_t>(part.assignments[s])];
    out.values[part.small_indices[s]] =
        part.small_values[s] + noiser.noise_for(part.small_indices[s], bound);
  }
  for (std::size_t l = 0; l < part.large_indices.size(); ++l) {
    out.values[part.large_indices[l]] =
        part.large_values[l] + noiser.noise_for(part.large_indices[l], sens.global);
  }
  return out;
}

namespace {

void check_neighboring(const Dataset& x1, const Dataset& x2) {
  if (x1.size() != x2.size() || x1.kind != x2.kind) {
    throw ContractError("dp_ratio_audit: datasets are not neighboring");
  }
  std::size_t diffs = 0;
  for (std::size_t i = 0; i < x1.size(); ++i) {
    if (x1.records[i].id != x2.records[i].id) {
      throw ContractError("dp_ratio_audit: datasets are not neighboring");
    }
    if (x1.records[i].value != x2.records[i].value) ++diffs;
  }
  if (diffs > 1) {
    throw ContractError("dp_ratio_audit: datasets differ in more than one record");
  }
}

std::size_t cell_of(double x, const std::vector<double>& edges) {
  // Cell j holds edges[j-1] <= x < edges[j]; cells 0 and size() are tails.
  return static_cast<std::size_t>(
      std::upper_bound(edges.begin(), edges.end(), x) - edges.begin());
}

}  // namespace

double dp_ratio_audit(const MechanismOutcome& mechanism, const Dataset& x1,
                      const Dataset& x2, const std::vector<double>& bin_edges,
                      std::size_t samples, Exec exec) {
  check_neighboring(x1, x2);
  if (bin_edges.empty() || !std::is_sorted(bin_edges.begin(), bin_edges.end())) {
    throw ContractError("dp_ratio_audit: bin edges must be sorted and non-empty");
  }
  if (samples == 0) throw ContractError("dp_ratio_audit: need samples");

  const std::size_t cells = bin_edges.size() + 1;
  std::vector<std::uint64_t> count1(cells, 0), count2(cells, 0);

  if (exec == Exec::Parallel) {
#pragma omp parallel
    {
      std::vector<std::uint64_t> local1(cells, 0), local2(cells, 0);
#pragma omp for schedule(static) nowait
      for (long long s = 0; s < static_cast<long long>(samples); ++s) {
        const auto idx = static_cast<std::uint64_t>(s);
        ++local1[cell_of(mechanism(x1, idx), bin_edges)];
        ++local2[cell_of(mechanism(x2, idx), bin_edges)];
      }
#pragma omp critical
      for (std::size_t c = 0; c < cells; ++c) {
        count1[c] += local1[c];
        count2[c] += local2[c];
      }
    }
  } else {
    for (std::uint64_t s = 0; s < samples; ++s) {
      ++count1[cell_of(mechanism(x1, s), bin_edges)];
      ++count2[cell_of(mechanism(x2, s), bin_edges)];
    }
  }

  double max_ratio = 0.0;
  for (std::size_t c = 0; c < cells; ++c) {
    const double ratio = (static_cast<double>(count1[c]) + 1.0) /
                         (static_cast<double>(count2[c]) + 1.0);
    max_ratio = std::max(max_ratio, ratio);
  }
  return max_ratio;
}

std::vector<double> calibrate_outcome_bins(const MechanismOutcome& mechanism,
                                           const Dataset& x1, std::size_t pilot,
                                           std::size_t n_cells,
                                           std::uint64_t first_index) {
  if (pilot < n_cells || n_cells < 2) {
    throw ContractError("calibrate_outcome_bins: need pilot >= cells >= 2");
  }
  std::vector<double> outcomes(pilot);
  for (std::size_t s = 0; s < pilot; ++s) {
    outcomes[s] = mechanism(x1, first_index + s);
  }
  std::sort(outcomes.begin(), outcomes.end());
  std::vector<double> edges;
  for (std::size_t c = 1; c < n_cells; ++c) {
    const double edge = outcomes[c * pilot / n_cells];
    if (edges.empty() || edge > edges.back()) edges.push_back(edge);
  }
  if (edges.empty()) {
    // Degenerate pilot (all outcomes equal); any single edge works.
    edges.push_back(outcomes.front());
  }
  return edges;
}

}  // namespace hut
