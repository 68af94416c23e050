#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "hut/core.hpp"
#include "hut/microagg.hpp"
#include "hut/rng.hpp"

namespace hut {

/// One draw from Laplace(0, b) by inverse CDF of a single uniform:
/// x = -b * sign(u) * ln(1 - 2|u|), u uniform on (-1/2, 1/2).
double laplace_sample(Stream& stream, double b);

/// Seeded noise source for one protection run. Identical (epsilon, seed,
/// trial, stage) always replays the same samples. Each slot owns its own
/// lane-derived substream, so a record keeps the same underlying draw no
/// matter which batch or cluster a pipeline puts it in; with a common seed,
/// competing pipelines differ only through their noise scales.
class LaplaceNoiser {
 public:
  LaplaceNoiser(double epsilon, std::uint64_t master_seed, std::uint64_t trial,
                std::string_view stage = "noise");

  double epsilon() const { return epsilon_; }

  /// Laplace(sensitivity / epsilon) noise for the given slot; callers use
  /// the record's original index as the slot. A zero bound yields exactly
  /// zero noise.
  double noise_for(std::size_t slot, double sensitivity) const;

 private:
  double epsilon_;
  std::uint64_t master_seed_;
  std::uint64_t trial_;
  std::string stage_;
};

/// Adds per-cluster Laplace noise: small record in cluster c gets scale
/// sens.per_cluster[c] / epsilon, large records get sens.global / epsilon.
/// Output stays in original record order.
QueryResponse noise_partition(const Partition& part,
                              const ClusterSensitivity& sens,
                              const LaplaceNoiser& noiser);

/// A randomized mechanism under audit: maps (dataset, sample index) to one
/// real-valued outcome. The sample index must select the RNG streams so that
/// outcomes are independent across samples.
using MechanismOutcome =
    std::function<double(const Dataset&, std::uint64_t sample_idx)>;

/// Monte-Carlo check of the epsilon-DP inequality on one pair of neighboring
/// datasets. Outcomes are discretized by `bin_edges` (half-open cells, plus
/// the two unbounded tails) and the maximum smoothed frequency ratio
/// (count1+1)/(count2+1) over cells is returned. A statistical audit, not a
/// proof.
double dp_ratio_audit(const MechanismOutcome& mechanism, const Dataset& x1,
                      const Dataset& x2, const std::vector<double>& bin_edges,
                      std::size_t samples, Exec exec = Exec::Parallel);

/// Equal-mass bin edges for the audit: quantiles of `pilot` outcomes of the
/// mechanism on x1. Near-empty cells would blow up the smoothed ratio, so
/// the audit bins where the mass actually is. `first_index` sets the sample
/// indices used for the pilot; keep them disjoint from the audited range.
std::vector<double> calibrate_outcome_bins(const MechanismOutcome& mechanism,
                                           const Dataset& x1, std::size_t pilot,
                                           std::size_t n_cells,
                                           std::uint64_t first_index);

}  // namespace hut
