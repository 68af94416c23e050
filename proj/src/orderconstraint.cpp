#include "hut/orderconstraint.hpp"

namespace hut {

IsotonicFit isotonic_l2(const std::vector<double>& noised_sorted) {
  if (noised_sorted.empty()) throw ContractError("isotonic_l2: empty input");
  const std::size_t n = noised_sorted.size();

  // Stack of blocks; a new point starts as its own block, then merges
  // backwards while the previous block's mean exceeds the new one's.
  std::vector<IsotonicBlock> blocks;
  std::vector<double> sums;
  blocks.reserve(n);
  sums.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    blocks.push_back({i, i + 1, noised_sorted[i]});
    sums.push_back(noised_sorted[i]);
    while (blocks.size() > 1 &&
           blocks[blocks.size() - 2].mean > blocks.back().mean) {
      const IsotonicBlock top = blocks.back();
      const double top_sum = sums.back();
      blocks.pop_back();
      sums.pop_back();
      IsotonicBlock& prev = blocks.back();
      sums.back() += top_sum;
      prev.end = top.end;
      prev.mean = sums.back() / static_cast<double>(prev.end - prev.start);
    }
  }

  IsotonicFit fit;
  fit.input = noised_sorted;
  fit.output.resize(n);
  for (const auto& b : blocks) {
    for (std::size_t i = b.start; i < b.end; ++i) fit.output[i] = b.mean;
  }
  fit.blocks = std::move(blocks);
  return fit;
}

QueryResponse apply_order_constraint(const QueryResponse& noised,
                                     const std::vector<std::size_t>& perm) {
  if (noised.provenance != Provenance::Noised) {
    throw ContractError("apply_order_constraint: input must be a Noised response");
  }
  if (noised.values.size() != perm.size()) {
    throw ContractError("apply_order_constraint: permutation length mismatch");
  }
  std::vector<double> in_sorted_order(perm.size());
  for (std::size_t pos = 0; pos < perm.size(); ++pos) {
    in_sorted_order[pos] = noised.values[perm[pos]];
  }
  const IsotonicFit fit = isotonic_l2(in_sorted_order);
  return QueryResponse{inverse_permute(fit.output, perm),
                       Provenance::PostProcessed};
}

}  // namespace hut
