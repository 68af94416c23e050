#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "hut/errors.hpp"

namespace hut {

enum class DatasetKind { SimpleValues, CountingHistogram };
enum class Provenance { Raw, Noised, PostProcessed };

/// One keyed observation. The id is an opaque lookup key; the value is a
/// nonnegative scalar (a speed, or a bin count for histograms).
struct Record {
  std::string id;
  double value = 0.0;
};

struct Dataset {
  std::vector<Record> records;
  DatasetKind kind = DatasetKind::SimpleValues;

  std::size_t size() const { return records.size(); }
  std::vector<double> values() const;

  /// Position of `id`, or throws DataError for an unknown id.
  std::size_t index_of(std::string_view id) const;

  /// Throws DataError unless all invariants hold: non-empty, finite
  /// nonnegative values, unique ids, and integer counts for histograms.
  void validate() const;
};

/// The full parameter envelope: privacy scale epsilon, cluster count k,
/// threshold portion p, master seed, and trial count.
struct Params {
  double epsilon = 0.0;
  int k = 0;
  double p = 0.0;
  std::uint64_t seed = 0;
  int trials = 1;

  void validate() const;  // throws ConfigError
};

/// Values aligned to a dataset's record order, tagged with how far through
/// the protection pipeline they have travelled.
struct QueryResponse {
  std::vector<double> values;
  Provenance provenance = Provenance::Raw;
};

struct SortResult {
  Dataset sorted;
  /// perm[sorted_pos] = original_pos. Ties keep original-index order.
  std::vector<std::size_t> perm;
};

SortResult sort_ascending(const Dataset& ds);

/// Undoes sort_ascending: result[perm[pos]] = sorted_values[pos].
std::vector<double> inverse_permute(const std::vector<double>& sorted_values,
                                    const std::vector<std::size_t>& perm);

double simple_query(const Dataset& ds, std::string_view id);
double simple_query(const Dataset& ds, const QueryResponse& resp, std::string_view id);

QueryResponse raw_response(const Dataset& ds);

/// Bins [i*w, (i+1)*w) covering [0, max value]; counts sum to the record
/// count. Bin ids encode the lower edges.
Dataset build_histogram(const Dataset& ds, double bin_width);

// CSV format: header "id,value", one record per line, LF endings.
Dataset read_csv(const std::string& path, DatasetKind kind = DatasetKind::SimpleValues);
Dataset read_csv(std::istream& in, DatasetKind kind, const std::string& origin);
void write_csv(const Dataset& ds, const std::string& path);
void write_csv(const Dataset& ds, std::ostream& out);

std::string format_value(double v);

}  // namespace hut
