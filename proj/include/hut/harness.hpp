#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hut/core.hpp"
#include "hut/rng.hpp"

namespace hut {

enum class Method { HUT, FixedSize, KAggregation };
enum class QueryType { Simple, Counting };

const char* method_name(Method method);
Method method_from_name(const std::string& name);
const char* query_name(QueryType query);
QueryType query_from_name(const std::string& name);

/// Parameter grid for one experiment. Every (epsilon, k, p, method) tuple is
/// a cell; each cell is averaged over `trials` protection runs.
struct SweepSpec {
  QueryType query = QueryType::Simple;
  std::vector<double> epsilons;
  std::vector<int> ks;
  std::vector<double> ps;
  int trials = 20;
  std::vector<Method> methods;
  double bin_width = 1.0;  // histogram width for counting queries

  static SweepSpec defaults(QueryType query);
  void validate() const;
};

struct ReportRow {
  Method method = Method::HUT;
  QueryType query = QueryType::Simple;
  double epsilon = 0.0;
  int k = 0;
  double p = 0.0;
  double mean_mse = 0.0;
  double std_mse = 0.0;
  int trials = 0;
};

struct FailedCell {
  Method method = Method::HUT;
  double epsilon = 0.0;
  int k = 0;
  double p = 0.0;
  std::string message;
};

/// Best cell per epsilon: reduction of the clustered pipeline's mean MSE
/// against the better (lower-MSE) baseline in the same cell.
struct ReductionRow {
  QueryType query = QueryType::Simple;
  double epsilon = 0.0;
  int k = 0;
  double p = 0.0;
  double reduction_pct = 0.0;
};

struct ExperimentReport {
  QueryType query = QueryType::Simple;
  std::vector<ReportRow> rows;
  std::vector<FailedCell> failed;
};

/// Mean squared error between two equal-length responses.
double mse(const QueryResponse& raw, const QueryResponse& prot);

/// Runs every cell of the grid. Cells that throw are recorded as failed and
/// the sweep continues. Deterministic given seed, whichever Exec runs it.
ExperimentReport run_sweep(const SweepSpec& spec, const Dataset& ds,
                           std::uint64_t seed, Exec exec = Exec::Parallel);

std::vector<ReductionRow> reduction_table(const ExperimentReport& report);

/// Writes report.csv, reduction.csv and four line plots into out_dir.
/// Returns the written paths; throws before creating anything on an empty
/// report.
std::vector<std::string> emit_outputs(const ExperimentReport& report,
                                      const std::string& out_dir);

ExperimentReport load_report_csv(const std::string& path);

/// `key = value` lines; blank lines and `#` comments ignored.
std::map<std::string, std::string> parse_config_file(const std::string& path);

/// Applies config keys (epsilons, ks, ps, trials, methods, seed, bin_width)
/// to the spec; list values are comma-separated. Unknown keys throw.
void apply_config(SweepSpec& spec, const std::map<std::string, std::string>& kv,
                  std::uint64_t& seed);

std::string describe_defaults();

}  // namespace hut
