#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "hut/datagen.hpp"
#include "hut/harness.hpp"

using namespace hut;
namespace fs = std::filesystem;

namespace {

QueryResponse resp(const std::vector<double>& values) {
  QueryResponse r;
  r.values = values;
  return r;
}

ReportRow row_of(Method m, double eps, int k, double p, double mean) {
  ReportRow row;
  row.method = m;
  row.query = QueryType::Simple;
  row.epsilon = eps;
  row.k = k;
  row.p = p;
  row.mean_mse = mean;
  row.trials = 20;
  return row;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag)
      : path(fs::temp_directory_path() / ("hut_test_" + tag)) {
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string write_temp_file(const TempDir& dir, const std::string& name,
                            const std::string& text) {
  fs::create_directories(dir.path);
  const fs::path p = dir.path / name;
  std::ofstream out(p, std::ios::binary);
  out << text;
  return p.string();
}

}  // namespace

TEST_CASE("mean squared error over aligned responses") {
  CHECK(mse(resp({1, 2, 3}), resp({1, 2, 3})) == 0.0);
  CHECK(mse(resp({0, 0}), resp({1, 3})) == 5.0);
  // Scaling every error by c scales the MSE by c^2.
  CHECK(mse(resp({0, 0}), resp({3, 9})) == 45.0);
  CHECK_THROWS_AS(mse(resp({1, 2}), resp({1})), ContractError);
  CHECK_THROWS_AS(mse(resp({}), resp({})), ContractError);
}

TEST_CASE("default grids per query type") {
  const SweepSpec simple = SweepSpec::defaults(QueryType::Simple);
  CHECK(simple.epsilons == std::vector<double>{0.008, 0.01, 0.02, 0.05});
  CHECK(simple.ks == std::vector<int>{5, 8, 10});
  CHECK(simple.ps == std::vector<double>{0.30, 0.35, 0.40});
  CHECK(simple.trials == 20);
  CHECK(simple.methods.size() == 3);

  const SweepSpec counting = SweepSpec::defaults(QueryType::Counting);
  CHECK(counting.ks == std::vector<int>{5, 10, 15});
  CHECK(counting.epsilons == simple.epsilons);

  SweepSpec bad = simple;
  bad.trials = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = simple;
  bad.epsilons = {0.05, -1.0};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("a single cell produces a single row") {
  const Dataset ds = gen_speeds(120, Profile::Uniform, 7);
  SweepSpec spec;
  spec.epsilons = {0.05};
  spec.ks = {4};
  spec.ps = {0.4};
  spec.trials = 1;
  spec.methods = {Method::HUT};
  const ExperimentReport report = run_sweep(spec, ds, 42, Exec::Serial);
  REQUIRE(report.rows.size() == 1);
  CHECK(report.failed.empty());
  const ReportRow& row = report.rows[0];
  CHECK(row.method == Method::HUT);
  CHECK(row.epsilon == 0.05);
  CHECK(row.k == 4);
  CHECK(row.p == 0.4);
  CHECK(row.mean_mse > 0.0);
  CHECK(row.std_mse == 0.0);  // one trial: no spread estimate
  CHECK(row.trials == 1);
}

TEST_CASE("the default simple grid yields 108 rows in grid order") {
  const Dataset ds = gen_speeds(1200, Profile::RightSkewed, 42);
  SweepSpec spec = SweepSpec::defaults(QueryType::Simple);
  spec.trials = 2;
  const ExperimentReport report = run_sweep(spec, ds, 42);
  CHECK(report.failed.empty());
  REQUIRE(report.rows.size() == 108);

  // epsilon, then k, then p, then method.
  CHECK(report.rows[0].epsilon == 0.008);
  CHECK(report.rows[0].k == 5);
  CHECK(report.rows[0].p == 0.30);
  CHECK(report.rows[0].method == Method::HUT);
  CHECK(report.rows[1].method == Method::FixedSize);
  CHECK(report.rows[2].method == Method::KAggregation);
  CHECK(report.rows[3].p == 0.35);
  CHECK(report.rows[9].k == 8);
  CHECK(report.rows[27].epsilon == 0.01);
  CHECK(report.rows.back().epsilon == 0.05);
  CHECK(report.rows.back().method == Method::KAggregation);
}

TEST_CASE("sweeps are deterministic and execution-policy independent") {
  const Dataset ds = gen_speeds(150, Profile::Bimodal, 11);
  SweepSpec spec;
  spec.epsilons = {0.02, 0.05};
  spec.ks = {3};
  spec.ps = {0.35};
  spec.trials = 3;
  spec.methods = {Method::HUT, Method::FixedSize, Method::KAggregation};

  const ExperimentReport a = run_sweep(spec, ds, 9, Exec::Serial);
  const ExperimentReport b = run_sweep(spec, ds, 9, Exec::Parallel);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].mean_mse == b.rows[i].mean_mse);
    CHECK(a.rows[i].std_mse == b.rows[i].std_mse);
  }

  const ExperimentReport c = run_sweep(spec, ds, 10, Exec::Serial);
  CHECK(a.rows[0].mean_mse != c.rows[0].mean_mse);
}

TEST_CASE("cells that cannot run are recorded and the sweep continues") {
  const Dataset ds = gen_speeds(40, Profile::Uniform, 3);
  SweepSpec spec;
  spec.epsilons = {0.05};
  spec.ks = {3, 30};  // 30 exceeds the small batch (~12 of 40)
  spec.ps = {0.3};
  spec.trials = 2;
  spec.methods = {Method::HUT, Method::FixedSize, Method::KAggregation};
  const ExperimentReport report = run_sweep(spec, ds, 42, Exec::Serial);

  // k = 30 breaks the two clustering methods; the sum-threshold baseline
  // never consults k.
  CHECK(report.rows.size() == 4);
  REQUIRE(report.failed.size() == 2);
  for (const FailedCell& cell : report.failed) {
    CHECK(cell.k == 30);
    CHECK(!cell.message.empty());
  }
}

TEST_CASE("query kind and dataset kind must agree") {
  const Dataset speeds = gen_speeds(100, Profile::Uniform, 2);
  const Dataset hist = gen_counting(speeds, 10.0);
  SweepSpec spec;
  spec.epsilons = {0.5};
  spec.ks = {2};
  spec.ps = {0.4};
  spec.trials = 1;
  spec.methods = {Method::HUT};
  CHECK_THROWS_AS(run_sweep(spec, hist, 1, Exec::Serial), ConfigError);

  spec.query = QueryType::Counting;  // simple input is histogrammed in place
  const ExperimentReport report = run_sweep(spec, speeds, 1, Exec::Serial);
  CHECK(report.rows.size() == 1);
}

TEST_CASE("reduction rows pick the better baseline and the best cell") {
  ExperimentReport report;
  report.query = QueryType::Simple;
  // Cell (2, 0.3): baselines 50 and 40 -> base 40, reduction 75%.
  report.rows.push_back(row_of(Method::HUT, 0.01, 2, 0.3, 10));
  report.rows.push_back(row_of(Method::FixedSize, 0.01, 2, 0.3, 50));
  report.rows.push_back(row_of(Method::KAggregation, 0.01, 2, 0.3, 40));
  // Cell (3, 0.4): single baseline -> reduction 80%, the epsilon's best.
  report.rows.push_back(row_of(Method::HUT, 0.01, 3, 0.4, 20));
  report.rows.push_back(row_of(Method::FixedSize, 0.01, 3, 0.4, 100));
  // Second epsilon: baseline-free cell contributes nothing.
  report.rows.push_back(row_of(Method::HUT, 0.05, 2, 0.3, 5));

  const std::vector<ReductionRow> table = reduction_table(report);
  REQUIRE(table.size() == 1);
  CHECK(table[0].epsilon == 0.01);
  CHECK(table[0].k == 3);
  CHECK(table[0].p == 0.4);
  CHECK(table[0].reduction_pct == doctest::Approx(80.0).epsilon(1e-12));
}

TEST_CASE("output emission writes the full bundle or nothing") {
  TempDir dir("emit");
  const ExperimentReport empty;
  CHECK_THROWS_AS(emit_outputs(empty, dir.path.string()), DataError);
  CHECK(!fs::exists(dir.path));

  const Dataset ds = gen_speeds(100, Profile::Uniform, 4);
  SweepSpec spec;
  spec.epsilons = {0.02, 0.05};
  spec.ks = {3};
  spec.ps = {0.4};
  spec.trials = 2;
  spec.methods = {Method::HUT, Method::FixedSize, Method::KAggregation};
  const ExperimentReport report = run_sweep(spec, ds, 42, Exec::Serial);

  const std::vector<std::string> written =
      emit_outputs(report, dir.path.string());
  CHECK(written.size() == 6);
  for (const std::string& p : written) CHECK(fs::exists(p));

  const ExperimentReport loaded =
      load_report_csv((dir.path / "report.csv").string());
  REQUIRE(loaded.rows.size() == report.rows.size());
  for (std::size_t i = 0; i < loaded.rows.size(); ++i) {
    CHECK(loaded.rows[i].method == report.rows[i].method);
    CHECK(loaded.rows[i].epsilon == report.rows[i].epsilon);
    CHECK(loaded.rows[i].k == report.rows[i].k);
    CHECK(loaded.rows[i].mean_mse ==
          doctest::Approx(report.rows[i].mean_mse).epsilon(1e-9));
  }
}

TEST_CASE("a baseline-free report skips only the reduction plot") {
  TempDir dir("hutonly");
  const Dataset ds = gen_speeds(100, Profile::Uniform, 4);
  SweepSpec spec;
  spec.epsilons = {0.05};
  spec.ks = {3};
  spec.ps = {0.4};
  spec.trials = 1;
  spec.methods = {Method::HUT};
  const ExperimentReport report = run_sweep(spec, ds, 42, Exec::Serial);
  const std::vector<std::string> written =
      emit_outputs(report, dir.path.string());
  CHECK(written.size() == 5);
  CHECK(fs::exists(dir.path / "reduction.csv"));  // header-only table
  CHECK(!fs::exists(dir.path / "reduction_vs_epsilon.svg"));
}

TEST_CASE("report loading rejects damaged files") {
  TempDir dir("load");
  CHECK_THROWS_AS(load_report_csv((dir.path / "missing.csv").string()),
                  DataError);
  const std::string bad_header =
      write_temp_file(dir, "bad.csv", "method,query\nhut,simple\n");
  CHECK_THROWS_AS(load_report_csv(bad_header), DataError);
  const std::string short_row = write_temp_file(
      dir, "short.csv",
      "method,query,epsilon,k,p,mean_mse,std_mse,trials\nhut,simple,0.05\n");
  CHECK_THROWS_AS(load_report_csv(short_row), DataError);
}

TEST_CASE("config files override the sweep grid") {
  TempDir dir("config");
  const std::string path = write_temp_file(dir, "sweep.conf",
                                           "# experiment grid\n"
                                           "\n"
                                           "epsilons = 0.01, 0.05\r\n"
                                           "ks=2,4\n"
                                           "ps = 0.25\n"
                                           "trials = 5\n"
                                           "methods = hut, fixed-size\n"
                                           "seed = 99\n"
                                           "bin_width = 2.5\n");
  SweepSpec spec = SweepSpec::defaults(QueryType::Simple);
  std::uint64_t seed = 42;
  apply_config(spec, parse_config_file(path), seed);
  CHECK(spec.epsilons == std::vector<double>{0.01, 0.05});
  CHECK(spec.ks == std::vector<int>{2, 4});
  CHECK(spec.ps == std::vector<double>{0.25});
  CHECK(spec.trials == 5);
  REQUIRE(spec.methods.size() == 2);
  CHECK(spec.methods[0] == Method::HUT);
  CHECK(spec.methods[1] == Method::FixedSize);
  CHECK(spec.bin_width == 2.5);
  CHECK(seed == 99);

  const std::string unknown = write_temp_file(dir, "bad.conf", "alpha = 1\n");
  std::map<std::string, std::string> kv = parse_config_file(unknown);
  CHECK_THROWS_AS(apply_config(spec, kv, seed), ConfigError);

  const std::string junk = write_temp_file(dir, "junk.conf", "no separator\n");
  CHECK_THROWS_AS(parse_config_file(junk), ConfigError);
  const std::string bad_num =
      write_temp_file(dir, "num.conf", "epsilons = 0.05, abc\n");
  kv = parse_config_file(bad_num);
  CHECK_THROWS_AS(apply_config(spec, kv, seed), ConfigError);
}

TEST_CASE("the printed defaults quote the grids verbatim") {
  const std::string text = describe_defaults();
  CHECK(text.find("0.008, 0.01, 0.02, 0.05") != std::string::npos);
  CHECK(text.find("5, 8, 10") != std::string::npos);
  CHECK(text.find("5, 10, 15") != std::string::npos);
  CHECK(text.find("0.30, 0.35, 0.40") != std::string::npos);
  CHECK(text.find("hut, fixed-size, k-aggregation") != std::string::npos);
}
