#include <doctest.h>

#include <limits>
#include <sstream>

#include "hut/core.hpp"
#include "hut/errors.hpp"

using namespace hut;

namespace {

Dataset small_values() {
  Dataset ds;
  ds.kind = DatasetKind::SimpleValues;
  ds.records = {{"a", 3.5}, {"b", 1.0}, {"c", 2.0}, {"d", 1.0}};
  return ds;
}

}  // namespace

TEST_CASE("validate accepts well-formed datasets and rejects broken ones") {
  Dataset ds = small_values();
  CHECK_NOTHROW(ds.validate());

  Dataset empty;
  CHECK_THROWS_AS(empty.validate(), DataError);

  Dataset dup = small_values();
  dup.records[2].id = "a";
  CHECK_THROWS_AS(dup.validate(), DataError);

  Dataset negative = small_values();
  negative.records[0].value = -1.0;
  CHECK_THROWS_AS(negative.validate(), DataError);

  Dataset nonfinite = small_values();
  nonfinite.records[0].value = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(nonfinite.validate(), DataError);

  Dataset hist = small_values();
  hist.kind = DatasetKind::CountingHistogram;
  CHECK_THROWS_AS(hist.validate(), DataError);  // 3.5 is not a count
  hist.records[0].value = 3.0;
  CHECK_NOTHROW(hist.validate());
}

TEST_CASE("params validation") {
  Params p;
  p.epsilon = 0.05;
  p.k = 5;
  p.p = 0.3;
  CHECK_NOTHROW(p.validate());

  Params bad = p;
  bad.epsilon = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = p;
  bad.k = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = p;
  bad.p = 1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = p;
  bad.trials = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("sort permutation maps sorted positions to original records") {
  const Dataset ds = small_values();
  const SortResult sorted = sort_ascending(ds);
  REQUIRE(sorted.sorted.size() == 4);
  CHECK(sorted.sorted.records[0].value == 1.0);
  CHECK(sorted.sorted.records[3].value == 3.5);
  // Stable: the two 1.0 records keep their original relative order.
  CHECK(sorted.perm == std::vector<std::size_t>{1, 3, 2, 0});

  const std::vector<double> restored =
      inverse_permute(sorted.sorted.values(), sorted.perm);
  for (std::size_t i = 0; i < restored.size(); ++i) {
    CHECK(restored[i] == ds.records[i].value);
  }
}

TEST_CASE("point queries answer by id from raw data or a response") {
  const Dataset ds = small_values();
  CHECK(simple_query(ds, "c") == 2.0);
  CHECK_THROWS_AS(simple_query(ds, "zz"), DataError);

  const QueryResponse raw = raw_response(ds);
  CHECK(raw.provenance == Provenance::Raw);
  REQUIRE(raw.values.size() == 4);
  CHECK(simple_query(ds, raw, "b") == 1.0);

  QueryResponse short_resp = raw;
  short_resp.values.pop_back();
  CHECK_THROWS_AS(simple_query(ds, short_resp, "b"), ContractError);
}

TEST_CASE("histograms bin from zero with zero bins kept") {
  Dataset ds;
  ds.kind = DatasetKind::SimpleValues;
  ds.records = {{"r0", 0.5}, {"r1", 2.5}, {"r2", 2.9}, {"r3", 9.0}};
  const Dataset hist = build_histogram(ds, 1.0);
  CHECK(hist.kind == DatasetKind::CountingHistogram);
  REQUIRE(hist.records.size() == 10);  // bins [0,1) .. [9,10)
  CHECK(hist.records[0].value == 1.0);
  CHECK(hist.records[2].value == 2.0);
  CHECK(hist.records[5].value == 0.0);
  CHECK(hist.records[9].value == 1.0);
  double total = 0.0;
  for (const auto& r : hist.records) total += r.value;
  CHECK(total == 4.0);
  CHECK(hist.records[0].id == "bin_0");
  CHECK_THROWS_AS(build_histogram(ds, 0.0), ConfigError);
}

TEST_CASE("csv writes and reads the id,value format") {
  const Dataset ds = small_values();
  std::ostringstream out;
  write_csv(ds, out);
  CHECK(out.str() == "id,value\na,3.5\nb,1\nc,2\nd,1\n");

  std::istringstream in(out.str());
  const Dataset back = read_csv(in, DatasetKind::SimpleValues, "mem");
  REQUIRE(back.records.size() == ds.records.size());
  for (std::size_t i = 0; i < ds.records.size(); ++i) {
    CHECK(back.records[i].id == ds.records[i].id);
    CHECK(back.records[i].value == ds.records[i].value);
  }
}

TEST_CASE("csv reader tolerates CRLF and rejects malformed input") {
  std::istringstream crlf("id,value\r\nx,1\r\ny,2\r\n");
  const Dataset ds = read_csv(crlf, DatasetKind::SimpleValues, "mem");
  CHECK(ds.records.size() == 2);
  CHECK(ds.records[1].value == 2.0);

  std::istringstream bad_header("ident,val\nx,1\n");
  CHECK_THROWS_AS(read_csv(bad_header, DatasetKind::SimpleValues, "mem"),
                  DataError);

  std::istringstream no_comma("id,value\nx1\n");
  CHECK_THROWS_AS(read_csv(no_comma, DatasetKind::SimpleValues, "mem"), DataError);

  std::istringstream junk_value("id,value\nx,12abc\n");
  CHECK_THROWS_AS(read_csv(junk_value, DatasetKind::SimpleValues, "mem"),
                  DataError);

  std::istringstream nothing("id,value\n");
  CHECK_THROWS_AS(read_csv(nothing, DatasetKind::SimpleValues, "mem"), DataError);
}

TEST_CASE("value formatting is compact and round-trippable at data scale") {
  CHECK(format_value(1.0) == "1");
  CHECK(format_value(0.05) == "0.05");
  CHECK(format_value(27.3) == "27.3");
  CHECK(format_value(0.008) == "0.008");
}
