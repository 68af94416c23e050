#include "hut/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace hut {

std::vector<double> Dataset::values() const {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.value);
  return out;
}

std::size_t Dataset::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].id == id) return i;
  }
  throw DataError("unknown record id: " + std::string(id));
}

void Dataset::validate() const {
  if (records.empty()) throw DataError("dataset is empty");
  std::unordered_set<std::string_view> seen;
  seen.reserve(records.size());
  for (const auto& r : records) {
    if (!std::isfinite(r.value) || r.value < 0.0) {
      throw DataError("record '" + r.id + "' has invalid value");
    }
    if (!seen.insert(r.id).second) {
      throw DataError("duplicate record id: " + r.id);
    }
    if (kind == DatasetKind::CountingHistogram &&
        r.value != std::floor(r.value)) {
      throw DataError("histogram count for '" + r.id + "' is not an integer");
    }
  }
}

void Params::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw ConfigError("epsilon must be positive");
  }
  if (k < 1) throw ConfigError("k must be at least 1");
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("p must lie in (0,1)");
  if (trials < 1) throw ConfigError("trials must be at least 1");
}

SortResult sort_ascending(const Dataset& ds) {
  if (ds.records.empty()) throw ContractError("sort_ascending: empty dataset");
  std::vector<std::size_t> perm(ds.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
    return ds.records[a].value < ds.records[b].value;
  });
  SortResult out;
  out.sorted.kind = ds.kind;
  out.sorted.records.reserve(ds.size());
  for (std::size_t pos : perm) out.sorted.records.push_back(ds.records[pos]);
  out.perm = std::move(perm);
  return out;
}

std::vector<double> inverse_permute(const std::vector<double>& sorted_values,
                                    const std::vector<std::size_t>& perm) {
  if (sorted_values.size() != perm.size()) {
    throw ContractError("inverse_permute: length mismatch");
  }
  std::vector<double> out(sorted_values.size());
  for (std::size_t pos = 0; pos < perm.size(); ++pos) {
    out[perm[pos]] = sorted_values[pos];
  }
  return out;
}

double simple_query(const Dataset& ds, std::string_view id) {
  return ds.records[ds.index_of(id)].value;
}

double simple_query(const Dataset& ds, const QueryResponse& resp, std::string_view id) {
  if (resp.values.size() != ds.size()) {
    throw ContractError("simple_query: response not aligned to dataset");
  }
  return resp.values[ds.index_of(id)];
}

QueryResponse raw_response(const Dataset& ds) {
  return QueryResponse{ds.values(), Provenance::Raw};
}

Dataset build_histogram(const Dataset& ds, double bin_width) {
  if (ds.kind != DatasetKind::SimpleValues) {
    throw ContractError("build_histogram: input must be simple values");
  }
  if (!(bin_width > 0.0)) throw ConfigError("bin_width must be positive");
  double max_value = 0.0;
  for (const auto& r : ds.records) max_value = std::max(max_value, r.value);
  const std::size_t nbins =
      static_cast<std::size_t>(std::floor(max_value / bin_width)) + 1;
  std::vector<double> counts(nbins, 0.0);
  for (const auto& r : ds.records) {
    std::size_t b = static_cast<std::size_t>(std::floor(r.value / bin_width));
    if (b >= nbins) b = nbins - 1;
    counts[b] += 1.0;
  }
  Dataset hist;
  hist.kind = DatasetKind::CountingHistogram;
  hist.records.reserve(nbins);
  for (std::size_t b = 0; b < nbins; ++b) {
    hist.records.push_back(
        {"bin_" + format_value(static_cast<double>(b) * bin_width), counts[b]});
  }
  return hist;
}

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

Dataset read_csv(std::istream& in, DatasetKind kind, const std::string& origin) {
  std::string line;
  if (!std::getline(in, line)) throw DataError(origin + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "id,value") {
    throw DataError(origin + ": expected header 'id,value', got '" + line + "'");
  }
  Dataset ds;
  ds.kind = kind;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.rfind(',');
    if (comma == std::string::npos || comma == 0) {
      throw DataError(origin + ":" + std::to_string(lineno) + ": malformed line");
    }
    const std::string value_str = line.substr(comma + 1);
    char* end = nullptr;
    const double value = std::strtod(value_str.c_str(), &end);
    if (end == value_str.c_str() || *end != '\0') {
      throw DataError(origin + ":" + std::to_string(lineno) +
                      ": unparseable value '" + value_str + "'");
    }
    ds.records.push_back({line.substr(0, comma), value});
  }
  ds.validate();
  return ds;
}

Dataset read_csv(const std::string& path, DatasetKind kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  return read_csv(in, kind, path);
}

void write_csv(const Dataset& ds, std::ostream& out) {
  out << "id,value\n";
  for (const auto& r : ds.records) {
    out << r.id << ',' << format_value(r.value) << '\n';
  }
}

void write_csv(const Dataset& ds, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open " + path + " for writing");
  write_csv(ds, out);
  if (!out.good()) throw DataError("write failed: " + path);
}

}  // namespace hut
