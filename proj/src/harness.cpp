#include "hut/harness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>

#include "hut/baselines.hpp"
#include "hut/errors.hpp"
#include "hut/pipeline.hpp"
#include "hut/svg.hpp"

namespace hut {

namespace {

constexpr const char* kReportHeader =
    "method,query,epsilon,k,p,mean_mse,std_mse,trials";
constexpr const char* kReductionHeader = "query,epsilon,k,threshold,reduction_pct";

std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(s);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& raw) {
  const std::string s = trim(raw);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw ConfigError("not a number: '" + raw + "'");
  }
  return v;
}

long parse_long(const std::string& raw) {
  const std::string s = trim(raw);
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw ConfigError("not an integer: '" + raw + "'");
  }
  return v;
}

std::vector<double> parse_double_list(const std::string& raw) {
  std::vector<double> out;
  for (const std::string& item : split(raw, ',')) out.push_back(parse_double(item));
  return out;
}

std::vector<int> parse_int_list(const std::string& raw) {
  std::vector<int> out;
  for (const std::string& item : split(raw, ','))
    out.push_back(static_cast<int>(parse_long(item)));
  return out;
}

QueryResponse run_method(Method method, QueryType query, const Dataset& ds,
                         const Params& params, std::uint64_t trial) {
  switch (method) {
    case Method::HUT: {
      // Cells already run concurrently; keep the inner kernels serial.
      const ProtectedDataset prot =
          query == QueryType::Counting
              ? protect_counting(ds, params, trial, Exec::Serial)
              : hut_protect(ds, params, trial, Exec::Serial);
      return prot.post;
    }
    case Method::FixedSize:
      return fixed_size_pipeline(ds, params, trial);
    case Method::KAggregation:
      return k_aggregation_pipeline(ds, params, trial);
  }
  throw ContractError("unreachable method");
}

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << text;
  if (!out) throw DataError("cannot write " + path);
}

}  // namespace

const char* method_name(Method method) {
  switch (method) {
    case Method::HUT: return "hut";
    case Method::FixedSize: return "fixed-size";
    case Method::KAggregation: return "k-aggregation";
  }
  return "unknown";
}

Method method_from_name(const std::string& name) {
  if (name == "hut") return Method::HUT;
  if (name == "fixed-size") return Method::FixedSize;
  if (name == "k-aggregation") return Method::KAggregation;
  throw ConfigError("unknown method: " + name);
}

const char* query_name(QueryType query) {
  return query == QueryType::Simple ? "simple" : "counting";
}

QueryType query_from_name(const std::string& name) {
  if (name == "simple") return QueryType::Simple;
  if (name == "counting") return QueryType::Counting;
  throw ConfigError("unknown query type: " + name);
}

SweepSpec SweepSpec::defaults(QueryType query) {
  SweepSpec spec;
  spec.query = query;
  spec.epsilons = {0.008, 0.01, 0.02, 0.05};
  spec.ks = query == QueryType::Counting ? std::vector<int>{5, 10, 15}
                                         : std::vector<int>{5, 8, 10};
  spec.ps = {0.30, 0.35, 0.40};
  spec.trials = 20;
  spec.methods = {Method::HUT, Method::FixedSize, Method::KAggregation};
  return spec;
}

void SweepSpec::validate() const {
  if (epsilons.empty() || ks.empty() || ps.empty() || methods.empty()) {
    throw ConfigError("sweep grid must not be empty");
  }
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (!(bin_width > 0.0)) throw ConfigError("bin_width must be positive");
  for (double e : epsilons)
    if (!(e > 0.0)) throw ConfigError("epsilon must be positive");
  for (int k : ks)
    if (k < 1) throw ConfigError("k must be at least 1");
  for (double p : ps)
    if (!(p > 0.0 && p < 1.0)) throw ConfigError("p must lie in (0, 1)");
}

double mse(const QueryResponse& raw, const QueryResponse& prot) {
  if (raw.values.size() != prot.values.size()) {
    throw ContractError("mse: responses differ in length");
  }
  if (raw.values.empty()) throw ContractError("mse: empty responses");
  double sum = 0.0;
  for (std::size_t i = 0; i < raw.values.size(); ++i) {
    const double d = prot.values[i] - raw.values[i];
    sum += d * d;
  }
  return sum / static_cast<double>(raw.values.size());
}

ExperimentReport run_sweep(const SweepSpec& spec, const Dataset& ds,
                           std::uint64_t seed, Exec exec) {
  spec.validate();
  Dataset working = ds;
  if (spec.query == QueryType::Counting &&
      ds.kind == DatasetKind::SimpleValues) {
    working = build_histogram(ds, spec.bin_width);
  } else if (spec.query == QueryType::Simple &&
             ds.kind == DatasetKind::CountingHistogram) {
    throw ConfigError("simple query needs a simple-values dataset");
  }
  working.validate();
  const QueryResponse raw = raw_response(working);

  struct Task {
    Method method;
    double epsilon;
    int k;
    double p;
  };
  std::vector<Task> tasks;
  for (double epsilon : spec.epsilons)
    for (int k : spec.ks)
      for (double p : spec.ps)
        for (Method method : spec.methods) tasks.push_back({method, epsilon, k, p});

  std::vector<std::optional<ReportRow>> rows(tasks.size());
  std::vector<std::optional<FailedCell>> fails(tasks.size());

  const auto run_task = [&](std::size_t i) {
    const Task& task = tasks[i];
    Params params;
    params.epsilon = task.epsilon;
    params.k = task.k;
    params.p = task.p;
    params.seed = seed;
    params.trials = spec.trials;
    try {
      std::vector<double> errs(static_cast<std::size_t>(spec.trials));
      for (int t = 0; t < spec.trials; ++t) {
        const QueryResponse resp = run_method(task.method, spec.query, working,
                                              params, static_cast<std::uint64_t>(t));
        errs[static_cast<std::size_t>(t)] = mse(raw, resp);
      }
      double mean = 0.0;
      for (double e : errs) mean += e;
      mean /= static_cast<double>(errs.size());
      double var = 0.0;
      for (double e : errs) var += (e - mean) * (e - mean);
      const double stddev =
          errs.size() > 1 ? std::sqrt(var / static_cast<double>(errs.size() - 1))
                          : 0.0;
      rows[i] = ReportRow{task.method, spec.query, task.epsilon, task.k,
                          task.p,      mean,       stddev,       spec.trials};
    } catch (const std::exception& e) {
      fails[i] = FailedCell{task.method, task.epsilon, task.k, task.p, e.what()};
    }
  };

  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < tasks.size(); ++i) run_task(i);
  } else {
    for (std::size_t i = 0; i < tasks.size(); ++i) run_task(i);
  }

  ExperimentReport report;
  report.query = spec.query;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (rows[i]) report.rows.push_back(*rows[i]);
    if (fails[i]) report.failed.push_back(*fails[i]);
  }
  return report;
}

std::vector<ReductionRow> reduction_table(const ExperimentReport& report) {
  struct CellKey {
    double epsilon;
    int k;
    double p;
    bool operator<(const CellKey& o) const {
      if (epsilon != o.epsilon) return epsilon < o.epsilon;
      if (k != o.k) return k < o.k;
      return p < o.p;
    }
  };
  std::map<CellKey, std::map<Method, double>> cells;
  std::vector<double> eps_order;
  for (const ReportRow& row : report.rows) {
    cells[{row.epsilon, row.k, row.p}][row.method] = row.mean_mse;
    if (std::find(eps_order.begin(), eps_order.end(), row.epsilon) ==
        eps_order.end()) {
      eps_order.push_back(row.epsilon);
    }
  }

  std::vector<ReductionRow> out;
  for (double epsilon : eps_order) {
    std::optional<ReductionRow> best;
    for (const auto& [key, by_method] : cells) {
      if (key.epsilon != epsilon) continue;
      const auto hut_it = by_method.find(Method::HUT);
      if (hut_it == by_method.end()) continue;
      double base = std::numeric_limits<double>::infinity();
      for (Method m : {Method::FixedSize, Method::KAggregation}) {
        const auto it = by_method.find(m);
        if (it != by_method.end()) base = std::min(base, it->second);
      }
      if (!std::isfinite(base) || base <= 0.0) continue;
      const double pct = 100.0 * (base - hut_it->second) / base;
      if (!best || pct > best->reduction_pct) {
        best = ReductionRow{report.query, epsilon, key.k, key.p, pct};
      }
    }
    if (best) out.push_back(*best);
  }
  return out;
}

std::vector<std::string> emit_outputs(const ExperimentReport& report,
                                      const std::string& out_dir) {
  if (report.rows.empty()) throw DataError("refusing to emit an empty report");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw DataError("cannot create output dir " + out_dir);

  std::vector<std::string> written;
  const auto path_of = [&](const char* name) {
    return (std::filesystem::path(out_dir) / name).string();
  };

  std::ostringstream rep;
  rep << kReportHeader << "\n";
  for (const ReportRow& r : report.rows) {
    rep << method_name(r.method) << ',' << query_name(r.query) << ','
        << format_value(r.epsilon) << ',' << r.k << ',' << format_value(r.p)
        << ',' << format_value(r.mean_mse) << ',' << format_value(r.std_mse)
        << ',' << r.trials << "\n";
  }
  write_text_file(path_of("report.csv"), rep.str());
  written.push_back(path_of("report.csv"));

  const std::vector<ReductionRow> reductions = reduction_table(report);
  std::ostringstream red;
  red << kReductionHeader << "\n";
  for (const ReductionRow& r : reductions) {
    red << query_name(r.query) << ',' << format_value(r.epsilon) << ',' << r.k
        << ',' << format_value(r.p) << ',' << format_value(r.reduction_pct)
        << "\n";
  }
  write_text_file(path_of("reduction.csv"), red.str());
  written.push_back(path_of("reduction.csv"));

  const std::vector<double> eps = [&] {
    std::vector<double> v;
    for (const ReportRow& r : report.rows) v.push_back(r.epsilon);
    return sorted_unique(v);
  }();
  const double mid_eps = eps[(eps.size() - 1) / 2];

  const auto mean_over = [&](Method m, auto&& keep, auto&& x_of) {
    std::map<double, std::pair<double, int>> acc;
    for (const ReportRow& r : report.rows) {
      if (r.method != m || !keep(r)) continue;
      auto& slot = acc[x_of(r)];
      slot.first += r.mean_mse;
      slot.second += 1;
    }
    Series s;
    s.label = method_name(m);
    for (const auto& [x, sum_count] : acc) {
      s.xs.push_back(x);
      s.ys.push_back(sum_count.first / sum_count.second);
    }
    return s;
  };

  std::set<Method> methods;
  for (const ReportRow& r : report.rows) methods.insert(r.method);

  std::vector<Series> by_eps, by_k, by_p;
  for (Method m : methods) {
    Series s = mean_over(
        m, [](const ReportRow&) { return true; },
        [](const ReportRow& r) { return r.epsilon; });
    if (!s.xs.empty()) by_eps.push_back(std::move(s));
    s = mean_over(
        m, [&](const ReportRow& r) { return r.epsilon == mid_eps; },
        [](const ReportRow& r) { return static_cast<double>(r.k); });
    if (!s.xs.empty()) by_k.push_back(std::move(s));
    s = mean_over(
        m, [&](const ReportRow& r) { return r.epsilon == mid_eps; },
        [](const ReportRow& r) { return r.p; });
    if (!s.xs.empty()) by_p.push_back(std::move(s));
  }

  PlotOptions opt;
  opt.log_y = true;
  opt.x_label = "epsilon";
  opt.y_label = "mean MSE";
  opt.title = std::string("Mean MSE vs epsilon (") + query_name(report.query) +
              " query, grid average)";
  write_line_plot(path_of("mse_vs_epsilon.svg"), by_eps, opt);
  written.push_back(path_of("mse_vs_epsilon.svg"));

  opt.x_label = "k";
  opt.title = std::string("Mean MSE vs k (") + query_name(report.query) +
              " query, epsilon=" + format_value(mid_eps) + ")";
  write_line_plot(path_of("mse_vs_k.svg"), by_k, opt);
  written.push_back(path_of("mse_vs_k.svg"));

  opt.x_label = "threshold fraction p";
  opt.title = std::string("Mean MSE vs p (") + query_name(report.query) +
              " query, epsilon=" + format_value(mid_eps) + ")";
  write_line_plot(path_of("mse_vs_p.svg"), by_p, opt);
  written.push_back(path_of("mse_vs_p.svg"));

  if (!reductions.empty()) {
    Series s;
    s.label = "vs best baseline";
    for (const ReductionRow& r : reductions) {
      s.xs.push_back(r.epsilon);
      s.ys.push_back(r.reduction_pct);
    }
    PlotOptions ropt;
    ropt.x_label = "epsilon";
    ropt.y_label = "best MSE reduction (%)";
    ropt.title = std::string("Best reduction vs epsilon (") +
                 query_name(report.query) + " query)";
    write_line_plot(path_of("reduction_vs_epsilon.svg"), {s}, ropt);
    written.push_back(path_of("reduction_vs_epsilon.svg"));
  }
  return written;
}

ExperimentReport load_report_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty report file " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kReportHeader) {
    throw DataError("unexpected report header in " + path);
  }
  ExperimentReport report;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> f = split(line, ',');
    if (f.size() != 8) throw DataError("malformed report row: " + line);
    ReportRow row;
    row.method = method_from_name(f[0]);
    row.query = query_from_name(f[1]);
    row.epsilon = parse_double(f[2]);
    row.k = static_cast<int>(parse_long(f[3]));
    row.p = parse_double(f[4]);
    row.mean_mse = parse_double(f[5]);
    row.std_mse = parse_double(f[6]);
    row.trials = static_cast<int>(parse_long(f[7]));
    if (first) {
      report.query = row.query;
      first = false;
    }
    report.rows.push_back(row);
  }
  if (report.rows.empty()) throw DataError("report has no rows: " + path);
  return report;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) +
                        " is not key = value");
    }
    const std::string key = trim(stripped.substr(0, eq));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(lineno) +
                        " has an empty key");
    }
    kv[key] = trim(stripped.substr(eq + 1));
  }
  return kv;
}

void apply_config(SweepSpec& spec, const std::map<std::string, std::string>& kv,
                  std::uint64_t& seed) {
  for (const auto& [key, value] : kv) {
    if (key == "epsilons") {
      spec.epsilons = parse_double_list(value);
    } else if (key == "ks") {
      spec.ks = parse_int_list(value);
    } else if (key == "ps") {
      spec.ps = parse_double_list(value);
    } else if (key == "trials") {
      spec.trials = static_cast<int>(parse_long(value));
    } else if (key == "methods") {
      spec.methods.clear();
      for (const std::string& item : split(value, ','))
        spec.methods.push_back(method_from_name(trim(item)));
    } else if (key == "seed") {
      seed = static_cast<std::uint64_t>(parse_long(value));
    } else if (key == "bin_width") {
      spec.bin_width = parse_double(value);
    } else {
      throw ConfigError("unknown config key: " + key);
    }
  }
}

std::string describe_defaults() {
  const auto describe = [](QueryType query) {
    const SweepSpec spec = SweepSpec::defaults(query);
    std::ostringstream out;
    out << query_name(query) << " query defaults:\n";
    out << "  epsilons = ";
    for (std::size_t i = 0; i < spec.epsilons.size(); ++i) {
      out << (i ? ", " : "") << format_value(spec.epsilons[i]);
    }
    out << "\n  ks       = ";
    for (std::size_t i = 0; i < spec.ks.size(); ++i) {
      out << (i ? ", " : "") << spec.ks[i];
    }
    out << "\n  ps       = ";
    for (std::size_t i = 0; i < spec.ps.size(); ++i) {
      char buf[16];
      std::snprintf(buf, sizeof(buf), "%.2f", spec.ps[i]);
      out << (i ? ", " : "") << buf;
    }
    out << "\n  trials   = " << spec.trials;
    out << "\n  methods  = ";
    for (std::size_t i = 0; i < spec.methods.size(); ++i) {
      out << (i ? ", " : "") << method_name(spec.methods[i]);
    }
    out << "\n";
    return out.str();
  };
  return describe(QueryType::Simple) + describe(QueryType::Counting);
}

}  // namespace hut
