// Times the parallel kernels against their serial reference and checks that
// both produce identical results.

#include <omp.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "hut/datagen.hpp"
#include "hut/harness.hpp"
#include "hut/mechanism.hpp"
#include "hut/microagg.hpp"
#include "hut/pipeline.hpp"

namespace {

bool g_ok = true;

void check(bool ok, const char* what) {
  if (!ok) {
    std::fprintf(stderr, "MISMATCH: %s\n", what);
    g_ok = false;
  }
}

template <typename F>
double timed(F&& f) {
  const double t0 = omp_get_wtime();
  f();
  return omp_get_wtime() - t0;
}

void report(const char* name, double serial_s, double parallel_s) {
  std::printf("%-22s serial %8.3fs  parallel %8.3fs  speedup %.2fx\n", name,
              serial_s, parallel_s, serial_s / parallel_s);
}

}  // namespace

int main(int argc, char** argv) {
  const int scale = argc > 1 ? std::atoi(argv[1]) : 1;
  std::printf("threads available: %d (scale %d)\n", omp_get_max_threads(), scale);

  const hut::Dataset ds = hut::gen_speeds(1200, hut::Profile::RightSkewed, 42);

  {
    std::vector<double> values;
    for (const auto& r : ds.records) values.push_back(r.value);
    hut::KMeansOptions opts;
    opts.restarts = 40 * scale;
    hut::KMeansResult rs, rp;
    const double ts = timed([&] {
      rs = hut::kmeans_1d(values, 10, 7, hut::Exec::Serial, opts);
    });
    const double tp = timed([&] {
      rp = hut::kmeans_1d(values, 10, 7, hut::Exec::Parallel, opts);
    });
    check(rs.assignments == rp.assignments && rs.centroids == rp.centroids &&
              rs.wcss == rp.wcss,
          "kmeans_1d serial vs parallel");
    report("kmeans restarts", ts, tp);
  }

  {
    hut::Dataset x1 = hut::gen_counting(ds, 10.0);
    hut::Dataset x2 = x1;
    x2.records[3].value += 1.0;
    hut::Params params;
    params.epsilon = 0.1;
    params.k = 3;
    params.p = 0.5;
    params.seed = 42;
    const auto mechanism = [&](const hut::Dataset& d, std::uint64_t t) {
      return hut::protect_counting(d, params, t, hut::Exec::Serial).post.values[3];
    };
    const std::vector<double> edges = {50.0, 100.0, 150.0, 200.0};
    const std::size_t samples = 20000 * static_cast<std::size_t>(scale);
    double ratio_s = 0.0, ratio_p = 0.0;
    const double ts = timed([&] {
      ratio_s = hut::dp_ratio_audit(mechanism, x1, x2, edges, samples,
                                    hut::Exec::Serial);
    });
    const double tp = timed([&] {
      ratio_p = hut::dp_ratio_audit(mechanism, x1, x2, edges, samples,
                                    hut::Exec::Parallel);
    });
    check(ratio_s == ratio_p, "dp_ratio_audit serial vs parallel");
    report("privacy audit", ts, tp);
  }

  {
    hut::SweepSpec spec = hut::SweepSpec::defaults(hut::QueryType::Simple);
    spec.trials = 5 * scale;
    hut::ExperimentReport reps, repp;
    const double ts =
        timed([&] { reps = hut::run_sweep(spec, ds, 42, hut::Exec::Serial); });
    const double tp =
        timed([&] { repp = hut::run_sweep(spec, ds, 42, hut::Exec::Parallel); });
    bool same = reps.rows.size() == repp.rows.size();
    for (std::size_t i = 0; same && i < reps.rows.size(); ++i) {
      same = reps.rows[i].mean_mse == repp.rows[i].mean_mse &&
             reps.rows[i].std_mse == repp.rows[i].std_mse;
    }
    check(same, "run_sweep serial vs parallel");
    report("sweep cells", ts, tp);
  }

  if (!g_ok) return 1;
  std::printf("all parallel kernels match the serial reference\n");
  return 0;
}
