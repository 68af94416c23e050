#include "hut/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "hut/errors.hpp"
#include "hut/rng.hpp"

namespace hut {

namespace {

// Box-Muller; consumes two uniforms per pair, caches the spare draw.
class Gaussian {
 public:
  explicit Gaussian(Stream& stream) : stream_(stream) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u = stream_.uniform01();
    const double v = stream_.uniform01();
    const double r = std::sqrt(-2.0 * std::log(u));
    spare_ = r * std::sin(2.0 * kPi * v);
    have_spare_ = true;
    return r * std::cos(2.0 * kPi * v);
  }

 private:
  static constexpr double kPi = 3.14159265358979323846;
  Stream& stream_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

double clip_speed(double v) { return std::clamp(v, 0.0, kSpeedCap); }

// Speeds are reported at one decimal place.
double round_tenth(double v) { return std::floor(v * 10.0 + 0.5) / 10.0; }

}  // namespace

Dataset gen_speeds(std::size_t n, Profile profile, std::uint64_t seed) {
  if (n < 10) throw ConfigError("need at least 10 records");
  Stream stream = Stream::derive(seed, 0, "datagen");
  Gaussian gauss(stream);

  Dataset ds;
  ds.kind = DatasetKind::SimpleValues;
  ds.records.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = 0.0;
    switch (profile) {
      case Profile::RightSkewed:
        v = std::exp(3.2 + 0.6 * gauss.next());
        break;
      case Profile::Bimodal:
        v = stream.uniform01() < 0.55 ? 28.0 + 8.0 * gauss.next()
                                      : 95.0 + 10.0 * gauss.next();
        break;
      case Profile::Uniform:
        v = kSpeedCap * stream.uniform01();
        break;
    }
    char id[32];
    std::snprintf(id, sizeof(id), "rec%05zu", i);
    ds.records.push_back({id, round_tenth(clip_speed(v))});
  }
  ds.validate();
  return ds;
}

Dataset gen_counting(const Dataset& ds, double bin_width) {
  return build_histogram(ds, bin_width);
}

const char* profile_name(Profile profile) {
  switch (profile) {
    case Profile::RightSkewed: return "right-skewed";
    case Profile::Bimodal: return "bimodal";
    case Profile::Uniform: return "uniform";
  }
  return "unknown";
}

Profile profile_from_name(const std::string& name) {
  if (name == "right-skewed") return Profile::RightSkewed;
  if (name == "bimodal") return Profile::Bimodal;
  if (name == "uniform") return Profile::Uniform;
  throw ConfigError("unknown profile: " + name);
}

}  // namespace hut
