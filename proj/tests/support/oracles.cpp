#include "oracles.hpp"

#include <h3api.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace love::testing {

namespace fs = std::filesystem;

fs::path fixture(const std::string& name) { return fs::path(LOVE_FIXTURE_DIR) / name; }

TempDir::TempDir() {
  static std::atomic<unsigned> counter{0};
  std::random_device rd;
  path_ = fs::temp_directory_path() /
          ("love-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::uint64_t h3_cell(double lat_deg, double lon_deg, int res) {
  const LatLng ll{degsToRads(lat_deg), degsToRads(lon_deg)};
  H3Index out = 0;
  if (latLngToCell(&ll, res, &out) != E_SUCCESS) throw std::runtime_error("latLngToCell failed");
  return out;
}

std::int64_t h3_num_cells(int res) {
  int64_t n = 0;
  if (getNumCells(res, &n) != E_SUCCESS) throw std::runtime_error("getNumCells failed");
  return n;
}

double h3_avg_area_km2(int res) {
  double a = 0.0;
  if (getHexagonAreaAvgKm2(res, &a) != E_SUCCESS) {
    throw std::runtime_error("getHexagonAreaAvgKm2 failed");
  }
  return a;
}

PairCounts group_by(std::span<const AdsbObservation> obs, int res) {
  PairCounts out;
  for (const auto& o : obs) ++out[{h3_cell(o.coord.lat, o.coord.lon, res), o.sensor.str()}];
  return out;
}

std::set<std::string> distinct_sensors(std::span<const AdsbObservation> obs) {
  std::set<std::string> out;
  for (const auto& o : obs) out.insert(o.sensor.str());
  return out;
}

Verdict scan_verdict(std::span<const AdsbObservation> corpus, int res,
                     const AdsbObservation& query) {
  const auto cell = h3_cell(query.coord.lat, query.coord.lon, res);
  bool sensor_seen = false;
  for (const auto& o : corpus) {
    if (o.sensor != query.sensor) continue;
    sensor_seen = true;
    if (h3_cell(o.coord.lat, o.coord.lon, res) == cell) return Verdict::kPlausible;
  }
  return sensor_seen ? Verdict::kImplausible : Verdict::kUnknownSensor;
}

double ks_uniform_statistic(std::vector<double> values, double lo, double hi) {
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double f = std::clamp((values[i] - lo) / (hi - lo), 0.0, 1.0);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_critical_value(std::size_t n, double alpha) {
  return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(n));
}

namespace {
// Mean Earth radius, kept separate from the library constant on purpose.
constexpr double kKmPerDegree = 6371.0088 * std::numbers::pi / 180.0;
}  // namespace

double km_to_lat_deg(double km) { return km / kKmPerDegree; }

double km_to_lon_deg(double km, double lat_deg) {
  return km / (kKmPerDegree * std::cos(lat_deg * std::numbers::pi / 180.0));
}

}  // namespace love::testing
