#pragma once

// Independent reference computations used by the unit and acceptance tests.
// Nothing here goes through love::AmountTable or love::cell_of; cells come
// straight from the H3 C API so a bug in the library cannot hide itself.

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "love/observation.hpp"
#include "love/verifier.hpp"

namespace love::testing {

std::filesystem::path fixture(const std::string& name);

/// Fresh empty directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// latLngToCell via the raw H3 API.
std::uint64_t h3_cell(double lat_deg, double lon_deg, int res);
/// getNumCells(res) from the raw H3 API.
std::int64_t h3_num_cells(int res);
/// getHexagonAreaAvgKm2(res) from the raw H3 API.
double h3_avg_area_km2(int res);

using PairKey = std::pair<std::uint64_t, std::string>;
using PairCounts = std::map<PairKey, std::uint64_t>;

/// Group-by over the raw observation list.
PairCounts group_by(std::span<const AdsbObservation> obs, int res);

std::set<std::string> distinct_sensors(std::span<const AdsbObservation> obs);

/// Linear scan of `corpus` for the two-phase decision.
Verdict scan_verdict(std::span<const AdsbObservation> corpus, int res,
                     const AdsbObservation& query);

/// Two-sided one-sample Kolmogorov-Smirnov statistic against U[lo, hi].
double ks_uniform_statistic(std::vector<double> values, double lo, double hi);

/// Asymptotic KS critical value for sample size n at significance alpha.
double ks_critical_value(std::size_t n, double alpha);

/// Degrees of latitude / longitude spanned by `km` at latitude `lat_deg`.
double km_to_lat_deg(double km);
double km_to_lon_deg(double km, double lat_deg);

}  // namespace love::testing
