#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "love/observation.hpp"

namespace love {

/// Axis-aligned lat/lon window, inclusive on all four edges.
class BoundingBox {
 public:
  /// Throws DomainError unless lat_min < lat_max, lon_min < lon_max and all
  /// bounds lie inside the coordinate domain.
  BoundingBox(double lat_min, double lat_max, double lon_min, double lon_max);

  /// 30..75 N, 25 W..45 E.
  static BoundingBox europe();

  double lat_min() const noexcept { return lat_min_; }
  double lat_max() const noexcept { return lat_max_; }
  double lon_min() const noexcept { return lon_min_; }
  double lon_max() const noexcept { return lon_max_; }

  bool contains(const GeoCoord& c) const noexcept {
    return c.lat >= lat_min_ && c.lat <= lat_max_ && c.lon >= lon_min_ &&
           c.lon <= lon_max_;
  }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;

 private:
  double lat_min_, lat_max_, lon_min_, lon_max_;
};

/// Dialect A: `sensors,lat,lon,time` with a `{a,b,c}` receiver list per row.
/// Dialect B: `sensor,lat,lon,alt,heading,speed,time`, one receiver per row.
/// Column order is taken from the header; unknown columns are ignored.
enum class Dialect { kMultiSensor, kPerFlight };

struct ParseStats {
  std::size_t rows = 0;       // data rows seen (blank lines excluded)
  std::size_t malformed = 0;  // rows skipped
  std::size_t observations = 0;
};

/// Pull-based CSV reader. Holds only the current row in memory.
class ObservationReader {
 public:
  /// Reads the header immediately; throws FormatError if a required column
  /// is missing.
  ObservationReader(std::istream& in, Dialect dialect);
  ~ObservationReader();
  ObservationReader(ObservationReader&&) noexcept;
  ObservationReader& operator=(ObservationReader&&) noexcept;

  std::optional<AdsbObservation> next();
  const ParseStats& stats() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct ParseResult {
  std::vector<AdsbObservation> observations;
  ParseStats stats;
};

ParseResult parse_multi_sensor_csv(std::istream& in);
ParseResult parse_per_flight_csv(std::istream& in);
ParseResult parse_csv(std::istream& in, Dialect dialect);

/// Opens a file for reading, transparently inflating names ending in `.gz`.
/// Throws IoError when the file cannot be opened.
std::unique_ptr<std::istream> open_input(const std::filesystem::path& path);

ParseResult parse_csv_file(const std::filesystem::path& path, Dialect dialect);

/// Keeps observations inside `box`, preserving order.
std::vector<AdsbObservation> filter_bbox(std::span<const AdsbObservation> obs,
                                         const BoundingBox& box);

// ---- labeled test sets: `sensor,lat,lon,time,label` -----------------------

struct LabeledParseResult {
  std::vector<LabeledObservation> observations;
  ParseStats stats;
};

LabeledParseResult parse_labeled_csv(std::istream& in);
void write_labeled_csv(std::ostream& out, std::span<const LabeledObservation> rows);

// ---- writers for the two corpus dialects ----------------------------------

/// One dialect-A row: a message and every sensor that received it.
struct MultiSensorRecord {
  std::vector<SensorId> sensors;
  GeoCoord coord;
  std::optional<double> timestamp;
};

void write_multi_sensor_csv(std::ostream& out, std::span<const MultiSensorRecord> rows);
void write_per_flight_csv(std::ostream& out, std::span<const AdsbObservation> rows);

/// Expands dialect-A records into one observation per receiving sensor.
std::vector<AdsbObservation> expand(std::span<const MultiSensorRecord> rows);

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double value);

namespace csv {

/// Splits one CSV record. Honors RFC 4180 double quotes and keeps `{...}`
/// groups intact even when unquoted. Returns false on an unterminated quote
/// or brace group.
bool split_record(std::string_view line, std::vector<std::string>& fields);

/// Parses a complete (whitespace-trimmed) field as a finite double.
std::optional<double> parse_number(std::string_view field);

/// Parses `{a,b,c}`. nullopt on missing braces or an invalid token; an empty
/// list yields an empty vector.
std::optional<std::vector<SensorId>> parse_sensor_list(std::string_view field);

}  // namespace csv

}  // namespace love
