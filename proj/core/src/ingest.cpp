#include "love/ingest.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>
#include <streambuf>
#include <unordered_map>

#include "love/error.hpp"

namespace love {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

// ---- gzip input ----------------------------------------------------------

class GzipStreamBuf : public std::streambuf {
 public:
  explicit GzipStreamBuf(const std::filesystem::path& path)
      : file_(gzopen(path.c_str(), "rb")) {
    if (file_ == nullptr) {
      throw IoError("cannot open " + path.string());
    }
    gzbuffer(file_, 1 << 16);
  }
  ~GzipStreamBuf() override {
    if (file_ != nullptr) gzclose(file_);
  }
  GzipStreamBuf(const GzipStreamBuf&) = delete;
  GzipStreamBuf& operator=(const GzipStreamBuf&) = delete;

 protected:
  int_type underflow() override {
    if (gptr() < egptr()) return traits_type::to_int_type(*gptr());
    const int n = gzread(file_, buffer_.data(), static_cast<unsigned>(buffer_.size()));
    if (n < 0) {
      int err = 0;
      throw IoError(std::string("gzip read failed: ") + gzerror(file_, &err));
    }
    if (n == 0) return traits_type::eof();
    setg(buffer_.data(), buffer_.data(), buffer_.data() + n);
    return traits_type::to_int_type(*gptr());
  }

 private:
  gzFile file_;
  std::array<char, 1 << 16> buffer_{};
};

class GzipIStream : public std::istream {
 public:
  explicit GzipIStream(const std::filesystem::path& path)
      : std::istream(nullptr), buf_(path) {
    rdbuf(&buf_);
  }

 private:
  GzipStreamBuf buf_;
};

bool ends_with_gz(const std::filesystem::path& path) {
  const std::string name = path.filename().string();
  return name.size() > 3 && name.compare(name.size() - 3, 3, ".gz") == 0;
}

// ---- header handling ------------------------------------------------------

struct Columns {
  std::size_t count = 0;
  std::optional<std::size_t> sensors, sensor, lat, lon, time, alt, heading,
      speed, label;
};

Columns read_header(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (!trim(line).empty()) break;
  }
  if (in.bad()) throw IoError("failed reading CSV header");
  if (trim(line).empty()) throw FormatError("missing CSV header row");

  std::string_view header = line;
  if (header.size() >= 3 && header.substr(0, 3) == "\xEF\xBB\xBF") {
    header.remove_prefix(3);
  }
  std::vector<std::string> names;
  if (!csv::split_record(header, names)) {
    throw FormatError("unparseable CSV header");
  }
  Columns cols;
  cols.count = names.size();
  for (std::size_t i = 0; i < names.size(); ++i) {
    std::string name(trim(names[i]));
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    auto assign = [&](std::optional<std::size_t>& slot) {
      if (!slot) slot = i;
    };
    if (name == "sensors") assign(cols.sensors);
    else if (name == "sensor") assign(cols.sensor);
    else if (name == "lat") assign(cols.lat);
    else if (name == "lon") assign(cols.lon);
    else if (name == "time") assign(cols.time);
    else if (name == "alt") assign(cols.alt);
    else if (name == "heading") assign(cols.heading);
    else if (name == "speed") assign(cols.speed);
    else if (name == "label") assign(cols.label);
  }
  return cols;
}

void require(const std::optional<std::size_t>& col, const char* name) {
  if (!col) throw FormatError(std::string("missing required column '") + name + "'");
}

// Empty field -> absent; present but non-numeric -> failure.
bool optional_number(const std::vector<std::string>& fields,
                     const std::optional<std::size_t>& col,
                     std::optional<double>& out) {
  out.reset();
  if (!col) return true;
  std::string_view f = trim(fields[*col]);
  if (f.empty()) return true;
  out = csv::parse_number(f);
  return out.has_value();
}

bool in_optional_ranges(const std::optional<double>& heading,
                        const std::optional<double>& speed) {
  if (heading && (*heading < 0.0 || *heading > 360.0)) return false;
  if (speed && *speed < 0.0) return false;
  return true;
}

void append_optional(std::string& out, const std::optional<double>& v) {
  if (v) out += format_double(*v);
}

}  // namespace

// ---- BoundingBox ------------------------------------------------------------

BoundingBox::BoundingBox(double lat_min, double lat_max, double lon_min, double lon_max)
    : lat_min_(lat_min), lat_max_(lat_max), lon_min_(lon_min), lon_max_(lon_max) {
  if (!is_valid(GeoCoord{lat_min, lon_min}) || !is_valid(GeoCoord{lat_max, lon_max})) {
    throw DomainError("bounding box corner outside coordinate domain");
  }
  if (!(lat_min < lat_max)) throw DomainError("bounding box needs lat_min < lat_max");
  if (!(lon_min < lon_max)) throw DomainError("bounding box needs lon_min < lon_max");
}

BoundingBox BoundingBox::europe() { return BoundingBox(30.0, 75.0, -25.0, 45.0); }

// ---- csv helpers ------------------------------------------------------------

namespace csv {

bool split_record(std::string_view line, std::vector<std::string>& fields) {
  fields.clear();
  std::string current;
  bool in_quotes = false;
  int brace_depth = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        current.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        break;
      case '{':
        ++brace_depth;
        current.push_back(c);
        break;
      case '}':
        if (brace_depth == 0) return false;
        --brace_depth;
        current.push_back(c);
        break;
      case ',':
        if (brace_depth > 0) {
          current.push_back(c);
        } else {
          fields.push_back(std::move(current));
          current.clear();
        }
        break;
      case '\r':
        if (i + 1 != line.size()) current.push_back(c);
        break;
      default:
        current.push_back(c);
    }
  }
  if (in_quotes || brace_depth != 0) return false;
  fields.push_back(std::move(current));
  return true;
}

std::optional<double> parse_number(std::string_view field) {
  field = trim(field);
  if (field.empty()) return std::nullopt;
  if (field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || end != field.data() + field.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::optional<std::vector<SensorId>> parse_sensor_list(std::string_view field) {
  field = trim(field);
  if (field.size() < 2 || field.front() != '{' || field.back() != '}') {
    return std::nullopt;
  }
  field = field.substr(1, field.size() - 2);
  std::vector<SensorId> out;
  if (trim(field).empty()) return out;
  while (true) {
    const auto comma = field.find(',');
    auto id = SensorId::normalize(field.substr(0, comma));
    if (!id) return std::nullopt;
    out.push_back(std::move(*id));
    if (comma == std::string_view::npos) break;
    field.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace csv

// ---- ObservationReader ----------------------------------------------------

struct ObservationReader::Impl {
  std::istream* in;
  Dialect dialect;
  Columns cols;
  ParseStats stats;
  std::string line;
  std::vector<std::string> fields;
  std::deque<AdsbObservation> pending;

  Impl(std::istream& stream, Dialect d) : in(&stream), dialect(d) {
    cols = read_header(stream, line);
    require(cols.lat, "lat");
    require(cols.lon, "lon");
    require(dialect == Dialect::kMultiSensor ? cols.sensors : cols.sensor,
            dialect == Dialect::kMultiSensor ? "sensors" : "sensor");
  }

  // Parses the current line into `pending`. Returns false when malformed.
  bool parse_row() {
    if (!csv::split_record(line, fields) || fields.size() != cols.count) return false;
    const auto lat = csv::parse_number(fields[*cols.lat]);
    const auto lon = csv::parse_number(fields[*cols.lon]);
    if (!lat || !lon) return false;
    const GeoCoord coord{*lat, *lon};
    if (!is_valid(coord)) return false;

    std::optional<double> time, alt, heading, speed;
    if (!optional_number(fields, cols.time, time)) return false;
    if (!optional_number(fields, cols.alt, alt)) return false;
    if (!optional_number(fields, cols.heading, heading)) return false;
    if (!optional_number(fields, cols.speed, speed)) return false;
    if (!in_optional_ranges(heading, speed)) return false;

    if (dialect == Dialect::kMultiSensor) {
      auto sensors = csv::parse_sensor_list(fields[*cols.sensors]);
      if (!sensors || sensors->empty()) return false;
      for (auto& s : *sensors) {
        pending.push_back(AdsbObservation{std::move(s), coord, time, alt, heading, speed});
      }
    } else {
      auto sensor = SensorId::normalize(fields[*cols.sensor]);
      if (!sensor) return false;
      pending.push_back(AdsbObservation{std::move(*sensor), coord, time, alt, heading, speed});
    }
    return true;
  }

  std::optional<AdsbObservation> next() {
    while (pending.empty()) {
      if (!std::getline(*in, line)) {
        if (in->bad()) throw IoError("failed reading CSV input");
        return std::nullopt;
      }
      if (trim(line).empty()) continue;
      ++stats.rows;
      if (!parse_row()) {
        pending.clear();
        ++stats.malformed;
      }
    }
    AdsbObservation obs = std::move(pending.front());
    pending.pop_front();
    ++stats.observations;
    return obs;
  }
};

ObservationReader::ObservationReader(std::istream& in, Dialect dialect)
    : impl_(std::make_unique<Impl>(in, dialect)) {}
ObservationReader::~ObservationReader() = default;
ObservationReader::ObservationReader(ObservationReader&&) noexcept = default;
ObservationReader& ObservationReader::operator=(ObservationReader&&) noexcept = default;

std::optional<AdsbObservation> ObservationReader::next() { return impl_->next(); }
const ParseStats& ObservationReader::stats() const noexcept { return impl_->stats; }

ParseResult parse_csv(std::istream& in, Dialect dialect) {
  ObservationReader reader(in, dialect);
  ParseResult result;
  while (auto obs = reader.next()) result.observations.push_back(std::move(*obs));
  result.stats = reader.stats();
  return result;
}

ParseResult parse_multi_sensor_csv(std::istream& in) {
  return parse_csv(in, Dialect::kMultiSensor);
}

ParseResult parse_per_flight_csv(std::istream& in) {
  return parse_csv(in, Dialect::kPerFlight);
}

std::unique_ptr<std::istream> open_input(const std::filesystem::path& path) {
  if (ends_with_gz(path)) return std::make_unique<GzipIStream>(path);
  auto file = std::make_unique<std::ifstream>(path, std::ios::binary);
  if (!*file) throw IoError("cannot open " + path.string());
  return file;
}

ParseResult parse_csv_file(const std::filesystem::path& path, Dialect dialect) {
  auto in = open_input(path);
  return parse_csv(*in, dialect);
}

std::vector<AdsbObservation> filter_bbox(std::span<const AdsbObservation> obs,
                                         const BoundingBox& box) {
  std::vector<AdsbObservation> out;
  out.reserve(obs.size());
  std::copy_if(obs.begin(), obs.end(), std::back_inserter(out),
               [&](const AdsbObservation& o) { return box.contains(o.coord); });
  return out;
}

// ---- labeled CSV ------------------------------------------------------------

LabeledParseResult parse_labeled_csv(std::istream& in) {
  std::string line;
  Columns cols = read_header(in, line);
  require(cols.sensor, "sensor");
  require(cols.lat, "lat");
  require(cols.lon, "lon");
  require(cols.label, "label");

  LabeledParseResult result;
  std::vector<std::string> fields;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++result.stats.rows;
    auto malformed = [&] { ++result.stats.malformed; };
    if (!csv::split_record(line, fields) || fields.size() != cols.count) {
      malformed();
      continue;
    }
    auto sensor = SensorId::normalize(fields[*cols.sensor]);
    const auto lat = csv::parse_number(fields[*cols.lat]);
    const auto lon = csv::parse_number(fields[*cols.lon]);
    const std::string_view label = trim(fields[*cols.label]);
    std::optional<double> time;
    if (!sensor || !lat || !lon || (label != "0" && label != "1") ||
        !optional_number(fields, cols.time, time) || !is_valid(GeoCoord{*lat, *lon})) {
      malformed();
      continue;
    }
    result.observations.push_back(LabeledObservation{
        AdsbObservation{std::move(*sensor), GeoCoord{*lat, *lon}, time, {}, {}, {}},
        label == "1"});
    ++result.stats.observations;
  }
  if (in.bad()) throw IoError("failed reading labeled CSV");
  return result;
}

void write_labeled_csv(std::ostream& out, std::span<const LabeledObservation> rows) {
  out << "sensor,lat,lon,time,label\n";
  std::string line;
  for (const auto& r : rows) {
    line.clear();
    line += r.obs.sensor.str();
    line += ',';
    line += format_double(r.obs.coord.lat);
    line += ',';
    line += format_double(r.obs.coord.lon);
    line += ',';
    append_optional(line, r.obs.timestamp);
    line += r.label ? ",1\n" : ",0\n";
    out << line;
  }
}

void write_multi_sensor_csv(std::ostream& out, std::span<const MultiSensorRecord> rows) {
  out << "sensors,lat,lon,time\n";
  std::string line;
  for (const auto& r : rows) {
    line.assign("\"{");
    for (std::size_t i = 0; i < r.sensors.size(); ++i) {
      if (i != 0) line += ',';
      line += r.sensors[i].str();
    }
    line += "}\",";
    line += format_double(r.coord.lat);
    line += ',';
    line += format_double(r.coord.lon);
    line += ',';
    append_optional(line, r.timestamp);
    line += '\n';
    out << line;
  }
}

void write_per_flight_csv(std::ostream& out, std::span<const AdsbObservation> rows) {
  out << "sensor,lat,lon,alt,heading,speed,time\n";
  std::string line;
  for (const auto& r : rows) {
    line.assign(r.sensor.str());
    line += ',';
    line += format_double(r.coord.lat);
    line += ',';
    line += format_double(r.coord.lon);
    line += ',';
    append_optional(line, r.altitude_ft);
    line += ',';
    append_optional(line, r.heading_deg);
    line += ',';
    append_optional(line, r.speed_kt);
    line += ',';
    append_optional(line, r.timestamp);
    line += '\n';
    out << line;
  }
}

std::vector<AdsbObservation> expand(std::span<const MultiSensorRecord> rows) {
  std::vector<AdsbObservation> out;
  for (const auto& r : rows) {
    for (const auto& s : r.sensors) {
      out.push_back(AdsbObservation{s, r.coord, r.timestamp, {}, {}, {}});
    }
  }
  return out;
}

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

}  // namespace love
