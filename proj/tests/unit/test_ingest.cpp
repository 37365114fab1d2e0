#include <gtest/gtest.h>

#include <sys/resource.h>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <streambuf>

#include "love/error.hpp"
#include "love/ingest.hpp"
#include "oracles.hpp"

namespace love {
namespace {

using testing::fixture;

ParseResult parse_a(const std::string& text) {
  std::istringstream in(text);
  return parse_multi_sensor_csv(in);
}

ParseResult parse_b(const std::string& text) {
  std::istringstream in(text);
  return parse_per_flight_csv(in);
}

TEST(SensorId, Validation) {
  EXPECT_NO_THROW(SensorId("abc-1"));
  for (const char* bad : {"", " a", "a ", "a,b", "a\"b", "{a", "a}", "a\nb"}) {
    EXPECT_THROW(SensorId{bad}, DomainError) << bad;
  }
  EXPECT_EQ(SensorId::normalize("  s1 ")->str(), "s1");
  EXPECT_FALSE(SensorId::normalize("   "));
}

TEST(MultiSensor, ExpandsOneObservationPerSensor) {
  const auto r = parse_a("sensors,lat,lon,time\n\"{s1,s2,s3}\",48.1,11.5,100\n");
  ASSERT_EQ(r.observations.size(), 3u);
  const char* expected[] = {"s1", "s2", "s3"};
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(r.observations[i].sensor.str(), expected[i]);
    EXPECT_EQ(r.observations[i].coord, (GeoCoord{48.1, 11.5}));
    EXPECT_EQ(r.observations[i].timestamp, 100.0);
  }
  EXPECT_EQ(r.stats.rows, 1u);
  EXPECT_EQ(r.stats.malformed, 0u);
}

TEST(MultiSensor, UnquotedBraceListIsOneField) {
  const auto r = parse_a("sensors,lat,lon\n{a,b},50,10\n");
  ASSERT_EQ(r.observations.size(), 2u);
}

TEST(MultiSensor, EmptySensorListIsMalformed) {
  const auto r = parse_a("sensors,lat,lon,time\n\"{}\",48.1,11.5,100\n{s1},1,2,3\n");
  EXPECT_EQ(r.observations.size(), 1u);
  EXPECT_EQ(r.stats.rows, 2u);
  EXPECT_EQ(r.stats.malformed, 1u);
}

TEST(MultiSensor, FixtureAveragesTwelvePointNineFive) {
  const auto r = parse_csv_file(fixture("dialect_a_100.csv"), Dialect::kMultiSensor);
  EXPECT_EQ(r.stats.rows, 100u);
  EXPECT_EQ(r.stats.malformed, 0u);
  EXPECT_EQ(r.observations.size(), 1295u);
  EXPECT_DOUBLE_EQ(static_cast<double>(r.observations.size()) / 100.0, 12.95);
}

TEST(MultiSensor, ExpansionConservesListLengths) {
  // Independent count of list entries straight from the text.
  std::ifstream in(fixture("dialect_a_100.csv"));
  std::string line;
  std::getline(in, line);
  std::size_t entries = 0;
  while (std::getline(in, line)) {
    const auto close = line.find('}');
    entries += static_cast<std::size_t>(std::count(line.begin(), line.begin() + close, ',')) + 1;
  }
  EXPECT_EQ(parse_csv_file(fixture("dialect_a_100.csv"), Dialect::kMultiSensor).stats.observations,
            entries);
}

TEST(PerFlight, TenRowFixture) {
  const auto r = parse_csv_file(fixture("dialect_b_10.csv"), Dialect::kPerFlight);
  EXPECT_EQ(r.observations.size(), 10u);
  EXPECT_EQ(r.stats.rows, 10u);
  EXPECT_EQ(r.stats.malformed, 0u);
  for (const auto& o : r.observations) {
    EXPECT_TRUE(o.altitude_ft && o.heading_deg && o.speed_kt && o.timestamp);
  }
}

TEST(PerFlight, GzipMatchesPlain) {
  const auto plain = parse_csv_file(fixture("dialect_b_10.csv"), Dialect::kPerFlight);
  const auto gz = parse_csv_file(fixture("dialect_b_10.csv.gz"), Dialect::kPerFlight);
  ASSERT_EQ(gz.observations.size(), plain.observations.size());
  for (std::size_t i = 0; i < gz.observations.size(); ++i) {
    EXPECT_EQ(gz.observations[i].sensor, plain.observations[i].sensor);
    EXPECT_EQ(gz.observations[i].coord, plain.observations[i].coord);
  }
}

TEST(PerFlight, MalformedRowsAreSkippedAndCounted) {
  const auto r = parse_csv_file(fixture("malformed_b.csv"), Dialect::kPerFlight);
  EXPECT_EQ(r.stats.rows, 9u);
  EXPECT_EQ(r.stats.malformed, 6u);
  ASSERT_EQ(r.observations.size(), 3u);
  EXPECT_EQ(r.observations[0].sensor.str(), "ok1");
  EXPECT_EQ(r.observations[1].sensor.str(), "ok2");
  EXPECT_FALSE(r.observations[1].altitude_ft);
  EXPECT_FALSE(r.observations[1].timestamp);
  EXPECT_EQ(r.observations[2].sensor.str(), "ok3");
}

TEST(PerFlight, NonNumericLatitude) {
  const auto r = parse_b("sensor,lat,lon\na,north,10\nb,50,10\n");
  EXPECT_EQ(r.observations.size(), 1u);
  EXPECT_EQ(r.stats.malformed, 1u);
}

TEST(PerFlight, OnlySensorLatLonRequired) {
  const auto r = parse_b("lon,sensor,lat\n10,a,50\n");
  ASSERT_EQ(r.observations.size(), 1u);
  EXPECT_EQ(r.observations[0].coord, (GeoCoord{50.0, 10.0}));
}

TEST(PerFlight, DuplicateTuplesPassThrough) {
  const auto r = parse_csv_file(fixture("duplicates_1000.csv"), Dialect::kPerFlight);
  EXPECT_EQ(r.observations.size(), 1000u);
}

TEST(Header, MissingColumnsAreFatal) {
  EXPECT_THROW(parse_b("sensor,lat\na,1\n"), FormatError);
  EXPECT_THROW(parse_a("sensor,lat,lon\na,1,2\n"), FormatError);
  EXPECT_THROW(parse_b(""), FormatError);
}

TEST(Input, MissingFileIsIoError) {
  EXPECT_THROW(parse_csv_file("/nonexistent/x.csv", Dialect::kPerFlight), IoError);
  EXPECT_THROW(parse_csv_file("/nonexistent/x.csv.gz", Dialect::kPerFlight), IoError);
}

TEST(Input, CrlfAndBlankLines) {
  const auto r = parse_b("sensor,lat,lon\r\n\r\na,50,10\r\n\r\nb,51,11\r\n");
  ASSERT_EQ(r.observations.size(), 2u);
  EXPECT_EQ(r.stats.rows, 2u);
}

TEST(BoundingBox, EuropeDefaults) {
  const auto box = BoundingBox::europe();
  EXPECT_TRUE(box.contains({50.0, 10.0}));
  EXPECT_FALSE(box.contains({20.0, 10.0}));
  EXPECT_TRUE(box.contains({30.0, -25.0}));
  EXPECT_TRUE(box.contains({75.0, 45.0}));
  EXPECT_FALSE(box.contains({75.000001, 45.0}));
  EXPECT_THROW(BoundingBox(10, 10, 0, 1), DomainError);
  EXPECT_THROW(BoundingBox(0, 1, 5, 4), DomainError);
  EXPECT_THROW(BoundingBox(-91, 1, 0, 1), DomainError);
}

TEST(BoundingBox, FilterIsStableAndIdempotent) {
  const auto r = parse_csv_file(fixture("dialect_a_100.csv"), Dialect::kMultiSensor);
  const BoundingBox box(45.0, 55.0, 0.0, 15.0);
  const auto once = filter_bbox(r.observations, box);
  const auto twice = filter_bbox(once, box);
  ASSERT_EQ(once.size(), twice.size());
  // Stable: `once` is a subsequence of the input in input order.
  std::size_t j = 0;
  std::size_t expected = 0;
  for (const auto& o : r.observations) {
    if (!box.contains(o.coord)) continue;
    ++expected;
    ASSERT_LT(j, once.size());
    EXPECT_EQ(once[j].coord, o.coord);
    EXPECT_EQ(once[j].sensor, o.sensor);
    ++j;
  }
  EXPECT_EQ(once.size(), expected);
  EXPECT_GT(expected, 0u);
  EXPECT_LT(expected, r.observations.size());
}

TEST(Csv, SplitRecord) {
  std::vector<std::string> f;
  ASSERT_TRUE(csv::split_record(R"(a,"b,c","d""e",{x,y})", f));
  EXPECT_EQ(f, (std::vector<std::string>{"a", "b,c", "d\"e", "{x,y}"}));
  EXPECT_FALSE(csv::split_record("\"open", f));
  EXPECT_FALSE(csv::split_record("{a,b", f));
  EXPECT_FALSE(csv::split_record("a}", f));
}

TEST(Csv, ParseNumber) {
  EXPECT_EQ(csv::parse_number("1.5"), 1.5);
  EXPECT_EQ(csv::parse_number(" +2 "), 2.0);
  EXPECT_EQ(csv::parse_number("-1e3"), -1000.0);
  for (const char* bad : {"", " ", "abc", "1.5x", "nan", "inf", "1,5"}) {
    EXPECT_FALSE(csv::parse_number(bad)) << bad;
  }
}

TEST(Writers, RoundTripBothDialects) {
  const auto src = parse_csv_file(fixture("dialect_b_10.csv"), Dialect::kPerFlight);
  std::stringstream b;
  write_per_flight_csv(b, src.observations);
  const auto back = parse_per_flight_csv(b);
  ASSERT_EQ(back.observations.size(), src.observations.size());
  for (std::size_t i = 0; i < src.observations.size(); ++i) {
    const auto& x = src.observations[i];
    const auto& y = back.observations[i];
    EXPECT_EQ(x.sensor, y.sensor);
    EXPECT_EQ(x.coord, y.coord);
    EXPECT_EQ(x.altitude_ft, y.altitude_ft);
    EXPECT_EQ(x.heading_deg, y.heading_deg);
    EXPECT_EQ(x.speed_kt, y.speed_kt);
    EXPECT_EQ(x.timestamp, y.timestamp);
  }

  const std::vector<MultiSensorRecord> recs{
      {{SensorId("a"), SensorId("b")}, {50.123456789, 10.5}, 7.5},
      {{SensorId("c")}, {-1.0, -2.0}, std::nullopt}};
  std::stringstream a;
  write_multi_sensor_csv(a, recs);
  const auto parsed = parse_multi_sensor_csv(a);
  const auto expanded = expand(recs);
  ASSERT_EQ(parsed.observations.size(), expanded.size());
  for (std::size_t i = 0; i < expanded.size(); ++i) {
    EXPECT_EQ(parsed.observations[i].sensor, expanded[i].sensor);
    EXPECT_EQ(parsed.observations[i].coord, expanded[i].coord);
    EXPECT_EQ(parsed.observations[i].timestamp, expanded[i].timestamp);
  }
}

TEST(Labeled, RoundTripAndValidation) {
  const std::vector<LabeledObservation> rows{
      {AdsbObservation{SensorId("s1"), {50.0, 10.0}, 12.5, {}, {}, {}}, true},
      {AdsbObservation{SensorId("s2"), {-10.0, 170.0}, std::nullopt, {}, {}, {}}, false}};
  std::stringstream io;
  write_labeled_csv(io, rows);
  EXPECT_EQ(io.str().substr(0, 26), "sensor,lat,lon,time,label\n");
  const auto back = parse_labeled_csv(io);
  ASSERT_EQ(back.observations.size(), 2u);
  EXPECT_TRUE(back.observations[0].label);
  EXPECT_FALSE(back.observations[1].label);
  EXPECT_EQ(back.observations[0].obs.timestamp, 12.5);
  EXPECT_FALSE(back.observations[1].obs.timestamp);

  std::istringstream bad("sensor,lat,lon,label\na,1,2,2\nb,1,2,yes\nc,100,2,1\nd,1,2,0\n");
  const auto r = parse_labeled_csv(bad);
  EXPECT_EQ(r.observations.size(), 1u);
  EXPECT_EQ(r.stats.malformed, 3u);
  std::istringstream nolabel("sensor,lat,lon\na,1,2\n");
  EXPECT_THROW(parse_labeled_csv(nolabel), FormatError);
}

TEST(FormatDouble, ShortestRoundTrip) {
  for (double v : {0.1, 52.1, -8.9, 1e-7, 123456.789, 1.0 / 3.0}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(52.1), "52.1");
}

// Produces `rows` synthetic dialect B lines without materialising them.
class GeneratedCsv : public std::streambuf {
 public:
  explicit GeneratedCsv(std::size_t rows) : remaining_(rows) {
    line_ = "sensor,lat,lon,alt,heading,speed,time\n";
    setg(line_.data(), line_.data(), line_.data() + line_.size());
  }

 protected:
  int_type underflow() override {
    if (remaining_ == 0) return traits_type::eof();
    --remaining_;
    line_ = "sensor" + std::to_string(remaining_ % 97) + ",50." +
            std::to_string(remaining_ % 1000) + ",10.5,35000,90.0,420.0,1627000000.5\n";
    setg(line_.data(), line_.data(), line_.data() + line_.size());
    return traits_type::to_int_type(line_[0]);
  }

 private:
  std::size_t remaining_;
  std::string line_;
};

long max_rss_kb() {
  rusage usage{};
  getrusage(RUSAGE_SELF, &usage);
  return usage.ru_maxrss;
}

TEST(ObservationReader, StreamsWithBoundedMemory) {
  constexpr std::size_t kRows = 1'500'000;  // about 90 MB of CSV text
  GeneratedCsv buf(kRows);
  std::istream in(&buf);
  const long before = max_rss_kb();
  ObservationReader reader(in, Dialect::kPerFlight);
  std::size_t n = 0;
  while (reader.next()) ++n;
  const long grown_kb = max_rss_kb() - before;
  EXPECT_EQ(n, kRows);
  EXPECT_EQ(reader.stats().malformed, 0u);
  EXPECT_LT(grown_kb, 16 * 1024) << "reader memory grew with input size";
}

}  // namespace
}  // namespace love
