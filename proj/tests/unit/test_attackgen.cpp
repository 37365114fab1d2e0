#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "love/amount_store.hpp"
#include "love/attackgen.hpp"
#include "love/error.hpp"
#include "love/ingest.hpp"
#include "love/synthetic.hpp"
#include "love/verifier.hpp"
#include "oracles.hpp"

namespace love {
namespace {

AdsbObservation obs(const std::string& sensor, double lat, double lon) {
  return AdsbObservation{SensorId(sensor), {lat, lon}, {}, {}, {}, {}};
}

std::vector<AdsbObservation> corpus(std::size_t n, std::uint64_t seed) {
  SyntheticConfig cfg;
  cfg.sensor_count = 80;
  cfg.target_observations = n;
  return generate_corpus(cfg, seed).observations();
}

TEST(Envelopes, DegenerateAndPair) {
  const auto one = compute_envelopes(std::vector{obs("s", 50, 10)});
  ASSERT_EQ(one.size(), 1u);
  const auto& e = one.at(SensorId("s"));
  EXPECT_EQ(std::tie(e.lat_min, e.lat_max, e.lon_min, e.lon_max),
            std::make_tuple(50.0, 50.0, 10.0, 10.0));

  const auto two = compute_envelopes(std::vector{obs("s", 48, 9), obs("s", 52, 11)});
  const auto& f = two.at(SensorId("s"));
  EXPECT_EQ(std::tie(f.lat_min, f.lat_max, f.lon_min, f.lon_max),
            std::make_tuple(48.0, 52.0, 9.0, 11.0));
  EXPECT_TRUE(compute_envelopes({}).empty());
}

TEST(Envelopes, MatchPerSensorScan) {
  const auto o = corpus(8000, 3);
  const auto env = compute_envelopes(o);
  const auto sensors = testing::distinct_sensors(o);
  ASSERT_EQ(env.size(), sensors.size());
  for (const auto& s : sensors) {
    double lat_min = std::numeric_limits<double>::infinity(), lat_max = -lat_min;
    double lon_min = lat_min, lon_max = -lat_min;
    for (const auto& x : o) {
      if (x.sensor.str() != s) continue;
      lat_min = std::min(lat_min, x.coord.lat);
      lat_max = std::max(lat_max, x.coord.lat);
      lon_min = std::min(lon_min, x.coord.lon);
      lon_max = std::max(lon_max, x.coord.lon);
    }
    const auto& e = env.at(SensorId(s));
    EXPECT_EQ(e.sensor.str(), s);
    EXPECT_EQ(e.lat_min, lat_min);
    EXPECT_EQ(e.lat_max, lat_max);
    EXPECT_EQ(e.lon_min, lon_min);
    EXPECT_EQ(e.lon_max, lon_max);
  }
}

TEST(Perturb, FormulaAtDeltaBoundary) {
  const SensorEnvelope env{SensorId("s"), 48, 52, 9, 11};
  const auto p = perturb(env, {true, 0.1}, {false, 0.1});
  EXPECT_DOUBLE_EQ(p.coord.lat, 52.1);
  EXPECT_DOUBLE_EQ(p.coord.lon, 8.9);
  EXPECT_FALSE(p.meta.clamped);
  EXPECT_NEAR(p.meta.lat_offset, 0.1, 1e-12);
  EXPECT_NEAR(p.meta.lon_offset, 0.1, 1e-12);
}

TEST(Perturb, ClampsAndFlags) {
  const SensorEnvelope env{SensorId("s"), 85, 88, 175, 178};
  const auto p = perturb(env, {true, 5.0}, {true, 5.0});
  EXPECT_EQ(p.coord.lat, 90.0);
  EXPECT_EQ(p.coord.lon, 180.0);
  EXPECT_TRUE(p.meta.clamped);
  EXPECT_DOUBLE_EQ(p.meta.lat_offset, 2.0);
  EXPECT_DOUBLE_EQ(p.meta.lon_offset, 2.0);
}

TEST(GenSpoofed, MatchesReferenceVectors) {
  EnvelopeMap env;
  env.emplace(SensorId("b"), SensorEnvelope{SensorId("b"), 40, 41, 0, 1});
  env.emplace(SensorId("a"), SensorEnvelope{SensorId("a"), 48, 52, 9, 11});
  const auto batch = gen_spoofed(env, 3, 42);
  ASSERT_EQ(batch.observations.size(), 3u);
  const struct {
    const char* sensor;
    double lat, lon;
  } expected[] = {{"a", 59.54623748740546, -0.042362767640945265},
                  {"a", 55.79158822461623, 5.036318273998494},
                  {"b", 47.88418573855274, 9.282842582443914}};
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& o = batch.observations[i];
    EXPECT_EQ(o.obs.sensor.str(), expected[i].sensor);
    EXPECT_EQ(o.obs.coord.lat, expected[i].lat);
    EXPECT_EQ(o.obs.coord.lon, expected[i].lon);
    EXPECT_FALSE(o.label);
  }
}

TEST(GenSpoofed, SeedDeterminism) {
  const auto env = compute_envelopes(corpus(3000, 4));
  const auto a = gen_spoofed(env, 1000, 42);
  const auto b = gen_spoofed(env, 1000, 42);
  const auto c = gen_spoofed(env, 1000, 43);
  ASSERT_EQ(a.observations.size(), b.observations.size());
  bool differs = false;
  for (std::size_t i = 0; i < a.observations.size(); ++i) {
    ASSERT_EQ(a.observations[i].obs.coord, b.observations[i].obs.coord);
    ASSERT_EQ(a.observations[i].obs.sensor, b.observations[i].obs.sensor);
    differs |= !(a.observations[i].obs.coord == c.observations[i].obs.coord);
  }
  EXPECT_TRUE(differs);
}

TEST(GenSpoofed, EmptyCases) {
  EXPECT_TRUE(gen_spoofed({}, 0, 1).observations.empty());
  EXPECT_THROW(gen_spoofed({}, 1, 1), DomainError);
}

TEST(GenSpoofed, EveryPointLeavesItsEnvelopeOnBothAxes) {
  const auto env = compute_envelopes(corpus(5000, 5));
  const auto batch = gen_spoofed(env, 10'000, 7);
  std::size_t inside = 0;
  for (std::size_t i = 0; i < batch.observations.size(); ++i) {
    const auto& o = batch.observations[i].obs;
    const auto& e = env.at(o.sensor);
    inside += e.contains(o.coord);
    const auto& m = batch.meta[i];
    // Pre-clamp each axis sits strictly outside its interval.
    const double raw_lat = m.lat.add ? e.lat_max + m.lat.delta : e.lat_min - m.lat.delta;
    const double raw_lon = m.lon.add ? e.lon_max + m.lon.delta : e.lon_min - m.lon.delta;
    ASSERT_TRUE(raw_lat > e.lat_max || raw_lat < e.lat_min);
    ASSERT_TRUE(raw_lon > e.lon_max || raw_lon < e.lon_min);
    if (!m.clamped) {
      ASSERT_EQ(o.coord.lat, raw_lat);
      ASSERT_EQ(o.coord.lon, raw_lon);
    }
  }
  EXPECT_EQ(inside, 0u);
}

TEST(GenSpoofed, DeltaIsUniformKolmogorovSmirnov) {
  const auto env = compute_envelopes(corpus(2000, 6));
  const auto batch = gen_spoofed(env, 100'000, 42);
  std::vector<double> lat, lon;
  std::size_t lat_adds = 0;
  for (const auto& m : batch.meta) {
    lat.push_back(m.lat.delta);
    lon.push_back(m.lon.delta);
    ASSERT_GE(m.lat.delta, kSpoofDeltaMin);
    ASSERT_LT(m.lat.delta, kSpoofDeltaMax);
    lat_adds += m.lat.add;
  }
  const double crit = testing::ks_critical_value(lat.size(), 0.01);
  EXPECT_LT(testing::ks_uniform_statistic(lat, kSpoofDeltaMin, kSpoofDeltaMax), crit);
  EXPECT_LT(testing::ks_uniform_statistic(lon, kSpoofDeltaMin, kSpoofDeltaMax), crit);
  // The add/subtract coin is fair: within 4 sigma of 50 000.
  EXPECT_NEAR(static_cast<double>(lat_adds), 50'000.0, 4 * std::sqrt(25'000.0));
}

TEST(KsOracle, RejectsShiftedSample) {
  std::vector<double> skewed;
  for (int i = 0; i < 10000; ++i) skewed.push_back(0.1 + 9.9 * std::pow(i / 10000.0, 1.3));
  EXPECT_GT(testing::ks_uniform_statistic(skewed, 0.1, 10.0),
            testing::ks_critical_value(skewed.size(), 0.01));
}

TEST(GhostTrack, SpacingAtSevenTwentyKmh) {
  GhostTrackOptions opt;
  opt.steps = 2;
  opt.speed_kmh = 720;
  const auto t = gen_ghost_track(BoundingBox::europe(), opt, 1);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_NEAR(great_circle_km(t[0].coord, t[1].coord), 0.1, 1e-9);
  EXPECT_DOUBLE_EQ(*t[1].timestamp - *t[0].timestamp, 0.5);
}

TEST(GhostTrack, SmoothTrackInsideRegion) {
  const BoundingBox box(45, 55, 0, 20);
  GhostTrackOptions opt;
  opt.steps = 500;
  opt.speed_kmh = 900;
  opt.sensor = SensorId("ghost-7");
  const auto t = gen_ghost_track(box, opt, 99);
  ASSERT_EQ(t.size(), 500u);
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_TRUE(box.contains(t[i].coord));
    EXPECT_EQ(t[i].sensor.str(), "ghost-7");
    EXPECT_NEAR(*t[i].speed_kt, 900 / 1.852, 1e-9);
    if (i > 0) {
      EXPECT_NEAR(great_circle_km(t[i - 1].coord, t[i].coord), 0.125, 1e-6);
      // Heading changes smoothly along a great circle.
      EXPECT_LT(std::abs(*t[i].heading_deg - *t[i - 1].heading_deg), 0.1);
    }
  }
  const auto again = gen_ghost_track(box, opt, 99);
  for (std::size_t i = 0; i < t.size(); ++i) EXPECT_EQ(t[i].coord, again[i].coord);
}

TEST(GhostTrack, Preconditions) {
  GhostTrackOptions opt;
  opt.steps = 1;
  EXPECT_THROW(gen_ghost_track(BoundingBox::europe(), opt, 1), DomainError);
  opt.steps = 10;
  opt.speed_kmh = 99;
  EXPECT_THROW(gen_ghost_track(BoundingBox::europe(), opt, 1), DomainError);
  opt.speed_kmh = 1201;
  EXPECT_THROW(gen_ghost_track(BoundingBox::europe(), opt, 1), DomainError);
  // A box a few metres wide cannot hold a 10 km track.
  opt.speed_kmh = 1200;
  opt.steps = 60;
  EXPECT_THROW(gen_ghost_track(BoundingBox(50, 50.0001, 10, 10.0001), opt, 1), DomainError);
}

TEST(GhostTrack, UnknownSensorEverywhere) {
  const auto table = build(corpus(5000, 8), Resolution(4));
  const auto t = gen_ghost_track(BoundingBox(40, 60, 0, 20), {}, 5);
  for (const auto& o : t) EXPECT_EQ(verify(table, o), Verdict::kUnknownSensor);
}

TEST(Flood, CountsAndJitter) {
  const AdsbObservation tmpl = obs("orig", 50.0, 10.0);
  EXPECT_TRUE(gen_flood(SensorId("s"), tmpl, 0, 1).empty());
  const auto five = gen_flood(SensorId("s"), tmpl, 5, 1);
  ASSERT_EQ(five.size(), 5u);
  for (const auto& f : five) {
    EXPECT_EQ(f.obs.sensor.str(), "s");
    EXPECT_FALSE(f.label);
    EXPECT_LE(std::abs(f.obs.coord.lat - 50.0), kFloodJitterDeg);
    EXPECT_LE(std::abs(f.obs.coord.lon - 10.0), kFloodJitterDeg);
  }
}

TEST(Flood, InsideCoveredCellPasses) {
  // The sensor has recorded the cell around the template; jitter of 0.01
  // degrees cannot leave a res-4 cell from its center.
  const GeoCoord center = cell_center(cell_of({50.0, 10.0}, Resolution(4)));
  const auto table = build(std::vector{obs("s", center.lat, center.lon)}, Resolution(4));
  for (const auto& f : gen_flood(SensorId("s"), obs("s", center.lat, center.lon), 200, 3)) {
    EXPECT_EQ(verify(table, f.obs), Verdict::kPlausible);
  }
}

}  // namespace
}  // namespace love
