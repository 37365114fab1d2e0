#include <gtest/gtest.h>

#include <random>

#include "love/amount_store.hpp"
#include "love/error.hpp"
#include "love/synthetic.hpp"
#include "love/verifier.hpp"
#include "oracles.hpp"

namespace love {
namespace {

const Resolution kR4{4};

AdsbObservation obs(const std::string& sensor, double lat, double lon) {
  return AdsbObservation{SensorId(sensor), {lat, lon}, {}, {}, {}, {}};
}

std::vector<AdsbObservation> small_corpus(std::size_t n, std::uint64_t seed) {
  SyntheticConfig cfg;
  cfg.sensor_count = 30;
  cfg.target_observations = n;
  return generate_corpus(cfg, seed).observations();
}

// Queries mixing replayed corpus points, random points for known sensors and
// unknown sensors.
std::vector<AdsbObservation> queries(const std::vector<AdsbObservation>& corpus, std::size_t n,
                                     std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> lat(36.0, 68.0);
  std::uniform_real_distribution<double> lon(-12.0, 38.0);
  std::uniform_int_distribution<std::size_t> pick(0, corpus.size() - 1);
  std::vector<AdsbObservation> out;
  for (std::size_t i = 0; i < n; ++i) {
    switch (i % 3) {
      case 0:
        out.push_back(corpus[pick(gen)]);
        break;
      case 1:
        out.push_back(obs(corpus[pick(gen)].sensor.str(), lat(gen), lon(gen)));
        break;
      default:
        out.push_back(obs("stranger" + std::to_string(i % 7), lat(gen), lon(gen)));
    }
  }
  return out;
}

TEST(Verdict, Names) {
  for (auto v : {Verdict::kPlausible, Verdict::kImplausible, Verdict::kUnknownSensor}) {
    EXPECT_EQ(parse_verdict(to_string(v)), v);
  }
  EXPECT_EQ(to_string(Verdict::kUnknownSensor), "UnknownSensor");
  EXPECT_FALSE(parse_verdict("plausible"));
}

TEST(Verify, ThreeCases) {
  const std::vector<AdsbObservation> corpus{obs("s1", 50.0, 10.0), obs("s2", 40.0, 0.0)};
  const auto t = build(corpus, kR4);
  EXPECT_EQ(verify(t, obs("s1", 50.0, 10.0)), Verdict::kPlausible);
  EXPECT_EQ(verify(t, obs("s1", 40.0, 0.0)), Verdict::kImplausible);
  EXPECT_EQ(verify(t, obs("s3", 50.0, 10.0)), Verdict::kUnknownSensor);
}

TEST(Verify, InvalidCoordinateIsError) {
  const auto t = build(std::vector{obs("s1", 50.0, 10.0)}, kR4);
  AdsbObservation bad = obs("s1", 0.0, 0.0);
  bad.coord.lat = 91.0;
  EXPECT_THROW(verify(t, bad), DomainError);
  bad.coord = {0.0, 0.0};
  bad.sensor = SensorId("zz");
  bad.coord.lon = -200.0;
  EXPECT_THROW(verify(t, bad), DomainError);
}

TEST(Verify, IgnoresMessageContent) {
  const auto t = build(std::vector{obs("s1", 50.0, 10.0)}, kR4);
  AdsbObservation o = obs("s1", 50.0, 10.0);
  o.altitude_ft = 1e9;
  o.speed_kt = 12345;
  o.heading_deg = 359;
  o.timestamp = -5;
  EXPECT_EQ(verify(t, o), Verdict::kPlausible);
}

TEST(Verify, MinCountThreshold) {
  const std::vector<AdsbObservation> corpus{obs("s1", 50.0, 10.0), obs("s1", 50.0, 10.0),
                                            obs("s1", 40.0, 0.0)};
  const auto t = build(corpus, kR4);
  EXPECT_EQ(verify(t, obs("s1", 40.0, 0.0), {2}), Verdict::kImplausible);
  EXPECT_EQ(verify(t, obs("s1", 50.0, 10.0), {2}), Verdict::kPlausible);
  EXPECT_EQ(verify(t, obs("s1", 50.0, 10.0), {3}), Verdict::kImplausible);
  // 0 behaves as the default of 1.
  EXPECT_EQ(verify(t, obs("s1", 40.0, 0.0), {0}), Verdict::kPlausible);
}

TEST(Verify, PartitionAgreesWithCorpusScan) {
  const auto corpus = small_corpus(3000, 21);
  const auto q = queries(corpus, 600, 22);
  for (auto res : Resolution::all()) {
    const auto t = build(corpus, res);
    std::array<std::size_t, 3> seen{};
    for (const auto& o : q) {
      const auto v = verify(t, o);
      ASSERT_EQ(v, testing::scan_verdict(corpus, res.value(), o));
      ++seen[static_cast<std::size_t>(v)];
    }
    for (auto n : seen) EXPECT_GT(n, 0u) << res.value();
  }
}

TEST(VerifyBatch, ThreeClassesInInputOrder) {
  const auto t = build(std::vector{obs("s1", 50.0, 10.0)}, kR4);
  const std::vector<AdsbObservation> batch{obs("s9", 50.0, 10.0), obs("s1", 50.0, 10.0),
                                           obs("s1", 20.0, 10.0)};
  const auto r = verify_batch(t, batch);
  ASSERT_EQ(r.verdicts.size(), 3u);
  EXPECT_EQ(r.verdicts[0], Verdict::kUnknownSensor);
  EXPECT_EQ(r.verdicts[1], Verdict::kPlausible);
  EXPECT_EQ(r.verdicts[2], Verdict::kImplausible);
  EXPECT_TRUE(r.errors.empty());
  EXPECT_GE(r.timing.wall_seconds, 0.0);
}

TEST(VerifyBatch, EqualsElementwiseAcrossThreadCounts) {
  const auto corpus = small_corpus(5000, 31);
  const auto q = queries(corpus, 30'000, 32);
  const auto t = build(corpus, kR4);
  std::vector<std::optional<Verdict>> expected;
  for (const auto& o : q) expected.push_back(verify(t, o));
  for (unsigned threads : {1u, 2u, 5u, 16u}) {
    const auto r = verify_batch(t, q, {}, threads);
    EXPECT_EQ(r.verdicts, expected) << threads;
    EXPECT_TRUE(r.errors.empty());
    EXPECT_GT(r.timing.throughput_per_sec, 0.0);
  }
}

TEST(VerifyBatch, ErrorsOccupyTheirSlot) {
  const auto t = build(std::vector{obs("s1", 50.0, 10.0)}, kR4);
  std::vector<AdsbObservation> batch(20'000, obs("s1", 50.0, 10.0));
  batch[3].coord.lat = 120.0;
  batch[17'000].coord.lon = 400.0;
  const auto r = verify_batch(t, batch, {}, 4);
  ASSERT_EQ(r.errors.size(), 2u);
  EXPECT_EQ(r.errors[0].index, 3u);
  EXPECT_EQ(r.errors[1].index, 17'000u);
  EXPECT_FALSE(r.verdicts[3]);
  EXPECT_FALSE(r.verdicts[17'000]);
  EXPECT_EQ(r.verdicts[4], Verdict::kPlausible);
}

TEST(VerifyBatch, EmptyBatch) {
  const auto r = verify_batch(AmountTable(kR4), {});
  EXPECT_TRUE(r.verdicts.empty());
  EXPECT_EQ(r.timing.throughput_per_sec, 0.0);
}

// A point's own cell is not always inside its coarse cell, so per-point
// acceptance is not monotone across resolutions in general. What holds is
// the nested-corpus form: if the exact query point was ingested, it is
// Plausible at every resolution; and a coarser table never accepts fewer of
// the ingested points.
TEST(Verify, IngestedPointsPlausibleAtEveryResolution) {
  const auto corpus = small_corpus(2000, 41);
  for (auto res : Resolution::all()) {
    const auto t = build(corpus, res);
    for (const auto& o : corpus) ASSERT_EQ(verify(t, o), Verdict::kPlausible);
  }
}

TEST(Verify, CoarserTablesAcceptMoreRandomQueries) {
  const auto corpus = small_corpus(5000, 51);
  const auto q = queries(corpus, 6000, 52);
  std::size_t previous = q.size() + 1;
  for (auto res : Resolution::all()) {
    const auto t = build(corpus, res);
    std::size_t accepted = 0;
    for (const auto& o : q) accepted += verify(t, o) == Verdict::kPlausible;
    EXPECT_LE(accepted, previous) << res.value();
    previous = accepted;
  }
}

}  // namespace
}  // namespace love
