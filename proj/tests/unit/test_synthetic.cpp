#include <gtest/gtest.h>

#include "love/error.hpp"
#include "love/synthetic.hpp"

namespace love {
namespace {

SyntheticConfig small() {
  SyntheticConfig cfg;
  cfg.sensor_count = 40;
  cfg.target_observations = 5000;
  return cfg;
}

TEST(Synthetic, HitsTargetExactly) {
  for (std::size_t target : {1u, 17u, 5000u, 12345u}) {
    auto cfg = small();
    cfg.target_observations = target;
    const auto c = generate_corpus(cfg, 3);
    EXPECT_EQ(c.observation_count(), target);
    EXPECT_EQ(c.observations().size(), target);
  }
}

TEST(Synthetic, SameSeedSameCorpus) {
  const auto a = generate_corpus(small(), 42);
  const auto b = generate_corpus(small(), 42);
  const auto c = generate_corpus(small(), 43);
  ASSERT_EQ(a.messages.size(), b.messages.size());
  for (std::size_t i = 0; i < a.messages.size(); ++i) {
    ASSERT_EQ(a.messages[i].coord, b.messages[i].coord);
    ASSERT_EQ(a.messages[i].receivers, b.messages[i].receivers);
    ASSERT_EQ(a.messages[i].timestamp, b.messages[i].timestamp);
  }
  EXPECT_FALSE(a.messages[0].coord == c.messages[0].coord);
}

TEST(Synthetic, GeometryInvariants) {
  const auto cfg = small();
  const auto c = generate_corpus(cfg, 5);
  ASSERT_EQ(c.sensors.size(), cfg.sensor_count);
  EXPECT_EQ(c.sensors[0].id.str(), "s00000");
  EXPECT_EQ(c.sensors[39].id.str(), "s00039");
  for (const auto& s : c.sensors) {
    EXPECT_TRUE(cfg.region.contains(s.site));
    EXPECT_GE(s.range_km, cfg.min_range_km);
    EXPECT_LE(s.range_km, cfg.max_range_km);
  }
  for (const auto& m : c.messages) {
    ASSERT_FALSE(m.receivers.empty());
    ASSERT_TRUE(is_valid(m.coord));
    for (auto r : m.receivers) {
      ASSERT_LE(great_circle_km(c.sensors[r].site, m.coord), c.sensors[r].range_km);
    }
    ASSERT_GE(m.timestamp, cfg.start_time);
    ASSERT_LE(m.timestamp, cfg.start_time + cfg.duration_s);
    ASSERT_GE(m.heading_deg, 0.0);
    ASSERT_LT(m.heading_deg, 360.05);
  }
}

TEST(Synthetic, RecordsExpandToObservations) {
  const auto c = generate_corpus(small(), 6);
  const auto recs = c.records();
  const auto obs = c.observations();
  std::size_t k = 0;
  for (const auto& r : recs) {
    for (const auto& s : r.sensors) {
      ASSERT_EQ(obs[k].sensor, s);
      ASSERT_EQ(obs[k].coord, r.coord);
      ++k;
    }
  }
  EXPECT_EQ(k, obs.size());
}

TEST(Synthetic, RejectsBadConfig) {
  auto cfg = small();
  cfg.sensor_count = 0;
  EXPECT_THROW(generate_corpus(cfg, 1), DomainError);
  cfg = small();
  cfg.reception_probability = 0.0;
  EXPECT_THROW(generate_corpus(cfg, 1), DomainError);
  cfg = small();
  cfg.min_range_km = 500;
  cfg.max_range_km = 100;
  EXPECT_THROW(generate_corpus(cfg, 1), DomainError);
}

TEST(Holdout, SplitIsPartitionAndSeeded) {
  const auto obs = generate_corpus(small(), 7).observations();
  const auto [train, test] = split_holdout(obs, 0.1, 9);
  EXPECT_EQ(train.size() + test.size(), obs.size());
  EXPECT_NEAR(static_cast<double>(test.size()) / static_cast<double>(obs.size()), 0.1, 0.02);
  const auto again = split_holdout(obs, 0.1, 9);
  ASSERT_EQ(again.second.size(), test.size());
  for (std::size_t i = 0; i < test.size(); ++i) EXPECT_EQ(again.second[i].coord, test[i].coord);
  EXPECT_TRUE(split_holdout(obs, 0.0, 1).second.empty());
  EXPECT_TRUE(split_holdout(obs, 1.0, 1).first.empty());
  EXPECT_THROW(split_holdout(obs, 1.5, 1), DomainError);
}

}  // namespace
}  // namespace love
