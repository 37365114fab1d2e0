#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "love/amount_store.hpp"
#include "love/error.hpp"
#include "love/synthetic.hpp"
#include "oracles.hpp"

namespace love {
namespace {

using testing::group_by;
using testing::TempDir;

const Resolution kR4{4};

std::vector<AdsbObservation> corpus(std::size_t n, std::uint64_t seed = 11) {
  SyntheticConfig cfg;
  cfg.sensor_count = 60;
  cfg.target_observations = n;
  return generate_corpus(cfg, seed).observations();
}

AdsbObservation obs(const char* sensor, double lat, double lon) {
  return AdsbObservation{SensorId(sensor), {lat, lon}, {}, {}, {}, {}};
}

AmountTable random_table(std::size_t pairs, std::uint64_t seed, Resolution res = kR4) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> lat(35.0, 70.0);
  std::uniform_real_distribution<double> lon(-20.0, 40.0);
  std::uniform_int_distribution<int> sensor(0, 49);
  std::uniform_int_distribution<std::uint64_t> count(1, 1000);
  AmountTable t(res);
  while (t.pair_count() < pairs) {
    t.add(cell_of({lat(gen), lon(gen)}, res), "x" + std::to_string(sensor(gen)), count(gen));
  }
  return t;
}

TEST(Build, AggregatesSamePair) {
  const std::vector<AdsbObservation> o{obs("s", 50.0, 10.0), obs("s", 50.0001, 10.0001),
                                       obs("s", 50.0, 10.0)};
  const auto t = build(o, kR4);
  ASSERT_EQ(t.pair_count(), 1u);
  EXPECT_EQ(t.count(cell_of({50.0, 10.0}, kR4), "s"), 3u);
  EXPECT_EQ(stats(t), (TableStats{1, 3.0, 1}));
}

TEST(Build, EmptyInput) {
  const auto t = build({}, kR4);
  EXPECT_TRUE(t.empty());
  EXPECT_EQ(stats(t), (TableStats{0, 0.0, 0}));
}

TEST(Build, MatchesGroupByOracle) {
  const auto o = corpus(10'000);
  for (auto res : Resolution::all()) {
    const auto t = build(o, res);
    const auto oracle = group_by(o, res.value());
    ASSERT_EQ(t.pair_count(), oracle.size());
    const auto entries = t.sorted_entries();
    std::size_t i = 0;
    std::uint64_t sum = 0;
    for (const auto& [key, n] : oracle) {
      ASSERT_EQ(entries[i].cell.index(), key.first);
      ASSERT_EQ(entries[i].sensor, key.second);
      ASSERT_EQ(entries[i].count, n);
      sum += n;
      ++i;
    }
    // Conservation: every observation lands in exactly one pair.
    EXPECT_EQ(sum, o.size());
    EXPECT_EQ(t.total_messages(), o.size());
    EXPECT_EQ(t.sensor_count(), testing::distinct_sensors(o).size());
  }
}

TEST(Build, ThreadedEqualsSequential) {
  const auto o = corpus(70'000);
  const auto seq = build(o, kR4, 1);
  for (unsigned threads : {2u, 3u, 8u}) EXPECT_EQ(build(o, kR4, threads), seq) << threads;
}

TEST(Build, PairCountGrowsWithResolution) {
  const auto o = corpus(20'000);
  std::size_t previous = 0;
  for (auto res : Resolution::all()) {
    const auto n = build(o, res).pair_count();
    EXPECT_GE(n, previous) << res.value();
    previous = n;
  }
}

TEST(Table, RejectsBadInput) {
  AmountTable t(kR4);
  EXPECT_THROW(t.add(cell_of({50, 10}, Resolution(5)), "s"), DomainError);
  EXPECT_THROW(t.add(cell_of({50, 10}, kR4), "s", 0), DomainError);
  EXPECT_THROW(t.add(cell_of({50, 10}, kR4), "bad,id"), DomainError);
  EXPECT_THROW((void)t.contains(cell_of({50, 10}, Resolution(3)), "s"), DomainError);
}

TEST(Table, ContainsAndKnowsSensorMatchOracles) {
  const auto o = corpus(10'000);
  const auto t = build(o, kR4);
  const auto oracle = group_by(o, 4);
  for (const auto& [key, n] : oracle) {
    ASSERT_TRUE(t.contains(CellId{key.first}, key.second));
    ASSERT_EQ(t.count(CellId{key.first}, key.second), n);
  }
  const auto sensors = testing::distinct_sensors(o);
  for (const auto& s : sensors) {
    ASSERT_TRUE(t.knows_sensor(s));
  }
  EXPECT_FALSE(t.knows_sensor("never-seen"));
  // Cross every known sensor with every occupied cell: existence must agree
  // with the oracle and with count >= 1.
  std::set<std::uint64_t> cells;
  for (const auto& [key, n] : oracle) cells.insert(key.first);
  for (const auto& s : sensors) {
    for (auto c : cells) {
      const bool expect = oracle.contains({c, s});
      ASSERT_EQ(t.contains(CellId{c}, s), expect);
      ASSERT_EQ(t.count(CellId{c}, s) >= 1, expect);
    }
  }
}

TEST(Merge, IdentityAndCommutativity) {
  const auto a = random_table(500, 1);
  const auto b = random_table(300, 2);
  EXPECT_EQ(merge(a, AmountTable(kR4)), a);
  EXPECT_EQ(merge(AmountTable(kR4), a), a);
  EXPECT_EQ(merge(a, b), merge(b, a));
  EXPECT_EQ(merge(a, b).total_messages(), a.total_messages() + b.total_messages());
}

TEST(Merge, Associativity) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto a = random_table(50, seed * 3);
    const auto b = random_table(50, seed * 3 + 1);
    const auto c = random_table(50, seed * 3 + 2);
    ASSERT_EQ(merge(merge(a, b), c), merge(a, merge(b, c)));
  }
}

TEST(Merge, ShardedBuildEqualsSinglePass) {
  const auto o = corpus(10'000);
  const std::span<const AdsbObservation> all(o);
  const std::size_t q = o.size() / 4;
  AmountTable merged(kR4);
  for (int i = 0; i < 4; ++i) {
    const auto part = i < 3 ? all.subspan(i * q, q) : all.subspan(3 * q);
    merged = merge(merged, build(part, kR4));
  }
  EXPECT_EQ(merged, build(o, kR4));
}

TEST(Merge, ResolutionMismatch) {
  EXPECT_THROW(merge(AmountTable(kR4), AmountTable(Resolution(5))), DomainError);
}

TEST(Snapshot, EmptyRoundTrip) {
  const AmountTable t(Resolution(6));
  const auto back = deserialize(serialize(t));
  EXPECT_EQ(back, t);
  EXPECT_EQ(back.resolution().value(), 6);
}

TEST(Snapshot, SerializeLoadSerializeFixpoint) {
  const auto t = random_table(10'000, 99);
  const auto bytes = serialize(t);
  const auto back = deserialize(bytes);
  EXPECT_EQ(back, t);
  EXPECT_EQ(serialize(back), bytes);
  EXPECT_EQ(stats(back), stats(t));
}

TEST(Snapshot, LayoutIsBigEndianWithTrailingCrc) {
  AmountTable t(kR4);
  const auto cell = cell_of({53.55, 9.99}, kR4);
  t.add(cell, "ab", 258);
  const auto bytes = serialize(t);
  ASSERT_EQ(bytes.size(), 4u + 2 + 1 + 8 + (8 + 2 + 2 + 8) + 4);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "LOVE");
  EXPECT_EQ(bytes[4], 0);
  EXPECT_EQ(bytes[5], 1);
  EXPECT_EQ(bytes[6], 4);
  EXPECT_EQ(bytes[14], 1);  // entry count low byte
  std::uint64_t idx = 0;
  for (int i = 0; i < 8; ++i) idx = (idx << 8) | bytes[15 + i];
  EXPECT_EQ(idx, cell.index());
  EXPECT_EQ(bytes[23], 0);
  EXPECT_EQ(bytes[24], 2);
  EXPECT_EQ(bytes[25], 'a');
  EXPECT_EQ(bytes[26], 'b');
  EXPECT_EQ(bytes[33], 1);  // 258 = 0x0102
  EXPECT_EQ(bytes[34], 2);
  const auto body = std::span<const std::uint8_t>(bytes).first(bytes.size() - 4);
  const auto crc = crc32c(body);
  EXPECT_EQ(bytes[35], static_cast<std::uint8_t>(crc >> 24));
  EXPECT_EQ(bytes[38], static_cast<std::uint8_t>(crc));
}

TEST(Snapshot, Crc32cCheckValue) {
  const std::string check = "123456789";
  EXPECT_EQ(crc32c({reinterpret_cast<const std::uint8_t*>(check.data()), check.size()}),
            0xE3069283u);
}

TEST(Snapshot, EveryTruncationIsRejected) {
  const auto bytes = serialize(random_table(20, 5));
  for (std::size_t n = 0; n < bytes.size(); ++n) {
    const std::span<const std::uint8_t> cut(bytes.data(), n);
    EXPECT_THROW(deserialize(cut), Error) << n;
  }
  // Past the magic every truncation is an integrity failure.
  EXPECT_THROW(deserialize(std::span(bytes.data(), bytes.size() - 1)), IntegrityError);
  EXPECT_THROW(deserialize(std::span(bytes.data(), 10)), IntegrityError);
}

TEST(Snapshot, EveryFlippedByteIsRejected) {
  const auto bytes = serialize(random_table(5, 6));
  for (std::size_t i = 4; i < bytes.size(); ++i) {
    auto bad = bytes;
    bad[i] ^= 0x5A;
    EXPECT_THROW(deserialize(bad), IntegrityError) << i;
  }
}

TEST(Snapshot, BadMagicIsFormatError) {
  auto bytes = serialize(random_table(5, 7));
  bytes[0] = 'X';
  EXPECT_THROW(deserialize(bytes), FormatError);
}

std::vector<std::uint8_t> reseal(std::vector<std::uint8_t> bytes) {
  bytes.resize(bytes.size() - 4);
  const auto crc = crc32c(bytes);
  for (int shift = 24; shift >= 0; shift -= 8) bytes.push_back(static_cast<std::uint8_t>(crc >> shift));
  return bytes;
}

TEST(Snapshot, OtherVersionIsVersionError) {
  auto bytes = serialize(random_table(5, 8));
  bytes[5] = 2;
  const auto resealed = reseal(bytes);
  try {
    deserialize(resealed);
    FAIL();
  } catch (const VersionError& e) {
    EXPECT_EQ(e.found(), 2u);
  }
}

TEST(Snapshot, StructuralChecksAfterValidCrc) {
  AmountTable t(kR4);
  t.add(cell_of({50, 10}, kR4), "a", 1);
  t.add(cell_of({51, 10}, kR4), "b", 1);
  const auto good = serialize(t);

  auto zero_count = good;
  zero_count[33] = 0;  // low byte of the first count
  EXPECT_THROW(deserialize(reseal(zero_count)), IntegrityError);

  auto wrong_res = good;
  wrong_res[6] = 5;
  EXPECT_THROW(deserialize(reseal(wrong_res)), IntegrityError);

  auto extra = good;
  extra.insert(extra.end() - 4, 0);
  EXPECT_THROW(deserialize(reseal(extra)), IntegrityError);

  // Swap the two records so the sort order breaks.
  auto swapped = good;
  const std::size_t rec = 8 + 2 + 1 + 8;
  std::swap_ranges(swapped.begin() + 15, swapped.begin() + 15 + rec,
                   swapped.begin() + 15 + rec);
  EXPECT_THROW(deserialize(reseal(swapped)), IntegrityError);
}

TEST(Snapshot, SaveLoadFiles) {
  TempDir dir;
  const auto t = random_table(1000, 9);
  save(t, dir / "t.love");
  EXPECT_EQ(load(dir / "t.love"), t);
  EXPECT_THROW(load(dir / "missing.love"), IoError);
  EXPECT_THROW(save(t, dir / "no" / "such" / "dir.love"), IoError);

  std::filesystem::resize_file(dir / "t.love", 100);
  EXPECT_THROW(load(dir / "t.love"), IntegrityError);
}

TEST(Snapshot, RebuildIsByteIdentical) {
  const auto o = corpus(10'000);
  EXPECT_EQ(serialize(build(o, kR4, 1)), serialize(build(o, kR4, 4)));
}

TEST(ExportCsv, SortedByCellThenSensor) {
  AmountTable t(kR4);
  const auto c1 = cell_of({50, 10}, kR4);
  const auto c2 = cell_of({20, 10}, kR4);
  t.add(c1, "b", 2);
  t.add(c1, "a", 1);
  t.add(c2, "z", 7);
  std::ostringstream out;
  export_csv(t, out);
  const auto [lo, hi] = std::minmax(c1, c2);
  std::string expected = "h3id,sensor,amount\n";
  if (lo == c1) {
    expected += c1.to_string() + ",a,1\n" + c1.to_string() + ",b,2\n" + c2.to_string() + ",z,7\n";
  } else {
    expected += c2.to_string() + ",z,7\n" + c1.to_string() + ",a,1\n" + c1.to_string() + ",b,2\n";
  }
  EXPECT_EQ(out.str(), expected);
  EXPECT_NE(hi, lo);
}

}  // namespace
}  // namespace love
