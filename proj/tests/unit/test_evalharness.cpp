#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <set>

#include <json.hpp>

#include "love/attackgen.hpp"
#include "love/error.hpp"
#include "love/evalharness.hpp"
#include "love/ingest.hpp"
#include "love/synthetic.hpp"
#include "oracles.hpp"

namespace love {
namespace {

using testing::fixture;
using testing::TempDir;

const Resolution kR4{4};

AdsbObservation obs(const std::string& sensor, double lat, double lon) {
  return AdsbObservation{SensorId(sensor), {lat, lon}, {}, {}, {}, {}};
}

LabeledObservation labeled(const std::string& sensor, double lat, double lon, bool legit) {
  return {obs(sensor, lat, lon), legit};
}

TEST(Policy, Names) {
  for (auto p : {UnknownSensorPolicy::kImplausible, UnknownSensorPolicy::kPlausible,
                 UnknownSensorPolicy::kSeparate}) {
    EXPECT_EQ(parse_policy(to_string(p)), p);
  }
  EXPECT_FALSE(parse_policy("Separate"));
}

TEST(Rates, Formulas) {
  const ConfusionCounts c{.tp = 90, .tn = 880, .fp = 20, .fn = 10};
  const auto r = rates(c);
  EXPECT_DOUBLE_EQ(r.fpr, 20.0 / 900.0);
  EXPECT_DOUBLE_EQ(r.fnr, 10.0 / 100.0);
  EXPECT_DOUBLE_EQ(r.accuracy, 970.0 / 1000.0);
  const auto zero = rates({});
  EXPECT_EQ(zero.fpr, 0.0);
  EXPECT_EQ(zero.fnr, 0.0);
  EXPECT_EQ(zero.accuracy, 0.0);
  const auto legit_only = rates({.tp = 0, .tn = 5, .fp = 0, .fn = 0});
  EXPECT_EQ(legit_only.fnr, 0.0);
  EXPECT_EQ(legit_only.accuracy, 1.0);
}

TEST(Tally, PositiveClassIsAttackDetected) {
  ConfusionCounts c;
  tally(c, Verdict::kPlausible, true, UnknownSensorPolicy::kSeparate);
  tally(c, Verdict::kImplausible, true, UnknownSensorPolicy::kSeparate);
  tally(c, Verdict::kImplausible, false, UnknownSensorPolicy::kSeparate);
  tally(c, Verdict::kPlausible, false, UnknownSensorPolicy::kSeparate);
  EXPECT_EQ(c, (ConfusionCounts{.tp = 1, .tn = 1, .fp = 1, .fn = 1}));
}

TEST(Tally, UnknownSensorUnderEachPolicy) {
  ConfusionCounts a, b, c;
  EXPECT_TRUE(tally(a, Verdict::kUnknownSensor, false, UnknownSensorPolicy::kImplausible));
  EXPECT_TRUE(tally(a, Verdict::kUnknownSensor, true, UnknownSensorPolicy::kImplausible));
  EXPECT_EQ(a, (ConfusionCounts{.tp = 1, .tn = 0, .fp = 1, .fn = 0}));
  EXPECT_TRUE(tally(b, Verdict::kUnknownSensor, false, UnknownSensorPolicy::kPlausible));
  EXPECT_TRUE(tally(b, Verdict::kUnknownSensor, true, UnknownSensorPolicy::kPlausible));
  EXPECT_EQ(b, (ConfusionCounts{.tp = 0, .tn = 1, .fp = 0, .fn = 1}));
  EXPECT_FALSE(tally(c, Verdict::kUnknownSensor, false, UnknownSensorPolicy::kSeparate));
  EXPECT_EQ(c.total(), 0u);
}

TEST(Evaluate, PerfectVerifier) {
  const auto table = build(std::vector{obs("s1", 50, 10), obs("s2", 40, 0)}, kR4);
  const std::vector<LabeledObservation> test{
      labeled("s1", 50, 10, true), labeled("s2", 40, 0, true), labeled("s1", 40, 0, false),
      labeled("s2", 50, 10, false)};
  const auto r = evaluate(table, test);
  EXPECT_EQ(r.counts, (ConfusionCounts{.tp = 2, .tn = 2, .fp = 0, .fn = 0}));
  EXPECT_EQ(r.accuracy, 1.0);
  EXPECT_EQ(r.fpr, 0.0);
  EXPECT_EQ(r.fnr, 0.0);
  EXPECT_EQ(r.resolution, kR4);
  EXPECT_EQ(r.table_stats, stats(table));
}

TEST(Evaluate, FullyCoveredLegitCorpus) {
  std::vector<AdsbObservation> corpus;
  std::vector<LabeledObservation> test;
  for (int i = 0; i < 50; ++i) {
    corpus.push_back(obs("s" + std::to_string(i % 5), 45 + i * 0.2, 5 + i * 0.1));
    test.push_back({corpus.back(), true});
  }
  const auto r = evaluate(build(corpus, kR4), test);
  EXPECT_EQ(r.counts.tn, 50u);
  EXPECT_EQ(r.fpr, 0.0);
  EXPECT_EQ(r.fnr, 0.0);
  EXPECT_EQ(r.accuracy, 1.0);
}

TEST(Evaluate, Errors) {
  const auto table = build(std::vector{obs("s1", 50, 10)}, kR4);
  EXPECT_THROW(evaluate(table, {}), DomainError);
  auto bad = labeled("s1", 50, 10, true);
  bad.obs.coord.lat = 100;
  EXPECT_THROW(evaluate(table, std::vector{bad}), DomainError);
}

struct Scenario {
  std::vector<AdsbObservation> train;
  std::vector<LabeledObservation> test;
};

Scenario scenario(std::uint64_t seed) {
  SyntheticConfig cfg;
  cfg.sensor_count = 60;
  cfg.target_observations = 8000;
  const auto all = generate_corpus(cfg, seed).observations();
  auto [train, held] = split_holdout(all, 0.1, seed + 1);
  Scenario s{std::move(train), {}};
  for (auto& o : held) s.test.push_back({std::move(o), true});
  for (auto& o : gen_spoofed(compute_envelopes(s.train), 2000, seed + 2).observations) {
    s.test.push_back(std::move(o));
  }
  for (int i = 0; i < 40; ++i) s.test.push_back(labeled("intruder", 50, 10 + i * 0.1, i % 2 == 0));
  return s;
}

TEST(Evaluate, CountsMatchRawRecount) {
  const auto s = scenario(100);
  for (auto res : Resolution::all()) {
    const auto table = build(s.train, res);
    for (auto policy : {UnknownSensorPolicy::kImplausible, UnknownSensorPolicy::kPlausible,
                        UnknownSensorPolicy::kSeparate}) {
      const auto r = evaluate(table, s.test, {policy, {}, 2});
      // Independent recount from the corpus scan and labels.
      ConfusionCounts c;
      std::uint64_t unknown = 0;
      for (const auto& t : s.test) {
        const auto v = testing::scan_verdict(s.train, res.value(), t.obs);
        if (v == Verdict::kUnknownSensor) {
          ++unknown;
          if (policy == UnknownSensorPolicy::kSeparate) continue;
        }
        const bool passed = v == Verdict::kPlausible ||
                            (v == Verdict::kUnknownSensor && policy == UnknownSensorPolicy::kPlausible);
        if (t.label) {
          ++(passed ? c.tn : c.fp);
        } else {
          ++(passed ? c.fn : c.tp);
        }
      }
      ASSERT_EQ(r.counts, c) << res.value() << " " << to_string(policy);
      EXPECT_EQ(r.unknown_sensor_count, unknown);
      EXPECT_EQ(unknown, 40u);
      // Conservation of the test-set size.
      EXPECT_EQ(r.counts.total() + (policy == UnknownSensorPolicy::kSeparate ? unknown : 0),
                s.test.size());
      EXPECT_DOUBLE_EQ(r.fpr, c.fp + c.tn ? double(c.fp) / double(c.fp + c.tn) : 0.0);
      EXPECT_DOUBLE_EQ(r.fnr, c.fn + c.tp ? double(c.fn) / double(c.fn + c.tp) : 0.0);
      EXPECT_DOUBLE_EQ(r.accuracy, double(c.tp + c.tn) / double(c.total()));
      EXPECT_EQ(r.policy, policy);
    }
  }
}

TEST(Sweep, OneReportPerResolutionAscending) {
  const auto s = scenario(200);
  const std::vector<Resolution> one{kR4};
  EXPECT_EQ(sweep_resolutions(s.train, s.test, one).reports.size(), 1u);

  const std::vector<Resolution> all{Resolution(7), Resolution(2), Resolution(5), Resolution(3),
                                    Resolution(6), Resolution(4), Resolution(4)};
  const auto sweep = sweep_resolutions(s.train, s.test, all);
  ASSERT_EQ(sweep.reports.size(), 6u);
  EXPECT_TRUE(sweep.failures.empty());
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(sweep.reports[i].resolution.value(), static_cast<int>(i) + 2);
    EXPECT_GE(sweep.reports[i].table_stats.pair_count, pairs);
    pairs = sweep.reports[i].table_stats.pair_count;
  }
  const auto rel = relative_times(sweep.reports);
  ASSERT_EQ(rel.size(), 6u);
  EXPECT_EQ(*std::max_element(rel.begin(), rel.end()), 1.0);
  for (double x : rel) {
    EXPECT_GT(x, 0.0);
    EXPECT_LE(x, 1.0);
  }
}

TEST(Sweep, FailuresAreRecordedNotFatal) {
  const auto s = scenario(300);
  const std::vector<Resolution> two{Resolution(3), Resolution(4)};
  const auto sweep = sweep_resolutions(s.train, {}, two);
  EXPECT_TRUE(sweep.reports.empty());
  ASSERT_EQ(sweep.failures.size(), 2u);
  EXPECT_EQ(sweep.failures[0].resolution.value(), 3);
}

TEST(RelativeTimes, Normalization) {
  std::vector<EvalReport> r(3);
  r[0].wall_seconds = 1.0;
  r[1].wall_seconds = 4.0;
  r[2].wall_seconds = 2.0;
  EXPECT_EQ(relative_times(r), (std::vector<double>{0.25, 1.0, 0.5}));
}

// ---- duplicates ---------------------------------------------------------------

TEST(CanonicalTuple, Rendering) {
  AdsbObservation o = obs("s", 50.0, 10.0);
  o.altitude_ft = 35000;
  o.heading_deg = 90;
  o.speed_kt = 420;
  EXPECT_EQ(canonical_tuple(o), "35000.0|90.0|50.000000|10.000000|420.0");
  EXPECT_EQ(canonical_tuple(obs("s", 0.0, -0.0000001)), "~|~|0.000000|0.000000|~");
  // Sensor and time are not part of the tuple.
  AdsbObservation p = o;
  p.sensor = SensorId("other");
  p.timestamp = 5;
  EXPECT_EQ(canonical_tuple(p), canonical_tuple(o));
}

TEST(CanonicalTuple, HashMatchesReferenceXxh3) {
  // Values from the Python xxhash package.
  AdsbObservation o = obs("s", 50.0, 10.0);
  o.altitude_ft = 35000;
  o.heading_deg = 90;
  o.speed_kt = 420;
  EXPECT_EQ(tuple_hash(o), (Hash128{0x2b0157db3a081858ULL, 0x46eeef1ecd1ee74aULL}));
  EXPECT_EQ(tuple_hash(obs("s", 0, 0)), (Hash128{0xd550a9713c9a94e2ULL, 0xc6fc630ce1f2e7beULL}));
}

TEST(DuplicateStats, NoRepeats) {
  const auto r = parse_csv_file(fixture("dialect_b_10.csv"), Dialect::kPerFlight);
  const auto d = duplicate_stats(r.observations);
  EXPECT_EQ(d.total_messages, 10u);
  EXPECT_EQ(d.duplicate_messages, 0u);
  EXPECT_EQ(d.duplicate_rate, 0.0);
  EXPECT_EQ(duplicate_stats({}).duplicate_rate, 0.0);
}

TEST(DuplicateStats, EighteenInAThousand) {
  const auto r = parse_csv_file(fixture("duplicates_1000.csv"), Dialect::kPerFlight);
  const auto d = duplicate_stats(r.observations);
  EXPECT_EQ(d.total_messages, 1000u);
  EXPECT_EQ(d.duplicate_messages, 18u);
  EXPECT_EQ(d.duplicate_rate, 0.018);
  EXPECT_EQ(d.hash_collisions, 0u);
}

TEST(DuplicateStats, AgreesWithExactTupleOracle) {
  const auto r = parse_csv_file(fixture("duplicates_10000.csv"), Dialect::kPerFlight);
  std::set<std::string> seen;
  std::uint64_t repeats = 0;
  for (const auto& o : r.observations) repeats += !seen.insert(canonical_tuple(o)).second;
  const auto d = duplicate_stats(r.observations);
  EXPECT_EQ(d.duplicate_messages, repeats);
  EXPECT_EQ(d.hash_collisions, 0u);
  EXPECT_EQ(d.duplicate_rate, 0.0018);
}

TEST(DuplicateStats, AbsentFieldsAreDistinctFromZero) {
  AdsbObservation a = obs("s", 50, 10);
  AdsbObservation b = a;
  b.altitude_ft = 0.0;
  EXPECT_EQ(duplicate_stats(std::vector{a, b}).duplicate_messages, 0u);
  EXPECT_EQ(duplicate_stats(std::vector{a, a}).duplicate_messages, 1u);
}

// ---- JSON ---------------------------------------------------------------------

EvalReport sample_report(int res) {
  EvalReport r;
  r.resolution = Resolution(res);
  r.counts = {.tp = 10, .tn = 20, .fp = 1, .fn = 2};
  const auto x = rates(r.counts);
  r.fpr = x.fpr;
  r.fnr = x.fnr;
  r.accuracy = x.accuracy;
  r.wall_seconds = 0.001234 * res;
  r.throughput_per_sec = 33.0 / r.wall_seconds;
  r.table_stats = {1000u + static_cast<std::size_t>(res), 3.25, 17};
  r.unknown_sensor_count = 4;
  r.policy = UnknownSensorPolicy::kSeparate;
  return r;
}

TEST(Json, RoundTripFieldForField) {
  std::vector<EvalReport> reports;
  for (int res = 2; res <= 7; ++res) reports.push_back(sample_report(res));
  const auto text = report_to_json(reports, "synthetic");
  const auto doc = parse_report_json(text);
  EXPECT_EQ(doc.dataset, "synthetic");
  EXPECT_EQ(doc.reports, reports);
  EXPECT_EQ(report_to_json(doc.reports, doc.dataset), text);
}

TEST(Json, KeysAndOrder) {
  const auto doc = nlohmann::ordered_json::parse(report_to_json(std::vector{sample_report(4)}));
  EXPECT_EQ(doc.at("love_report_version"), 1);
  EXPECT_FALSE(doc.contains("dataset"));
  const std::vector<std::string> expected{
      "resolution", "tp",  "tn",       "fp",           "fn",
      "fpr",        "fnr", "accuracy", "wall_seconds", "throughput_per_sec",
      "pair_count", "avg_msgs_per_pair", "sensor_count", "unknown_sensor_count", "policy"};
  std::vector<std::string> keys;
  for (const auto& [k, _] : doc.at("reports").at(0).items()) keys.push_back(k);
  EXPECT_EQ(keys, expected);
  EXPECT_EQ(doc.at("reports").at(0).at("policy"), "separate");
}

TEST(Json, RejectsBadDocuments) {
  const auto good = report_to_json(std::vector{sample_report(4)});
  EXPECT_THROW(parse_report_json("not json"), FormatError);
  EXPECT_THROW(parse_report_json("[]"), FormatError);
  EXPECT_THROW(parse_report_json(R"({"reports": []})"), FormatError);
  EXPECT_THROW(parse_report_json(R"({"love_report_version": 2, "reports": []})"), FormatError);
  auto drop = [&](const std::string& key) {
    std::string t = good;
    const auto pos = t.find("\"" + key + "\"");
    const auto end = t.find('\n', pos);
    t.erase(pos, end - pos + 1);
    return t;
  };
  EXPECT_THROW(parse_report_json(drop("fnr")), FormatError);
  auto replace = [&](const std::string& from, const std::string& to) {
    std::string t = good;
    t.replace(t.find(from), from.size(), to);
    return t;
  };
  EXPECT_THROW(parse_report_json(replace("\"separate\"", "\"sometimes\"")), FormatError);
  EXPECT_THROW(parse_report_json(replace("\"resolution\": 4", "\"resolution\": 9")), FormatError);
  EXPECT_THROW(parse_report_json(replace("\"tp\": 10", "\"tp\": -1")), FormatError);
  EXPECT_NO_THROW(parse_report_json(good));
}

TEST(Json, EmitAndRead) {
  TempDir dir;
  const std::vector<EvalReport> reports{sample_report(3), sample_report(4)};
  emit_report(reports, dir / "r.json", "ds");
  const auto doc = read_report(dir / "r.json");
  EXPECT_EQ(doc.reports, reports);
  EXPECT_EQ(doc.dataset, "ds");
  EXPECT_THROW(emit_report({}, dir / "e.json"), DomainError);
  EXPECT_THROW(emit_report(reports, dir / "missing" / "r.json"), IoError);
  EXPECT_THROW(read_report(dir / "nope.json"), IoError);
}

TEST(ReportTable, OneRowPerReport) {
  const std::vector<EvalReport> reports{sample_report(2), sample_report(7)};
  const auto table = format_report_table(reports);
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 3);
  EXPECT_NE(table.find("98825150"), std::string::npos);
  EXPECT_NE(table.find("86801.78"), std::string::npos);
}

}  // namespace
}  // namespace love
