#include <gtest/gtest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "love/love.hpp"
#include "oracles.hpp"

namespace love::cli {
namespace {

using love::testing::fixture;
using love::testing::TempDir;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun love(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<int> values(const std::vector<Resolution>& rs) {
  std::vector<int> v;
  for (auto r : rs) v.push_back(r.value());
  return v;
}

nlohmann::ordered_json without_timing(nlohmann::ordered_json doc) {
  for (auto& r : doc["reports"]) {
    r.erase("wall_seconds");
    r.erase("throughput_per_sec");
  }
  return doc;
}

TEST(ResolutionSet, Forms) {
  EXPECT_EQ(values(parse_resolution_set("4")), (std::vector<int>{4}));
  EXPECT_EQ(values(parse_resolution_set("2-7")), (std::vector<int>{2, 3, 4, 5, 6, 7}));
  EXPECT_EQ(values(parse_resolution_set("7,2,4,4")), (std::vector<int>{2, 4, 7}));
  EXPECT_EQ(values(parse_resolution_set("2-3,6")), (std::vector<int>{2, 3, 6}));
  for (const char* bad : {"", "1", "8", "x", "4-", "5-3", "2,,3", " 4"}) {
    EXPECT_THROW(parse_resolution_set(bad), DomainError) << bad;
  }
}

TEST(SnapshotPath, Naming) {
  EXPECT_EQ(snapshot_path("t.bin", Resolution(4), false), "t.bin");
  EXPECT_EQ(snapshot_path("t.bin", Resolution(4), true), "t.r4.bin");
  EXPECT_EQ(snapshot_path("out/t_{res}.bin", Resolution(6), true), "out/t_6.bin");
  EXPECT_EQ(snapshot_path("table", Resolution(2), true), "table.r2");
}

TEST(Cli, HelpListsDefaults) {
  const auto eval = love({"eval", "--help"});
  EXPECT_EQ(eval.code, kOk);
  for (const char* needle : {"--res", "--unknown-sensor-as", "--policy", "separate", "--min-count",
                             "--lat-min", "30", "--lat-max", "75", "--lon-min", "-25",
                             "--lon-max", "45", "LOVE_THREADS", "--dialect"}) {
    EXPECT_NE(eval.out.find(needle), std::string::npos) << needle;
  }
  const auto build = love({"build", "--help"});
  EXPECT_NE(build.out.find("--csv-export"), std::string::npos);
  EXPECT_NE(build.out.find("--res"), std::string::npos);
  const auto top = love({"--help"});
  for (const char* sub : {"build", "verify", "attack-gen", "eval", "report", "synth"}) {
    EXPECT_NE(top.out.find(sub), std::string::npos) << sub;
  }
  EXPECT_EQ(love({"--version"}).out, "love 0.1.0\n");
}

TEST(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(love({}).code, kUsage);
  EXPECT_EQ(love({"frobnicate"}).code, kUsage);
  EXPECT_EQ(love({"build", fixture("dialect_b_10.csv").string()}).code, kUsage);  // no -o
  EXPECT_EQ(love({"build", "/nonexistent.csv", "-o", "x.bin"}).code, kUsage);
  TempDir tmp;
  EXPECT_EQ(love({"build", fixture("dialect_b_10.csv").string(), "--dialect", "b", "--res", "9",
                  "-o", (tmp / "t.bin").string()})
                .code,
            kUsage);
  EXPECT_EQ(love({"attack-gen", "--mode", "spoof", "--seed", "1"}).code, kUsage);  // no corpus
}

TEST(Cli, BuildAllResolutionsAndRebuildIsIdentical) {
  TempDir tmp;
  const auto corpus = fixture("dialect_a_100.csv").string();
  const auto r = love({"build", corpus, "--res", "2-7", "-o", (tmp / "t.bin").string(),
                       "--csv-export", (tmp / "t.csv").string()});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.err.find("100 rows, 0 malformed"), std::string::npos) << r.err;
  for (int res = 2; res <= 7; ++res) {
    const auto bin = tmp / ("t.r" + std::to_string(res) + ".bin");
    ASSERT_TRUE(std::filesystem::exists(bin));
    EXPECT_TRUE(std::filesystem::exists(tmp / ("t.r" + std::to_string(res) + ".csv")));
    EXPECT_EQ(load(bin).resolution().value(), res);
  }
  // Seven lines: header plus one row per resolution.
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 7);

  const auto first = slurp(tmp / "t.r4.bin");
  ASSERT_EQ(love({"build", corpus, "--res", "4", "-o", (tmp / "again.bin").string()}).code, kOk);
  EXPECT_EQ(slurp(tmp / "again.bin"), first);
}

TEST(Cli, VerifyMatchesLibraryInOrder) {
  TempDir tmp;
  const auto corpus = fixture("dialect_a_100.csv").string();
  ASSERT_EQ(love({"build", corpus, "--res", "3", "-o", (tmp / "t.bin").string()}).code, kOk);

  const auto query = fixture("dialect_b_10.csv").string();
  const auto r = love({"verify", query, "-t", (tmp / "t.bin").string(), "--dialect", "b"});
  ASSERT_EQ(r.code, kOk) << r.err;

  const auto table = load(tmp / "t.bin");
  const auto obs = parse_csv_file(query, Dialect::kPerFlight).observations;
  const auto expected = verify_batch(table, obs);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "sensor,lat,lon,verdict");
  for (std::size_t i = 0; i < obs.size(); ++i) {
    ASSERT_TRUE(std::getline(lines, line));
    std::vector<std::string> fields;
    ASSERT_TRUE(csv::split_record(line, fields));
    ASSERT_EQ(fields.size(), 4u);
    EXPECT_EQ(fields[0], obs[i].sensor.str());
    EXPECT_EQ(fields[3], to_string(*expected.verdicts[i]));
  }
  EXPECT_FALSE(std::getline(lines, line));
}

TEST(Cli, CorruptSnapshotExitsThree) {
  TempDir tmp;
  const auto snap = tmp / "t.bin";
  ASSERT_EQ(love({"build", fixture("dialect_a_100.csv").string(), "-o", snap.string()}).code, kOk);
  auto bytes = slurp(snap);
  bytes[bytes.size() / 2] ^= 0x01;
  std::ofstream(snap, std::ios::binary | std::ios::trunc) << bytes;
  const auto r = love({"verify", fixture("dialect_b_10.csv").string(), "--dialect", "b", "-t",
                       snap.string()});
  EXPECT_EQ(r.code, kIntegrity);
  EXPECT_NE(r.err.find("error:"), std::string::npos);
}

TEST(Cli, FormatErrorsExitTwo) {
  TempDir tmp;
  const auto junk = tmp / "junk.bin";
  std::ofstream(junk, std::ios::binary) << "definitely not a snapshot";
  EXPECT_EQ(love({"verify", fixture("dialect_b_10.csv").string(), "--dialect", "b", "-t",
                  junk.string()})
                .code,
            kFormat);
  const auto headerless = tmp / "h.csv";
  std::ofstream(headerless) << "x,y\n1,2\n";
  EXPECT_EQ(love({"build", headerless.string(), "--dialect", "b", "-o",
                  (tmp / "t.bin").string()})
                .code,
            kFormat);
  const auto bad_json = tmp / "r.json";
  std::ofstream(bad_json) << "[1,2";
  EXPECT_EQ(love({"report", bad_json.string()}).code, kFormat);
}

TEST(Cli, AttackGenSpoof) {
  TempDir tmp;
  const auto out = tmp / "spoof.csv";
  const auto r = love({"attack-gen", "--mode", "spoof", "--corpus",
                       fixture("dialect_a_100.csv").string(), "--n", "100", "--seed", "42", "-o",
                       out.string()});
  ASSERT_EQ(r.code, kOk) << r.err;
  std::ifstream in(out);
  const auto parsed = parse_labeled_csv(in);
  ASSERT_EQ(parsed.observations.size(), 100u);
  for (const auto& o : parsed.observations) EXPECT_FALSE(o.label);

  const auto again = love({"attack-gen", "--mode", "spoof", "--corpus",
                           fixture("dialect_a_100.csv").string(), "--n", "100", "--seed", "42"});
  EXPECT_EQ(again.out, slurp(out));
}

TEST(Cli, AttackGenGhostAndFlood) {
  const auto ghost = love({"attack-gen", "--mode", "ghost", "--seed", "3", "--steps", "25"});
  ASSERT_EQ(ghost.code, kOk) << ghost.err;
  std::istringstream gin(ghost.out);
  EXPECT_EQ(parse_labeled_csv(gin).observations.size(), 25u);

  const auto flood = love({"attack-gen", "--mode", "flood", "--sensor", "S005", "--corpus",
                           fixture("dialect_a_100.csv").string(), "--seed", "3", "-n", "40"});
  ASSERT_EQ(flood.code, kOk) << flood.err;
  std::istringstream fin(flood.out);
  const auto rows = parse_labeled_csv(fin).observations;
  ASSERT_EQ(rows.size(), 40u);
  for (const auto& o : rows) EXPECT_EQ(o.obs.sensor.str(), "S005");

  EXPECT_EQ(love({"attack-gen", "--mode", "flood", "--sensor", "nobody", "--corpus",
                  fixture("dialect_a_100.csv").string(), "--seed", "3"})
                .code,
            kUsage);
}

class CliPipeline : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto s = love({"synth", "--seed", "11", "--sensors", "30", "--observations", "6000",
                         "--dialect", "b", "--holdout", "0.1", "--holdout-out", legit(), "-o",
                         corpus()});
    ASSERT_EQ(s.code, kOk) << s.err;
    ASSERT_NE(s.out.find("sensors 30"), std::string::npos) << s.out;
    const auto a = love({"attack-gen", "--mode", "spoof", "--corpus", corpus(), "--dialect", "b",
                         "--n", "500", "--seed", "42", "-o", spoof()});
    ASSERT_EQ(a.code, kOk) << a.err;
  }

  std::string corpus() const { return (tmp_ / "train.csv").string(); }
  std::string legit() const { return (tmp_ / "legit.csv").string(); }
  std::string spoof() const { return (tmp_ / "spoof.csv").string(); }
  std::string path(const std::string& name) const { return (tmp_ / name).string(); }

  CliRun eval(const std::string& out) const {
    return love({"eval", "--corpus", corpus(), "--dialect", "b", "--test", legit(), "--test",
                 spoof(), "--res", "2-7", "-o", out, "--dataset", "synthetic-11", "--threads",
                 "2"});
  }

  TempDir tmp_;
};

TEST_F(CliPipeline, EvalSixResolutionsDeterministic) {
  const auto first = eval(path("r1.json"));
  ASSERT_EQ(first.code, kOk) << first.err;
  const auto second = eval(path("r2.json"));
  ASSERT_EQ(second.code, kOk) << second.err;

  const auto d1 = nlohmann::ordered_json::parse(slurp(path("r1.json")));
  const auto d2 = nlohmann::ordered_json::parse(slurp(path("r2.json")));
  ASSERT_EQ(d1["reports"].size(), 6u);
  EXPECT_EQ(d1["dataset"], "synthetic-11");
  for (int i = 0; i < 6; ++i) {
    EXPECT_EQ(d1["reports"][i]["resolution"], i + 2);
    EXPECT_EQ(d1["reports"][i]["policy"], "separate");
  }
  EXPECT_EQ(without_timing(d1), without_timing(d2));
  EXPECT_NE(first.out.find("fpr"), std::string::npos);
}

TEST_F(CliPipeline, ReportPrintsTable) {
  ASSERT_EQ(eval(path("r.json")).code, kOk);
  const auto r = love({"report", path("r.json")});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(r.out.rfind("dataset: synthetic-11\n", 0), 0u);
  const auto doc = read_report(path("r.json"));
  EXPECT_NE(r.out.find(format_report_table(doc.reports)), std::string::npos);
}

TEST_F(CliPipeline, PolicyFlagChangesScoring) {
  const auto intruder = path("intruder.csv");
  std::ofstream(intruder) << "sensor,lat,lon,label\nintruder,50.0,10.0,0\n";
  const auto run_policy = [&](const std::string& policy) {
    const auto out = path("p_" + policy + ".json");
    const auto r = love({"eval", "--corpus", corpus(), "--dialect", "b", "--test", legit(),
                         "--test", intruder, "--policy", policy, "-o", out});
    EXPECT_EQ(r.code, kOk) << r.err;
    return read_report(out).reports.at(0);
  };
  const auto sep = run_policy("separate");
  const auto imp = run_policy("implausible");
  const auto pla = run_policy("plausible");
  EXPECT_EQ(sep.unknown_sensor_count, 1u);
  EXPECT_EQ(imp.counts.tp, sep.counts.tp + 1);
  EXPECT_EQ(pla.counts.fn, sep.counts.fn + 1);
}

TEST_F(CliPipeline, EvalReportsVerifyFailures) {
  // The only row is rejected as malformed, leaving nothing to evaluate.
  const auto bad = path("bad.csv");
  std::ofstream(bad) << "sensor,lat,lon,label\ns00001,95.0,10.0,1\n";
  const auto r = love({"eval", "--corpus", corpus(), "--dialect", "b", "--test", bad});
  EXPECT_NE(r.code, kOk);
}

}  // namespace
}  // namespace love::cli
