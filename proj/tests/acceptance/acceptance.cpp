// Acceptance run: one PASS/FAIL line per criterion. Thresholds, seeds and
// runtime limits are fixed here; the process exits non-zero on any FAIL.

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "love/love.hpp"
#include "oracles.hpp"

namespace lt = love::testing;
using namespace love;

namespace {

constexpr std::uint64_t kCorpusSeed = 42;
constexpr std::uint64_t kSpoofSeed = 42;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

bool run_criterion(const char* id, const char* title, double limit_s,
                   const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o{false, {}};
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double elapsed = seconds_since(t0);
  if (limit_s > 0 && elapsed >= limit_s) {
    o.pass = false;
    o.detail += fmt("; runtime %.2f s exceeds %.0f s", elapsed, limit_s);
  }
  std::printf("%s %s  %s: %s [%.2f s]\n", id, o.pass ? "PASS" : "FAIL", title, o.detail.c_str(),
              elapsed);
  std::fflush(stdout);
  return o.pass;
}

// ---- shared corpus --------------------------------------------------------------

struct Shared {
  SyntheticCorpus corpus;
  std::vector<AdsbObservation> obs;
};

const Shared& shared() {
  static const Shared s = [] {
    Shared out;
    SyntheticConfig cfg;
    cfg.sensor_count = 200;
    cfg.target_observations = 50'000;
    out.corpus = generate_corpus(cfg, kCorpusSeed);
    out.obs = out.corpus.observations();
    return out;
  }();
  return s;
}

std::vector<AdsbObservation> spoof_queries(std::span<const AdsbObservation> corpus,
                                           std::size_t n, std::uint64_t seed) {
  std::vector<AdsbObservation> out;
  for (auto& l : gen_spoofed(compute_envelopes(corpus), n, seed).observations) {
    out.push_back(std::move(l.obs));
  }
  return out;
}

// ---- AC1 --------------------------------------------------------------------------

struct TableRow {
  int res;
  std::int64_t hexagons;
  double area_km2;
};

// Hexagon counts and average areas as published for resolutions 2..7.
constexpr TableRow kPublished[] = {
    {2, 5'870, 86'801.78},      {3, 41'150, 12'393.43},     {4, 288'110, 1'770.35},
    {5, 2'016'830, 252.90},     {6, 14'117'870, 36.13},     {7, 98'825'150, 5.16},
};

Outcome ac1() {
  double worst_area = 0.0;
  int count_mismatches = 0;
  for (const auto& row : kPublished) {
    const auto s = resolution_stats(Resolution(row.res));
    if (s.hexagon_count != row.hexagons) ++count_mismatches;
    worst_area = std::max(worst_area, std::abs(s.avg_area_km2 - row.area_km2));
  }
  const auto r4 = resolution_stats(Resolution(4));
  return {count_mismatches == 0 && worst_area <= 0.01,
          fmt("count mismatches %d, max area error %.4f km2 (tol 0.01); res 4 = %lld hexagons, "
              "%.2f km2",
              count_mismatches, worst_area, static_cast<long long>(r4.hexagon_count),
              r4.avg_area_km2)};
}

// ---- AC2 --------------------------------------------------------------------------

struct ScanResult {
  bool known = false;
  bool found = false;
  Verdict verdict() const {
    return found ? Verdict::kPlausible : known ? Verdict::kImplausible : Verdict::kUnknownSensor;
  }
};

// Full pass over the raw corpus; cells come from the raw H3 API.
ScanResult scan(std::span<const AdsbObservation> corpus, std::span<const std::uint64_t> cells,
                std::uint64_t cell, const std::string& sensor) {
  ScanResult r;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (corpus[i].sensor.str() != sensor) continue;
    r.known = true;
    if (cells[i] == cell) {
      r.found = true;
      break;
    }
  }
  return r;
}

Outcome ac2() {
  const auto& obs = shared().obs;
  const auto sensors = lt::distinct_sensors(obs);
  const std::vector<std::string> sensor_list(sensors.begin(), sensors.end());

  // Queries: corpus points, corpus points under another sensor, points
  // shifted by up to a few degrees, and sensors that never appear.
  std::vector<AdsbObservation> queries;
  Rng rng(7);
  for (std::size_t i = 0; i < obs.size(); i += 25) {
    queries.push_back(obs[i]);
    auto other = obs[i];
    other.sensor = SensorId(sensor_list[rng.below(sensor_list.size())]);
    queries.push_back(other);
    auto moved = obs[i];
    moved.coord.lat = std::clamp(moved.coord.lat + rng.uniform(-3.0, 3.0), -90.0, 90.0);
    moved.coord.lon = std::clamp(moved.coord.lon + rng.uniform(-3.0, 3.0), -180.0, 180.0);
    queries.push_back(moved);
  }
  for (int k = 0; k < 200; ++k) {
    auto q = obs[rng.below(obs.size())];
    q.sensor = SensorId("unknown" + std::to_string(k));
    queries.push_back(q);
  }

  std::size_t checks = 0, mismatches = 0;
  std::map<Verdict, std::size_t> seen;
  for (const auto res : Resolution::all()) {
    const int r = res.value();
    const auto table = build(obs, res, 4);
    std::vector<std::uint64_t> cells(obs.size());
    for (std::size_t i = 0; i < obs.size(); ++i) {
      cells[i] = lt::h3_cell(obs[i].coord.lat, obs[i].coord.lon, r);
    }

    // The stored pair set equals the raw group-by, so no contains() answer
    // can differ from membership in it.
    const auto oracle = lt::group_by(obs, r);
    lt::PairCounts stored;
    for (const auto& e : table.sorted_entries()) {
      stored[{e.cell.index(), std::string(e.sensor)}] = e.count;
    }
    ++checks;
    if (stored != oracle) ++mismatches;
    for (const auto& [key, count] : oracle) {
      ++checks;
      if (!table.contains(CellId(key.first), key.second)) ++mismatches;
    }

    for (const auto& s : sensor_list) {
      ++checks;
      if (!table.knows_sensor(s)) ++mismatches;
    }
    const auto batch = verify_batch(table, queries, {}, 4);
    for (std::size_t q = 0; q < queries.size(); ++q) {
      const auto& query = queries[q];
      const auto cell = lt::h3_cell(query.coord.lat, query.coord.lon, r);
      const auto expect = scan(obs, cells, cell, query.sensor.str());
      const auto v = verify(table, query);
      checks += 4;
      mismatches += table.contains(CellId(cell), query.sensor.str()) != expect.found;
      mismatches += table.knows_sensor(query.sensor) != expect.known;
      mismatches += v != expect.verdict();
      mismatches += !batch.verdicts[q] || *batch.verdicts[q] != expect.verdict();
      ++seen[v];
    }
  }
  return {mismatches == 0 && seen.size() == 3,
          fmt("%zu checks over 6 resolutions, %zu mismatches; verdict mix P/I/U = %zu/%zu/%zu",
              checks, mismatches, seen[Verdict::kPlausible], seen[Verdict::kImplausible],
              seen[Verdict::kUnknownSensor])};
}

// ---- AC3 --------------------------------------------------------------------------

Outcome ac3() {
  const auto& obs = shared().obs;
  const Resolution res(4);
  const auto table = build(obs, res, 4);
  const auto spoofs = gen_spoofed(compute_envelopes(obs), 100'000, kSpoofSeed);
  std::vector<AdsbObservation> queries;
  for (const auto& l : spoofs.observations) queries.push_back(l.obs);
  const auto batch = verify_batch(table, queries, {}, 4);
  if (!batch.errors.empty()) return {false, fmt("%zu verify errors", batch.errors.size())};

  const double diameter = cell_diameter_km(res);
  const double dlat = lt::km_to_lat_deg(diameter);
  std::size_t guaranteed = 0, exceptions = 0, plausible = 0;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const auto& m = spoofs.meta[i];
    const bool is_plausible = *batch.verdicts[i] == Verdict::kPlausible;
    plausible += is_plausible;
    const bool beyond = m.lat_offset > dlat ||
                        m.lon_offset > lt::km_to_lon_deg(diameter, queries[i].coord.lat);
    if (beyond) {
      ++guaranteed;
      exceptions += is_plausible;
    }
  }
  const double fnr = static_cast<double>(plausible) / static_cast<double>(queries.size());
  return {exceptions == 0 && fnr < 0.02,
          fmt("%zu of 100000 spoofs beyond one cell diameter (%.2f km), %zu classified "
              "Plausible; FNR %.5f (limit 0.02)",
              guaranteed, diameter, exceptions, fnr)};
}

// ---- AC4 --------------------------------------------------------------------------

Outcome ac4() {
  const auto& obs = shared().obs;
  auto [train, held] = split_holdout(obs, 0.1, derive_seed(kCorpusSeed, 2));
  std::vector<LabeledObservation> legit;
  for (auto& o : held) legit.push_back(LabeledObservation{std::move(o), true});

  EvalOptions opt;
  opt.policy = UnknownSensorPolicy::kSeparate;
  opt.threads = 4;
  const auto all = Resolution::all();
  const auto sweep = sweep_resolutions(train, legit, all, opt);
  if (!sweep.failures.empty() || sweep.reports.size() != 6) {
    return {false, "sweep failed at some resolution"};
  }
  const auto fpr = [&](int r) { return sweep.reports[r - 2].fpr; };
  std::string per_res;
  for (int r = 2; r <= 7; ++r) per_res += fmt(" r%d=%.4f", r, fpr(r));
  return {fpr(4) < 0.05 && fpr(2) <= fpr(7),
          fmt("train %zu / held-out %zu; FPR(4) %.4f (limit 0.05), FPR(2) %.4f <= FPR(7) %.4f;"
              "%s",
              train.size(), legit.size(), fpr(4), fpr(2), fpr(7), per_res.c_str())};
}

// ---- AC5 --------------------------------------------------------------------------

Outcome ac5() {
  SyntheticConfig cfg;
  cfg.sensor_count = 2'000;
  cfg.target_observations = 500'000;
  cfg.airway_count = 300;
  const auto obs = generate_corpus(cfg, kCorpusSeed).observations();
  const auto table = build(obs, Resolution(4), 4);

  // Half legitimate corpus points, half spoofs.
  std::vector<AdsbObservation> queries;
  queries.reserve(200'000);
  for (std::size_t i = 0; queries.size() < 100'000; i += 5) queries.push_back(obs[i]);
  for (auto& q : spoof_queries(obs, 100'000, kSpoofSeed)) queries.push_back(std::move(q));

  std::vector<double> rates;
  for (int run = 0; run < 3; ++run) {
    const auto batch = verify_batch(table, queries, {}, 1);
    if (!batch.errors.empty()) return {false, "verify errors"};
    rates.push_back(batch.timing.throughput_per_sec);
  }
  std::sort(rates.begin(), rates.end());
  const double median = rates[1];
  return {table.pair_count() >= 100'000 && median >= 50'000.0,
          fmt("table of %zu pairs (need >= 100000); 200000 verdicts on 1 thread, median of 3 "
              "runs %.0f/s (floor 50000/s)",
              table.pair_count(), median)};
}

// ---- AC6 --------------------------------------------------------------------------

Outcome ac6() {
  const auto& obs = shared().obs;
  std::vector<AdsbObservation> queries(obs.begin(), obs.end());
  for (auto& q : spoof_queries(obs, 150'000, kSpoofSeed + 1)) queries.push_back(std::move(q));

  std::vector<std::size_t> pairs;
  std::vector<double> per_verdict_ns;
  for (const auto res : Resolution::all()) {
    const auto table = build(obs, res, 4);
    pairs.push_back(table.pair_count());
    double best = 1e300;
    for (int run = 0; run < 5; ++run) {
      const auto batch = verify_batch(table, queries, {}, 1);
      best = std::min(best, batch.timing.wall_seconds);
    }
    per_verdict_ns.push_back(best / static_cast<double>(queries.size()) * 1e9);
  }
  const bool monotone = std::is_sorted(pairs.begin(), pairs.end());
  const double growth = per_verdict_ns.back() / per_verdict_ns.front();
  std::string shape;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    shape += fmt(" r%zu=%zu/%.0fns", i + 2, pairs[i], per_verdict_ns[i]);
  }
  return {monotone && growth < 3.0,
          fmt("pairs non-decreasing: %s; per-verdict time res 7 / res 2 = %.2fx (limit 3x); "
              "pairs/time:%s",
              monotone ? "yes" : "no", growth, shape.c_str())};
}

// ---- AC7 --------------------------------------------------------------------------

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

int cli(const std::vector<std::string>& args, std::string& err_text) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  err_text = err.str();
  return code;
}

Outcome ac7() {
  const auto& s = shared();
  std::vector<std::string> problems;

  // Snapshot fixpoint at every resolution, in memory and through files.
  lt::TempDir tmp;
  for (const auto res : Resolution::all()) {
    const auto table = build(s.obs, res, 4);
    const auto bytes = serialize(table);
    if (serialize(deserialize(bytes)) != bytes) {
      problems.push_back(fmt("serialize fixpoint r%d", res.value()));
    }
    const auto path = tmp / "t.bin";
    save(table, path);
    const auto back = load(path);
    if (!(back == table) || serialize(back) != bytes) {
      problems.push_back(fmt("file round trip r%d", res.value()));
    }
  }

  // Seeded generators.
  SyntheticConfig cfg;
  const auto again = generate_corpus(cfg, kCorpusSeed);
  if (again.observations() != s.obs) problems.push_back("corpus regeneration");
  const auto env = compute_envelopes(s.obs);
  if (gen_spoofed(env, 5'000, kSpoofSeed).observations !=
      gen_spoofed(env, 5'000, kSpoofSeed).observations) {
    problems.push_back("spoof regeneration");
  }
  const BoundingBox europe(30.0, 75.0, -25.0, 45.0);
  if (gen_ghost_track(europe, {}, 9) != gen_ghost_track(europe, {}, 9)) {
    problems.push_back("ghost regeneration");
  }
  if (split_holdout(s.obs, 0.1, 3) != split_holdout(s.obs, 0.1, 3)) {
    problems.push_back("hold-out split");
  }

  // CLI eval twice over the same inputs.
  std::string err;
  const auto train = (tmp / "train.csv").string();
  const auto legit = (tmp / "legit.csv").string();
  const auto spoof = (tmp / "spoof.csv").string();
  if (cli({"synth", "--seed", "42", "--dialect", "b", "--holdout", "0.1", "--holdout-out", legit,
           "-o", train},
          err) != 0 ||
      cli({"attack-gen", "--mode", "spoof", "--corpus", train, "--dialect", "b", "--seed", "42",
           "-n", "5000", "-o", spoof},
          err) != 0) {
    return {false, "CLI setup failed: " + err};
  }
  std::vector<nlohmann::ordered_json> docs;
  for (const char* name : {"r1.json", "r2.json"}) {
    const auto out = (tmp / name).string();
    if (cli({"eval", "--corpus", train, "--dialect", "b", "--test", legit, "--test", spoof, "--res",
             "2-7", "-o", out},
            err) != 0) {
      return {false, "CLI eval failed: " + err};
    }
    auto doc = nlohmann::ordered_json::parse(slurp(out));
    for (auto& r : doc["reports"]) {
      r.erase("wall_seconds");
      r.erase("throughput_per_sec");
    }
    docs.push_back(std::move(doc));
  }
  if (docs[0]["reports"].size() != 6) problems.push_back("CLI report size");
  if (docs[0].dump() != docs[1].dump()) problems.push_back("CLI eval reports differ");

  std::string joined;
  for (const auto& p : problems) joined += (joined.empty() ? "" : ", ") + p;
  return {problems.empty(),
          problems.empty()
              ? "snapshot fixpoint r2-r7, corpus/spoof/ghost/split regeneration, CLI eval x2 "
                "identical modulo timing"
              : "failed: " + joined};
}

// ---- AC8 --------------------------------------------------------------------------

Outcome ac8() {
  const auto parsed = parse_csv_file(lt::fixture("duplicates_10000.csv"), Dialect::kPerFlight);
  const auto d = duplicate_stats(parsed.observations);
  return {d.total_messages == 10'000 && d.duplicate_messages == 18 && d.duplicate_rate == 0.0018,
          fmt("%llu of %llu messages repeat a 5-tuple, rate %.6g (expected exactly 0.0018), "
              "%llu hash collisions",
              static_cast<unsigned long long>(d.duplicate_messages),
              static_cast<unsigned long long>(d.total_messages), d.duplicate_rate,
              static_cast<unsigned long long>(d.hash_collisions))};
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  shared();
  std::printf("synthetic corpus: 200 sensors, %zu observations, seed %llu [%.2f s]\n",
              shared().obs.size(), static_cast<unsigned long long>(kCorpusSeed),
              seconds_since(t0));

  int failed = 0;
  failed += !run_criterion("AC1", "resolution constants", 1.0, ac1);
  failed += !run_criterion("AC2", "oracle equivalence", 60.0, ac2);
  failed += !run_criterion("AC3", "detection guarantee", 0.0, ac3);
  failed += !run_criterion("AC4", "held-out legitimacy", 0.0, ac4);
  failed += !run_criterion("AC5", "throughput floor", 10.0, ac5);
  failed += !run_criterion("AC6", "scaling shape", 0.0, ac6);
  failed += !run_criterion("AC7", "determinism and round trips", 0.0, ac7);
  failed += !run_criterion("AC8", "duplicate analysis", 5.0, ac8);
  std::printf("%d of 8 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
