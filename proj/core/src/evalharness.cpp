#include "love/evalharness.hpp"

#define XXH_INLINE_ALL
#include <xxhash.h>

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "love/error.hpp"

namespace love {

using Json = nlohmann::ordered_json;

std::string_view to_string(UnknownSensorPolicy p) noexcept {
  switch (p) {
    case UnknownSensorPolicy::kImplausible:
      return "implausible";
    case UnknownSensorPolicy::kPlausible:
      return "plausible";
    case UnknownSensorPolicy::kSeparate:
      return "separate";
  }
  return "?";
}

std::optional<UnknownSensorPolicy> parse_policy(std::string_view text) noexcept {
  for (auto p : {UnknownSensorPolicy::kImplausible, UnknownSensorPolicy::kPlausible,
                 UnknownSensorPolicy::kSeparate}) {
    if (to_string(p) == text) return p;
  }
  return std::nullopt;
}

Rates rates(const ConfusionCounts& c) noexcept {
  auto ratio = [](std::uint64_t num, std::uint64_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  return {ratio(c.fp, c.fp + c.tn), ratio(c.fn, c.fn + c.tp), ratio(c.tp + c.tn, c.total())};
}

bool tally(ConfusionCounts& counts, Verdict verdict, bool legitimate,
           UnknownSensorPolicy policy) noexcept {
  bool passed = verdict == Verdict::kPlausible;
  if (verdict == Verdict::kUnknownSensor) {
    if (policy == UnknownSensorPolicy::kSeparate) return false;
    passed = policy == UnknownSensorPolicy::kPlausible;
  }
  if (legitimate) {
    ++(passed ? counts.tn : counts.fp);
  } else {
    ++(passed ? counts.fn : counts.tp);
  }
  return true;
}

EvalReport evaluate(const AmountTable& table, std::span<const LabeledObservation> test,
                    const EvalOptions& options) {
  if (test.empty()) throw DomainError("evaluation needs a non-empty test set");

  std::vector<AdsbObservation> observations;
  observations.reserve(test.size());
  for (const auto& t : test) observations.push_back(t.obs);

  const BatchResult batch =
      verify_batch(table, observations, options.verify, options.threads);
  if (!batch.errors.empty()) {
    throw DomainError("test observation " + std::to_string(batch.errors.front().index) +
                      ": " + batch.errors.front().message);
  }

  EvalReport report;
  report.resolution = table.resolution();
  report.policy = options.policy;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const Verdict v = *batch.verdicts[i];
    if (v == Verdict::kUnknownSensor) ++report.unknown_sensor_count;
    tally(report.counts, v, test[i].label, options.policy);
  }
  const Rates r = rates(report.counts);
  report.fpr = r.fpr;
  report.fnr = r.fnr;
  report.accuracy = r.accuracy;
  report.wall_seconds = batch.timing.wall_seconds;
  report.throughput_per_sec = batch.timing.throughput_per_sec;
  report.table_stats = stats(table);
  return report;
}

SweepResult sweep_resolutions(std::span<const AdsbObservation> corpus,
                              std::span<const LabeledObservation> test,
                              std::span<const Resolution> resolutions,
                              const EvalOptions& options) {
  std::vector<Resolution> ordered(resolutions.begin(), resolutions.end());
  std::sort(ordered.begin(), ordered.end());
  ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());

  SweepResult result;
  for (const Resolution res : ordered) {
    try {
      const AmountTable table = build(corpus, res, options.threads);
      result.reports.push_back(evaluate(table, test, options));
    } catch (const Error& e) {
      result.failures.push_back(SweepFailure{res, e.what()});
    }
  }
  return result;
}

std::vector<double> relative_times(std::span<const EvalReport> reports) {
  double max_wall = 0.0;
  for (const auto& r : reports) max_wall = std::max(max_wall, r.wall_seconds);
  std::vector<double> out;
  out.reserve(reports.size());
  for (const auto& r : reports) out.push_back(max_wall > 0.0 ? r.wall_seconds / max_wall : 0.0);
  return out;
}

// ---- duplicates -------------------------------------------------------------

namespace {

void append_fixed(std::string& out, const std::optional<double>& v, int decimals) {
  if (!v) {
    out.push_back('~');
    return;
  }
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, *v, std::chars_format::fixed, decimals);
  std::string_view text(buf, static_cast<std::size_t>(end - buf));
  // "-0.000000" and "0.000000" denote the same rendered value.
  if (text.front() == '-' && text.find_first_not_of("-0.") == std::string_view::npos) {
    text.remove_prefix(1);
  }
  out.append(text);
}

struct Hash128Hasher {
  std::size_t operator()(const Hash128& h) const noexcept {
    return static_cast<std::size_t>(h.low ^ (h.high * 0x9E3779B97F4A7C15ULL));
  }
};

}  // namespace

std::string canonical_tuple(const AdsbObservation& obs) {
  std::string out;
  out.reserve(64);
  append_fixed(out, obs.altitude_ft, 1);
  out.push_back('|');
  append_fixed(out, obs.heading_deg, 1);
  out.push_back('|');
  append_fixed(out, obs.coord.lat, 6);
  out.push_back('|');
  append_fixed(out, obs.coord.lon, 6);
  out.push_back('|');
  append_fixed(out, obs.speed_kt, 1);
  return out;
}

Hash128 tuple_hash(const AdsbObservation& obs) {
  const std::string text = canonical_tuple(obs);
  const XXH128_hash_t h = XXH3_128bits(text.data(), text.size());
  return {h.low64, h.high64};
}

DuplicateStats duplicate_stats(std::span<const AdsbObservation> obs) {
  DuplicateStats s;
  s.total_messages = obs.size();
  std::unordered_map<Hash128, std::string, Hash128Hasher> seen;
  seen.reserve(obs.size());
  for (const auto& o : obs) {
    std::string text = canonical_tuple(o);
    const XXH128_hash_t raw = XXH3_128bits(text.data(), text.size());
    auto [it, inserted] = seen.try_emplace(Hash128{raw.low64, raw.high64}, std::move(text));
    if (inserted) continue;
    if (it->second == canonical_tuple(o)) {
      ++s.duplicate_messages;
    } else {
      ++s.hash_collisions;
    }
  }
  if (s.total_messages > 0) {
    s.duplicate_rate =
        static_cast<double>(s.duplicate_messages) / static_cast<double>(s.total_messages);
  }
  return s;
}

// ---- JSON -------------------------------------------------------------------

namespace {

Json to_json(const EvalReport& r) {
  Json j;
  j["resolution"] = r.resolution.value();
  j["tp"] = r.counts.tp;
  j["tn"] = r.counts.tn;
  j["fp"] = r.counts.fp;
  j["fn"] = r.counts.fn;
  j["fpr"] = r.fpr;
  j["fnr"] = r.fnr;
  j["accuracy"] = r.accuracy;
  j["wall_seconds"] = r.wall_seconds;
  j["throughput_per_sec"] = r.throughput_per_sec;
  j["pair_count"] = r.table_stats.pair_count;
  j["avg_msgs_per_pair"] = r.table_stats.avg_msgs_per_pair;
  j["sensor_count"] = r.table_stats.sensor_count;
  j["unknown_sensor_count"] = r.unknown_sensor_count;
  j["policy"] = std::string(to_string(r.policy));
  return j;
}

const Json& field(const Json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw FormatError(std::string("report entry missing '") + key + "'");
  return *it;
}

std::uint64_t count_field(const Json& obj, const char* key) {
  const Json& v = field(obj, key);
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() &&
                                 v.get<std::int64_t>() < 0)) {
    throw FormatError(std::string("report field '") + key + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

double real_field(const Json& obj, const char* key) {
  const Json& v = field(obj, key);
  if (!v.is_number()) throw FormatError(std::string("report field '") + key + "' must be numeric");
  return v.get<double>();
}

double rate_field(const Json& obj, const char* key) {
  const double v = real_field(obj, key);
  if (v < 0.0 || v > 1.0) throw FormatError(std::string("report field '") + key + "' not in [0, 1]");
  return v;
}

EvalReport from_json(const Json& j) {
  if (!j.is_object()) throw FormatError("report entry must be an object");
  EvalReport r;
  const auto res = count_field(j, "resolution");
  if (res < Resolution::kMin || res > Resolution::kMax) {
    throw FormatError("report resolution " + std::to_string(res) + " out of range");
  }
  r.resolution = Resolution(static_cast<int>(res));
  r.counts = {count_field(j, "tp"), count_field(j, "tn"), count_field(j, "fp"),
              count_field(j, "fn")};
  r.fpr = rate_field(j, "fpr");
  r.fnr = rate_field(j, "fnr");
  r.accuracy = rate_field(j, "accuracy");
  r.wall_seconds = real_field(j, "wall_seconds");
  r.throughput_per_sec = real_field(j, "throughput_per_sec");
  r.table_stats.pair_count = count_field(j, "pair_count");
  r.table_stats.avg_msgs_per_pair = real_field(j, "avg_msgs_per_pair");
  r.table_stats.sensor_count = count_field(j, "sensor_count");
  r.unknown_sensor_count = count_field(j, "unknown_sensor_count");
  const Json& policy = field(j, "policy");
  if (!policy.is_string()) throw FormatError("report field 'policy' must be a string");
  const auto p = parse_policy(policy.get<std::string>());
  if (!p) throw FormatError("unknown policy '" + policy.get<std::string>() + "'");
  r.policy = *p;
  return r;
}

}  // namespace

std::string report_to_json(std::span<const EvalReport> reports, std::string_view dataset) {
  Json doc;
  doc["love_report_version"] = kReportVersion;
  if (!dataset.empty()) doc["dataset"] = std::string(dataset);
  Json arr = Json::array();
  for (const auto& r : reports) arr.push_back(to_json(r));
  doc["reports"] = std::move(arr);
  return doc.dump(2) + "\n";
}

ReportDocument parse_report_json(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormatError(std::string("report is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError("report root must be an object");
  const auto version = doc.find("love_report_version");
  if (version == doc.end() || !version->is_number_integer()) {
    throw FormatError("report lacks love_report_version");
  }
  if (version->get<int>() != kReportVersion) {
    throw FormatError("unsupported love_report_version " + std::to_string(version->get<int>()));
  }
  ReportDocument out;
  if (const auto ds = doc.find("dataset"); ds != doc.end()) {
    if (!ds->is_string()) throw FormatError("report field 'dataset' must be a string");
    out.dataset = ds->get<std::string>();
  }
  const auto arr = doc.find("reports");
  if (arr == doc.end() || !arr->is_array()) throw FormatError("report lacks a 'reports' array");
  for (const auto& entry : *arr) out.reports.push_back(from_json(entry));
  return out;
}

void emit_report(std::span<const EvalReport> reports, const std::filesystem::path& path,
                 std::string_view dataset) {
  if (reports.empty()) throw DomainError("no reports to emit");
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << report_to_json(reports, dataset);
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

ReportDocument read_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_report_json(buf.str());
}

std::string format_report_table(std::span<const EvalReport> reports) {
  std::string out;
  char line[512];
  std::snprintf(line, sizeof line,
                "%-4s %10s %12s %10s %14s %8s %9s %9s %7s %7s %9s %9s %9s %10s %12s\n", "res",
                "hexagons", "area_km2", "pairs", "msgs/pair", "sensors", "tp", "tn", "fp",
                "fn", "fpr", "fnr", "accuracy", "time_s", "verdicts/s");
  out += line;
  for (const auto& r : reports) {
    const auto rs = resolution_stats(r.resolution);
    std::snprintf(line, sizeof line,
                  "%-4d %10lld %12.2f %10zu %14.2f %8zu %9llu %9llu %7llu %7llu %9.5f %9.5f "
                  "%9.5f %10.4f %12.0f\n",
                  r.resolution.value(), static_cast<long long>(rs.hexagon_count),
                  rs.avg_area_km2, r.table_stats.pair_count, r.table_stats.avg_msgs_per_pair,
                  r.table_stats.sensor_count, static_cast<unsigned long long>(r.counts.tp),
                  static_cast<unsigned long long>(r.counts.tn),
                  static_cast<unsigned long long>(r.counts.fp),
                  static_cast<unsigned long long>(r.counts.fn), r.fpr, r.fnr, r.accuracy,
                  r.wall_seconds, r.throughput_per_sec);
    out += line;
  }
  return out;
}

}  // namespace love
