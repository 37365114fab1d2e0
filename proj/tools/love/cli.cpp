#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <thread>

#include "love/love.hpp"

namespace love::cli {

namespace {

namespace fs = std::filesystem;

struct BoxArgs {
  double lat_min = 30.0;
  double lat_max = 75.0;
  double lon_min = -25.0;
  double lon_max = 45.0;

  BoundingBox box() const { return BoundingBox(lat_min, lat_max, lon_min, lon_max); }
};

struct Common {
  std::string dialect = "a";
  unsigned threads = 0;
};

const CLI::Validator kWritablePath(
    [](std::string& path) -> std::string {
      if (path == "-") return {};
      const fs::path parent = fs::path(path).parent_path();
      if (!parent.empty() && !fs::is_directory(parent)) {
        return "directory does not exist: " + parent.string();
      }
      return {};
    },
    "PATH");

const CLI::Validator kResolutionSet(
    [](std::string& text) -> std::string {
      try {
        parse_resolution_set(text);
      } catch (const Error& e) {
        return e.what();
      }
      return {};
    },
    "RES");

void add_dialect(CLI::App* app, Common& c) {
  app->add_option("--dialect", c.dialect,
                  "Input dialect: a = one row per message with a {sensor,...} list, "
                  "b = one row per (flight, sensor) observation")
      ->check(CLI::IsMember({"a", "b"}))
      ->capture_default_str();
}

void add_threads(CLI::App* app, Common& c) {
  app->add_option("--threads", c.threads, "Worker threads, 0 = all available cores")
      ->envname("LOVE_THREADS")
      ->capture_default_str();
}

void add_box(CLI::App* app, BoxArgs& b) {
  app->add_option("--lat-min", b.lat_min, "Bounding box south edge")->capture_default_str();
  app->add_option("--lat-max", b.lat_max, "Bounding box north edge")->capture_default_str();
  app->add_option("--lon-min", b.lon_min, "Bounding box west edge")->capture_default_str();
  app->add_option("--lon-max", b.lon_max, "Bounding box east edge")->capture_default_str();
}

Dialect to_dialect(const std::string& d) {
  return d == "b" ? Dialect::kPerFlight : Dialect::kMultiSensor;
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

void report_parse(std::ostream& err, const std::string& path, const ParseStats& s) {
  err << path << ": " << s.rows << " rows, " << s.malformed << " malformed (skipped), "
      << s.observations << " observations\n";
}

std::vector<AdsbObservation> load_corpus(const std::string& path, const Common& c,
                                         const BoundingBox& box, std::ostream& err) {
  auto parsed = parse_csv_file(path, to_dialect(c.dialect));
  report_parse(err, path, parsed.stats);
  auto kept = filter_bbox(parsed.observations, box);
  if (kept.size() != parsed.observations.size()) {
    err << path << ": " << parsed.observations.size() - kept.size()
        << " observations outside the bounding box dropped\n";
  }
  return kept;
}

std::vector<LabeledObservation> load_labeled(const std::vector<std::string>& paths,
                                             std::ostream& err) {
  std::vector<LabeledObservation> all;
  for (const auto& path : paths) {
    auto in = open_input(path);
    auto parsed = parse_labeled_csv(*in);
    report_parse(err, path, parsed.stats);
    all.insert(all.end(), parsed.observations.begin(), parsed.observations.end());
  }
  return all;
}

// Opens `path` for writing, or returns `fallback` for "-".
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : path_(path) {
    if (path == "-") {
      stream_ = &fallback;
      return;
    }
    file_.open(path, std::ios::binary | std::ios::trunc);
    if (!file_) throw IoError("cannot write " + path);
    stream_ = &file_;
  }

  std::ostream& stream() { return *stream_; }

  void close() {
    stream_->flush();
    if (file_.is_open()) file_.close();
    if (!*stream_ && stream_ == &file_) throw IoError("failed writing " + path_);
  }

 private:
  std::string path_;
  std::ofstream file_;
  std::ostream* stream_ = nullptr;
};

std::string build_stats_table(const std::vector<AmountTable>& tables) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof line, "%-4s %12s %12s %12s %10s %8s %14s\n", "res", "hexagons",
                "area_km2", "pairs", "msgs/pair", "sensors", "messages");
  out += line;
  for (const auto& t : tables) {
    const auto rs = resolution_stats(t.resolution());
    const auto ts = stats(t);
    std::snprintf(line, sizeof line, "%-4d %12lld %12.2f %12zu %10.2f %8zu %14llu\n",
                  t.resolution().value(), static_cast<long long>(rs.hexagon_count),
                  rs.avg_area_km2, ts.pair_count, ts.avg_msgs_per_pair, ts.sensor_count,
                  static_cast<unsigned long long>(t.total_messages()));
    out += line;
  }
  return out;
}

// ---- subcommands --------------------------------------------------------------

struct BuildArgs {
  Common common;
  BoxArgs box;
  std::string corpus;
  std::string res = "4";
  std::string output;
  std::string csv_export;
};

int cmd_build(const BuildArgs& a, std::ostream& out, std::ostream& err) {
  const auto resolutions = parse_resolution_set(a.res);
  const bool multiple = resolutions.size() > 1;
  const auto obs = load_corpus(a.corpus, a.common, a.box.box(), err);
  const unsigned threads = resolve_threads(a.common.threads);

  std::vector<AmountTable> tables;
  for (const auto res : resolutions) {
    auto table = build(obs, res, threads);
    save(table, snapshot_path(a.output, res, multiple));
    if (!a.csv_export.empty()) {
      std::ofstream csv(snapshot_path(a.csv_export, res, multiple), std::ios::trunc);
      if (!csv) throw IoError("cannot write " + a.csv_export);
      export_csv(table, csv);
      if (!csv) throw IoError("failed writing " + a.csv_export);
    }
    tables.push_back(std::move(table));
  }
  out << build_stats_table(tables);
  return kOk;
}

struct VerifyArgs {
  Common common;
  std::string table;
  std::string input;
  std::string output = "-";
  std::uint64_t min_count = 1;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  const auto table = load(a.table);
  auto parsed = parse_csv_file(a.input, to_dialect(a.common.dialect));
  report_parse(err, a.input, parsed.stats);

  const auto result = verify_batch(table, parsed.observations, VerifyOptions{a.min_count},
                                   resolve_threads(a.common.threads));
  for (const auto& e : result.errors) {
    err << a.input << ": observation " << e.index << ": " << e.message << '\n';
  }

  Output sink(a.output, out);
  auto& s = sink.stream();
  s << "sensor,lat,lon,verdict\n";
  for (std::size_t i = 0; i < parsed.observations.size(); ++i) {
    const auto& o = parsed.observations[i];
    const auto& v = result.verdicts[i];
    s << o.sensor.str() << ',' << format_double(o.coord.lat) << ','
      << format_double(o.coord.lon) << ',' << (v ? to_string(*v) : "Error") << '\n';
  }
  sink.close();
  return result.errors.empty() ? kOk : kUsage;
}

struct AttackArgs {
  Common common;
  BoxArgs box;
  std::string corpus;
  std::string mode = "spoof";
  std::string output = "-";
  std::string sensor;
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  std::size_t steps = 120;
  double speed_kmh = 800.0;
};

int cmd_attack_gen(const AttackArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<LabeledObservation> rows;
  if (a.mode == "ghost") {
    GhostTrackOptions opt;
    opt.steps = a.steps;
    opt.speed_kmh = a.speed_kmh;
    if (!a.sensor.empty()) opt.sensor = SensorId(a.sensor);
    for (auto& o : gen_ghost_track(a.box.box(), opt, a.seed)) {
      rows.push_back(LabeledObservation{std::move(o), false});
    }
  } else {
    if (a.corpus.empty()) throw DomainError("--corpus is required for mode " + a.mode);
    const auto obs = load_corpus(a.corpus, a.common, a.box.box(), err);
    if (a.mode == "spoof") {
      rows = gen_spoofed(compute_envelopes(obs), a.n, a.seed).observations;
    } else {
      if (a.sensor.empty()) throw DomainError("--sensor is required for mode flood");
      const SensorId target(a.sensor);
      const auto it = std::find_if(obs.begin(), obs.end(),
                                   [&](const AdsbObservation& o) { return o.sensor == target; });
      if (it == obs.end()) throw DomainError("sensor " + a.sensor + " not found in corpus");
      rows = gen_flood(target, *it, a.n, a.seed);
    }
  }
  Output sink(a.output, out);
  write_labeled_csv(sink.stream(), rows);
  sink.close();
  return kOk;
}

struct EvalArgs {
  Common common;
  BoxArgs box;
  std::string corpus;
  std::vector<std::string> tests;
  std::string res = "4";
  std::string policy = "separate";
  std::string output;
  std::string dataset;
  std::uint64_t min_count = 1;
};

int cmd_eval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  const auto resolutions = parse_resolution_set(a.res);
  const auto corpus = load_corpus(a.corpus, a.common, a.box.box(), err);
  const auto test = load_labeled(a.tests, err);

  EvalOptions opt;
  opt.policy = *parse_policy(a.policy);
  opt.verify.min_count = a.min_count;
  opt.threads = resolve_threads(a.common.threads);
  const auto sweep = sweep_resolutions(corpus, test, resolutions, opt);

  for (const auto& f : sweep.failures) {
    err << "resolution " << f.resolution.value() << " failed: " << f.message << '\n';
  }
  if (sweep.reports.empty()) throw DomainError("no resolution could be evaluated");
  if (!a.output.empty()) emit_report(sweep.reports, a.output, a.dataset);
  out << format_report_table(sweep.reports);
  return sweep.failures.empty() ? kOk : kUsage;
}

struct ReportArgs {
  std::string input;
};

int cmd_report(const ReportArgs& a, std::ostream& out) {
  const auto doc = read_report(a.input);
  if (!doc.dataset.empty()) out << "dataset: " << doc.dataset << '\n';
  out << format_report_table(doc.reports);
  return kOk;
}

struct SynthArgs {
  std::string output;
  std::string holdout_output;
  std::string dialect = "a";
  std::uint64_t seed = 0;
  std::size_t sensors = 200;
  std::size_t observations = 50'000;
  double holdout = 0.0;
};

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  SyntheticConfig cfg;
  cfg.sensor_count = a.sensors;
  cfg.target_observations = a.observations;
  const auto corpus = generate_corpus(cfg, a.seed);

  std::size_t written = 0;
  std::size_t held = 0;
  if (a.holdout_output.empty()) {
    if (a.holdout > 0.0) throw DomainError("--holdout needs --holdout-out");
    Output sink(a.output, out);
    if (a.dialect == "a") {
      write_multi_sensor_csv(sink.stream(), corpus.records());
    } else {
      write_per_flight_csv(sink.stream(), corpus.observations());
    }
    sink.close();
    written = corpus.observation_count();
  } else {
    // Splitting works on individual observations, so the training part is
    // always written in the per-observation dialect.
    if (a.dialect != "b") throw DomainError("--holdout-out requires --dialect b");
    auto [train, test] = split_holdout(corpus.observations(), a.holdout, derive_seed(a.seed, 2));
    Output sink(a.output, out);
    write_per_flight_csv(sink.stream(), train);
    sink.close();
    std::vector<LabeledObservation> legit;
    legit.reserve(test.size());
    for (auto& o : test) legit.push_back(LabeledObservation{std::move(o), true});
    Output held_sink(a.holdout_output, out);
    write_labeled_csv(held_sink.stream(), legit);
    held_sink.close();
    written = train.size();
    held = legit.size();
  }
  if (a.output != "-") {
    out << "sensors " << corpus.sensors.size() << ", messages " << corpus.messages.size()
        << ", observations " << written;
    if (!a.holdout_output.empty()) out << ", held out " << held;
    out << '\n';
  }
  return kOk;
}

int map_exception(std::ostream& err) {
  try {
    throw;
  } catch (const IntegrityError& e) {
    err << "error: " << e.what() << '\n';
    return kIntegrity;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kFormat;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kFormat;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace

std::vector<Resolution> parse_resolution_set(const std::string& text) {
  auto parse_one = [&](std::string_view part) {
    int value = 0;
    const auto* end = part.data() + part.size();
    const auto [ptr, ec] = std::from_chars(part.data(), end, value);
    if (part.empty() || ec != std::errc{} || ptr != end) {
      throw DomainError("bad resolution '" + std::string(part) + "' in '" + text + "'");
    }
    return Resolution(value);
  };

  std::vector<Resolution> out;
  std::string_view rest = text;
  while (true) {
    const auto comma = rest.find(',');
    const auto item = rest.substr(0, comma);
    if (const auto dash = item.find('-'); dash != std::string_view::npos) {
      const auto lo = parse_one(item.substr(0, dash));
      const auto hi = parse_one(item.substr(dash + 1));
      if (hi < lo) throw DomainError("empty resolution range '" + std::string(item) + "'");
      for (int r = lo.value(); r <= hi.value(); ++r) out.emplace_back(r);
    } else {
      out.push_back(parse_one(item));
    }
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string snapshot_path(const std::string& pattern, Resolution res, bool multiple) {
  if (!multiple) return pattern;
  const std::string r = std::to_string(res.value());
  if (const auto pos = pattern.find("{res}"); pos != std::string::npos) {
    std::string out = pattern;
    out.replace(pos, 5, r);
    return out;
  }
  fs::path p(pattern);
  const auto ext = p.extension().string();
  p.replace_extension();
  return p.string() + ".r" + r + ext;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"H3-based ADS-B location verification", "love"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "love 0.1.0");

  BuildArgs build_args;
  auto* build_cmd = app.add_subcommand("build", "Build amount table snapshots from a corpus");
  build_cmd->add_option("corpus", build_args.corpus, "Training corpus CSV (.gz accepted)")
      ->required()
      ->check(CLI::ExistingFile);
  build_cmd->add_option("--res", build_args.res, "Resolution, range (2-7) or list (2,4)")
      ->check(kResolutionSet)
      ->capture_default_str();
  build_cmd->add_option("-o,--output", build_args.output,
                        "Snapshot path; with several resolutions '{res}' is substituted "
                        "or '.r<N>' inserted before the extension")
      ->required()
      ->check(kWritablePath);
  build_cmd->add_option("--csv-export", build_args.csv_export,
                        "Also write h3id,sensor,amount CSV (same naming rule)")
      ->check(kWritablePath);
  add_dialect(build_cmd, build_args.common);
  add_box(build_cmd, build_args.box);
  add_threads(build_cmd, build_args.common);

  VerifyArgs verify_args;
  auto* verify_cmd = app.add_subcommand("verify", "Classify observations against a snapshot");
  verify_cmd->add_option("input", verify_args.input, "Observation CSV (.gz accepted)")
      ->required()
      ->check(CLI::ExistingFile);
  verify_cmd->add_option("-t,--table", verify_args.table, "Snapshot built by 'love build'")
      ->required()
      ->check(CLI::ExistingFile);
  verify_cmd->add_option("-o,--output", verify_args.output, "Verdict CSV, '-' for stdout")
      ->check(kWritablePath)
      ->capture_default_str();
  verify_cmd->add_option("--min-count", verify_args.min_count,
                         "Messages a (cell, sensor) pair needs to count as recorded")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_dialect(verify_cmd, verify_args.common);
  add_threads(verify_cmd, verify_args.common);

  AttackArgs attack_args;
  auto* attack_cmd = app.add_subcommand("attack-gen", "Generate labeled attack observations");
  attack_cmd->add_option("--mode", attack_args.mode,
                         "spoof: per-sensor envelope perturbation; ghost: fabricated track; "
                         "flood: jittered copies attributed to one sensor")
      ->check(CLI::IsMember({"spoof", "ghost", "flood"}))
      ->capture_default_str();
  attack_cmd->add_option("--corpus", attack_args.corpus, "Training corpus (spoof, flood)")
      ->check(CLI::ExistingFile);
  attack_cmd->add_option("--seed", attack_args.seed, "Generator seed")->required();
  attack_cmd->add_option("-n,--n", attack_args.n, "Observations to generate (spoof, flood)")
      ->capture_default_str();
  attack_cmd->add_option("--sensor", attack_args.sensor,
                         "Target sensor (flood) or attributed sensor (ghost, default 'ghost')");
  attack_cmd->add_option("--steps", attack_args.steps, "Ghost track positions")
      ->capture_default_str();
  attack_cmd->add_option("--speed-kmh", attack_args.speed_kmh, "Ghost track ground speed")
      ->capture_default_str();
  attack_cmd->add_option("-o,--output", attack_args.output, "Labeled CSV, '-' for stdout")
      ->check(kWritablePath)
      ->capture_default_str();
  add_dialect(attack_cmd, attack_args.common);
  add_box(attack_cmd, attack_args.box);

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate labeled test sets per resolution");
  eval_cmd->add_option("--corpus", eval_args.corpus, "Training corpus CSV")
      ->required()
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--test", eval_args.tests, "Labeled CSV; repeat to combine files")
      ->required()
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--res", eval_args.res, "Resolution, range (2-7) or list (2,4)")
      ->check(kResolutionSet)
      ->capture_default_str();
  eval_cmd->add_option("--unknown-sensor-as,--policy", eval_args.policy,
                       "UnknownSensor handling: implausible, plausible or separate")
      ->check(CLI::IsMember({"implausible", "plausible", "separate"}))
      ->capture_default_str();
  eval_cmd->add_option("--min-count", eval_args.min_count,
                       "Messages a (cell, sensor) pair needs to count as recorded")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  eval_cmd->add_option("-o,--output", eval_args.output, "JSON report path")
      ->check(kWritablePath);
  eval_cmd->add_option("--dataset", eval_args.dataset, "Dataset label stored in the report");
  add_dialect(eval_cmd, eval_args.common);
  add_box(eval_cmd, eval_args.box);
  add_threads(eval_cmd, eval_args.common);

  ReportArgs report_args;
  auto* report_cmd = app.add_subcommand("report", "Pretty-print a JSON report");
  report_cmd->add_option("report", report_args.input, "Report written by 'love eval'")
      ->required()
      ->check(CLI::ExistingFile);

  SynthArgs synth_args;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic training corpus");
  synth_cmd->add_option("--seed", synth_args.seed, "Generator seed")->required();
  synth_cmd->add_option("--sensors", synth_args.sensors, "Sensor count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth_cmd->add_option("--observations", synth_args.observations,
                        "Total (message, sensor) observations")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth_cmd->add_option("--dialect", synth_args.dialect, "Output dialect (a or b)")
      ->check(CLI::IsMember({"a", "b"}))
      ->capture_default_str();
  synth_cmd->add_option("--holdout", synth_args.holdout,
                        "Fraction of observations held out as labeled legitimate data")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  synth_cmd->add_option("--holdout-out", synth_args.holdout_output, "Held-out labeled CSV")
      ->check(kWritablePath);
  synth_cmd->add_option("-o,--output", synth_args.output, "Corpus CSV, '-' for stdout")
      ->required()
      ->check(kWritablePath);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << app.version() << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\nrun with --help for usage\n";
    return kUsage;
  }

  try {
    if (*build_cmd) return cmd_build(build_args, out, err);
    if (*verify_cmd) return cmd_verify(verify_args, out, err);
    if (*attack_cmd) return cmd_attack_gen(attack_args, out, err);
    if (*eval_cmd) return cmd_eval(eval_args, out, err);
    if (*report_cmd) return cmd_report(report_args, out);
    if (*synth_cmd) return cmd_synth(synth_args, out);
  } catch (...) {
    return map_exception(err);
  }
  return kUsage;
}

}  // namespace love::cli
