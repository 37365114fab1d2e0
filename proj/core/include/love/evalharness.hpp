#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "love/amount_store.hpp"
#include "love/verifier.hpp"

namespace love {

/// How UnknownSensor verdicts enter the confusion matrix.
enum class UnknownSensorPolicy {
  kImplausible,  // counted as "attack detected"
  kPlausible,    // counted as "passed"
  kSeparate,     // excluded from the matrix, reported only in unknown_sensor_count
};

std::string_view to_string(UnknownSensorPolicy p) noexcept;
std::optional<UnknownSensorPolicy> parse_policy(std::string_view text) noexcept;

/// Positive class = attack detected (attack-labeled observation not Plausible).
struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const noexcept { return tp + tn + fp + fn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct Rates {
  double fpr = 0.0;
  double fnr = 0.0;
  double accuracy = 0.0;
};

/// fpr = fp/(fp+tn), fnr = fn/(fn+tp), accuracy = (tp+tn)/total; each 0 when
/// its denominator is 0.
Rates rates(const ConfusionCounts& c) noexcept;

/// Folds one (verdict, label) pair into `counts` under `policy`. Returns
/// false when the pair was excluded (kSeparate and UnknownSensor).
bool tally(ConfusionCounts& counts, Verdict verdict, bool legitimate,
           UnknownSensorPolicy policy) noexcept;

struct EvalReport {
  Resolution resolution{4};
  ConfusionCounts counts;
  double fpr = 0.0;
  double fnr = 0.0;
  double accuracy = 0.0;
  double wall_seconds = 0.0;
  double throughput_per_sec = 0.0;
  TableStats table_stats;
  std::uint64_t unknown_sensor_count = 0;
  UnknownSensorPolicy policy = UnknownSensorPolicy::kImplausible;

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

struct EvalOptions {
  UnknownSensorPolicy policy = UnknownSensorPolicy::kImplausible;
  VerifyOptions verify;
  unsigned threads = 1;
};

/// Runs the test set through verify_batch and scores it. Throws DomainError
/// on an empty test set or when any test observation fails to verify.
EvalReport evaluate(const AmountTable& table, std::span<const LabeledObservation> test,
                    const EvalOptions& options = {});

struct SweepFailure {
  Resolution resolution;
  std::string message;
};

struct SweepResult {
  std::vector<EvalReport> reports;  // ascending resolution
  std::vector<SweepFailure> failures;
};

/// One table per resolution over the same training corpus, each evaluated on
/// the same test set. A failing resolution is recorded and skipped.
SweepResult sweep_resolutions(std::span<const AdsbObservation> corpus,
                              std::span<const LabeledObservation> test,
                              std::span<const Resolution> resolutions,
                              const EvalOptions& options = {});

/// wall_seconds of each report divided by the sweep maximum.
std::vector<double> relative_times(std::span<const EvalReport> reports);

// ---- duplicate analysis -----------------------------------------------------

struct DuplicateStats {
  std::uint64_t total_messages = 0;
  std::uint64_t duplicate_messages = 0;
  double duplicate_rate = 0.0;
  /// Distinct tuples whose hashes collided (never counted as duplicates).
  std::uint64_t hash_collisions = 0;
};

/// Canonical text of (altitude, heading, latitude, longitude, speed): fields
/// joined by '|', coordinates with 6 decimals, the rest with 1, absent
/// fields as '~'.
std::string canonical_tuple(const AdsbObservation& obs);

struct Hash128 {
  std::uint64_t low;
  std::uint64_t high;
  friend bool operator==(const Hash128&, const Hash128&) = default;
};

/// XXH3-128 of canonical_tuple(obs).
Hash128 tuple_hash(const AdsbObservation& obs);

DuplicateStats duplicate_stats(std::span<const AdsbObservation> obs);

// ---- JSON reports -------------------------------------------------------------

inline constexpr int kReportVersion = 1;

/// `{"love_report_version": 1, ["dataset": ...,] "reports": [ ... ]}`.
std::string report_to_json(std::span<const EvalReport> reports,
                           std::string_view dataset = {});

struct ReportDocument {
  std::string dataset;
  std::vector<EvalReport> reports;
};

/// Throws FormatError on malformed JSON, missing keys or wrong version.
ReportDocument parse_report_json(std::string_view text);

/// Throws DomainError on empty `reports`, IoError when unwritable.
void emit_report(std::span<const EvalReport> reports, const std::filesystem::path& path,
                 std::string_view dataset = {});
ReportDocument read_report(const std::filesystem::path& path);

/// Fixed-width table, one row per report.
std::string format_report_table(std::span<const EvalReport> reports);

}  // namespace love
