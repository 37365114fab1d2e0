#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "love/amount_store.hpp"

namespace love {

enum class Verdict : std::uint8_t { kPlausible, kImplausible, kUnknownSensor };

std::string_view to_string(Verdict v) noexcept;
std::optional<Verdict> parse_verdict(std::string_view text) noexcept;

struct VerifyOptions {
  /// A pair counts as recorded only with at least this many messages.
  std::uint64_t min_count = 1;
};

/// Two-phase check: Plausible when the sensor has recorded the observation's
/// cell before; otherwise UnknownSensor when the sensor is absent from the
/// table, else Implausible. Only sensor and coordinates are consulted.
/// Throws DomainError for a coordinate outside the valid domain.
Verdict verify(const AmountTable& table, const AdsbObservation& obs,
               const VerifyOptions& options = {});

struct BatchTiming {
  double wall_seconds = 0.0;
  double throughput_per_sec = 0.0;
};

struct BatchError {
  std::size_t index;
  std::string message;
};

struct BatchResult {
  /// Aligned with the input; nullopt where verification raised an error.
  std::vector<std::optional<Verdict>> verdicts;
  std::vector<BatchError> errors;
  BatchTiming timing;
};

/// Element-wise verify(). With threads > 1 the batch is split into
/// contiguous chunks; the output is identical to the sequential run.
BatchResult verify_batch(const AmountTable& table, std::span<const AdsbObservation> obs,
                         const VerifyOptions& options = {}, unsigned threads = 1);

}  // namespace love
