#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

#include "love/geoindex.hpp"

namespace love {

/// Receiver identifier. Non-empty, no surrounding whitespace, no commas.
class SensorId {
 public:
  /// Throws DomainError if `token` violates the invariants. No trimming.
  explicit SensorId(std::string token);

  /// Trims ASCII whitespace first; nullopt if the result is still invalid.
  static std::optional<SensorId> normalize(std::string_view raw);
  static bool is_valid_token(std::string_view token) noexcept;

  const std::string& str() const noexcept { return id_; }

  friend auto operator<=>(const SensorId&, const SensorId&) = default;

 private:
  std::string id_;
};

/// One decoded position report as received by one sensor.
struct AdsbObservation {
  SensorId sensor;
  GeoCoord coord;
  std::optional<double> timestamp;    // seconds since epoch
  std::optional<double> altitude_ft;
  std::optional<double> heading_deg;  // [0, 360]
  std::optional<double> speed_kt;

  friend bool operator==(const AdsbObservation&, const AdsbObservation&) = default;
};

/// label == true marks legitimate traffic, false an injected/spoofed report.
struct LabeledObservation {
  AdsbObservation obs;
  bool label;

  friend bool operator==(const LabeledObservation&, const LabeledObservation&) = default;
};

}  // namespace love

template <>
struct std::hash<love::SensorId> {
  std::size_t operator()(const love::SensorId& s) const noexcept {
    return std::hash<std::string>{}(s.str());
  }
};
