#pragma once

// Point-to-cell mapping on the H3 hexagonal grid. All H3 calls are confined
// to geoindex.cpp; nothing outside this module sees h3api.h.

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace love {

/// H3 resolution restricted to the range used for location verification.
class Resolution {
 public:
  static constexpr int kMin = 2;
  static constexpr int kMax = 7;

  /// Throws DomainError unless 2 <= value <= 7.
  explicit Resolution(int value);

  constexpr int value() const noexcept { return value_; }

  friend constexpr auto operator<=>(Resolution, Resolution) = default;

  static std::array<Resolution, 6> all();

 private:
  int value_;
};

/// WGS84 position in degrees. Plain value type; validate() checks the domain.
struct GeoCoord {
  double lat = 0.0;
  double lon = 0.0;

  friend constexpr bool operator==(const GeoCoord&, const GeoCoord&) = default;
};

/// Throws DomainError naming the offending field ("latitude"/"longitude")
/// when a component is non-finite or out of range.
void validate(const GeoCoord& coord);
bool is_valid(const GeoCoord& coord) noexcept;

/// 64-bit H3 cell index.
class CellId {
 public:
  constexpr CellId() = default;
  constexpr explicit CellId(std::uint64_t index) : index_(index) {}

  constexpr std::uint64_t index() const noexcept { return index_; }

  /// Resolution encoded in the index bits (0..15 for any valid H3 cell).
  int resolution() const noexcept;
  bool is_valid() const noexcept;

  /// Canonical lowercase hexadecimal form, e.g. "841f15bffffffff".
  std::string to_string() const;
  /// Inverse of to_string(); returns nullopt unless the text is a valid cell.
  static std::optional<CellId> parse(std::string_view text);

  friend constexpr auto operator<=>(CellId, CellId) = default;

 private:
  std::uint64_t index_ = 0;
};

struct ResolutionStats {
  Resolution resolution;
  std::int64_t hexagon_count;
  double avg_area_km2;
};

/// The H3 cell containing `coord` at `res`. Throws DomainError on an
/// invalid coordinate.
CellId cell_of(const GeoCoord& coord, Resolution res);

/// Cell centre in degrees.
GeoCoord cell_center(CellId cell);

/// Parent at a coarser resolution (H3 digit truncation).
CellId cell_parent(CellId cell, Resolution coarser);

/// Hexagon count (pentagons excluded) and average hexagon area for `res`.
ResolutionStats resolution_stats(Resolution res);

/// Upper bound on the great-circle diameter of any cell at `res`:
/// circle-equivalent diameter of the average hexagon area times 1.3.
/// Largest measured vertex-to-vertex span over all H3 cells is ~1.21x the
/// circle-equivalent diameter.
double cell_diameter_km(Resolution res);

inline constexpr double kCellDiameterSafetyFactor = 1.3;
inline constexpr double kEarthRadiusKm = 6371.0088;

/// Haversine distance on the mean-radius sphere.
double great_circle_km(const GeoCoord& a, const GeoCoord& b);

}  // namespace love

template <>
struct std::hash<love::CellId> {
  std::size_t operator()(love::CellId c) const noexcept {
    return std::hash<std::uint64_t>{}(c.index());
  }
};
