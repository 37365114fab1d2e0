#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "love/ingest.hpp"
#include "love/observation.hpp"

namespace love {

/// Extreme coordinates a sensor has received.
struct SensorEnvelope {
  SensorId sensor;
  double lat_min, lat_max;
  double lon_min, lon_max;

  bool contains(const GeoCoord& c) const noexcept {
    return c.lat >= lat_min && c.lat <= lat_max && c.lon >= lon_min && c.lon <= lon_max;
  }
  friend bool operator==(const SensorEnvelope&, const SensorEnvelope&) = default;
};

/// Ordered by sensor id so that index-based draws are reproducible.
using EnvelopeMap = std::map<SensorId, SensorEnvelope>;

EnvelopeMap compute_envelopes(std::span<const AdsbObservation> obs);

/// One axis of a spoof: push past the maximum (`add`) or below the minimum
/// by `delta` degrees.
struct AxisDraw {
  bool add;
  double delta;
};

struct SpoofMeta {
  AxisDraw lat;
  AxisDraw lon;
  /// Outside-the-envelope distance per axis after clamping, in degrees.
  double lat_offset;
  double lon_offset;
  bool clamped;
};

struct SpoofedPoint {
  GeoCoord coord;
  SpoofMeta meta;
};

/// Applies the two axis draws to `env` and clamps into the coordinate domain.
SpoofedPoint perturb(const SensorEnvelope& env, AxisDraw lat, AxisDraw lon);

inline constexpr double kSpoofDeltaMin = 0.1;
inline constexpr double kSpoofDeltaMax = 10.0;

struct SpoofBatch {
  std::vector<LabeledObservation> observations;  // all label == false
  std::vector<SpoofMeta> meta;                   // aligned with observations
};

/// Per spoof, in draw order: sensor = below(#envelopes); latitude coin,
/// latitude delta ~ U[0.1, 10); longitude coin, longitude delta. A set coin
/// means "add to the maximum". Throws DomainError if n > 0 and there are no
/// envelopes.
SpoofBatch gen_spoofed(const EnvelopeMap& envelopes, std::size_t n, std::uint64_t seed);

struct GhostTrackOptions {
  std::size_t steps = 120;
  double speed_kmh = 800.0;
  SensorId sensor{"ghost"};
  double start_time = 0.0;
  double altitude_ft = 35'000.0;
  /// Report spacing in seconds.
  double interval_s = 0.5;
};

/// Great-circle track of `steps` reports spaced speed * interval apart,
/// from a random start and initial bearing, with every report inside
/// `region`. Throws DomainError for
/// steps < 2, speed outside [100, 1200] km/h, or a region too small to hold
/// the track.
std::vector<AdsbObservation> gen_ghost_track(const BoundingBox& region,
                                             const GhostTrackOptions& options,
                                             std::uint64_t seed);

inline constexpr double kFloodJitterDeg = 0.01;

/// `n` copies of `template_obs` attributed to `sensor`, each coordinate
/// jittered uniformly by at most 0.01 degrees per axis.
std::vector<LabeledObservation> gen_flood(const SensorId& sensor,
                                          const AdsbObservation& template_obs,
                                          std::size_t n, std::uint64_t seed);

/// Point at `distance_km` along the great circle leaving `from` with
/// initial bearing `bearing_deg`.
GeoCoord destination(const GeoCoord& from, double bearing_deg, double distance_km);

/// Initial great-circle bearing from `a` to `b`, degrees in [0, 360).
double initial_bearing(const GeoCoord& a, const GeoCoord& b);

}  // namespace love
