#include "love/attackgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "love/error.hpp"
#include "love/rng.hpp"

namespace love {

namespace {

double rad(double deg) { return deg * std::numbers::pi / 180.0; }
double deg(double r) { return r * 180.0 / std::numbers::pi; }

double normalize_lon(double lon) {
  while (lon > 180.0) lon -= 360.0;
  while (lon < -180.0) lon += 360.0;
  return lon;
}

}  // namespace

EnvelopeMap compute_envelopes(std::span<const AdsbObservation> obs) {
  EnvelopeMap out;
  for (const auto& o : obs) {
    auto [it, inserted] = out.try_emplace(
        o.sensor, SensorEnvelope{o.sensor, o.coord.lat, o.coord.lat, o.coord.lon, o.coord.lon});
    if (inserted) continue;
    auto& env = it->second;
    env.lat_min = std::min(env.lat_min, o.coord.lat);
    env.lat_max = std::max(env.lat_max, o.coord.lat);
    env.lon_min = std::min(env.lon_min, o.coord.lon);
    env.lon_max = std::max(env.lon_max, o.coord.lon);
  }
  return out;
}

SpoofedPoint perturb(const SensorEnvelope& env, AxisDraw lat, AxisDraw lon) {
  const double raw_lat = lat.add ? env.lat_max + lat.delta : env.lat_min - lat.delta;
  const double raw_lon = lon.add ? env.lon_max + lon.delta : env.lon_min - lon.delta;
  const GeoCoord coord{std::clamp(raw_lat, -90.0, 90.0), std::clamp(raw_lon, -180.0, 180.0)};

  SpoofMeta meta{lat, lon, 0.0, 0.0, coord.lat != raw_lat || coord.lon != raw_lon};
  meta.lat_offset = lat.add ? coord.lat - env.lat_max : env.lat_min - coord.lat;
  meta.lon_offset = lon.add ? coord.lon - env.lon_max : env.lon_min - coord.lon;
  return {coord, meta};
}

SpoofBatch gen_spoofed(const EnvelopeMap& envelopes, std::size_t n, std::uint64_t seed) {
  SpoofBatch batch;
  if (n == 0) return batch;
  if (envelopes.empty()) throw DomainError("gen_spoofed needs at least one sensor envelope");

  std::vector<const SensorEnvelope*> order;
  order.reserve(envelopes.size());
  for (const auto& [_, env] : envelopes) order.push_back(&env);

  Rng rng(seed);
  batch.observations.reserve(n);
  batch.meta.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const SensorEnvelope& env = *order[rng.below(order.size())];
    AxisDraw lat{rng.coin(), 0.0};
    lat.delta = rng.uniform(kSpoofDeltaMin, kSpoofDeltaMax);
    AxisDraw lon{rng.coin(), 0.0};
    lon.delta = rng.uniform(kSpoofDeltaMin, kSpoofDeltaMax);
    const SpoofedPoint p = perturb(env, lat, lon);
    batch.observations.push_back(
        LabeledObservation{AdsbObservation{env.sensor, p.coord, {}, {}, {}, {}}, false});
    batch.meta.push_back(p.meta);
  }
  return batch;
}

double initial_bearing(const GeoCoord& a, const GeoCoord& b) {
  const double p1 = rad(a.lat), p2 = rad(b.lat), dl = rad(b.lon - a.lon);
  const double y = std::sin(dl) * std::cos(p2);
  const double x = std::cos(p1) * std::sin(p2) - std::sin(p1) * std::cos(p2) * std::cos(dl);
  return std::fmod(deg(std::atan2(y, x)) + 360.0, 360.0);
}

GeoCoord destination(const GeoCoord& from, double bearing_deg, double distance_km) {
  const double delta = distance_km / kEarthRadiusKm;
  const double theta = rad(bearing_deg);
  const double p1 = rad(from.lat), l1 = rad(from.lon);
  const double sin_p2 =
      std::sin(p1) * std::cos(delta) + std::cos(p1) * std::sin(delta) * std::cos(theta);
  const double p2 = std::asin(std::clamp(sin_p2, -1.0, 1.0));
  const double l2 = l1 + std::atan2(std::sin(theta) * std::sin(delta) * std::cos(p1),
                                    std::cos(delta) - std::sin(p1) * sin_p2);
  return {deg(p2), normalize_lon(deg(l2))};
}

std::vector<AdsbObservation> gen_ghost_track(const BoundingBox& region,
                                             const GhostTrackOptions& options,
                                             std::uint64_t seed) {
  if (options.steps < 2) throw DomainError("ghost track needs at least 2 steps");
  if (!(options.speed_kmh >= 100.0 && options.speed_kmh <= 1200.0)) {
    throw DomainError("ghost track speed must lie in [100, 1200] km/h");
  }
  if (!(options.interval_s > 0.0)) throw DomainError("ghost track interval must be positive");

  const double step_km = options.speed_kmh * options.interval_s / 3600.0;
  const double speed_kt = options.speed_kmh / 1.852;
  constexpr int kAttempts = 1000;

  Rng rng(seed);
  std::vector<GeoCoord> points(options.steps);
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    const GeoCoord start{rng.uniform(region.lat_min(), region.lat_max()),
                         rng.uniform(region.lon_min(), region.lon_max())};
    const double bearing = rng.uniform(0.0, 360.0);
    bool inside = true;
    for (std::size_t i = 0; i < options.steps && inside; ++i) {
      points[i] = i == 0 ? start : destination(start, bearing, step_km * static_cast<double>(i));
      inside = region.contains(points[i]);
    }
    if (!inside) continue;

    std::vector<AdsbObservation> track;
    track.reserve(options.steps);
    for (std::size_t i = 0; i < options.steps; ++i) {
      const GeoCoord& next = i + 1 < options.steps ? points[i + 1] : points[i];
      const double heading = i + 1 < options.steps
                                 ? initial_bearing(points[i], next)
                                 : initial_bearing(points[i - 1], points[i]);
      track.push_back(AdsbObservation{
          options.sensor, points[i],
          options.start_time + options.interval_s * static_cast<double>(i),
          options.altitude_ft, heading, speed_kt});
    }
    return track;
  }
  throw DomainError("region too small to hold a ghost track of " +
                    std::to_string(options.steps) + " steps");
}

std::vector<LabeledObservation> gen_flood(const SensorId& sensor,
                                          const AdsbObservation& template_obs,
                                          std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<LabeledObservation> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    AdsbObservation o = template_obs;
    o.sensor = sensor;
    o.coord.lat = std::clamp(o.coord.lat + rng.uniform(-kFloodJitterDeg, kFloodJitterDeg),
                             -90.0, 90.0);
    o.coord.lon = std::clamp(o.coord.lon + rng.uniform(-kFloodJitterDeg, kFloodJitterDeg),
                             -180.0, 180.0);
    out.push_back(LabeledObservation{std::move(o), false});
  }
  return out;
}

}  // namespace love
