#include "love/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "love/attackgen.hpp"
#include "love/error.hpp"
#include "love/rng.hpp"

namespace love {

namespace {

struct Airway {
  GeoCoord from;
  GeoCoord to;
};

GeoCoord random_point(Rng& rng, const BoundingBox& box) {
  return {rng.uniform(box.lat_min(), box.lat_max()), rng.uniform(box.lon_min(), box.lon_max())};
}

GeoCoord lerp(const GeoCoord& a, const GeoCoord& b, double t) {
  return {a.lat + (b.lat - a.lat) * t, a.lon + (b.lon - a.lon) * t};
}

std::string sensor_name(const std::string& prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%05zu", i);
  return prefix + buf;
}

}  // namespace

std::size_t SyntheticCorpus::observation_count() const {
  std::size_t n = 0;
  for (const auto& m : messages) n += m.receivers.size();
  return n;
}

std::vector<MultiSensorRecord> SyntheticCorpus::records() const {
  std::vector<MultiSensorRecord> out;
  out.reserve(messages.size());
  for (const auto& m : messages) {
    MultiSensorRecord r{{}, m.coord, m.timestamp};
    r.sensors.reserve(m.receivers.size());
    for (auto idx : m.receivers) r.sensors.push_back(sensors[idx].id);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<AdsbObservation> SyntheticCorpus::observations() const {
  std::vector<AdsbObservation> out;
  out.reserve(observation_count());
  for (const auto& m : messages) {
    for (auto idx : m.receivers) {
      out.push_back(AdsbObservation{sensors[idx].id, m.coord, m.timestamp, m.altitude_ft,
                                    m.heading_deg, m.speed_kt});
    }
  }
  return out;
}

SyntheticCorpus generate_corpus(const SyntheticConfig& config, std::uint64_t seed) {
  if (config.sensor_count == 0 || config.airway_count == 0) {
    throw DomainError("synthetic corpus needs sensors and airways");
  }
  if (!(config.min_range_km > 0.0 && config.min_range_km <= config.max_range_km)) {
    throw DomainError("synthetic corpus needs 0 < min_range_km <= max_range_km");
  }
  if (!(config.reception_probability > 0.0 && config.reception_probability <= 1.0)) {
    throw DomainError("reception probability must lie in (0, 1]");
  }

  Rng layout(derive_seed(seed, 0));
  Rng traffic(derive_seed(seed, 1));

  std::vector<Airway> airways;
  airways.reserve(config.airway_count);
  for (int guard = 0; airways.size() < config.airway_count; ++guard) {
    if (guard > 100'000) throw DomainError("region too small for the requested airway length");
    Airway a{random_point(layout, config.region), random_point(layout, config.region)};
    if (great_circle_km(a.from, a.to) >= config.min_airway_km) airways.push_back(a);
  }

  SyntheticCorpus corpus;
  corpus.sensors.reserve(config.sensor_count);
  for (std::size_t i = 0; corpus.sensors.size() < config.sensor_count; ++i) {
    if (i > config.sensor_count * 1000) throw DomainError("cannot place sensors inside region");
    const double range = layout.uniform(config.min_range_km, config.max_range_km);
    const Airway& a = airways[layout.below(airways.size())];
    const GeoCoord on_airway = lerp(a.from, a.to, layout.uniform01());
    const GeoCoord site = destination(on_airway, layout.uniform(0.0, 360.0),
                                      layout.uniform(0.0, 0.6) * range);
    if (!config.region.contains(site)) continue;
    corpus.sensors.push_back(
        SyntheticSensor{SensorId(sensor_name(config.sensor_prefix, corpus.sensors.size())),
                        site, range});
  }

  std::size_t produced = 0;
  std::vector<std::uint32_t> receivers;
  while (produced < config.target_observations) {
    const Airway& a = airways[traffic.below(airways.size())];
    const bool forward = traffic.coin();
    const double t = traffic.uniform01();
    const GeoCoord centre = lerp(a.from, a.to, t);
    const double heading = forward ? initial_bearing(a.from, a.to) : initial_bearing(a.to, a.from);
    const GeoCoord coord = destination(centre, traffic.uniform(0.0, 360.0),
                                       traffic.uniform(0.0, config.lateral_jitter_km));
    // Flight levels in 100 ft steps; speed and heading at 0.1 resolution.
    const double altitude = 100.0 * static_cast<double>(100 + traffic.below(301));
    const double speed = std::round(traffic.uniform(250.0, 500.0) * 10.0) / 10.0;
    const double time =
        std::round((config.start_time + traffic.uniform(0.0, config.duration_s)) * 2.0) / 2.0;

    receivers.clear();
    for (std::uint32_t s = 0; s < corpus.sensors.size(); ++s) {
      const auto& sensor = corpus.sensors[s];
      const bool heard = traffic.uniform01() < config.reception_probability;
      if (heard && great_circle_km(sensor.site, coord) <= sensor.range_km) {
        receivers.push_back(s);
      }
    }
    if (receivers.empty() || !is_valid(coord)) continue;
    const std::size_t room = config.target_observations - produced;
    if (receivers.size() > room) receivers.resize(room);
    produced += receivers.size();
    corpus.messages.push_back(SyntheticMessage{coord, time, altitude,
                                               std::round(heading * 10.0) / 10.0, speed,
                                               receivers});
  }
  return corpus;
}

std::pair<std::vector<AdsbObservation>, std::vector<AdsbObservation>> split_holdout(
    std::span<const AdsbObservation> obs, double held_out_fraction, std::uint64_t seed) {
  if (!(held_out_fraction >= 0.0 && held_out_fraction <= 1.0)) {
    throw DomainError("held-out fraction must lie in [0, 1]");
  }
  Rng rng(seed);
  std::pair<std::vector<AdsbObservation>, std::vector<AdsbObservation>> out;
  for (const auto& o : obs) {
    (rng.uniform01() < held_out_fraction ? out.second : out.first).push_back(o);
  }
  return out;
}

}  // namespace love
