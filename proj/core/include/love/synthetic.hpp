#pragma once

// Seeded synthetic air-traffic corpus: sensors with circular reception
// ranges around a set of straight airways, messages sampled along the
// airways and received by every in-range sensor with a fixed probability.

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "love/ingest.hpp"

namespace love {

struct SyntheticConfig {
  BoundingBox region{36.0, 68.0, -12.0, 38.0};
  std::size_t sensor_count = 200;
  /// Expanded (message, receiver) observations to produce.
  std::size_t target_observations = 50'000;
  std::size_t airway_count = 40;
  double min_airway_km = 800.0;
  double min_range_km = 150.0;
  double max_range_km = 350.0;
  double reception_probability = 0.8;
  /// Positions scatter up to this far from the airway centre line.
  double lateral_jitter_km = 4.0;
  double start_time = 1'626'998'400.0;  // 2021-07-23T00:00:00Z
  double duration_s = 86'400.0;
  /// Sensor ids are this prefix plus a zero-padded index.
  std::string sensor_prefix = "s";
};

struct SyntheticSensor {
  SensorId id;
  GeoCoord site;
  double range_km;
};

struct SyntheticMessage {
  GeoCoord coord;
  double timestamp;
  double altitude_ft;
  double heading_deg;
  double speed_kt;
  std::vector<std::uint32_t> receivers;  // indices into sensors
};

struct SyntheticCorpus {
  std::vector<SyntheticSensor> sensors;
  std::vector<SyntheticMessage> messages;

  std::size_t observation_count() const;
  /// Dialect-A rows.
  std::vector<MultiSensorRecord> records() const;
  /// One observation per (message, receiver), kinematic fields populated.
  std::vector<AdsbObservation> observations() const;
};

SyntheticCorpus generate_corpus(const SyntheticConfig& config, std::uint64_t seed);

/// Splits observations into (train, held_out); each lands in held_out with
/// probability `held_out_fraction`, decided by uniform01() < fraction in
/// input order.
std::pair<std::vector<AdsbObservation>, std::vector<AdsbObservation>> split_holdout(
    std::span<const AdsbObservation> obs, double held_out_fraction, std::uint64_t seed);

}  // namespace love
