#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <absl/container/flat_hash_map.h>

#include "love/geoindex.hpp"
#include "love/observation.hpp"

namespace love {

struct TableStats {
  std::size_t pair_count = 0;
  double avg_msgs_per_pair = 0.0;
  std::size_t sensor_count = 0;

  friend bool operator==(const TableStats&, const TableStats&) = default;
};

/// Per-resolution (cell, sensor) -> message count map.
///
/// Sensors are interned into a dense index so the pair key is a
/// (u64 cell, u32 sensor) composite. Every stored count is >= 1 and every
/// interned sensor owns at least one pair. Tables are mutated only while
/// being built; afterwards they are shared read-only.
class AmountTable {
 public:
  struct Entry {
    CellId cell;
    std::string_view sensor;
    std::uint64_t count;

    friend bool operator==(const Entry&, const Entry&) = default;
  };

  explicit AmountTable(Resolution res) : resolution_(res) {}

  Resolution resolution() const noexcept { return resolution_; }

  /// Adds `n` (>= 1) messages to the pair. Throws DomainError if the cell
  /// resolution differs from the table's or n == 0.
  void add(CellId cell, const SensorId& sensor, std::uint64_t n = 1);
  void add(CellId cell, std::string_view sensor, std::uint64_t n = 1);

  /// Throws DomainError on resolution mismatch.
  bool contains(CellId cell, std::string_view sensor) const;
  bool contains(CellId cell, const SensorId& sensor) const {
    return contains(cell, std::string_view(sensor.str()));
  }

  /// Message count for the pair, 0 if absent. Throws on resolution mismatch.
  std::uint64_t count(CellId cell, std::string_view sensor) const;

  bool knows_sensor(std::string_view sensor) const {
    return sensor_ids_.contains(lookup_key(sensor));
  }
  bool knows_sensor(const SensorId& sensor) const { return knows_sensor(sensor.str()); }

  std::size_t pair_count() const noexcept { return counts_.size(); }
  std::size_t sensor_count() const noexcept { return sensors_.size(); }
  std::uint64_t total_messages() const noexcept { return total_; }
  bool empty() const noexcept { return counts_.empty(); }

  /// All entries sorted by (cell index, sensor bytes).
  std::vector<Entry> sorted_entries() const;
  /// Interned sensor names, in first-seen order.
  std::span<const std::string> sensors() const noexcept { return sensors_; }

  friend bool operator==(const AmountTable& a, const AmountTable& b);

 private:
  struct PairKey {
    std::uint64_t cell;
    std::uint32_t sensor;

    friend bool operator==(const PairKey&, const PairKey&) = default;
    template <typename H>
    friend H AbslHashValue(H h, const PairKey& k) {
      return H::combine(std::move(h), k.cell, k.sensor);
    }
  };

  // The packaged abseil has its own string_view type.
  static absl::string_view lookup_key(std::string_view s) { return {s.data(), s.size()}; }
  std::uint32_t intern(std::string_view sensor);
  void check_resolution(CellId cell) const;

  Resolution resolution_;
  std::vector<std::string> sensors_;
  absl::flat_hash_map<std::string, std::uint32_t> sensor_ids_;
  absl::flat_hash_map<PairKey, std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

/// Aggregates observations into a table at `res`. With threads > 1 the input
/// is split into contiguous shards, built independently and merged.
AmountTable build(std::span<const AdsbObservation> obs, Resolution res,
                  unsigned threads = 1);

/// Sums counts per key. Throws DomainError on resolution mismatch.
AmountTable merge(const AmountTable& a, const AmountTable& b);

inline bool contains(const AmountTable& table, CellId cell, const SensorId& sensor) {
  return table.contains(cell, sensor);
}
inline bool knows_sensor(const AmountTable& table, const SensorId& sensor) {
  return table.knows_sensor(sensor);
}

TableStats stats(const AmountTable& table);

// ---- persistence ------------------------------------------------------------
//
// Snapshot layout, all integers big-endian:
//   "LOVE" | version u16 | resolution u8 | entry count u64 |
//   entries sorted by (cell, sensor): cell u64 | sensor length u16 |
//   sensor bytes | count u64 |
//   CRC32C (u32) over every preceding byte.

inline constexpr std::uint16_t kSnapshotVersion = 1;

std::vector<std::uint8_t> serialize(const AmountTable& table);

/// Throws FormatError (bad magic), IntegrityError (checksum or structure),
/// VersionError (other format version).
AmountTable deserialize(std::span<const std::uint8_t> bytes);

void save(const AmountTable& table, const std::filesystem::path& path);
AmountTable load(const std::filesystem::path& path);

/// `h3id,sensor,amount` rows, sorted like the snapshot.
void export_csv(const AmountTable& table, std::ostream& out);

/// CRC32C (Castagnoli) of `bytes`.
std::uint32_t crc32c(std::span<const std::uint8_t> bytes);

}  // namespace love
