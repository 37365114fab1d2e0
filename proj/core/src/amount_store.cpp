#include "love/amount_store.hpp"

#include <boost/crc.hpp>

#include <algorithm>
#include <fstream>
#include <iterator>
#include <limits>
#include <ostream>
#include <thread>

#include "love/error.hpp"

namespace love {

namespace {

constexpr std::array<std::uint8_t, 4> kMagic{'L', 'O', 'V', 'E'};
constexpr std::size_t kHeaderSize = 4 + 2 + 1 + 8;
constexpr std::size_t kCrcSize = 4;

template <typename T>
void put_be(std::vector<std::uint8_t>& out, T value) {
  for (int shift = (sizeof(T) - 1) * 8; shift >= 0; shift -= 8) {
    out.push_back(static_cast<std::uint8_t>(value >> shift));
  }
}

class Cursor {
 public:
  explicit Cursor(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  template <typename T>
  T get_be() {
    need(sizeof(T));
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      value = static_cast<T>((value << 8) | bytes_[pos_ + i]);
    }
    pos_ += sizeof(T);
    return value;
  }

  std::string_view get_bytes(std::size_t n) {
    need(n);
    std::string_view s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return s;
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw IntegrityError("snapshot truncated");
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

// ---- AmountTable ------------------------------------------------------------

void AmountTable::check_resolution(CellId cell) const {
  if (cell.resolution() != resolution_.value()) {
    throw DomainError("cell " + cell.to_string() + " has resolution " +
                      std::to_string(cell.resolution()) + ", table has " +
                      std::to_string(resolution_.value()));
  }
}

std::uint32_t AmountTable::intern(std::string_view sensor) {
  if (auto it = sensor_ids_.find(lookup_key(sensor)); it != sensor_ids_.end()) {
    return it->second;
  }
  const auto id = static_cast<std::uint32_t>(sensors_.size());
  sensors_.emplace_back(sensor);
  sensor_ids_.emplace(std::string(sensor), id);
  return id;
}

void AmountTable::add(CellId cell, std::string_view sensor, std::uint64_t n) {
  check_resolution(cell);
  if (n == 0) throw DomainError("amount table counts must be >= 1");
  if (!SensorId::is_valid_token(sensor)) {
    throw DomainError("invalid sensor id '" + std::string(sensor) + "'");
  }
  counts_[PairKey{cell.index(), intern(sensor)}] += n;
  total_ += n;
}

void AmountTable::add(CellId cell, const SensorId& sensor, std::uint64_t n) {
  add(cell, std::string_view(sensor.str()), n);
}

std::uint64_t AmountTable::count(CellId cell, std::string_view sensor) const {
  check_resolution(cell);
  const auto sit = sensor_ids_.find(lookup_key(sensor));
  if (sit == sensor_ids_.end()) return 0;
  const auto it = counts_.find(PairKey{cell.index(), sit->second});
  return it == counts_.end() ? 0 : it->second;
}

bool AmountTable::contains(CellId cell, std::string_view sensor) const {
  return count(cell, sensor) != 0;
}

std::vector<AmountTable::Entry> AmountTable::sorted_entries() const {
  std::vector<Entry> out;
  out.reserve(counts_.size());
  for (const auto& [key, n] : counts_) {
    out.push_back(Entry{CellId{key.cell}, sensors_[key.sensor], n});
  }
  std::sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) {
    if (a.cell != b.cell) return a.cell < b.cell;
    return a.sensor < b.sensor;
  });
  return out;
}

bool operator==(const AmountTable& a, const AmountTable& b) {
  return a.resolution_ == b.resolution_ && a.pair_count() == b.pair_count() &&
         a.sensor_count() == b.sensor_count() && a.total_ == b.total_ &&
         a.sorted_entries() == b.sorted_entries();
}

// ---- build / merge / stats ------------------------------------------------

AmountTable build(std::span<const AdsbObservation> obs, Resolution res, unsigned threads) {
  auto build_range = [res](std::span<const AdsbObservation> part) {
    AmountTable table(res);
    for (const auto& o : part) table.add(cell_of(o.coord, res), o.sensor);
    return table;
  };

  threads = std::max(1u, threads);
  constexpr std::size_t kMinShard = 16'384;
  const std::size_t shards =
      std::min<std::size_t>(threads, std::max<std::size_t>(1, obs.size() / kMinShard));
  if (shards <= 1) return build_range(obs);

  std::vector<AmountTable> parts(shards, AmountTable(res));
  std::vector<std::exception_ptr> errors(shards);
  {
    std::vector<std::jthread> workers;
    const std::size_t step = (obs.size() + shards - 1) / shards;
    for (std::size_t i = 0; i < shards; ++i) {
      const std::size_t begin = std::min(obs.size(), i * step);
      const std::size_t end = std::min(obs.size(), begin + step);
      workers.emplace_back([&, i, begin, end] {
        try {
          parts[i] = build_range(obs.subspan(begin, end - begin));
        } catch (...) {
          errors[i] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  AmountTable result = std::move(parts[0]);
  for (std::size_t i = 1; i < shards; ++i) result = merge(result, parts[i]);
  return result;
}

AmountTable merge(const AmountTable& a, const AmountTable& b) {
  if (a.resolution() != b.resolution()) {
    throw DomainError("cannot merge tables of resolution " +
                      std::to_string(a.resolution().value()) + " and " +
                      std::to_string(b.resolution().value()));
  }
  AmountTable out = a;
  for (const auto& e : b.sorted_entries()) out.add(e.cell, e.sensor, e.count);
  return out;
}

TableStats stats(const AmountTable& table) {
  TableStats s;
  s.pair_count = table.pair_count();
  s.sensor_count = table.sensor_count();
  if (s.pair_count > 0) {
    s.avg_msgs_per_pair =
        static_cast<double>(table.total_messages()) / static_cast<double>(s.pair_count);
  }
  return s;
}

// ---- persistence ------------------------------------------------------------

std::uint32_t crc32c(std::span<const std::uint8_t> bytes) {
  boost::crc_optimal<32, 0x1EDC6F41, 0xFFFFFFFF, 0xFFFFFFFF, true, true> crc;
  crc.process_bytes(bytes.data(), bytes.size());
  return crc.checksum();
}

std::vector<std::uint8_t> serialize(const AmountTable& table) {
  const auto entries = table.sorted_entries();
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + kCrcSize + entries.size() * 32);
  for (const auto b : kMagic) out.push_back(b);
  put_be<std::uint16_t>(out, kSnapshotVersion);
  put_be<std::uint8_t>(out, static_cast<std::uint8_t>(table.resolution().value()));
  put_be<std::uint64_t>(out, entries.size());
  for (const auto& e : entries) {
    if (e.sensor.size() > std::numeric_limits<std::uint16_t>::max()) {
      throw DomainError("sensor id longer than 65535 bytes");
    }
    put_be<std::uint64_t>(out, e.cell.index());
    put_be<std::uint16_t>(out, static_cast<std::uint16_t>(e.sensor.size()));
    out.insert(out.end(), e.sensor.begin(), e.sensor.end());
    put_be<std::uint64_t>(out, e.count);
  }
  put_be<std::uint32_t>(out, crc32c(out));
  return out;
}

AmountTable deserialize(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kMagic.size() ||
      !std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    throw FormatError("not a LOVE snapshot (bad magic)");
  }
  if (bytes.size() < kHeaderSize + kCrcSize) throw IntegrityError("snapshot truncated");

  const auto body = bytes.first(bytes.size() - kCrcSize);
  Cursor trailer(bytes.last(kCrcSize));
  const auto stored = trailer.get_be<std::uint32_t>();
  const auto actual = crc32c(body);
  if (stored != actual) {
    throw IntegrityError("snapshot checksum mismatch (stored " + std::to_string(stored) +
                         ", computed " + std::to_string(actual) + ")");
  }

  Cursor cur(body.subspan(kMagic.size()));
  const auto version = cur.get_be<std::uint16_t>();
  if (version != kSnapshotVersion) throw VersionError(version, kSnapshotVersion);
  const auto res_byte = cur.get_be<std::uint8_t>();
  if (res_byte < Resolution::kMin || res_byte > Resolution::kMax) {
    throw IntegrityError("snapshot resolution " + std::to_string(res_byte) + " out of range");
  }
  const Resolution res(res_byte);
  const auto count = cur.get_be<std::uint64_t>();

  AmountTable table(res);
  std::optional<std::pair<std::uint64_t, std::string>> previous;
  for (std::uint64_t i = 0; i < count; ++i) {
    const CellId cell{cur.get_be<std::uint64_t>()};
    const auto len = cur.get_be<std::uint16_t>();
    const std::string_view sensor = cur.get_bytes(len);
    const auto n = cur.get_be<std::uint64_t>();
    if (!cell.is_valid() || cell.resolution() != res.value()) {
      throw IntegrityError("snapshot entry " + std::to_string(i) + " has invalid cell");
    }
    if (n == 0 || !SensorId::is_valid_token(sensor)) {
      throw IntegrityError("snapshot entry " + std::to_string(i) + " is malformed");
    }
    if (previous && !(*previous < std::pair(cell.index(), std::string(sensor)))) {
      throw IntegrityError("snapshot entries not strictly sorted");
    }
    previous.emplace(cell.index(), std::string(sensor));
    table.add(cell, sensor, n);
  }
  if (cur.remaining() != 0) throw IntegrityError("trailing bytes after snapshot entries");
  return table;
}

void save(const AmountTable& table, const std::filesystem::path& path) {
  const auto bytes = serialize(table);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

AmountTable load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                  std::istreambuf_iterator<char>()};
  if (in.bad()) throw IoError("failed reading " + path.string());
  return deserialize(bytes);
}

void export_csv(const AmountTable& table, std::ostream& out) {
  out << "h3id,sensor,amount\n";
  for (const auto& e : table.sorted_entries()) {
    out << e.cell.to_string() << ',' << e.sensor << ',' << e.count << '\n';
  }
}

}  // namespace love
