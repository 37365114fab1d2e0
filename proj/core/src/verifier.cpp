#include "love/verifier.hpp"

#include <algorithm>
#include <chrono>
#include <mutex>
#include <thread>

#include "love/error.hpp"

namespace love {

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::kPlausible:
      return "Plausible";
    case Verdict::kImplausible:
      return "Implausible";
    case Verdict::kUnknownSensor:
      return "UnknownSensor";
  }
  return "?";
}

std::optional<Verdict> parse_verdict(std::string_view text) noexcept {
  for (auto v : {Verdict::kPlausible, Verdict::kImplausible, Verdict::kUnknownSensor}) {
    if (to_string(v) == text) return v;
  }
  return std::nullopt;
}

Verdict verify(const AmountTable& table, const AdsbObservation& obs,
               const VerifyOptions& options) {
  const CellId cell = cell_of(obs.coord, table.resolution());
  const std::string_view sensor = obs.sensor.str();
  if (table.count(cell, sensor) >= std::max<std::uint64_t>(1, options.min_count)) {
    return Verdict::kPlausible;
  }
  return table.knows_sensor(sensor) ? Verdict::kImplausible : Verdict::kUnknownSensor;
}

BatchResult verify_batch(const AmountTable& table, std::span<const AdsbObservation> obs,
                         const VerifyOptions& options, unsigned threads) {
  BatchResult result;
  result.verdicts.resize(obs.size());
  std::mutex error_mutex;

  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        result.verdicts[i] = verify(table, obs[i], options);
      } catch (const Error& e) {
        std::lock_guard lock(error_mutex);
        result.errors.push_back(BatchError{i, e.what()});
      }
    }
  };

  const auto start = std::chrono::steady_clock::now();
  threads = std::max(1u, threads);
  constexpr std::size_t kMinChunk = 8'192;
  const std::size_t chunks =
      std::min<std::size_t>(threads, std::max<std::size_t>(1, obs.size() / kMinChunk));
  if (chunks <= 1) {
    run(0, obs.size());
  } else {
    std::vector<std::jthread> workers;
    const std::size_t step = (obs.size() + chunks - 1) / chunks;
    for (std::size_t begin = 0; begin < obs.size(); begin += step) {
      workers.emplace_back(run, begin, std::min(obs.size(), begin + step));
    }
  }
  const auto stop = std::chrono::steady_clock::now();

  std::sort(result.errors.begin(), result.errors.end(),
            [](const BatchError& a, const BatchError& b) { return a.index < b.index; });
  result.timing.wall_seconds = std::chrono::duration<double>(stop - start).count();
  if (result.timing.wall_seconds > 0.0) {
    result.timing.throughput_per_sec =
        static_cast<double>(obs.size()) / result.timing.wall_seconds;
  }
  return result;
}

}  // namespace love
