#include "love/geoindex.hpp"

#include <h3api.h>

#include <charconv>
#include <cmath>
#include <numbers>

#include "love/error.hpp"

namespace love {

namespace {

struct ResolutionConstants {
  std::int64_t hexagons;
  double area_km2;
};

// Hexagon counts exclude the 12 pentagons present at every resolution;
// areas are H3's published averages rounded to 0.01 km^2.
constexpr std::array<ResolutionConstants, 6> kConstants{{
    {5'870, 86'801.78},
    {41'150, 12'393.43},
    {288'110, 1'770.35},
    {2'016'830, 252.90},
    {14'117'870, 36.13},
    {98'825'150, 5.16},
}};

double to_radians(double deg) { return deg * std::numbers::pi / 180.0; }
double to_degrees(double rad) { return rad * 180.0 / std::numbers::pi; }

}  // namespace

Resolution::Resolution(int value) : value_(value) {
  if (value < kMin || value > kMax) {
    throw DomainError("resolution " + std::to_string(value) +
                      " outside supported range 2..7");
  }
}

std::array<Resolution, 6> Resolution::all() {
  return {Resolution{2}, Resolution{3}, Resolution{4},
          Resolution{5}, Resolution{6}, Resolution{7}};
}

bool is_valid(const GeoCoord& coord) noexcept {
  return std::isfinite(coord.lat) && std::isfinite(coord.lon) &&
         coord.lat >= -90.0 && coord.lat <= 90.0 && coord.lon >= -180.0 &&
         coord.lon <= 180.0;
}

void validate(const GeoCoord& coord) {
  if (!std::isfinite(coord.lat) || coord.lat < -90.0 || coord.lat > 90.0) {
    throw DomainError("latitude " + std::to_string(coord.lat) +
                      " outside [-90, 90]");
  }
  if (!std::isfinite(coord.lon) || coord.lon < -180.0 || coord.lon > 180.0) {
    throw DomainError("longitude " + std::to_string(coord.lon) +
                      " outside [-180, 180]");
  }
}

int CellId::resolution() const noexcept {
  return getResolution(static_cast<H3Index>(index_));
}

bool CellId::is_valid() const noexcept {
  return isValidCell(static_cast<H3Index>(index_)) != 0;
}

std::string CellId::to_string() const {
  char buf[17];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, index_, 16);
  return std::string(buf, end);
}

std::optional<CellId> CellId::parse(std::string_view text) {
  if (text.empty() || text.size() > 16) return std::nullopt;
  std::uint64_t value = 0;
  auto [end, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value, 16);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    return std::nullopt;
  }
  CellId cell{value};
  if (!cell.is_valid()) return std::nullopt;
  return cell;
}

CellId cell_of(const GeoCoord& coord, Resolution res) {
  validate(coord);
  LatLng ll{to_radians(coord.lat), to_radians(coord.lon)};
  H3Index out = 0;
  if (latLngToCell(&ll, res.value(), &out) != E_SUCCESS) {
    throw DomainError("H3 rejected coordinate (" + std::to_string(coord.lat) +
                      ", " + std::to_string(coord.lon) + ")");
  }
  return CellId{out};
}

GeoCoord cell_center(CellId cell) {
  LatLng ll{};
  if (cellToLatLng(static_cast<H3Index>(cell.index()), &ll) != E_SUCCESS) {
    throw DomainError("invalid cell " + cell.to_string());
  }
  return {to_degrees(ll.lat), to_degrees(ll.lng)};
}

CellId cell_parent(CellId cell, Resolution coarser) {
  H3Index out = 0;
  if (cellToParent(static_cast<H3Index>(cell.index()), coarser.value(),
                   &out) != E_SUCCESS) {
    throw DomainError("no parent of " + cell.to_string() + " at resolution " +
                      std::to_string(coarser.value()));
  }
  return CellId{out};
}

ResolutionStats resolution_stats(Resolution res) {
  const auto& c = kConstants[static_cast<std::size_t>(res.value() - Resolution::kMin)];
  return {res, c.hexagons, c.area_km2};
}

double cell_diameter_km(Resolution res) {
  const double area = resolution_stats(res).avg_area_km2;
  return kCellDiameterSafetyFactor * 2.0 * std::sqrt(area / std::numbers::pi);
}

double great_circle_km(const GeoCoord& a, const GeoCoord& b) {
  const double p1 = to_radians(a.lat);
  const double p2 = to_radians(b.lat);
  const double dp = p2 - p1;
  const double dl = to_radians(b.lon - a.lon);
  const double h = std::sin(dp / 2) * std::sin(dp / 2) +
                   std::cos(p1) * std::cos(p2) * std::sin(dl / 2) * std::sin(dl / 2);
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

}  // namespace love
