#include <gtest/gtest.h>

#include <h3api.h>

#include <cmath>
#include <numbers>
#include <random>

#include "love/error.hpp"
#include "love/geoindex.hpp"
#include "oracles.hpp"

namespace love {
namespace {

using testing::h3_avg_area_km2;
using testing::h3_cell;
using testing::h3_num_cells;

std::vector<GeoCoord> random_coords(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> lat(-89.9, 89.9);
  std::uniform_real_distribution<double> lon(-180.0, 180.0);
  std::vector<GeoCoord> out(n);
  for (auto& c : out) c = {lat(gen), lon(gen)};
  return out;
}

TEST(Resolution, AcceptsTwoThroughSeven) {
  for (int r = 2; r <= 7; ++r) EXPECT_EQ(Resolution(r).value(), r);
  for (int r : {-1, 0, 1, 8, 15}) EXPECT_THROW(Resolution{r}, DomainError) << r;
}

TEST(Resolution, AllIsAscending) {
  const auto all = Resolution::all();
  ASSERT_EQ(all.size(), 6u);
  for (std::size_t i = 0; i < all.size(); ++i) EXPECT_EQ(all[i].value(), static_cast<int>(i) + 2);
}

TEST(GeoCoord, ValidationNamesTheField) {
  EXPECT_NO_THROW(validate({90.0, 180.0}));
  EXPECT_NO_THROW(validate({-90.0, -180.0}));
  try {
    validate({90.5, 0.0});
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("latitude"), std::string::npos);
  }
  try {
    validate({0.0, -180.01});
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("longitude"), std::string::npos);
  }
  EXPECT_FALSE(is_valid({std::nan(""), 0.0}));
  EXPECT_FALSE(is_valid({0.0, INFINITY}));
}

// Values computed with the Python h3 4.x bindings, frozen here.
struct Golden {
  double lat, lon;
  int res;
  const char* cell;
};
constexpr Golden kGolden[] = {
    {0.0, 0.0, 2, "82754ffffffffff"},      {53.55, 9.99, 4, "841f15bffffffff"},
    {48.1, 11.5, 3, "831f8dfffffffff"},    {52.52, 13.405, 7, "871f1d489ffffff"},
    {-33.86, 151.21, 5, "85be0e37fffffff"}, {64.1, -21.9, 6, "86075d8b7ffffff"},
    {89.9, 0.0, 2, "820327fffffffff"},      {-89.9, 179.9, 7, "87f293952ffffff"},
    {40.0, -180.0, 4, "8432b61ffffffff"},
};

TEST(CellOf, MatchesReferenceImplementation) {
  for (const auto& g : kGolden) {
    const auto cell = cell_of({g.lat, g.lon}, Resolution(g.res));
    EXPECT_EQ(cell.to_string(), g.cell) << g.lat << "," << g.lon << " r" << g.res;
    EXPECT_EQ(cell.resolution(), g.res);
    EXPECT_TRUE(cell.is_valid());
  }
}

TEST(CellOf, RejectsInvalidCoordinates) {
  EXPECT_THROW(cell_of({91.0, 0.0}, Resolution(4)), DomainError);
  EXPECT_THROW(cell_of({0.0, 181.0}, Resolution(4)), DomainError);
  EXPECT_THROW(cell_of({std::nan(""), 0.0}, Resolution(4)), DomainError);
}

TEST(CellOf, ResolutionRoundTrip) {
  for (const auto& c : random_coords(2000, 1)) {
    for (auto r : Resolution::all()) ASSERT_EQ(cell_of(c, r).resolution(), r.value());
  }
}

TEST(CellOf, DeterministicAndAgreesWithRawApi) {
  const auto coords = random_coords(10'000, 2);
  std::vector<CellId> first;
  std::vector<CellId> second;
  for (const auto& c : coords) first.push_back(cell_of(c, Resolution(4)));
  for (const auto& c : coords) second.push_back(cell_of(c, Resolution(4)));
  EXPECT_EQ(first, second);
  for (std::size_t i = 0; i < coords.size(); ++i) {
    ASSERT_EQ(first[i].index(), h3_cell(coords[i].lat, coords[i].lon, 4));
  }
}

TEST(CellOf, CentroidMapsBackToSameCell) {
  for (const auto& c : random_coords(3000, 3)) {
    for (auto r : Resolution::all()) {
      const auto cell = cell_of(c, r);
      ASSERT_EQ(cell_of(cell_center(cell), r), cell);
    }
  }
}

// H3 cells do not nest exactly: a point near a child boundary can fall in a
// child whose parent is a neighbour of the point's own coarse cell. What
// does hold is that a child's center lands in its parent.
TEST(CellOf, ChildCenterLiesInParentCell) {
  for (const auto& c : random_coords(3000, 4)) {
    for (int r = 2; r < 7; ++r) {
      const auto child = cell_of(c, Resolution(r + 1));
      const auto parent = cell_parent(child, Resolution(r));
      ASSERT_EQ(parent.resolution(), r);
      ASSERT_EQ(cell_of(cell_center(child), Resolution(r)), parent);
    }
  }
}

TEST(CellOf, ParentOfPointCellUsuallyMatchesCoarseCell) {
  std::size_t agree = 0;
  std::size_t total = 0;
  for (const auto& c : random_coords(5000, 5)) {
    for (int r = 2; r < 7; ++r, ++total) {
      agree += cell_parent(cell_of(c, Resolution(r + 1)), Resolution(r)) ==
               cell_of(c, Resolution(r));
    }
  }
  // Roughly one in seven children straddles a parent boundary.
  EXPECT_GT(static_cast<double>(agree) / static_cast<double>(total), 0.85);
}

TEST(CellParent, RejectsFinerTarget) {
  const auto cell = cell_of({50.0, 10.0}, Resolution(4));
  EXPECT_EQ(cell_parent(cell, Resolution(4)), cell);
  EXPECT_THROW(cell_parent(cell, Resolution(5)), DomainError);
}

TEST(CellId, StringRoundTrip) {
  for (const auto& g : kGolden) {
    const auto parsed = CellId::parse(g.cell);
    ASSERT_TRUE(parsed);
    EXPECT_EQ(parsed->to_string(), g.cell);
  }
  EXPECT_FALSE(CellId::parse(""));
  EXPECT_FALSE(CellId::parse("zz"));
  EXPECT_FALSE(CellId::parse("0"));
  EXPECT_FALSE(CellId::parse("841f15bffffffff0"));
  EXPECT_FALSE(CellId{}.is_valid());
}

TEST(ResolutionStats, TableConstants) {
  struct Row {
    int res;
    std::int64_t count;
    double area;
  };
  constexpr Row kRows[] = {{2, 5870, 86801.78},   {3, 41150, 12393.43},  {4, 288110, 1770.35},
                           {5, 2016830, 252.90},  {6, 14117870, 36.13}, {7, 98825150, 5.16}};
  for (const auto& row : kRows) {
    const auto s = resolution_stats(Resolution(row.res));
    EXPECT_EQ(s.resolution.value(), row.res);
    EXPECT_EQ(s.hexagon_count, row.count);
    EXPECT_NEAR(s.avg_area_km2, row.area, 0.005);
  }
}

// Hexagon counts exclude the twelve pentagons present at every resolution.
TEST(ResolutionStats, AgreesWithRawApi) {
  for (auto r : Resolution::all()) {
    const auto s = resolution_stats(r);
    EXPECT_EQ(s.hexagon_count, h3_num_cells(r.value()) - 12);
    EXPECT_NEAR(s.avg_area_km2, h3_avg_area_km2(r.value()), 0.005);
  }
}

TEST(CellDiameter, AtLeastCircleEquivalent) {
  EXPECT_GE(cell_diameter_km(Resolution(2)), 332.5);
  EXPECT_GE(cell_diameter_km(Resolution(7)), 2.56);
  for (auto r : Resolution::all()) {
    const double area = resolution_stats(r).avg_area_km2;
    EXPECT_DOUBLE_EQ(cell_diameter_km(r), 1.3 * 2.0 * std::sqrt(area / std::numbers::pi));
  }
}

TEST(CellDiameter, StrictlyDecreasing) {
  for (int r = 2; r < 7; ++r) {
    EXPECT_GT(cell_diameter_km(Resolution(r)), cell_diameter_km(Resolution(r + 1)));
  }
}

// Largest vertex-to-vertex distance of sampled real cells stays under the
// bound, including cells near the poles where H3 distortion peaks.
TEST(CellDiameter, BoundsSampledCellBoundaries) {
  auto coords = random_coords(1500, 6);
  coords.push_back({89.0, 0.0});
  coords.push_back({-89.0, 45.0});
  for (auto r : Resolution::all()) {
    for (const auto& c : coords) {
      const auto cell = cell_of(c, r);
      CellBoundary b;
      ASSERT_EQ(cellToBoundary(cell.index(), &b), E_SUCCESS);
      double widest = 0.0;
      for (int i = 0; i < b.numVerts; ++i) {
        for (int j = i + 1; j < b.numVerts; ++j) {
          widest = std::max(widest, great_circle_km({radsToDegs(b.verts[i].lat),
                                                     radsToDegs(b.verts[i].lng)},
                                                    {radsToDegs(b.verts[j].lat),
                                                     radsToDegs(b.verts[j].lng)}));
        }
      }
      ASSERT_LE(widest, cell_diameter_km(r)) << cell.to_string();
    }
  }
}

TEST(GreatCircle, KnownDistances) {
  EXPECT_DOUBLE_EQ(great_circle_km({10.0, 20.0}, {10.0, 20.0}), 0.0);
  // One degree of arc on the mean sphere.
  EXPECT_NEAR(great_circle_km({0.0, 0.0}, {1.0, 0.0}), 111.195, 1e-3);
  EXPECT_NEAR(great_circle_km({0.0, 0.0}, {0.0, 180.0}), std::numbers::pi * 6371.0088, 1e-6);
}

}  // namespace
}  // namespace love
