#include <doctest.h>

#include <random>

#include "socfield/grid.hpp"

using namespace socfield;

TEST_CASE("wrap: periodic reduces modulo the lattice") {
    const GridGeometry g(100, 100, BoundaryMode::Periodic);
    CHECK(*wrap(g, 100, -1) == SuIndex{0, 99});
    CHECK(*wrap(g, 5, 5) == SuIndex{5, 5});
    CHECK(*wrap(g, -250, 305) == SuIndex{50, 5});
}

TEST_CASE("wrap: closed marks out-of-bounds as a value") {
    const GridGeometry g(10, 10, BoundaryMode::Closed);
    CHECK(!wrap(g, 10, 3).has_value());
    CHECK(!wrap(g, 3, -1).has_value());
    CHECK(*wrap(g, 9, 9) == SuIndex{9, 9});
}

TEST_CASE("wrap is idempotent") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> coord(-1000, 1000);
    for (const auto mode : {BoundaryMode::Periodic, BoundaryMode::Closed}) {
        const GridGeometry g(37, 19, mode);
        for (int i = 0; i < 500; ++i) {
            const auto once = wrap(g, coord(rng), coord(rng));
            if (!once) continue;
            CHECK(*wrap(g, *once) == *once);
        }
    }
}

TEST_CASE("footprint_cells: identity, wrap, and axis cases") {
    const GridGeometry g(10, 10, BoundaryMode::Periodic);
    SUBCASE("1x1 is just the center") {
        const auto fc = footprint_cells(g, {5, 5}, Footprint{1, 1});
        REQUIRE(fc.cells.size() == 1);
        CHECK(fc.cells[0] == SuIndex{5, 5});
        CHECK(!fc.clipped);
    }
    SUBCASE("3x3 at the corner wraps") {
        const auto fc = footprint_cells(g, {0, 0}, Footprint{3, 3});
        const std::vector<SuIndex> expect = {{9, 9}, {0, 9}, {1, 9}, {9, 0}, {0, 0},
                                             {1, 0}, {9, 1}, {0, 1}, {1, 1}};
        REQUIRE(fc.cells.size() == 9);
        for (const auto& c : expect) {
            CHECK(std::count(fc.cells.begin(), fc.cells.end(), c) == 1);
        }
    }
    SUBCASE("3x1 spans the row") {
        const auto fc = footprint_cells(g, {2, 2}, Footprint{3, 1});
        const std::vector<SuIndex> expect = {{1, 2}, {2, 2}, {3, 2}};
        CHECK(fc.cells == expect);
    }
}

TEST_CASE("footprint_cells: clipped under a closed boundary") {
    const GridGeometry g(10, 10, BoundaryMode::Closed);
    const auto fc = footprint_cells(g, {0, 5}, Footprint{3, 3});
    CHECK(fc.clipped);
    CHECK(fc.cells.size() == 6);
}

TEST_CASE("footprint_cells: periodic always yields w*h cells") {
    const GridGeometry g(11, 7, BoundaryMode::Periodic);
    for (int y = 0; y < g.height; ++y) {
        for (int x = 0; x < g.width; ++x) {
            const auto fc = footprint_cells(g, {x, y}, Footprint{5, 3});
            CHECK(fc.cells.size() == 15);
            CHECK(!fc.clipped);
        }
    }
}

TEST_CASE("footprint oddness is enforced") {
    CHECK_THROWS_AS(Footprint(2, 3), ConfigError);
    CHECK_THROWS_AS(Footprint(3, 0), ConfigError);
}

TEST_CASE("local_density: empty, saturated, and single-occupant windows") {
    const GridGeometry g(10, 10, BoundaryMode::Periodic);
    OccupancyGrid occ(g);
    CHECK(local_density(occ, {4, 4}, 2) == 0.0);

    for (int y = 0; y < 10; ++y)
        for (int x = 0; x < 10; ++x) occ.set({x, y}, 1);
    CHECK(local_density(occ, {4, 4}, 1) == 1.0);

    OccupancyGrid one(g);
    one.set({4, 4}, 0);
    // one occupied cell in the 3x3 window, counted by direct enumeration
    CHECK(local_density(one, {4, 4}, 1) == doctest::Approx(1.0 / 9.0));
}

TEST_CASE("local_density: translation invariance under periodic boundary") {
    const GridGeometry g(16, 16, BoundaryMode::Periodic);
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> coord(0, 15);
    OccupancyGrid occ(g);
    for (int i = 0; i < 40; ++i) occ.set({coord(rng), coord(rng)}, i);

    for (int trial = 0; trial < 20; ++trial) {
        const int sx = coord(rng);
        const int sy = coord(rng);
        OccupancyGrid shifted(g);
        for (int y = 0; y < 16; ++y)
            for (int x = 0; x < 16; ++x)
                shifted.set(*wrap(g, x + sx, y + sy), occ.at({x, y}));
        const SuIndex center{coord(rng), coord(rng)};
        const SuIndex shifted_center = *wrap(g, center.x + sx, center.y + sy);
        CHECK(local_density(occ, center, 3) == local_density(shifted, shifted_center, 3));
    }
}

TEST_CASE("local_density: closed boundary clips the window") {
    const GridGeometry g(10, 10, BoundaryMode::Closed);
    OccupancyGrid occ(g);
    occ.set({0, 0}, 7);
    // corner window with radius 1 covers 4 cells, one occupied
    CHECK(local_density(occ, {0, 0}, 1) == doctest::Approx(0.25));
}
