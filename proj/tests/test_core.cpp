#include <doctest.h>

#include "sapoa/core.hpp"

using namespace sapoa;

TEST_CASE("cell ordering is row-major") {
    CHECK(Cell{5, 0} < Cell{0, 1});
    CHECK(Cell{0, 1} < Cell{1, 1});
    CHECK(Cell{2, 3} == Cell{2, 3});
    CellSet s = make_cell_set({{3, 1}, {0, 0}, {3, 1}, {1, 0}});
    REQUIRE(s.size() == 3);
    CHECK(s.front() == Cell{0, 0});
    CHECK(s.back() == Cell{3, 1});
}

TEST_CASE("translated preserves canonical order") {
    CellSet s = make_cell_set({{0, 0}, {1, 0}, {0, 1}});
    CellSet t = translated(s, {4, -2});
    CHECK(std::is_sorted(t.begin(), t.end()));
    CHECK(t == make_cell_set({{4, -2}, {5, -2}, {4, -1}}));
}

TEST_CASE("contains and intersects") {
    CellSet a = make_cell_set({{0, 0}, {2, 2}});
    CellSet b = make_cell_set({{2, 2}, {3, 3}});
    CHECK(contains(a, {2, 2}));
    CHECK(!contains(a, {1, 1}));
    CHECK(intersects(a, b));
    CHECK(!intersects(a, make_cell_set({{9, 9}})));
}

TEST_CASE("bounding box") {
    Box b = bounding_box(make_cell_set({{3, 7}, {-1, 2}, {5, 4}}));
    CHECK(b.min_x == -1);
    CHECK(b.max_x == 5);
    CHECK(b.min_y == 2);
    CHECK(b.max_y == 7);
    CHECK(bounding_box({}).empty());
}

TEST_CASE("min_chebyshev matches the unfiltered pairwise scan") {
    Rng rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        CellSet a, b;
        int na = 1 + static_cast<int>(rng.below(6));
        int nb = 1 + static_cast<int>(rng.below(6));
        for (int i = 0; i < na; ++i)
            a.push_back({static_cast<int>(rng.below(20)),
                         static_cast<int>(rng.below(20))});
        for (int i = 0; i < nb; ++i)
            b.push_back({static_cast<int>(rng.below(20)),
                         static_cast<int>(rng.below(20))});
        normalize(a);
        normalize(b);
        int expected = INT32_MAX;
        for (Cell ca : a)
            for (Cell cb : b) expected = std::min(expected, chebyshev(ca, cb));
        CHECK(min_chebyshev(a, b) == expected);
    }
}

TEST_CASE("group gap in units") {
    CellSet a = make_cell_set({{0, 0}});
    // Touching (including diagonal) is gap 0; one empty cell is 2 units.
    CHECK(group_gap_units(a, make_cell_set({{1, 0}})) == 0);
    CHECK(group_gap_units(a, make_cell_set({{1, 1}})) == 0);
    CHECK(group_gap_units(a, make_cell_set({{2, 0}})) == 2);
    CHECK(group_gap_units(a, make_cell_set({{0, 3}})) == 4);
    CHECK_THROWS_AS(group_gap_units(a, a), std::invalid_argument);
    CHECK_THROWS_AS(group_gap_units(a, CellSet{}), std::invalid_argument);
}

TEST_CASE("rng is deterministic and bounded") {
    Rng a(7), b(7), c(8);
    bool all_same = true, any_diff = false;
    for (int i = 0; i < 100; ++i) {
        std::uint64_t va = a.next();
        all_same = all_same && va == b.next();
        any_diff = any_diff || va != c.next();
    }
    CHECK(all_same);
    CHECK(any_diff);
    Rng d(1);
    for (int i = 0; i < 1000; ++i) {
        CHECK(d.below(7) < 7);
        double u = d.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("seed mixing separates close inputs") {
    CHECK(mix_seed(0, 0) != mix_seed(0, 1));
    CHECK(mix_seed(0, 1) != mix_seed(1, 0));
    CHECK(hash_string("") == 0xcbf29ce484222325ULL);
    CHECK(hash_string("a") != hash_string("b"));
}
