#include <doctest.h>

#include "sapoa/assembly_tree.hpp"

using namespace sapoa;

namespace {

// Independent brute force: best |S1|*|S2| over all axis-aligned threshold
// cuts, scanning raw coordinate ranges rather than the production enumerator.
long brute_force_best_score(const CellSet& s) {
    Box b = bounding_box(s);
    long best = -1;
    for (int axis = 0; axis < 2; ++axis) {
        int lo = axis == 0 ? b.min_x : b.min_y;
        int hi = axis == 0 ? b.max_x : b.max_y;
        for (int threshold = lo + 1; threshold <= hi; ++threshold) {
            long below = 0;
            for (Cell c : s)
                if ((axis == 0 ? c.x : c.y) < threshold) ++below;
            long above = static_cast<long>(s.size()) - below;
            if (below > 0 && above > 0)
                best = std::max(best, below * above);
        }
    }
    return best;
}

CellSet random_connected_set(Rng& rng, int n) {
    CellSet s = {{5, 5}};
    while (static_cast<int>(s.size()) < n) {
        Cell base = s[rng.below(static_cast<std::uint32_t>(s.size()))];
        Cell c = base + kMoves[rng.below(4)];
        s.push_back(c);
        normalize(s);
    }
    return s;
}

}  // namespace

TEST_CASE("all_divisions enumerates every threshold cut") {
    CellSet s = make_cell_set({{0, 0}, {1, 0}, {2, 0}, {0, 1}});
    auto divs = all_divisions(s);
    // 3 distinct x (2 cuts) + 2 distinct y (1 cut).
    REQUIRE(divs.size() == 3);
    for (const auto& [lo, hi] : divs) {
        CHECK(!lo.empty());
        CHECK(!hi.empty());
        CellSet merged = lo;
        merged.insert(merged.end(), hi.begin(), hi.end());
        normalize(merged);
        CHECK(merged == s);
    }
    CHECK_THROWS_AS(all_divisions(make_cell_set({{0, 0}})),
                    std::invalid_argument);
}

TEST_CASE("best_division picks the balanced cut") {
    // 2x2 square: every cut is 2|2, score 4.
    Division d = best_division(make_cell_set({{0, 0}, {1, 0}, {0, 1}, {1, 1}}));
    CHECK(d.score == 4);
    CHECK(d.low.size() == 2);
    CHECK(d.high.size() == 2);
    // Ties prefer vertical cuts (enumeration order).
    CHECK(d.axis == Axis::X);
    // 1x6 bar: middle cut wins with 9.
    Division bar = best_division(
        make_cell_set({{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}, {5, 0}}));
    CHECK(bar.score == 9);
    CHECK(bar.low.size() == 3);
}

TEST_CASE("best_division score equals exhaustive maximum") {
    Rng rng(77);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 2 + static_cast<int>(rng.below(9));  // |S| in [2, 10]
        CellSet s = random_connected_set(rng, n);
        Division d = best_division(s);
        CHECK(d.score == brute_force_best_score(s));
        CHECK(d.score == static_cast<long>(d.low.size()) *
                             static_cast<long>(d.high.size()));
    }
}

TEST_CASE("tree structure and ids") {
    CellSet s = make_cell_set(
        {{0, 0}, {1, 0}, {2, 0}, {0, 1}, {1, 1}, {2, 1}});
    auto tree = build_tree(s);
    CHECK(tree->targets == s);
    CHECK(tree->depth == 0);

    int leaves = 0, internal = 0;
    std::vector<int> leaf_ids;
    visit(*tree, [&](const AssemblyNode& n) {
        if (n.is_leaf()) {
            ++leaves;
            leaf_ids.push_back(n.id);
            CHECK(n.targets.size() == 1);
        } else {
            ++internal;
            // Children partition the parent.
            CellSet merged = n.left->targets;
            merged.insert(merged.end(), n.right->targets.begin(),
                          n.right->targets.end());
            normalize(merged);
            CHECK(merged == n.targets);
            CHECK(!intersects(n.left->targets, n.right->targets));
            CHECK(n.min_leaf ==
                  std::min(n.left->min_leaf, n.right->min_leaf));
            CHECK(n.left->depth == n.depth + 1);
        }
    });
    CHECK(leaves == 6);
    CHECK(internal == 5);
    std::sort(leaf_ids.begin(), leaf_ids.end());
    for (int i = 0; i < 6; ++i) CHECK(leaf_ids[static_cast<size_t>(i)] == i);
    CHECK(tree->id == 10);  // internal ids follow the leaves
    CHECK(max_depth(*tree) >= 3);  // 6 leaves need depth >= ceil(log2 6)
}

TEST_CASE("build_tree is deterministic") {
    CellSet s = make_cell_set({{1, 0}, {0, 1}, {1, 1}, {2, 1}, {1, 2}});
    auto a = build_tree(s);
    auto b = build_tree(s);
    CHECK(tree_to_json(*a) == tree_to_json(*b));
    CHECK_THROWS_AS(build_tree({}), std::invalid_argument);
}
