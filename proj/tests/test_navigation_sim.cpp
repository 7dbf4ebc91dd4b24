#include <doctest.h>

#include "sapoa/strategies.hpp"

using namespace sapoa;

TEST_CASE("docking conditions") {
    CellSet region = make_cell_set({{3, 3}, {4, 3}});
    CHECK(one_move_from(make_cell_set({{2, 3}, {3, 3}}), region));
    CHECK(one_move_from(make_cell_set({{3, 4}, {4, 4}}), region));
    CHECK(!one_move_from(make_cell_set({{1, 3}, {2, 3}}), region));
    CHECK(!one_move_from(make_cell_set({{3, 3}}), region));  // size mismatch
    // Partner already inside its region, mover one step out: dock allowed.
    CellSet pr = make_cell_set({{6, 3}});
    CHECK(check_dock(make_cell_set({{2, 3}, {3, 3}}), region,
                     make_cell_set({{6, 3}}), pr));
    // Partner far away: no dock.
    CHECK(!check_dock(make_cell_set({{2, 3}, {3, 3}}), region,
                      make_cell_set({{0, 0}}), pr));
}

TEST_CASE("full pipeline succeeds on an open map") {
    CellSet targets = translated(
        make_cell_set({{0, 0}, {1, 0}, {0, 1}, {1, 1}}), {5, 5});
    World w(14, 14, {}, {{1, 1}, {12, 1}, {1, 12}, {12, 12}},
            std::vector<Cell>(targets.begin(), targets.end()));

    Plan p = plan(w, StrategyKind::SAPOA, 1);
    REQUIRE(p.ok);
    Trace t = run_plan(w, p);
    REQUIRE(t.outcome == Outcome::Success);

    std::string why;
    CHECK(validate_trace(t, w, 2, &why));
    INFO(why);

    // n robots need n - 1 docks; docks are sequential.
    CHECK(t.dock_events.size() == 3);
    for (size_t i = 1; i < t.dock_events.size(); ++i)
        CHECK(t.dock_events[i].tick > t.dock_events[i - 1].tick);

    // Final structure equals the target set.
    CellSet final_cells;
    for (const auto& g : t.steps.back().groups)
        final_cells.insert(final_cells.end(), g.cells.begin(), g.cells.end());
    normalize(final_cells);
    CHECK(final_cells == w.target_set());

    // Group count never increases tick over tick.
    for (size_t i = 1; i < t.steps.size(); ++i)
        CHECK(t.steps[i].groups.size() <= t.steps[i - 1].groups.size());
    CHECK(t.makespan == t.steps.back().tick);
}

TEST_CASE("non-partner clearance holds throughout a run") {
    auto suite = generate_suite(7);
    const World& w = suite[0];  // category 1
    Plan p = plan(w, StrategyKind::SAPOA, 5);
    REQUIRE(p.ok);
    Trace t = run_plan(w, p);
    auto partners = [&](int a, int b) {
        for (const auto& e : t.dock_events)
            if ((e.group_a == a && e.group_b == b) ||
                (e.group_a == b && e.group_b == a))
                return true;
        return false;
    };
    for (const auto& step : t.steps)
        for (size_t i = 0; i < step.groups.size(); ++i)
            for (size_t j = i + 1; j < step.groups.size(); ++j) {
                int cheb = min_chebyshev(step.groups[i].cells,
                                         step.groups[j].cells);
                CHECK(cheb >= 1);
                if (!partners(step.groups[i].id, step.groups[j].id))
                    CHECK(2 * (cheb - 1) >= 2);
            }
}

TEST_CASE("naive strategy fuses aligned neighbors into the target") {
    // Robots already stand on the target bar: fusions are always aligned.
    World w = parse_world(
        "......\n"
        ".XXXX.\n"
        "......\n");
    Plan p = plan(w, StrategyKind::Naive, 0);
    REQUIRE(p.ok);
    CHECK(!p.tree);
    Trace t = run_plan(w, p);
    CHECK(t.outcome == Outcome::Success);
    CHECK(t.dock_events.size() == 3);
    CHECK(validate_trace(t, w, 0));
}

TEST_CASE("naive strategy mis-docks on misaligned contact") {
    // Two robots start vertically adjacent; their targets are horizontal.
    World w = parse_world(
        "R.....\n"
        "R.....\n"
        "....TT\n");
    Plan p = plan(w, StrategyKind::Naive, 0);
    REQUIRE(p.ok);
    Trace t = run_plan(w, p);
    CHECK(t.outcome == Outcome::FailMisdock);
}

TEST_CASE("validator rejects corrupted traces") {
    World w = parse_world(
        "R.T.\n"
        "R.T.\n");
    Trace t;
    TraceStep s0;
    s0.tick = 0;
    s0.groups.push_back({0, make_cell_set({{0, 0}}), std::nullopt});
    s0.groups.push_back({1, make_cell_set({{0, 0}}), std::nullopt});
    t.steps.push_back(s0);
    std::string why;
    CHECK(!validate_trace(t, w, 0, &why));
    CHECK(why == "groups overlap");

    Trace t2;
    TraceStep s1;
    s1.tick = 0;
    s1.groups.push_back({0, make_cell_set({{9, 9}}), std::nullopt});
    t2.steps.push_back(s1);
    CHECK(!validate_trace(t2, w, 0, &why));
    CHECK(why == "group out of bounds");

    Trace t3;
    t3.dock_events = {{3, 0, 1}, {3, 2, 3}};
    CHECK(!validate_trace(t3, w, 0, &why));
    CHECK(why == "dock ticks not increasing");

    // A claimed Success whose final cells miss the targets is rejected.
    Trace t4;
    TraceStep s2;
    s2.tick = 0;
    s2.groups.push_back({0, make_cell_set({{0, 0}, {0, 1}}), std::nullopt});
    t4.steps.push_back(s2);
    t4.outcome = Outcome::Success;
    CHECK(!validate_trace(t4, w, 0, &why));
    CHECK(why == "final cells differ from targets");
}

TEST_CASE("trace json round trip") {
    World w = parse_world(
        "RR..\n"
        ".TT.\n");
    Plan p = plan(w, StrategyKind::Naive, 0);
    REQUIRE(p.ok);
    Trace t = run_plan(w, p);
    auto j = trace_to_json(t, w, "naive", 0);
    Trace back = trace_from_json(j);
    CHECK(trace_to_json(back, w, "naive", 0) == j);
    CHECK(back.makespan == t.makespan);
    CHECK(back.outcome == t.outcome);
    CHECK(back.dock_events.size() == t.dock_events.size());
}
