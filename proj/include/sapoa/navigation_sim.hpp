#pragma once

#include "sapoa/assignment.hpp"
#include "sapoa/target_extension.hpp"

namespace sapoa {

enum class Outcome { Success, FailTimeout, FailStuck, FailMisdock };

inline const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Success: return "success";
        case Outcome::FailTimeout: return "fail_timeout";
        case Outcome::FailStuck: return "fail_stuck";
        case Outcome::FailMisdock: return "fail_misdock";
    }
    return "unknown";
}

struct NavConfig {
    // Required gap between non-partner groups, in units (2 = one empty
    // cell). Active-docking and naive runs allow contact (0).
    int nonpartner_gap_units = 2;
    int wait_steps = 3;        // hold time for the higher-priority side of a
                               // mutual block
    int max_ticks = 0;         // 0 picks 20 * (width + height)
    int stall_ticks = 50;
    int visibility_cells = 5;  // planner only knows groups this close
    bool naive_mode = false;   // merge on any adjacency, no pair gating
};

struct DockEvent {
    int tick;
    int group_a;
    int group_b;
};

struct TraceStep {
    int tick;
    std::vector<Group> groups;
};

struct Trace {
    std::vector<TraceStep> steps;
    std::vector<DockEvent> dock_events;
    int makespan = 0;
    long total_moves = 0;
    Outcome outcome = Outcome::FailTimeout;
};

// Docking rule: (i) g_i is one unit move from fully covering its target
// region; (ii) its partner already touches the partner region (or is itself
// one move away).
inline bool one_move_from(const CellSet& cells, const CellSet& region) {
    if (cells.size() != region.size()) return false;
    for (Cell m : kMoves)
        if (translated(cells, m) == region) return true;
    return false;
}

inline bool check_dock(const CellSet& gi_cells, const CellSet& gi_region,
                       const CellSet& gj_cells, const CellSet& gj_region) {
    if (!one_move_from(gi_cells, gi_region)) return false;
    return intersects(gj_cells, gj_region) ||
           one_move_from(gj_cells, gj_region) || gj_cells == gj_region;
}

// A robot group inside the simulator.
struct SimGroup {
    int id = -1;        // assembly-tree node id (robot index in naive mode)
    int priority = 0;   // min leaf id under the node; lower wins
    CellSet cells;
    const AssemblyNode* node = nullptr;
    std::optional<CellSet> objective;  // placement currently navigated to
    int partner_id = -1;               // active docking partner, or -1
    int wait_remaining = 0;
    FootprintPath path;                // cached anchor path
    size_t path_pos = 0;

    Cell anchor() const { return cells.front(); }
    bool arrived() const { return objective && cells == *objective; }
};

struct SimState {
    const World* world = nullptr;
    NavConfig config;
    int tick = 0;
    std::vector<SimGroup> groups;

    SimGroup* find(int id) {
        for (auto& g : groups)
            if (g.id == id) return &g;
        return nullptr;
    }
};

namespace detail {

inline int required_cheb(const SimState& state, const SimGroup& a,
                         const SimGroup& b) {
    if (a.partner_id == b.id || b.partner_id == a.id) return 1;  // disjoint
    if (state.config.naive_mode) return 1;
    return state.config.nonpartner_gap_units / 2 + 1;
}

inline bool placement_valid(const SimState& state, const SimGroup& mover,
                            const CellSet& candidate,
                            const std::vector<const CellSet*>& positions,
                            int* blocker = nullptr) {
    for (Cell c : candidate)
        if (!state.world->in_bounds(c) || state.world->is_obstacle(c))
            return false;
    for (size_t i = 0; i < state.groups.size(); ++i) {
        const SimGroup& other = state.groups[i];
        if (other.id == mover.id) continue;
        int need = required_cheb(state, mover, other);
        if (min_chebyshev(candidate, *positions[i]) < need) {
            if (blocker) *blocker = other.id;
            return false;
        }
    }
    return true;
}

// Replan the mover's path with every visible group baked into the blocked
// grid at its required clearance. Groups beyond the visibility radius are
// unknown to the planner; the per-tick validity check still protects them.
inline bool replan(const SimState& state, SimGroup& g,
                   const std::vector<const CellSet*>& positions) {
    BlockedGrid grid(state.world->width(), state.world->height());
    grid.block(state.world->obstacles());
    for (size_t i = 0; i < state.groups.size(); ++i) {
        const SimGroup& other = state.groups[i];
        if (other.id == g.id) continue;
        if (min_chebyshev(g.cells, *positions[i]) >
            state.config.visibility_cells)
            continue;
        int need = required_cheb(state, g, other);
        grid.block(*positions[i], 2 * (need - 1));
    }
    auto path = astar(g.cells, g.anchor(), g.objective->front(), grid);
    if (!path) return false;
    g.path = std::move(*path);
    g.path_pos = 0;
    return true;
}

}  // namespace detail

struct MoveDecision {
    int group_id;
    Cell move;  // {0,0} = stay
};

// One synchronous move round. Groups act in priority order; each follows its
// cached shortest path, replanning around whatever blocks it (collision
// scenario i). On a mutual block the higher-priority group is told to wait
// while the lower one replans (scenario ii). Moves are committed in order so
// the returned set is conflict-free.
inline std::vector<MoveDecision> resolve_collisions(SimState& state) {
    std::vector<size_t> order(state.groups.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        const SimGroup& ga = state.groups[a];
        const SimGroup& gb = state.groups[b];
        if (ga.priority != gb.priority) return ga.priority < gb.priority;
        return ga.id < gb.id;
    });

    // Committed placements: updated as each group moves.
    std::vector<CellSet> committed;
    std::vector<const CellSet*> positions;
    committed.reserve(state.groups.size());
    for (const auto& g : state.groups) committed.push_back(g.cells);
    for (const auto& c : committed) positions.push_back(&c);

    std::vector<MoveDecision> decisions;
    std::vector<int> blocked_by(state.groups.size(), -1);

    for (size_t gi : order) {
        SimGroup& g = state.groups[gi];
        Cell stay{0, 0};
        if (!g.objective || g.arrived()) {
            decisions.push_back({g.id, stay});
            continue;
        }
        if (g.wait_remaining > 0) {
            --g.wait_remaining;
            decisions.push_back({g.id, stay});
            continue;
        }

        auto try_move = [&](Cell mv, int* blocker) {
            CellSet candidate = translated(g.cells, mv);
            return detail::placement_valid(state, g, candidate, positions,
                                           blocker);
        };

        Cell chosen = stay;
        int blocker = -1;
        bool have_step = g.path_pos < g.path.moves.size() &&
                         g.path.waypoints[g.path_pos] == g.anchor();
        if (have_step) {
            Cell mv = g.path.moves[g.path_pos];
            if (try_move(mv, &blocker)) {
                chosen = mv;
                ++g.path_pos;
            }
        }
        if (chosen == stay) {
            // Route around whatever is in the way (scenario i).
            if (detail::replan(state, g, positions) && !g.path.moves.empty()) {
                Cell mv = g.path.moves[0];
                int b2 = -1;
                if (try_move(mv, &b2)) {
                    chosen = mv;
                    g.path_pos = 1;
                } else if (blocker < 0) {
                    blocker = b2;
                }
            }
        }

        if (chosen == stay) blocked_by[gi] = blocker;
        committed[gi] = translated(g.cells, chosen);
        decisions.push_back({g.id, chosen});
    }

    // Scenario ii: mutual block. The higher-priority group waits for a few
    // ticks; the lower one will route around it next round.
    for (size_t i = 0; i < state.groups.size(); ++i) {
        int b = blocked_by[i];
        if (b < 0) continue;
        for (size_t j = 0; j < state.groups.size(); ++j) {
            if (state.groups[j].id != b) continue;
            if (blocked_by[j] == state.groups[i].id) {
                SimGroup& hi = state.groups[i].priority <
                                       state.groups[j].priority
                                   ? state.groups[i]
                                   : state.groups[j];
                if (hi.wait_remaining == 0)
                    hi.wait_remaining = state.config.wait_steps;
            }
        }
    }
    return decisions;
}

namespace detail {

inline void apply_moves(SimState& state,
                        const std::vector<MoveDecision>& decisions,
                        long& total_moves, bool& any_motion) {
    for (const auto& d : decisions) {
        if (d.move == Cell{0, 0}) continue;
        SimGroup* g = state.find(d.group_id);
        g->cells = translated(g->cells, d.move);
        total_moves += static_cast<long>(g->cells.size());
        any_motion = true;
    }
}

inline void record_step(const SimState& state, Trace& trace) {
    TraceStep step;
    step.tick = state.tick;
    for (const auto& g : state.groups) {
        Group out;
        out.id = g.id;
        out.cells = g.cells;
        if (g.partner_id >= 0) out.partner_id = g.partner_id;
        step.groups.push_back(std::move(out));
    }
    trace.steps.push_back(std::move(step));
}

}  // namespace detail

// Stage IV for the tree-based strategies: robots trace the landmark script
// bottom-up, pairs dock one per tick, merged groups move rigidly.
inline Trace run_navigation(const World& world, const AssemblyNode& tree,
                            const std::map<int, Cell>& offsets,
                            const Assignment& assignment,
                            const NavConfig& config_in) {
    NavConfig config = config_in;
    if (config.max_ticks == 0)
        config.max_ticks = 20 * (world.width() + world.height());

    // Leaves in id order; leaf i's expanded cell is its dispatch column.
    std::vector<const AssemblyNode*> leaves(
        static_cast<size_t>(world.robot_count()), nullptr);
    visit(tree, [&](const AssemblyNode& n) {
        if (n.is_leaf()) leaves[static_cast<size_t>(n.id)] = &n;
    });

    SimState state;
    state.world = &world;
    state.config = config;
    for (size_t i = 0; i < leaves.size(); ++i) {
        int leaf = assignment.mapping[i];
        const AssemblyNode* node = leaves[static_cast<size_t>(leaf)];
        SimGroup g;
        g.id = node->id;
        g.priority = node->min_leaf;
        g.node = node;
        g.cells = {world.robots()[i]};
        g.objective = translated(node->targets, offsets.at(node->id));
        state.groups.push_back(std::move(g));
    }

    Trace trace;
    long total_moves = 0;
    int quiet_ticks = 0;
    detail::record_step(state, trace);

    while (state.tick < config.max_ticks) {
        // Activate pairs whose two sides are both resting at their landmark
        // placements: retarget them at their slots in the parent placement.
        visit(tree, [&](const AssemblyNode& n) {
            if (n.is_leaf()) return;
            SimGroup* a = state.find(n.left->id);
            SimGroup* b = state.find(n.right->id);
            if (!a || !b || a->partner_id >= 0 || b->partner_id >= 0) return;
            if (!a->arrived() || !b->arrived()) return;
            Cell base = offsets.count(n.id) ? offsets.at(n.id) : Cell{0, 0};
            a->objective = translated(n.left->targets, base);
            b->objective = translated(n.right->targets, base);
            a->partner_id = b->id;
            b->partner_id = a->id;
            a->path = {};
            a->path_pos = 0;
            b->path = {};
            b->path_pos = 0;
        });

        if (state.groups.size() == 1 && state.groups.front().arrived() &&
            state.groups.front().cells == world.target_set()) {
            trace.outcome = Outcome::Success;
            break;
        }

        auto decisions = resolve_collisions(state);
        bool any_motion = false;
        detail::apply_moves(state, decisions, total_moves, any_motion);
        ++state.tick;

        // Docking: at most one merge per tick, lowest pair id first.
        bool docked = false;
        std::vector<std::pair<int, const AssemblyNode*>> ready;
        visit(tree, [&](const AssemblyNode& n) {
            if (n.is_leaf()) return;
            SimGroup* a = state.find(n.left->id);
            SimGroup* b = state.find(n.right->id);
            if (a && b && a->partner_id == b->id && a->arrived() &&
                b->arrived())
                ready.push_back({n.id, &n});
        });
        std::sort(ready.begin(), ready.end());
        if (!ready.empty()) {
            const AssemblyNode* n = ready.front().second;
            SimGroup* a = state.find(n->left->id);
            SimGroup* b = state.find(n->right->id);
            trace.dock_events.push_back({state.tick, a->id, b->id});
            SimGroup merged;
            merged.id = n->id;
            merged.priority = n->min_leaf;
            merged.node = n;
            merged.cells = a->cells;
            merged.cells.insert(merged.cells.end(), b->cells.begin(),
                                b->cells.end());
            normalize(merged.cells);
            merged.objective = merged.cells;  // rest until its pair activates
            std::erase_if(state.groups, [&](const SimGroup& g) {
                return g.id == n->left->id || g.id == n->right->id;
            });
            state.groups.push_back(std::move(merged));
            docked = true;
        }

        detail::record_step(state, trace);

        quiet_ticks = (any_motion || docked) ? 0 : quiet_ticks + 1;
        if (quiet_ticks >= config.stall_ticks) {
            trace.outcome = Outcome::FailStuck;
            break;
        }
    }

    trace.makespan = state.tick;
    trace.total_moves = total_moves;
    return trace;
}

// Naive execution: no extension, no pair gating. Groups head straight for
// their assigned targets and fuse with whatever they touch; a fused clump
// whose shape no longer matches its targets is a failed (mis-docked) run.
inline Trace run_naive(const World& world, const Assignment& assignment,
                       const NavConfig& config_in) {
    NavConfig config = config_in;
    config.naive_mode = true;
    if (config.max_ticks == 0)
        config.max_ticks = 20 * (world.width() + world.height());

    SimState state;
    state.world = &world;
    state.config = config;
    for (size_t i = 0; i < world.robots().size(); ++i) {
        SimGroup g;
        g.id = static_cast<int>(i);
        g.priority = static_cast<int>(i);
        g.cells = {world.robots()[i]};
        g.objective = CellSet{
            world.targets()[static_cast<size_t>(assignment.mapping[i])]};
        state.groups.push_back(std::move(g));
    }

    Trace trace;
    long total_moves = 0;
    int quiet_ticks = 0;
    detail::record_step(state, trace);

    while (state.tick < config.max_ticks) {
        if (state.groups.size() == 1 && state.groups.front().arrived()) {
            trace.outcome = Outcome::Success;
            break;
        }

        auto decisions = resolve_collisions(state);
        bool any_motion = false;
        detail::apply_moves(state, decisions, total_moves, any_motion);
        ++state.tick;

        // Passive magnets: one adjacency fuses per tick (docking is
        // sequential); misaligned fusions end the run.
        bool docked = false;
        for (size_t i = 0; i < state.groups.size() && !docked; ++i) {
            for (size_t j = i + 1; j < state.groups.size() && !docked; ++j) {
                SimGroup& a = state.groups[i];
                SimGroup& b = state.groups[j];
                if (min_chebyshev(a.cells, b.cells) != 1) continue;
                bool touching = false;
                for (Cell c : a.cells) {
                    for (Cell m : kMoves)
                        if (contains(b.cells, c + m)) { touching = true; break; }
                    if (touching) break;
                }
                if (!touching) continue;  // diagonal contact only
                trace.dock_events.push_back({state.tick, a.id, b.id});
                SimGroup merged;
                merged.id = std::min(a.id, b.id);
                merged.priority = std::min(a.priority, b.priority);
                merged.cells = a.cells;
                merged.cells.insert(merged.cells.end(), b.cells.begin(),
                                    b.cells.end());
                normalize(merged.cells);
                CellSet goal = *a.objective;
                goal.insert(goal.end(), b.objective->begin(),
                            b.objective->end());
                normalize(goal);
                // Aligned iff the fused clump is a rigid translate of the
                // fused target cells.
                bool aligned = merged.cells.size() == goal.size();
                if (aligned) {
                    Cell d = goal.front() - merged.cells.front();
                    aligned = translated(merged.cells, d) == goal;
                }
                if (!aligned) {
                    detail::record_step(state, trace);
                    trace.outcome = Outcome::FailMisdock;
                    trace.makespan = state.tick;
                    trace.total_moves = total_moves;
                    return trace;
                }
                merged.objective = goal;
                size_t ai = i, bj = j;
                state.groups.erase(state.groups.begin() +
                                   static_cast<long>(bj));
                state.groups.erase(state.groups.begin() +
                                   static_cast<long>(ai));
                state.groups.push_back(std::move(merged));
                docked = true;
            }
        }

        detail::record_step(state, trace);
        quiet_ticks = (any_motion || docked) ? 0 : quiet_ticks + 1;
        if (quiet_ticks >= config.stall_ticks) {
            trace.outcome = Outcome::FailStuck;
            break;
        }
    }

    trace.makespan = state.tick;
    trace.total_moves = total_moves;
    return trace;
}

inline nlohmann::ordered_json trace_to_json(const Trace& trace,
                                            const World& world,
                                            const std::string& strategy,
                                            std::uint64_t seed) {
    nlohmann::ordered_json j;
    j["meta"] = {{"map", world.name()},
                 {"category", world.category()},
                 {"strategy", strategy},
                 {"seed", seed},
                 {"width", world.width()},
                 {"height", world.height()}};
    j["steps"] = nlohmann::ordered_json::array();
    for (const auto& step : trace.steps) {
        nlohmann::ordered_json groups = nlohmann::ordered_json::array();
        for (const auto& g : step.groups) {
            nlohmann::ordered_json cells = nlohmann::ordered_json::array();
            for (Cell c : g.cells) cells.push_back({c.x, c.y});
            nlohmann::ordered_json entry = {{"id", g.id}, {"cells", cells}};
            if (g.partner_id) entry["partner"] = *g.partner_id;
            groups.push_back(std::move(entry));
        }
        j["steps"].push_back({{"tick", step.tick}, {"groups", groups}});
    }
    j["dock_events"] = nlohmann::ordered_json::array();
    for (const auto& e : trace.dock_events)
        j["dock_events"].push_back(
            {{"tick", e.tick}, {"a", e.group_a}, {"b", e.group_b}});
    j["outcome"] = outcome_name(trace.outcome);
    j["makespan"] = trace.makespan;
    j["total_moves"] = trace.total_moves;
    return j;
}

inline Trace trace_from_json(const nlohmann::json& j) {
    Trace trace;
    for (const auto& step_j : j.at("steps")) {
        TraceStep step;
        step.tick = step_j.at("tick").get<int>();
        for (const auto& g_j : step_j.at("groups")) {
            Group g;
            g.id = g_j.at("id").get<int>();
            for (const auto& c : g_j.at("cells"))
                g.cells.push_back({c.at(0).get<int>(), c.at(1).get<int>()});
            normalize(g.cells);
            if (g_j.contains("partner")) g.partner_id = g_j.at("partner").get<int>();
            step.groups.push_back(std::move(g));
        }
        trace.steps.push_back(std::move(step));
    }
    for (const auto& e : j.at("dock_events"))
        trace.dock_events.push_back({e.at("tick").get<int>(),
                                     e.at("a").get<int>(),
                                     e.at("b").get<int>()});
    std::string outcome = j.at("outcome").get<std::string>();
    for (Outcome o : {Outcome::Success, Outcome::FailTimeout,
                      Outcome::FailStuck, Outcome::FailMisdock})
        if (outcome == outcome_name(o)) trace.outcome = o;
    trace.makespan = j.at("makespan").get<int>();
    trace.total_moves = j.at("total_moves").get<long>();
    return trace;
}

// Independent replay check used before a Success is counted: disjointness,
// obstacle avoidance, non-partner clearance (partners = pairs that dock),
// sequential docking, monotone group count, and the final-structure
// postcondition.
inline bool validate_trace(const Trace& trace, const World& world,
                           int nonpartner_gap_units,
                           std::string* why = nullptr) {
    auto fail = [&](const std::string& reason) {
        if (why) *why = reason;
        return false;
    };
    // Two groups are exempt from the clearance rule exactly while they are
    // mutually designated docking partners at that step.
    auto partnered = [](const Group& a, const Group& b) {
        return a.partner_id && b.partner_id && *a.partner_id == b.id &&
               *b.partner_id == a.id;
    };

    int last_dock_tick = -1;
    for (const auto& e : trace.dock_events) {
        if (e.tick <= last_dock_tick) return fail("dock ticks not increasing");
        last_dock_tick = e.tick;
    }

    size_t prev_count = trace.steps.empty() ? 0 : trace.steps[0].groups.size();
    for (size_t s = 0; s < trace.steps.size(); ++s) {
        const auto& step = trace.steps[s];
        if (step.groups.size() > prev_count)
            return fail("group count increased");
        prev_count = step.groups.size();
        for (size_t i = 0; i < step.groups.size(); ++i) {
            for (Cell c : step.groups[i].cells) {
                if (!world.in_bounds(c)) return fail("group out of bounds");
                if (world.is_obstacle(c)) return fail("group on obstacle");
            }
            for (size_t j = i + 1; j < step.groups.size(); ++j) {
                int cheb = min_chebyshev(step.groups[i].cells,
                                         step.groups[j].cells);
                if (cheb == 0) return fail("groups overlap");
                if (!partnered(step.groups[i], step.groups[j]) &&
                    2 * (cheb - 1) < nonpartner_gap_units)
                    return fail("non-partner clearance violated");
            }
        }
    }

    if (trace.outcome == Outcome::Success) {
        if (trace.steps.empty()) return fail("empty trace");
        CellSet final_cells;
        for (const auto& g : trace.steps.back().groups)
            final_cells.insert(final_cells.end(), g.cells.begin(),
                               g.cells.end());
        normalize(final_cells);
        if (final_cells != world.target_set())
            return fail("final cells differ from targets");
        if (!is_connected(final_cells)) return fail("final structure split");
    }
    return true;
}

}  // namespace sapoa
