#pragma once

#include <map>

#include "sapoa/assembly_tree.hpp"

namespace sapoa {

struct ExtensionConfig {
    int separation_units = 4;   // sibling gap target; 2 in active-docking mode
    int neighbor_gap_units = 2; // clearance kept to non-sibling groups
    int max_iterations = 0;     // per level; 0 picks 10 * width * height
    std::uint64_t rng_seed = 0;
    bool pair_mode = true;      // false dissolves pairs (independent exploration)
};

struct LandmarkEntry {
    int group_id;  // assembly-tree node id
    CellSet cells;
};

// Expanded positions of the groups formed by splitting one tree level,
// snapshot at the moment every pair of that level reached separation.
struct LandmarkRecord {
    int level;
    std::vector<LandmarkEntry> entries;
};

struct ExtensionResult {
    bool ok = false;
    std::vector<LandmarkRecord> levels;
    long extension_steps = 0;         // Alg.-2 loop iterations, all levels
    std::map<int, Cell> offsets;      // node id -> rigid translation
    int failed_level = -1;
};

// A target group mid-extension: a tree node's cell set under a rigid
// translation.
struct ExtGroup {
    const AssemblyNode* node = nullptr;
    Cell offset{0, 0};

    CellSet cells() const { return translated(node->targets, offset); }
};

struct TargetPair {
    ExtGroup left, right;
    Axis axis;  // separation axis, inherited from the tree cut

    bool separated(int separation_units) const {
        return group_gap_units(left.cells(), right.cells()) >= separation_units;
    }
};

namespace detail {

inline bool placement_free(const World& world, const CellSet& cells) {
    for (Cell c : cells) {
        if (!world.in_bounds(c) || world.is_obstacle(c)) return false;
    }
    return true;
}

// Gap constraint against every group except the mover (and optionally its
// partner): destination must keep >= gap units, or at least not approach a
// group that is already closer (the dissolved-pair start state).
inline bool clearance_ok(const CellSet& candidate, const CellSet& current,
                         const std::vector<const ExtGroup*>& others,
                         int gap_units) {
    for (const ExtGroup* g : others) {
        CellSet oc = g->cells();
        int new_cheb = min_chebyshev(candidate, oc);
        if (new_cheb == 0) return false;  // overlap
        int new_gap = 2 * (new_cheb - 1);
        if (new_gap >= gap_units) continue;
        int old_cheb = min_chebyshev(current, oc);
        int old_gap = old_cheb == 0 ? -2 : 2 * (old_cheb - 1);
        if (new_gap < old_gap || old_gap >= gap_units) return false;
    }
    return true;
}

}  // namespace detail

// One separation attempt: each subgroup slides 1 cell along the cut axis,
// away from its partner, when the destination is obstacle-free and keeps
// clearance from all non-partner groups. A blocked side simply stays.
inline void separate(TargetPair& pair, const World& world,
                     const std::vector<const ExtGroup*>& others,
                     int sep_units, int neighbor_gap_units) {
    if (pair.separated(sep_units)) return;
    Cell step = pair.axis == Axis::X ? Cell{1, 0} : Cell{0, 1};
    // left is the low-coordinate side of the cut and moves negative.
    struct Side {
        ExtGroup* group;
        Cell dir;
    };
    Side sides[2] = {{&pair.left, {-step.x, -step.y}}, {&pair.right, step}};
    for (auto& side : sides) {
        CellSet current = side.group->cells();
        CellSet candidate = translated(current, side.dir);
        if (!detail::placement_free(world, candidate)) continue;
        if (!detail::clearance_ok(candidate, current, others,
                                  neighbor_gap_units))
            continue;
        side.group->offset = side.group->offset + side.dir;
    }
}

namespace detail {

// Random 1-cell move of a rigid unit (a whole pair, or a single group in
// dissolved-pair mode) in an unblocked direction. No candidate = stay put.
inline void explore_unit(std::vector<ExtGroup*>& members, const World& world,
                         const std::vector<const ExtGroup*>& others,
                         int neighbor_gap_units, Rng& rng) {
    std::vector<Cell> candidates;
    for (Cell dir : kMoves) {
        bool ok = true;
        for (ExtGroup* m : members) {
            CellSet current = m->cells();
            CellSet moved = translated(current, dir);
            if (!placement_free(world, moved) ||
                !clearance_ok(moved, current, others, neighbor_gap_units)) {
                ok = false;
                break;
            }
        }
        if (ok) candidates.push_back(dir);
    }
    if (candidates.empty()) return;
    Cell dir = candidates[rng.below(static_cast<std::uint32_t>(candidates.size()))];
    for (ExtGroup* m : members) m->offset = m->offset + dir;
}

inline void collect_internal_by_depth(
    const AssemblyNode& root,
    std::vector<std::vector<const AssemblyNode*>>& levels) {
    visit(root, [&](const AssemblyNode& n) {
        if (n.is_leaf()) return;
        if (static_cast<int>(levels.size()) <= n.depth)
            levels.resize(static_cast<size_t>(n.depth) + 1);
        levels[static_cast<size_t>(n.depth)].push_back(&n);
    });
    for (auto& level : levels)
        std::sort(level.begin(), level.end(),
                  [](const AssemblyNode* a, const AssemblyNode* b) {
                      return a->id < b->id;
                  });
}

}  // namespace detail

// Stage II: level-by-level expansion of the target structure. Pairs of
// sibling subgroups separate along their cut axis; stuck pairs explore the
// map in random unblocked directions. Positions at the moment a level
// completes are the landmarks the navigation stage retraces.
inline ExtensionResult extend_targets(const AssemblyNode& tree,
                                      const World& world,
                                      const ExtensionConfig& config) {
    if (config.separation_units < 2 || config.separation_units % 2 != 0)
        throw std::invalid_argument("extend_targets: bad separation_units");
    int max_iter = config.max_iterations > 0
                       ? config.max_iterations
                       : 10 * world.width() * world.height();
    Rng rng(config.rng_seed);

    ExtensionResult result;
    result.offsets[tree.id] = {0, 0};

    std::vector<std::vector<const AssemblyNode*>> levels;
    detail::collect_internal_by_depth(tree, levels);

    // Leaves frozen at their recorded offsets, by depth they appear.
    std::vector<ExtGroup> frozen;

    for (size_t level = 0; level < levels.size(); ++level) {
        std::vector<TargetPair> pairs;
        for (const AssemblyNode* node : levels[level]) {
            Cell base = result.offsets.at(node->id);
            pairs.push_back({{node->left.get(), base},
                             {node->right.get(), base},
                             node->cut_axis});
        }

        auto all_separated = [&] {
            for (const auto& p : pairs)
                if (!p.separated(config.separation_units)) return false;
            return true;
        };
        auto others_for = [&](const ExtGroup* a, const ExtGroup* b) {
            std::vector<const ExtGroup*> others;
            for (auto& p : pairs) {
                if (&p.left != a && &p.left != b) others.push_back(&p.left);
                if (&p.right != a && &p.right != b) others.push_back(&p.right);
            }
            for (auto& f : frozen) others.push_back(&f);
            return others;
        };

        int iterations = 0;
        while (!all_separated()) {
            if (++iterations > max_iter) {
                result.failed_level = static_cast<int>(level);
                result.extension_steps += iterations - 1;
                return result;
            }
            ++result.extension_steps;
            if (config.pair_mode) {
                for (auto& p : pairs) {
                    if (p.separated(config.separation_units)) continue;
                    auto others = others_for(&p.left, &p.right);
                    separate(p, world, others, config.separation_units,
                             config.neighbor_gap_units);
                }
                if (all_separated()) break;
                // Explore when separation is stuck: whole pairs drift.
                for (auto& p : pairs) {
                    auto others = others_for(&p.left, &p.right);
                    std::vector<ExtGroup*> unit{&p.left, &p.right};
                    detail::explore_unit(unit, world, others,
                                         config.neighbor_gap_units, rng);
                }
            } else {
                // Dissolved pairs: every subgroup wanders on its own until
                // the sibling gaps happen to open up.
                for (auto& p : pairs) {
                    for (ExtGroup* g : {&p.left, &p.right}) {
                        auto others = others_for(g, nullptr);
                        std::vector<ExtGroup*> unit{g};
                        detail::explore_unit(unit, world, others,
                                             config.neighbor_gap_units, rng);
                    }
                }
            }
        }

        LandmarkRecord record;
        record.level = static_cast<int>(level);
        for (auto& p : pairs) {
            for (const ExtGroup* g : {&p.left, &p.right}) {
                record.entries.push_back({g->node->id, g->cells()});
                result.offsets[g->node->id] = g->offset;
                if (g->node->is_leaf()) frozen.push_back(*g);
            }
        }
        result.levels.push_back(std::move(record));
    }

    result.ok = true;
    return result;
}

inline nlohmann::ordered_json landmarks_to_json(
    const std::vector<LandmarkRecord>& levels) {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& level : levels) {
        nlohmann::ordered_json entries = nlohmann::ordered_json::array();
        for (const auto& e : level.entries) {
            nlohmann::ordered_json cells = nlohmann::ordered_json::array();
            for (Cell c : e.cells) cells.push_back({c.x, c.y});
            entries.push_back({{"group_id", e.group_id}, {"cells", cells}});
        }
        j.push_back(entries);
    }
    return j;
}

}  // namespace sapoa
