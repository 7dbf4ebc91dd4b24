#pragma once

#include "sapoa/navigation_sim.hpp"

namespace sapoa {

enum class StrategyKind { SAPOA, SAPOAnop, SAPOAads, APAA, Naive };

inline const char* strategy_name(StrategyKind k) {
    switch (k) {
        case StrategyKind::SAPOA: return "sapoa";
        case StrategyKind::SAPOAnop: return "sapoa-nop";
        case StrategyKind::SAPOAads: return "sapoa-ads";
        case StrategyKind::APAA: return "apaa";
        case StrategyKind::Naive: return "naive";
    }
    return "unknown";
}

inline std::optional<StrategyKind> parse_strategy(const std::string& s) {
    if (s == "sapoa") return StrategyKind::SAPOA;
    if (s == "sapoa-nop") return StrategyKind::SAPOAnop;
    if (s == "sapoa-ads") return StrategyKind::SAPOAads;
    if (s == "apaa") return StrategyKind::APAA;
    if (s == "naive") return StrategyKind::Naive;
    return std::nullopt;
}

inline constexpr std::array<StrategyKind, 5> kAllStrategies = {
    StrategyKind::SAPOA, StrategyKind::SAPOAnop, StrategyKind::SAPOAads,
    StrategyKind::APAA, StrategyKind::Naive};

struct Plan {
    StrategyKind kind = StrategyKind::SAPOA;
    std::unique_ptr<AssemblyNode> tree;          // absent for Naive
    std::vector<LandmarkRecord> landmarks;       // absent for Naive
    std::map<int, Cell> offsets;                 // node id -> translation
    Assignment assignment;
    long extension_steps = 0;
    bool ok = false;
    std::string fail_reason;
};

// Clearance the navigation stage enforces between non-partner groups, in
// units. Active docking tolerates contact; the naive baseline fuses on
// contact, so the rule cannot apply to it at all.
inline int strategy_clearance_units(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::SAPOAads:
        case StrategyKind::Naive:
            return 0;
        default:
            return 2;
    }
}

inline NavConfig nav_config_for(StrategyKind kind) {
    NavConfig cfg;
    cfg.nonpartner_gap_units = strategy_clearance_units(kind);
    cfg.naive_mode = kind == StrategyKind::Naive;
    return cfg;
}

namespace detail {

// APAA expansion: every node's placement is its target cells shifted by the
// scaled offset of its centroid from the structure centroid (exploded-view
// linear map). Obstacles are ignored except for a final snap of the leaf
// points, which is the adaptation the algorithm gets.
inline std::map<int, Cell> apaa_offsets(const AssemblyNode& tree,
                                        const World& world) {
    double cx = 0, cy = 0;
    for (Cell c : tree.targets) {
        cx += c.x;
        cy += c.y;
    }
    cx /= static_cast<double>(tree.targets.size());
    cy /= static_cast<double>(tree.targets.size());

    std::vector<const AssemblyNode*> leaves;
    visit(tree, [&](const AssemblyNode& n) {
        if (n.is_leaf()) leaves.push_back(&n);
    });

    auto scaled_offset = [&](const AssemblyNode& n, int k) {
        double nx = 0, ny = 0;
        for (Cell c : n.targets) {
            nx += c.x;
            ny += c.y;
        }
        nx /= static_cast<double>(n.targets.size());
        ny /= static_cast<double>(n.targets.size());
        return Cell{static_cast<int>(std::lround((k - 1) * (nx - cx))),
                    static_cast<int>(std::lround((k - 1) * (ny - cy)))};
    };

    // Smallest integer factor spreading every leaf pair at least 4 units
    // (Chebyshev distance 3) apart.
    int k = 1;
    for (; k <= 64; ++k) {
        bool spread = true;
        for (size_t i = 0; i < leaves.size() && spread; ++i) {
            Cell a = leaves[i]->targets.front() + scaled_offset(*leaves[i], k);
            for (size_t j = i + 1; j < leaves.size(); ++j) {
                Cell b = leaves[j]->targets.front() +
                         scaled_offset(*leaves[j], k);
                if (chebyshev(a, b) < 3) {
                    spread = false;
                    break;
                }
            }
        }
        if (spread) break;
    }

    std::map<int, Cell> offsets;
    visit(tree, [&](const AssemblyNode& n) {
        offsets[n.id] = n.depth == 0 ? Cell{0, 0} : scaled_offset(n, k);
    });

    // Snap expanded leaf points off obstacles / out of bounds onto the
    // nearest free cell (Manhattan distance, ties by smallest (y, x)).
    CellSet used;
    for (const AssemblyNode* leaf : leaves) {
        Cell p = leaf->targets.front() + offsets.at(leaf->id);
        Cell best = p;
        bool need = !world.in_bounds(p) || world.is_obstacle(p) ||
                    contains(used, p);
        if (need) {
            int best_d = std::numeric_limits<int>::max();
            for (int y = 0; y < world.height(); ++y) {
                for (int x = 0; x < world.width(); ++x) {
                    Cell c{x, y};
                    if (world.is_obstacle(c) || contains(used, c)) continue;
                    int d = std::abs(c.x - p.x) + std::abs(c.y - p.y);
                    if (d < best_d) {
                        best_d = d;
                        best = c;
                    }
                }
            }
        }
        used.push_back(best);
        normalize(used);
        offsets[leaf->id] = best - leaf->targets.front();
    }
    return offsets;
}

inline std::vector<Cell> leaf_dispatch_cells(const AssemblyNode& tree,
                                             const std::map<int, Cell>& offsets,
                                             int n) {
    std::vector<Cell> cells(static_cast<size_t>(n));
    visit(tree, [&](const AssemblyNode& node) {
        if (node.is_leaf())
            cells[static_cast<size_t>(node.id)] =
                node.targets.front() + offsets.at(node.id);
    });
    return cells;
}

}  // namespace detail

// Stages I-III behind one interface: tree, extension (per strategy flavor),
// and Hungarian dispatch onto the expanded leaf targets.
inline Plan plan(const World& world, StrategyKind kind, std::uint64_t seed) {
    Plan p;
    p.kind = kind;

    try {
        if (kind == StrategyKind::Naive) {
            CostMatrix m =
                cost_matrix(world.robots(), world.targets(), world);
            p.assignment = hungarian(m);
            p.ok = true;
            return p;
        }

        p.tree = build_tree(world.target_set());
        if (kind == StrategyKind::APAA) {
            p.offsets = detail::apaa_offsets(*p.tree, world);
        } else {
            ExtensionConfig cfg;
            cfg.rng_seed = seed;
            cfg.pair_mode = kind != StrategyKind::SAPOAnop;
            cfg.separation_units = kind == StrategyKind::SAPOAads ? 2 : 4;
            // Landmarks must leave room for a group to pass between two
            // resting neighbors at the navigation clearance: neighbor
            // spacing >= 2 * clearance + one free cell.
            cfg.neighbor_gap_units = 2 * strategy_clearance_units(kind) + 2;
            ExtensionResult ext = extend_targets(*p.tree, world, cfg);
            p.extension_steps = ext.extension_steps;
            if (!ext.ok) {
                p.fail_reason = "extension failed at level " +
                                std::to_string(ext.failed_level);
                return p;
            }
            p.landmarks = std::move(ext.levels);
            p.offsets = std::move(ext.offsets);
        }

        std::vector<Cell> columns = detail::leaf_dispatch_cells(
            *p.tree, p.offsets, world.robot_count());
        CostMatrix m = cost_matrix(world.robots(), columns, world);
        p.assignment = hungarian(m);
        p.ok = true;
    } catch (const std::runtime_error& e) {
        p.fail_reason = e.what();
        p.ok = false;
    }
    return p;
}

inline Trace run_plan(const World& world, const Plan& p,
                      const NavConfig* override_config = nullptr) {
    if (!p.ok) throw std::logic_error("run_plan: plan is not viable");
    NavConfig cfg = override_config ? *override_config : nav_config_for(p.kind);
    if (p.kind == StrategyKind::Naive)
        return run_naive(world, p.assignment, cfg);
    return run_navigation(world, *p.tree, p.offsets, p.assignment, cfg);
}

}  // namespace sapoa
