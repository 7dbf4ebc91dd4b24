#pragma once

#include <memory>

#include "sapoa/json.hpp"
#include "sapoa/world.hpp"

namespace sapoa {

enum class Axis { X, Y };

// Node of the binary assembly tree. Leaves hold exactly one target cell.
// The tree is immutable once built.
struct AssemblyNode {
    CellSet targets;
    int depth = 0;
    int id = -1;        // leaves: 0..n-1 in build order, then internal nodes
    int min_leaf = -1;  // smallest leaf id in the subtree, used as priority
    Axis cut_axis = Axis::X;  // axis of the cut that produced the children
    std::unique_ptr<AssemblyNode> left;
    std::unique_ptr<AssemblyNode> right;

    bool is_leaf() const { return !left; }
};

// All axis-aligned threshold partitions of S: for each axis and each
// threshold between consecutive distinct coordinates, the below/above pair.
// Vertical (x) cuts come first, then horizontal, each by ascending threshold.
inline std::vector<std::pair<CellSet, CellSet>> all_divisions(const CellSet& s) {
    if (s.size() < 2)
        throw std::invalid_argument("all_divisions: need at least 2 cells");
    std::vector<std::pair<CellSet, CellSet>> out;
    for (Axis axis : {Axis::X, Axis::Y}) {
        std::vector<int> coords;
        for (Cell c : s) coords.push_back(axis == Axis::X ? c.x : c.y);
        std::sort(coords.begin(), coords.end());
        coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
        for (size_t i = 1; i < coords.size(); ++i) {
            int threshold = coords[i];  // below: coord < threshold
            CellSet lo, hi;
            for (Cell c : s) {
                int v = axis == Axis::X ? c.x : c.y;
                (v < threshold ? lo : hi).push_back(c);
            }
            out.emplace_back(std::move(lo), std::move(hi));
        }
    }
    return out;
}

struct Division {
    CellSet low, high;
    Axis axis;
    long score;  // |S1| * |S2|
};

// Most balanced division: argmax of |S1|*|S2|. Ties prefer vertical cuts,
// then the smallest threshold, which is exactly enumeration order.
inline Division best_division(const CellSet& s) {
    auto divisions = all_divisions(s);
    size_t x_cuts = 0;
    {
        std::vector<int> xs;
        for (Cell c : s) xs.push_back(c.x);
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
        x_cuts = xs.size() - 1;
    }
    size_t best = 0;
    long best_score = -1;
    for (size_t i = 0; i < divisions.size(); ++i) {
        long score = static_cast<long>(divisions[i].first.size()) *
                     static_cast<long>(divisions[i].second.size());
        if (score > best_score) {
            best_score = score;
            best = i;
        }
    }
    return {divisions[best].first, divisions[best].second,
            best < x_cuts ? Axis::X : Axis::Y, best_score};
}

namespace detail {

inline std::unique_ptr<AssemblyNode> build_node(CellSet s, int depth,
                                                int& next_leaf_id) {
    auto node = std::make_unique<AssemblyNode>();
    node->targets = std::move(s);
    node->depth = depth;
    if (node->targets.size() == 1) {
        node->id = next_leaf_id++;
        node->min_leaf = node->id;
        return node;
    }
    Division d = best_division(node->targets);
    node->cut_axis = d.axis;
    node->left = build_node(std::move(d.low), depth + 1, next_leaf_id);
    node->right = build_node(std::move(d.high), depth + 1, next_leaf_id);
    node->min_leaf = std::min(node->left->min_leaf, node->right->min_leaf);
    return node;
}

inline void assign_internal_ids(AssemblyNode& node, int& next_id) {
    if (node.is_leaf()) return;
    assign_internal_ids(*node.left, next_id);
    assign_internal_ids(*node.right, next_id);
    node.id = next_id++;
}

}  // namespace detail

// Recursive balanced bisection of the target set. Pure and deterministic.
inline std::unique_ptr<AssemblyNode> build_tree(const CellSet& s) {
    if (s.empty()) throw std::invalid_argument("build_tree: empty target set");
    int next_leaf = 0;
    auto root = detail::build_node(s, 0, next_leaf);
    int next_internal = next_leaf;
    detail::assign_internal_ids(*root, next_internal);
    return root;
}

inline int max_depth(const AssemblyNode& node) {
    if (node.is_leaf()) return node.depth;
    return std::max(max_depth(*node.left), max_depth(*node.right));
}

template <typename Fn>
inline void visit(const AssemblyNode& node, Fn&& fn) {
    fn(node);
    if (!node.is_leaf()) {
        visit(*node.left, fn);
        visit(*node.right, fn);
    }
}

inline nlohmann::ordered_json tree_to_json(const AssemblyNode& node) {
    nlohmann::ordered_json j;
    j["id"] = node.id;
    j["targets"] = nlohmann::ordered_json::array();
    for (Cell c : node.targets) j["targets"].push_back({c.x, c.y});
    if (!node.is_leaf()) {
        j["axis"] = node.cut_axis == Axis::X ? "x" : "y";
        j["children"] = {tree_to_json(*node.left), tree_to_json(*node.right)};
    }
    return j;
}

}  // namespace sapoa
