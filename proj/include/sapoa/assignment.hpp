#pragma once

#include <limits>
#include <queue>

#include "sapoa/world.hpp"

namespace sapoa {

// Translate-only path of a rigid footprint through the grid. The anchor is
// the footprint's smallest (y, x) cell; waypoints record its positions.
struct FootprintPath {
    std::vector<Cell> waypoints;  // anchor positions, start included
    std::vector<Cell> moves;      // unit moves between consecutive waypoints

    int length() const { return static_cast<int>(moves.size()); }
};

// Occupancy view used by the path planner: obstacles plus any group cells
// the caller wants treated as blocked, inflated by a clearance radius.
class BlockedGrid {
public:
    BlockedGrid(int width, int height) : width_(width), height_(height),
        grid_(static_cast<size_t>(width) * height, 0) {}

    // Marks every cell within Chebyshev radius `clearance_units / 2` of c.
    // A gap of k units between groups means Chebyshev distance k/2 + 1, so
    // inflating by k/2 makes "placement touches inflated cell" equivalent
    // to "gap < k units".
    void block(Cell c, int clearance_units = 0) {
        int r = clearance_units / 2;
        for (int y = c.y - r; y <= c.y + r; ++y)
            for (int x = c.x - r; x <= c.x + r; ++x)
                if (x >= 0 && x < width_ && y >= 0 && y < height_)
                    grid_[static_cast<size_t>(y) * width_ + x] = 1;
    }

    void block(const CellSet& cells, int clearance_units = 0) {
        for (Cell c : cells) block(c, clearance_units);
    }

    bool blocked(Cell c) const {
        return grid_[static_cast<size_t>(c.y) * width_ + c.x] != 0;
    }

    bool in_bounds(Cell c) const {
        return c.x >= 0 && c.x < width_ && c.y >= 0 && c.y < height_;
    }

    int width() const { return width_; }
    int height() const { return height_; }

private:
    int width_, height_;
    std::vector<std::uint8_t> grid_;
};

inline BlockedGrid obstacle_grid(const World& world) {
    BlockedGrid g(world.width(), world.height());
    g.block(world.obstacles());
    return g;
}

namespace detail {

inline bool placement_ok(const BlockedGrid& grid, const CellSet& offsets,
                         Cell anchor) {
    for (Cell o : offsets) {
        Cell c = anchor + o;
        if (!grid.in_bounds(c) || grid.blocked(c)) return false;
    }
    return true;
}

}  // namespace detail

// A* over anchor positions for a rigid footprint, 4-neighbor unit moves,
// Manhattan heuristic. Deterministic: the open set orders by (f, h, y, x)
// and neighbors expand in kMoves order. Returns nullopt if unreachable.
inline std::optional<FootprintPath> astar(const CellSet& footprint, Cell start,
                                          Cell goal, const BlockedGrid& grid) {
    if (footprint.empty())
        throw std::invalid_argument("astar: empty footprint");
    CellSet offsets = footprint;
    Cell anchor0 = offsets.front();
    for (auto& o : offsets) o = o - anchor0;

    if (!detail::placement_ok(grid, offsets, start))
        throw std::invalid_argument("astar: start placement collides");

    const int w = grid.width(), h = grid.height();
    auto idx = [w](Cell c) { return static_cast<size_t>(c.y) * w + c.x; };
    auto heuristic = [goal](Cell c) {
        return std::abs(c.x - goal.x) + std::abs(c.y - goal.y);
    };

    struct Entry {
        int f, h;
        Cell cell;
        bool operator>(const Entry& o) const {
            if (f != o.f) return f > o.f;
            if (h != o.h) return h > o.h;
            if (cell.y != o.cell.y) return cell.y > o.cell.y;
            return cell.x > o.cell.x;
        }
    };

    std::vector<int> dist(static_cast<size_t>(w) * h,
                          std::numeric_limits<int>::max());
    std::vector<std::int8_t> came(static_cast<size_t>(w) * h, -1);
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
    dist[idx(start)] = 0;
    open.push({heuristic(start), heuristic(start), start});

    while (!open.empty()) {
        Entry e = open.top();
        open.pop();
        int g = e.f - e.h;
        if (g > dist[idx(e.cell)]) continue;
        if (e.cell == goal) break;
        for (int m = 0; m < 4; ++m) {
            Cell n = e.cell + kMoves[static_cast<size_t>(m)];
            if (!detail::placement_ok(grid, offsets, n)) continue;
            if (g + 1 < dist[idx(n)]) {
                dist[idx(n)] = g + 1;
                came[idx(n)] = static_cast<std::int8_t>(m);
                open.push({g + 1 + heuristic(n), heuristic(n), n});
            }
        }
    }

    if (dist[idx(goal)] == std::numeric_limits<int>::max()) return std::nullopt;

    FootprintPath path;
    Cell c = goal;
    while (!(c == start)) {
        Cell m = kMoves[static_cast<size_t>(came[idx(c)])];
        path.moves.push_back(m);
        path.waypoints.push_back(c);
        c = c - m;
    }
    path.waypoints.push_back(start);
    std::reverse(path.moves.begin(), path.moves.end());
    std::reverse(path.waypoints.begin(), path.waypoints.end());
    return path;
}

// Square cost matrix of shortest-path lengths; kUnreachable marks pairs with
// no path. Values stay far below the sentinel so sums cannot collide.
struct CostMatrix {
    static constexpr long kUnreachable = std::numeric_limits<long>::max() / 8;
    int n = 0;
    std::vector<long> entries;  // row-major

    long& at(int i, int j) { return entries[static_cast<size_t>(i) * n + j]; }
    long at(int i, int j) const {
        return entries[static_cast<size_t>(i) * n + j];
    }
};

// Shortest singleton paths from every robot to every target, obstacles only.
inline CostMatrix cost_matrix(const std::vector<Cell>& robots,
                              const std::vector<Cell>& targets,
                              const World& world) {
    if (robots.size() != targets.size())
        throw std::invalid_argument("cost_matrix: size mismatch");
    CostMatrix m;
    m.n = static_cast<int>(robots.size());
    m.entries.assign(static_cast<size_t>(m.n) * m.n, CostMatrix::kUnreachable);
    BlockedGrid grid = obstacle_grid(world);

    // One BFS per robot covers the whole row.
    const int w = world.width(), h = world.height();
    for (int i = 0; i < m.n; ++i) {
        std::vector<int> dist(static_cast<size_t>(w) * h, -1);
        std::deque<Cell> queue{robots[static_cast<size_t>(i)]};
        dist[static_cast<size_t>(robots[static_cast<size_t>(i)].y) * w +
             robots[static_cast<size_t>(i)].x] = 0;
        while (!queue.empty()) {
            Cell c = queue.front();
            queue.pop_front();
            int d = dist[static_cast<size_t>(c.y) * w + c.x];
            for (Cell mv : kMoves) {
                Cell nc = c + mv;
                if (!grid.in_bounds(nc) || grid.blocked(nc)) continue;
                auto& slot = dist[static_cast<size_t>(nc.y) * w + nc.x];
                if (slot < 0) {
                    slot = d + 1;
                    queue.push_back(nc);
                }
            }
        }
        for (int j = 0; j < m.n; ++j) {
            Cell t = targets[static_cast<size_t>(j)];
            int d = dist[static_cast<size_t>(t.y) * w + t.x];
            if (d >= 0) m.at(i, j) = d;
        }
    }
    return m;
}

// robot index -> target index permutation with minimum total cost.
struct Assignment {
    std::vector<int> mapping;
    long total_cost = 0;
};

namespace detail {

// Kuhn-Munkres via shortest augmenting paths (the classic O(n^3) potentials
// formulation). Returns the optimal total cost for the given sub-problem.
inline long hungarian_cost(const CostMatrix& m, const std::vector<int>& rows,
                           const std::vector<int>& cols,
                           std::vector<int>* row_to_col = nullptr) {
    int n = static_cast<int>(rows.size());
    std::vector<long> u(static_cast<size_t>(n) + 1),
        v(static_cast<size_t>(n) + 1);
    std::vector<int> p(static_cast<size_t>(n) + 1),
        way(static_cast<size_t>(n) + 1);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<long> minv(static_cast<size_t>(n) + 1,
                               std::numeric_limits<long>::max());
        std::vector<char> used(static_cast<size_t>(n) + 1, 0);
        do {
            used[static_cast<size_t>(j0)] = 1;
            int i0 = p[static_cast<size_t>(j0)], j1 = 0;
            long delta = std::numeric_limits<long>::max();
            for (int j = 1; j <= n; ++j) {
                if (used[static_cast<size_t>(j)]) continue;
                long cur = m.at(rows[static_cast<size_t>(i0 - 1)],
                                cols[static_cast<size_t>(j - 1)]) -
                           u[static_cast<size_t>(i0)] -
                           v[static_cast<size_t>(j)];
                if (cur < minv[static_cast<size_t>(j)]) {
                    minv[static_cast<size_t>(j)] = cur;
                    way[static_cast<size_t>(j)] = j0;
                }
                if (minv[static_cast<size_t>(j)] < delta) {
                    delta = minv[static_cast<size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[static_cast<size_t>(j)]) {
                    u[static_cast<size_t>(p[static_cast<size_t>(j)])] += delta;
                    v[static_cast<size_t>(j)] -= delta;
                } else {
                    minv[static_cast<size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (p[static_cast<size_t>(j0)] != 0);
        do {
            int j1 = way[static_cast<size_t>(j0)];
            p[static_cast<size_t>(j0)] = p[static_cast<size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }
    long total = 0;
    std::vector<int> result(static_cast<size_t>(n), -1);
    for (int j = 1; j <= n; ++j) {
        int i = p[static_cast<size_t>(j)];
        if (i > 0) {
            result[static_cast<size_t>(i - 1)] = j - 1;
            total += m.at(rows[static_cast<size_t>(i - 1)],
                          cols[static_cast<size_t>(j - 1)]);
        }
    }
    if (row_to_col) *row_to_col = std::move(result);
    return total;
}

}  // namespace detail

// Minimum-cost perfect matching; among optima, the lexicographically
// smallest mapping (fix robot 0 to its smallest viable target, recurse).
// Throws if every permutation crosses an Unreachable entry.
inline Assignment hungarian(const CostMatrix& matrix) {
    int n = matrix.n;
    if (n == 0) return {};
    std::vector<int> rows(static_cast<size_t>(n)), cols(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) rows[static_cast<size_t>(i)] = i;
    for (int j = 0; j < n; ++j) cols[static_cast<size_t>(j)] = j;

    long optimum = detail::hungarian_cost(matrix, rows, cols);
    if (optimum >= CostMatrix::kUnreachable)
        throw std::runtime_error("hungarian: infeasible dispatch");

    Assignment out;
    out.mapping.assign(static_cast<size_t>(n), -1);
    out.total_cost = optimum;
    long fixed_cost = 0;
    std::vector<char> col_used(static_cast<size_t>(n), 0);
    std::vector<int> free_rows = rows;
    for (int i = 0; i < n; ++i) {
        free_rows.erase(free_rows.begin());
        for (int j = 0; j < n; ++j) {
            if (col_used[static_cast<size_t>(j)]) continue;
            long c = matrix.at(i, j);
            if (c >= CostMatrix::kUnreachable) continue;
            if (free_rows.empty()) {
                if (fixed_cost + c == optimum) {
                    out.mapping[static_cast<size_t>(i)] = j;
                    col_used[static_cast<size_t>(j)] = 1;
                    fixed_cost += c;
                }
                if (out.mapping[static_cast<size_t>(i)] >= 0) break;
                continue;
            }
            std::vector<int> free_cols;
            for (int k = 0; k < n; ++k)
                if (!col_used[static_cast<size_t>(k)] && k != j)
                    free_cols.push_back(k);
            long rest = detail::hungarian_cost(matrix, free_rows, free_cols);
            if (rest < CostMatrix::kUnreachable &&
                fixed_cost + c + rest == optimum) {
                out.mapping[static_cast<size_t>(i)] = j;
                col_used[static_cast<size_t>(j)] = 1;
                fixed_cost += c;
                break;
            }
        }
        if (out.mapping[static_cast<size_t>(i)] < 0)
            throw std::runtime_error("hungarian: infeasible dispatch");
    }
    return out;
}

}  // namespace sapoa
