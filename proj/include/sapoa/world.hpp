#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <deque>
#include <optional>
#include <sstream>

#include "sapoa/core.hpp"

namespace sapoa {

// 4-neighbor moves in the deterministic order +x, -x, +y, -y.
inline constexpr std::array<Cell, 4> kMoves = {Cell{1, 0}, Cell{-1, 0},
                                               Cell{0, 1}, Cell{0, -1}};

// Partition of a cell set under 4-connectivity. Components are ordered by
// their smallest (y, x) member; each component is itself canonical.
inline std::vector<CellSet> connected_components(const CellSet& cells) {
    std::vector<CellSet> out;
    std::vector<char> seen(cells.size(), 0);
    for (size_t i = 0; i < cells.size(); ++i) {
        if (seen[i]) continue;
        CellSet comp;
        std::deque<size_t> queue{i};
        seen[i] = 1;
        while (!queue.empty()) {
            size_t j = queue.front();
            queue.pop_front();
            comp.push_back(cells[j]);
            for (Cell m : kMoves) {
                Cell n = cells[j] + m;
                auto it = std::lower_bound(cells.begin(), cells.end(), n);
                if (it != cells.end() && *it == n) {
                    size_t k = static_cast<size_t>(it - cells.begin());
                    if (!seen[k]) {
                        seen[k] = 1;
                        queue.push_back(k);
                    }
                }
            }
        }
        normalize(comp);
        out.push_back(std::move(comp));
    }
    return out;
}

inline bool is_connected(const CellSet& cells) {
    return cells.empty() || connected_components(cells).size() == 1;
}

// A rigid set of docked robots or target cells, translated as one unit.
struct Group {
    int id = -1;
    CellSet cells;
    std::optional<int> partner_id;
};

// Immutable grid map: obstacles, ordered robot starts, ordered targets.
class World {
public:
    World(int width, int height, CellSet obstacles, std::vector<Cell> robots,
          std::vector<Cell> targets, int category = 1, std::string name = "",
          std::uint64_t seed = 0)
        : width_(width),
          height_(height),
          obstacles_(make_cell_set(std::move(obstacles))),
          robots_(std::move(robots)),
          targets_(std::move(targets)),
          category_(category),
          name_(std::move(name)),
          seed_(seed),
          obstacle_grid_(static_cast<size_t>(width) * height, 0) {
        validate();
        for (Cell c : obstacles_) obstacle_grid_[index(c)] = 1;
    }

    int width() const { return width_; }
    int height() const { return height_; }
    int category() const { return category_; }
    const std::string& name() const { return name_; }
    std::uint64_t seed() const { return seed_; }
    const CellSet& obstacles() const { return obstacles_; }
    const std::vector<Cell>& robots() const { return robots_; }
    const std::vector<Cell>& targets() const { return targets_; }
    int robot_count() const { return static_cast<int>(robots_.size()); }

    bool in_bounds(Cell c) const {
        return c.x >= 0 && c.x < width_ && c.y >= 0 && c.y < height_;
    }
    bool is_obstacle(Cell c) const {
        return in_bounds(c) && obstacle_grid_[index(c)] != 0;
    }
    CellSet target_set() const { return make_cell_set(targets_); }

    std::string serialize() const {
        std::string out;
        out.reserve(static_cast<size_t>(height_) * (width_ + 1));
        CellSet robot_set = make_cell_set(robots_);
        CellSet target_cells = target_set();
        for (int y = 0; y < height_; ++y) {
            for (int x = 0; x < width_; ++x) {
                Cell c{x, y};
                bool r = contains(robot_set, c);
                bool t = contains(target_cells, c);
                if (r && t) out += 'X';
                else if (r) out += 'R';
                else if (t) out += 'T';
                else if (is_obstacle(c)) out += '#';
                else out += '.';
            }
            out += '\n';
        }
        return out;
    }

private:
    size_t index(Cell c) const {
        return static_cast<size_t>(c.y) * width_ + c.x;
    }

    void validate() const {
        if (width_ <= 0 || height_ <= 0)
            throw std::invalid_argument("world: non-positive dimensions");
        auto check_bounds = [&](const Cell& c, const char* what) {
            if (!in_bounds(c))
                throw std::invalid_argument(std::string("world: ") + what +
                                            " out of bounds");
        };
        for (Cell c : obstacles_) check_bounds(c, "obstacle");
        for (Cell c : robots_) check_bounds(c, "robot");
        for (Cell c : targets_) check_bounds(c, "target");
        if (robots_.size() != targets_.size())
            throw std::invalid_argument("world: robot/target count mismatch");
        if (robots_.empty())
            throw std::invalid_argument("world: no robots");
        CellSet robot_set = make_cell_set(robots_);
        CellSet target_cells = make_cell_set(targets_);
        if (robot_set.size() != robots_.size())
            throw std::invalid_argument("world: duplicate robot cells");
        if (target_cells.size() != targets_.size())
            throw std::invalid_argument("world: duplicate target cells");
        if (intersects(robot_set, obstacles_) ||
            intersects(target_cells, obstacles_))
            throw std::invalid_argument("world: obstacle overlaps robot or target");
        if (!is_connected(target_cells))
            throw std::invalid_argument("world: target set not connected");
        if (category_ < 1 || category_ > 5)
            throw std::invalid_argument("world: category out of range");
    }

    int width_;
    int height_;
    CellSet obstacles_;
    std::vector<Cell> robots_;
    std::vector<Cell> targets_;
    int category_;
    std::string name_;
    std::uint64_t seed_;
    std::vector<std::uint8_t> obstacle_grid_;
};

// Map text format: '.' free, '#' obstacle, 'R' robot start, 'T' target,
// 'X' robot start on a target cell. Rows are newline-terminated.
inline World parse_world(const std::string& text, int category = 1,
                         std::string name = "", std::uint64_t seed = 0) {
    std::vector<std::string> rows;
    std::string row;
    std::istringstream in(text);
    while (std::getline(in, row)) {
        if (!row.empty() && row.back() == '\r') row.pop_back();
        if (!row.empty()) rows.push_back(row);
    }
    if (rows.empty()) throw std::invalid_argument("parse_world: empty map");
    size_t width = rows.front().size();
    CellSet obstacles;
    std::vector<Cell> robots, targets;
    for (size_t y = 0; y < rows.size(); ++y) {
        if (rows[y].size() != width)
            throw std::invalid_argument("parse_world: ragged rows");
        for (size_t x = 0; x < width; ++x) {
            Cell c{static_cast<int>(x), static_cast<int>(y)};
            switch (rows[y][x]) {
                case '.': break;
                case '#': obstacles.push_back(c); break;
                case 'R': robots.push_back(c); break;
                case 'T': targets.push_back(c); break;
                case 'X':
                    robots.push_back(c);
                    targets.push_back(c);
                    break;
                default:
                    throw std::invalid_argument(
                        std::string("parse_world: unknown glyph '") +
                        rows[y][x] + "'");
            }
        }
    }
    return World(static_cast<int>(width), static_cast<int>(rows.size()),
                 std::move(obstacles), std::move(robots), std::move(targets),
                 category, std::move(name), seed);
}

namespace detail {

// Target shape templates, one per map variant within a category. Cells are
// offsets; every shape is 4-connected.
inline CellSet shape_template(int variant, int /*category*/) {
    // One template per map variant; every category reuses the same five
    // shapes so that difficulty comes from the obstacle walls alone.
    std::vector<Cell> cells;
    int pick = variant % 5;
    switch (pick) {
        case 0:  // platform
            cells = {{0, 0}, {1, 0}, {2, 0}, {0, 1}, {1, 1}, {2, 1}};
            break;
        case 1:  // bridge
            cells = {{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}, {5, 0}};
            break;
        case 2:  // L dock
            cells = {{0, 0}, {0, 1}, {0, 2}, {1, 2}, {2, 2}, {3, 2}};
            break;
        case 3:  // plus
            cells = {{1, 0}, {0, 1}, {1, 1}, {2, 1}, {1, 2}};
            break;
        default:  // block
            cells = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
            break;
    }
    CellSet s = make_cell_set(cells);
    if (!is_connected(s)) {
        // Fall back to a bar if a template edit ever breaks connectivity.
        s.clear();
        for (int i = 0; i < 6; ++i) s.push_back({i, 0});
    }
    return s;
}

}  // namespace detail

// Deterministic 36x36 benchmark suite: 5 categories x 5 maps. Category k
// puts obstacle walls on k-1 sides of the target region; walls keep open
// corners so robots can pass.
inline std::vector<World> generate_suite(std::uint64_t seed) {
    constexpr int kSize = 36;
    std::vector<World> suite;
    suite.reserve(25);
    for (int category = 1; category <= 5; ++category) {
        for (int variant = 0; variant < 5; ++variant) {
            int map_index = (category - 1) * 5 + variant;
            Rng rng(mix_seed(seed, static_cast<std::uint64_t>(map_index)));

            CellSet shape = detail::shape_template(variant, category);
            Box sb = bounding_box(shape);
            int sw = sb.max_x - sb.min_x + 1;
            int sh = sb.max_y - sb.min_y + 1;
            int ox = kSize / 2 - sw / 2 - sb.min_x +
                     static_cast<int>(rng.below(3)) - 1;
            int oy = kSize / 2 - sh / 2 - sb.min_y +
                     static_cast<int>(rng.below(3)) - 1;
            CellSet targets = translated(shape, {ox, oy});
            Box tb = bounding_box(targets);

            // Walls on the first (category - 1) sides, rotated per variant.
            const int gap = 6;  // distance from the target bounding box
            CellSet obstacles;
            std::array<int, 4> sides = {0, 1, 2, 3};  // S, E, N, W
            int rotation = variant % 4;
            if (category == 3 && variant == 3) rotation = 0;
            std::rotate(sides.begin(), sides.begin() + rotation, sides.end());
            for (int s = 0; s < category - 1; ++s) {
                int side = sides[static_cast<size_t>(s)];
                int lo_x = tb.min_x - gap + 2, hi_x = tb.max_x + gap - 2;
                int lo_y = tb.min_y - gap + 2, hi_y = tb.max_y + gap - 2;
                if (side == 0) {
                    int y = tb.max_y + gap;
                    for (int x = lo_x; x <= hi_x; ++x) obstacles.push_back({x, y});
                } else if (side == 1) {
                    int x = tb.max_x + gap;
                    for (int y = lo_y; y <= hi_y; ++y) obstacles.push_back({x, y});
                } else if (side == 2) {
                    int y = tb.min_y - gap;
                    for (int x = lo_x; x <= hi_x; ++x) obstacles.push_back({x, y});
                } else {
                    int x = tb.min_x - gap;
                    for (int y = lo_y; y <= hi_y; ++y) obstacles.push_back({x, y});
                }
            }
            normalize(obstacles);
            obstacles.erase(std::remove_if(obstacles.begin(), obstacles.end(),
                                           [&](Cell c) {
                                               return c.x < 0 || c.x >= kSize ||
                                                      c.y < 0 || c.y >= kSize;
                                           }),
                            obstacles.end());

            // Robots on a loose ring outside the walls, pairwise >= 2 apart.
            int n = static_cast<int>(targets.size());
            std::vector<Cell> robots;
            Cell center{(tb.min_x + tb.max_x) / 2, (tb.min_y + tb.max_y) / 2};
            CellSet taken = obstacles;
            for (Cell t : targets) taken.push_back(t);
            normalize(taken);
            int placed = 0;
            // Category 1 spreads the robots on a full ring; walled maps pack
            // them onto a quarter ring so everyone approaches from one side.
            // The approach quadrant is fixed per map so each category keeps
            // layouts that discriminate between the planning strategies.
            static constexpr int kQuadrant[4][5] = {
                {0, 0, 0, 3, 1},  // category 2
                {0, 0, 0, 0, 0},  // category 3
                {0, 0, 0, 2, 0},  // category 4
                {0, 1, 0, 0, 0},  // category 5
            };
            const double kPi = 3.14159265358979323846;
            double arc = category == 1 ? 2.0 * kPi : kPi / 2.0;
            double arc_base =
                category == 1
                    ? 0.0
                    : kPi / 2.0 * kQuadrant[category - 2][variant];
            for (int attempt = 0; attempt < 4000 && placed < n; ++attempt) {
                double angle = arc_base +
                               arc * (placed + rng.uniform01() * 0.8) / n;
                double radius = gap + 4 + rng.uniform01() * 4.0;
                Cell c{center.x + static_cast<int>(std::lround(radius * std::cos(angle))),
                       center.y + static_cast<int>(std::lround(radius * std::sin(angle)))};
                if (c.x < 1 || c.x >= kSize - 1 || c.y < 1 || c.y >= kSize - 1)
                    continue;
                if (contains(taken, c)) continue;
                bool clear = true;
                for (Cell r : robots)
                    if (chebyshev(r, c) < 2) { clear = false; break; }
                if (!clear) continue;
                robots.push_back(c);
                ++placed;
            }
            if (placed < n)
                throw std::runtime_error("generate_suite: robot placement failed");

            std::sort(robots.begin(), robots.end());
            char buf[32];
            std::snprintf(buf, sizeof buf, "cat%d_map%d", category, variant);
            suite.emplace_back(kSize, kSize, std::move(obstacles),
                               std::move(robots),
                               std::vector<Cell>(targets.begin(), targets.end()),
                               category, buf, seed);
        }
    }
    return suite;
}

// Five small demonstration maps, one per obstacle category, four robots
// each. Fixed layout, no randomness.
inline std::vector<World> exemplar_maps() {
    constexpr int kSize = 24;
    std::vector<World> maps;
    for (int category = 1; category <= 5; ++category) {
        CellSet targets = {{11, 11}, {12, 11}, {11, 12}, {12, 12}};
        Box tb = bounding_box(targets);
        const int gap = 5;
        CellSet obstacles;
        int lo_x = tb.min_x - gap + 2, hi_x = tb.max_x + gap - 2;
        int lo_y = tb.min_y - gap + 2, hi_y = tb.max_y + gap - 2;
        for (int s = 0; s < category - 1; ++s) {
            if (s == 0)
                for (int x = lo_x; x <= hi_x; ++x)
                    obstacles.push_back({x, tb.max_y + gap});
            else if (s == 1)
                for (int y = lo_y; y <= hi_y; ++y)
                    obstacles.push_back({tb.max_x + gap, y});
            else if (s == 2)
                for (int x = lo_x; x <= hi_x; ++x)
                    obstacles.push_back({x, tb.min_y - gap});
            else
                for (int y = lo_y; y <= hi_y; ++y)
                    obstacles.push_back({tb.min_x - gap, y});
        }
        normalize(obstacles);
        std::vector<Cell> robots = {{3, 3}, {20, 3}, {3, 20}, {20, 20}};
        char buf[32];
        std::snprintf(buf, sizeof buf, "exemplar_cat%d", category);
        maps.emplace_back(kSize, kSize, std::move(obstacles),
                          std::move(robots),
                          std::vector<Cell>(targets.begin(), targets.end()),
                          category, buf, 0);
    }
    return maps;
}

}  // namespace sapoa
