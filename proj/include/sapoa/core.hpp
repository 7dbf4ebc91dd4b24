#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sapoa {

// One grid cell. x is the column index, y the row index (row 0 is the top
// line of the map text). Ordering is row-major so that "smallest (y, x)"
// tie-breaks are just operator<.
struct Cell {
    int x = 0;
    int y = 0;

    friend bool operator==(const Cell&, const Cell&) = default;
    friend auto operator<=>(const Cell& a, const Cell& b) {
        if (a.y != b.y) return a.y <=> b.y;
        return a.x <=> b.x;
    }
};

inline Cell operator+(Cell a, Cell b) { return {a.x + b.x, a.y + b.y}; }
inline Cell operator-(Cell a, Cell b) { return {a.x - b.x, a.y - b.y}; }

// A canonical cell set: sorted row-major, no duplicates.
using CellSet = std::vector<Cell>;

inline void normalize(CellSet& s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
}

inline CellSet make_cell_set(std::vector<Cell> cells) {
    normalize(cells);
    return cells;
}

inline bool contains(const CellSet& s, Cell c) {
    return std::binary_search(s.begin(), s.end(), c);
}

inline CellSet translated(const CellSet& s, Cell d) {
    CellSet out = s;
    for (auto& c : out) c = c + d;
    return out;  // translation preserves row-major order
}

inline bool intersects(const CellSet& a, const CellSet& b) {
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia == *ib) return true;
        if (*ia < *ib) ++ia; else ++ib;
    }
    return false;
}

struct Box {
    int min_x = 0, min_y = 0, max_x = -1, max_y = -1;
    bool empty() const { return max_x < min_x; }
};

inline Box bounding_box(const CellSet& s) {
    Box b;
    if (s.empty()) return b;
    b.min_x = b.max_x = s.front().x;
    b.min_y = s.front().y;
    b.max_y = s.back().y;
    for (const Cell& c : s) {
        b.min_x = std::min(b.min_x, c.x);
        b.max_x = std::max(b.max_x, c.x);
    }
    return b;
}

inline int chebyshev(Cell a, Cell b) {
    return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y));
}

// Minimum Chebyshev distance over all cell pairs, with a bounding-box
// prefilter. Sets must be nonempty.
inline int min_chebyshev(const CellSet& a, const CellSet& b) {
    Box ba = bounding_box(a), bb = bounding_box(b);
    int dx = std::max({bb.min_x - ba.max_x, ba.min_x - bb.max_x, 0});
    int dy = std::max({bb.min_y - ba.max_y, ba.min_y - bb.max_y, 0});
    int lower = std::max(dx, dy);
    int best = INT32_MAX;
    for (const Cell& ca : a) {
        for (const Cell& cb : b) {
            best = std::min(best, chebyshev(ca, cb));
            if (best == lower) return best;
        }
    }
    return best;
}

// Gap between two disjoint groups in "units" (1 cell = 2 units): twice the
// number of empty cells separating them on the worst axis. Adjacent or
// diagonal contact is 0. Overlapping groups are a contract violation.
inline int group_gap_units(const CellSet& a, const CellSet& b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("group_gap_units: empty group");
    int d = min_chebyshev(a, b);
    if (d == 0) throw std::invalid_argument("group_gap_units: groups overlap");
    return 2 * (d - 1);
}

// splitmix64, used for hashing strings into seeds and deriving per-map /
// per-run seeds independent of execution order.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    return splitmix64(seed ^ splitmix64(salt));
}

inline std::uint64_t hash_string(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Deterministic PRNG with a portable bounded draw (std::uniform_int_distribution
// is implementation-defined, which would break golden traces across stdlibs).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(splitmix64(seed)) {}

    std::uint64_t next() {
        state_ = splitmix64(state_);
        return state_;
    }

    // Uniform draw in [0, n). n must be > 0.
    std::uint32_t below(std::uint32_t n) {
        return static_cast<std::uint32_t>(next() % n);
    }

    double uniform01() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

}  // namespace sapoa
