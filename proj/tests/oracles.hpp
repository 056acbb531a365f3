#pragma once

// Reference implementations used only by the tests. They share no code with
// the library beyond the value types, favour obviousness over speed, and use
// ordered containers instead of bitmasks.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "tilecensus/domain.hpp"

namespace oracle {

using tilecensus::Coord;
using tilecensus::Point;

// ---------------------------------------------------------------------------
// 1-D tiling by search over coverage states.
//
// A state is the set of covered cells to the right of the leftmost uncovered
// cell c, stored as offsets from c. Cells left of c are all covered. From a
// state every translate of S that covers c is tried; the ones that overlap a
// covered cell are dropped. S tiles Z iff this graph, explored from every
// possible state, contains a cycle: a tiling read left to right walks the
// graph forever, and a cycle unrolls into a periodic tiling.

struct LineOracleResult {
    bool tiles = false;
    std::size_t max_valid_moves = 0;  // the forced-placement claim says <= 1
};

inline LineOracleResult line_tiles(std::vector<Coord> s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    const Coord base = s.front();
    for (auto& x : s) x -= base;
    const Coord diam = s.back();
    LineOracleResult res;
    if (diam == 0) {
        res.tiles = true;
        res.max_valid_moves = 1;
        return res;
    }
    using State = std::set<Coord>;  // covered offsets, all in [1, diam)

    auto moves = [&](const State& st) {
        std::vector<State> next;
        for (Coord anchor : s) {
            // Translate z places point `anchor` on cell c (offset 0).
            const Coord z = -anchor;
            State covered = st;
            bool ok = true;
            for (Coord x : s) {
                Coord off = x + z;
                if (off < 0 || covered.count(off)) {
                    ok = false;
                    break;
                }
                covered.insert(off);
            }
            if (!ok) continue;
            Coord shift = 0;
            while (covered.count(shift)) ++shift;
            State moved;
            for (Coord off : covered) {
                if (off > shift) moved.insert(off - shift);
            }
            next.push_back(std::move(moved));
        }
        return next;
    };

    // Every subset of [1, diam) is a start state.
    std::map<State, std::vector<State>> graph;
    std::queue<State> todo;
    const std::uint64_t starts = std::uint64_t{1} << (diam - 1);
    for (std::uint64_t m = 0; m < starts; ++m) {
        State st;
        for (Coord i = 0; i < diam - 1; ++i) {
            if ((m >> i) & 1) st.insert(i + 1);
        }
        todo.push(st);
    }
    while (!todo.empty()) {
        State st = todo.front();
        todo.pop();
        if (graph.count(st)) continue;
        auto next = moves(st);
        res.max_valid_moves = std::max(res.max_valid_moves, next.size());
        for (const auto& n : next) {
            if (!graph.count(n)) todo.push(n);
        }
        graph.emplace(st, std::move(next));
    }

    // Cycle detection by DFS colouring.
    std::map<State, int> colour;
    std::function<bool(const State&)> dfs = [&](const State& v) {
        colour[v] = 1;
        for (const auto& w : graph[v]) {
            int c = colour[w];
            if (c == 1) return true;
            if (c == 0 && dfs(w)) return true;
        }
        colour[v] = 2;
        return false;
    };
    for (const auto& [v, _] : graph) {
        if (colour[v] == 0 && dfs(v)) {
            res.tiles = true;
            break;
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// Does S tile the cyclic group Z_p? Plain backtracking on the smallest
// uncovered residue.

inline bool tiles_cyclic(const std::vector<Coord>& s, Coord p) {
    if (p % static_cast<Coord>(s.size()) != 0) return false;
    std::vector<char> covered(static_cast<std::size_t>(p), 0);
    std::function<bool()> step = [&]() -> bool {
        auto it = std::find(covered.begin(), covered.end(), 0);
        if (it == covered.end()) return true;
        const Coord c = it - covered.begin();
        for (Coord anchor : s) {
            std::vector<Coord> cells;
            bool ok = true;
            for (Coord x : s) {
                Coord r = ((x - anchor + c) % p + p) % p;
                if (covered[static_cast<std::size_t>(r)] ||
                    std::find(cells.begin(), cells.end(), r) != cells.end()) {
                    ok = false;
                    break;
                }
                cells.push_back(r);
            }
            if (!ok) continue;
            for (Coord r : cells) covered[static_cast<std::size_t>(r)] = 1;
            if (step()) return true;
            for (Coord r : cells) covered[static_cast<std::size_t>(r)] = 0;
        }
        return false;
    };
    return step();
}

// ---------------------------------------------------------------------------
// Subgroups of Z_k^d of order k, built by closing generator sets. Each one is
// k * (a sublattice of index k), so the count is the number of index-k
// sublattices of Z^d.

inline std::size_t count_index_k_sublattices(int d, Coord k) {
    const auto kk = static_cast<std::size_t>(k);
    std::size_t cells = 1;
    for (int i = 0; i < d; ++i) cells *= kk;
    auto decode = [&](std::size_t idx) {
        std::vector<Coord> v(static_cast<std::size_t>(d));
        for (int i = d - 1; i >= 0; --i) {
            v[static_cast<std::size_t>(i)] = static_cast<Coord>(idx % kk);
            idx /= kk;
        }
        return v;
    };
    auto encode = [&](const std::vector<Coord>& v) {
        std::size_t idx = 0;
        for (Coord c : v) idx = idx * kk + static_cast<std::size_t>(((c % k) + k) % k);
        return idx;
    };
    auto add = [&](std::size_t a, std::size_t b) {
        auto va = decode(a), vb = decode(b);
        for (std::size_t i = 0; i < va.size(); ++i) va[i] += vb[i];
        return encode(va);
    };
    auto closure = [&](const std::vector<std::size_t>& gens) {
        std::vector<char> in(cells, 0);
        std::vector<std::size_t> members{0};
        in[0] = 1;
        for (std::size_t i = 0; i < members.size(); ++i) {
            for (std::size_t g : gens) {
                std::size_t x = add(members[i], g);
                if (!in[x]) {
                    in[x] = 1;
                    members.push_back(x);
                }
            }
        }
        return in;
    };
    // Every subgroup of Z_k^d is generated by d elements.
    std::set<std::vector<char>> found;
    std::vector<std::size_t> gens(static_cast<std::size_t>(d), 0);
    std::function<void(std::size_t, std::size_t)> choose = [&](std::size_t pos, std::size_t from) {
        if (pos == gens.size()) {
            auto sub = closure(gens);
            if (static_cast<Coord>(std::count(sub.begin(), sub.end(), 1)) == k) found.insert(sub);
            return;
        }
        for (std::size_t g = from; g < cells; ++g) {
            gens[pos] = g;
            choose(pos + 1, g);
        }
    };
    choose(0, 0);
    return found.size();
}

inline std::uint64_t sigma(std::uint64_t k) {
    std::uint64_t s = 0;
    for (std::uint64_t i = 1; i <= k; ++i) {
        if (k % i == 0) s += i;
    }
    return s;
}

// ---------------------------------------------------------------------------
// Largest product over all compositions of t into m nonnegative parts.

inline boost::multiprecision::cpp_int jensen_brute(int m, int t) {
    boost::multiprecision::cpp_int best = -1;
    std::vector<int> parts;
    std::function<void(int, int)> rec = [&](int left, int remaining) {
        if (left == 1) {
            boost::multiprecision::cpp_int prod = remaining;
            for (int p : parts) prod *= p;
            best = std::max(best, prod);
            return;
        }
        for (int x = 0; x <= remaining; ++x) {
            parts.push_back(x);
            rec(left - 1, remaining - x);
            parts.pop_back();
        }
    };
    rec(m, t);
    return best;
}

// ---------------------------------------------------------------------------
// Connected components by flood fill over a std::set.

inline std::pair<std::size_t, std::size_t> flood_components(const std::vector<Point>& pts) {
    std::set<Point> left(pts.begin(), pts.end());
    std::size_t largest = 0, count = 0;
    while (!left.empty()) {
        std::vector<Point> stack{*left.begin()};
        left.erase(left.begin());
        std::size_t size = 0;
        while (!stack.empty()) {
            Point p = stack.back();
            stack.pop_back();
            ++size;
            for (std::size_t axis = 0; axis < p.size(); ++axis) {
                for (int delta : {-1, 1}) {
                    Point q = p;
                    q[axis] += delta;
                    auto it = left.find(q);
                    if (it != left.end()) {
                        left.erase(it);
                        stack.push_back(q);
                    }
                }
            }
        }
        ++count;
        largest = std::max(largest, size);
    }
    return {largest, count};
}

// All tiles of [0, n) according to the coverage-state oracle, as masks.
inline std::vector<std::uint64_t> tile_masks(int n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t m = 1; m < (std::uint64_t{1} << n); ++m) {
        std::vector<Coord> s;
        for (int i = 0; i < n; ++i) {
            if ((m >> i) & 1) s.push_back(i);
        }
        if (line_tiles(s).tiles) out.push_back(m);
    }
    return out;
}

}  // namespace oracle
