#include "tilecensus/constructions.hpp"

#include <algorithm>

#include "arith.hpp"
#include "random.hpp"

namespace tilecensus::constructions {

namespace {

Coord ipow(Coord base, int exp) {
    Coord r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

void check_slab_shape(Coord t, int d, std::span<const Coord> u) {
    if (t < 1) throw TilingError(ErrorCode::domain, "slab thickness t must be >= 1");
    if (d < 2) throw TilingError(ErrorCode::bad_dimension, "slab construction needs d >= 2");
    if (u.size() != static_cast<std::size_t>(d - 1)) {
        throw TilingError(ErrorCode::bad_dimension, "shear vector u needs d - 1 coordinates");
    }
    for (Coord c : u) {
        if (c < 0 || c >= 3 * t) throw TilingError(ErrorCode::out_of_box, "shear coordinates must lie in [0, 3t)");
    }
}

}  // namespace

Word Word::make(std::vector<int> letters) {
    if (letters.empty()) throw TilingError(ErrorCode::domain, "a word needs t >= 1 letters");
    for (int a : letters) {
        if (a < 0 || a > 2) throw TilingError(ErrorCode::domain, "word letters must be 0, 1 or 2");
    }
    Word w;
    w.t = static_cast<Coord>(letters.size());
    w.letters = std::move(letters);
    return w;
}

Word Word::random(Coord t, std::uint64_t seed) {
    if (t < 1) throw TilingError(ErrorCode::domain, "a word needs t >= 1 letters");
    std::mt19937_64 rng(seed);
    std::vector<int> letters(static_cast<std::size_t>(t));
    for (auto& a : letters) a = static_cast<int>(uniform_below(rng, 3));
    return make(std::move(letters));
}

SlabColoring SlabColoring::make(Coord t, int d, std::vector<Coord> u, std::vector<std::uint8_t> colors) {
    check_slab_shape(t, d, u);
    SlabColoring c;
    c.t = t;
    c.d = d;
    c.u = std::move(u);
    c.colors = std::move(colors);
    if (c.colors.size() != c.domain_size()) {
        throw TilingError(ErrorCode::domain, "coloring needs t * (3t)^(d-1) = " + std::to_string(c.domain_size()) + " values");
    }
    for (auto v : c.colors) {
        if (v > 2) throw TilingError(ErrorCode::domain, "colors must be 0, 1 or 2");
    }
    return c;
}

SlabColoring SlabColoring::random(Coord t, int d, std::vector<Coord> u, std::uint64_t seed) {
    check_slab_shape(t, d, u);
    std::size_t size = static_cast<std::size_t>(t * ipow(3 * t, d - 1));
    std::mt19937_64 rng(seed);
    std::vector<std::uint8_t> colors(size);
    for (auto& v : colors) v = static_cast<std::uint8_t>(uniform_below(rng, 3));
    return make(t, d, std::move(u), std::move(colors));
}

std::size_t SlabColoring::domain_size() const { return static_cast<std::size_t>(t * ipow(3 * t, d - 1)); }

std::uint8_t SlabColoring::color(Coord r, std::span<const Coord> tail) const {
    std::size_t idx = static_cast<std::size_t>(r);
    for (Coord x : tail) idx = idx * static_cast<std::size_t>(3 * t) + static_cast<std::size_t>(floor_mod(x, 3 * t));
    return colors[idx];
}

Tile line_word_tile(const Word& w) {
    std::vector<Point> pts;
    pts.reserve(w.letters.size());
    for (Coord i = 0; i < w.t; ++i) pts.push_back({w.letters[static_cast<std::size_t>(i)] * w.t + i});
    return Tile::normalize(std::move(pts), 1, 3 * w.t);
}

HnfMatrix slab_lattice(Coord t, int d, std::span<const Coord> u) {
    check_slab_shape(t, d, u);
    std::vector<Point> gens;
    Point first(static_cast<std::size_t>(d));
    first[0] = t;
    std::copy(u.begin(), u.end(), first.begin() + 1);
    gens.push_back(first);
    for (int i = 1; i < d; ++i) {
        Point e(static_cast<std::size_t>(d), 0);
        e[static_cast<std::size_t>(i)] = 3 * t;
        gens.push_back(e);
    }
    HnfMatrix h = HnfMatrix::from_generators(d, gens);
    if (h.determinant() != t * ipow(3 * t, d - 1)) {
        throw TilingError(ErrorCode::degenerate, "slab lattice has the wrong index");
    }
    return h;
}

SlabTile slab_tile(const SlabColoring& col) {
    const Coord side = 3 * col.t;
    const int tail_dims = col.d - 1;
    const Coord tail_cells = ipow(side, tail_dims);
    std::vector<Point> pts;
    pts.reserve(col.domain_size());
    Point tail(static_cast<std::size_t>(tail_dims));
    for (Coord r = 0; r < col.t; ++r) {
        for (Coord w = 0; w < tail_cells; ++w) {
            Coord rest = w;
            for (int i = tail_dims - 1; i >= 0; --i) {
                tail[static_cast<std::size_t>(i)] = rest % side;
                rest /= side;
            }
            const Coord layer = col.color(r, tail);
            Point v(static_cast<std::size_t>(col.d));
            v[0] = layer * col.t + r;
            for (int i = 0; i < tail_dims; ++i) {
                auto ui = static_cast<std::size_t>(i);
                v[ui + 1] = floor_mod(tail[ui] + layer * col.u[ui], side);
            }
            pts.push_back(std::move(v));
        }
    }
    SlabTile out{Tile::normalize(std::move(pts), col.d, side), LatticeCertificate{slab_lattice(col.t, col.d, col.u)}};
    if (out.tile.size() != col.domain_size() || !verify(out.tile, out.certificate)) {
        throw TilingError(ErrorCode::certificate_failed, "slab tile is not a transversal of its lattice");
    }
    return out;
}

BigInt family_size(Coord t, int d) {
    if (t < 1 || d < 1) throw TilingError(ErrorCode::domain, "family needs t >= 1 and d >= 1");
    if (d == 1) return boost::multiprecision::pow(BigInt(3), static_cast<unsigned>(t));
    BigInt tail = boost::multiprecision::pow(BigInt(3 * t), static_cast<unsigned>(d - 1));
    return boost::multiprecision::pow(BigInt(3), static_cast<unsigned>(t * tail)) * tail;
}

FamilyCensus family_census(Coord t, int d, const TaskPool& pool, std::uint64_t max_family) {
    FamilyCensus out;
    out.family_size = family_size(t, d);
    if (out.family_size > max_family) {
        throw TilingError(ErrorCode::budget_exceeded, "family of size " + out.family_size.str() + " exceeds the budget");
    }
    const Coord side = 3 * t;

    // Key: characteristic bit vector of the tile in its box.
    using Key = std::vector<std::uint64_t>;
    std::vector<Key> keys;

    if (d == 1) {
        auto total = static_cast<std::uint64_t>(out.family_size);
        for (std::uint64_t code = 0; code < total; ++code) {
            std::vector<int> letters(static_cast<std::size_t>(t));
            std::uint64_t rest = code;
            for (auto& a : letters) {
                a = static_cast<int>(rest % 3);
                rest /= 3;
            }
            Tile tile = line_word_tile(Word::make(std::move(letters)));
            Key key(static_cast<std::size_t>(side / 64 + 1), 0);
            for (const auto& p : tile.points()) key[static_cast<std::size_t>(p[0] / 64)] |= std::uint64_t{1} << (p[0] % 64);
            keys.push_back(std::move(key));
        }
    } else {
        const Coord tail_cells = ipow(side, d - 1);
        const auto domain = static_cast<std::size_t>(t * tail_cells);
        const auto box_cells = static_cast<std::size_t>(side * tail_cells);
        std::vector<std::vector<Key>> per_u(static_cast<std::size_t>(tail_cells));
        pool.for_each_index(per_u.size(), [&](std::size_t ui) {
            std::vector<Coord> u(static_cast<std::size_t>(d - 1));
            std::size_t rest = ui;
            for (int i = d - 2; i >= 0; --i) {
                u[static_cast<std::size_t>(i)] = static_cast<Coord>(rest % static_cast<std::size_t>(side));
                rest /= static_cast<std::size_t>(side);
            }
            std::vector<std::uint8_t> colors(domain, 0);
            auto& bucket = per_u[ui];
            for (;;) {
                SlabTile st = slab_tile(SlabColoring::make(t, d, u, colors));
                Key key(box_cells / 64 + 1, 0);
                for (const auto& p : st.tile.points()) {
                    std::size_t idx = 0;
                    for (Coord c : p) idx = idx * static_cast<std::size_t>(side) + static_cast<std::size_t>(c);
                    key[idx / 64] |= std::uint64_t{1} << (idx % 64);
                }
                bucket.push_back(std::move(key));
                std::size_t pos = 0;
                while (pos < domain && ++colors[pos] == 3) colors[pos++] = 0;
                if (pos == domain) break;
            }
        });
        for (auto& bucket : per_u) {
            for (auto& k : bucket) keys.push_back(std::move(k));
        }
    }
    std::sort(keys.begin(), keys.end());
    out.distinct_tiles = static_cast<std::uint64_t>(std::unique(keys.begin(), keys.end()) - keys.begin());
    return out;
}

}  // namespace tilecensus::constructions
