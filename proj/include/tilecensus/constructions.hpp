#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "tilecensus/domain.hpp"
#include "tilecensus/parallel.hpp"

namespace tilecensus::constructions {

using BigInt = boost::multiprecision::cpp_int;

// Letters a_0..a_{t-1} over {0,1,2}.
struct Word {
    Coord t = 0;
    std::vector<int> letters;

    static Word make(std::vector<int> letters);
    static Word random(Coord t, std::uint64_t seed);
};

// A 3-coloring of the slab [0,t) x [0,3t)^{d-1} plus the shear vector u.
// Colors are stored row-major: the first axis (the slab thickness) is the
// slowest index, the last tail coordinate the fastest.
struct SlabColoring {
    Coord t = 0;
    int d = 0;
    std::vector<Coord> u;
    std::vector<std::uint8_t> colors;

    static SlabColoring make(Coord t, int d, std::vector<Coord> u, std::vector<std::uint8_t> colors);
    static SlabColoring random(Coord t, int d, std::vector<Coord> u, std::uint64_t seed);

    std::size_t domain_size() const;
    std::uint8_t color(Coord r, std::span<const Coord> tail) const;
};

// {a_i t + i : i in [0,t)} inside [0,3t): one point per residue mod t.
Tile line_word_tile(const Word& w);

// HNF of the lattice spanned by (t, u) and 3t e_i for i = 2..d.
HnfMatrix slab_lattice(Coord t, int d, std::span<const Coord> u);

struct SlabTile {
    Tile tile;
    LatticeCertificate certificate;
};

// v = (v_1, v') lies in the tile iff, with layer = floor(v_1 / t),
// c(v_1 mod t, (v' - layer * u) mod 3t) == layer.
SlabTile slab_tile(const SlabColoring& col);

struct FamilyCensus {
    BigInt family_size;
    BigInt distinct_tiles;
};

// d = 1 counts the word family (3^t words); d >= 2 the (c, u) pairs.
FamilyCensus family_census(Coord t, int d, const TaskPool& pool, std::uint64_t max_family = 10'000'000);

BigInt family_size(Coord t, int d);

}  // namespace tilecensus::constructions
