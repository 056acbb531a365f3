#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tilecensus/domain.hpp"
#include "tilecensus/line_tiler.hpp"

namespace tilecensus::lattice {

struct TorusSpec {
    std::vector<Coord> dims;
    Coord cells() const;
};

struct SearchBudget {
    std::uint64_t max_cells = 10'000'000;      // per torus
    std::uint64_t max_candidates = 1'000'000;  // HNF matrices per lattice search
    std::uint64_t max_nodes = 10'000'000;      // exact-cover placements, summed over tori
    std::size_t max_tori = 64;
};

// Number of HNF matrices of determinant k in dimension d, i.e. the number of
// index-k sublattices of Z^d.
std::uint64_t count_hnf(int d, Coord k);

// Canonical order: diagonal tuples lexicographically, then the strictly upper
// entries in row-major order.
std::vector<HnfMatrix> enumerate_hnf(int d, Coord k, std::uint64_t max_candidates = 1'000'000);

Point coset_key(const Point& v, const HnfMatrix& lattice);

bool is_transversal(const Tile& s, const HnfMatrix& lattice);

// First transversal lattice of index |s| in canonical order. Throws
// budget_exceeded when there are more candidates than allowed.
std::optional<LatticeCertificate> find_lattice_tiling(const Tile& s, std::uint64_t max_candidates = 1'000'000);

// Exact cover of Z_{m_1} x ... x Z_{m_d} by translates of s. NOT_TILE only
// means "does not tile this torus".
Decision tiles_torus(const Tile& s, const TorusSpec& spec, const SearchBudget& budget = {});

// Torus shapes decide_zd tries, smallest first.
std::vector<TorusSpec> torus_schedule(const Tile& s, const SearchBudget& budget);

// d = 1 delegates to line::decide_line. For d >= 2 only certificate classes
// are searched, so the answer is TILES or UNKNOWN, never NOT_TILE.
Decision decide_zd(const Tile& s, const SearchBudget& budget = {}, const line::LineOptions& line_opts = {});

}  // namespace tilecensus::lattice
