#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "tilecensus/domain.hpp"
#include "tilecensus/parallel.hpp"

namespace tilecensus::line {

struct LineOptions {
    // Largest number of frontier states the exhaustive cycle search may index.
    std::uint64_t state_cap = std::uint64_t{1} << 26;
};

// Decides whether a finite S of Z tiles Z by translations.
//
// The forced-greedy automaton runs first: starting from an empty frontier it
// repeatedly places the unique translate whose minimum covers the leftmost
// uncovered cell. A repeated frontier yields a periodic tiling. An overlap
// only shows that S does not tile a half-line, so the decision is completed
// by the Coven-Meyerowitz divisor condition (necessary for every tile) and,
// failing that, by a cycle search over every frontier state: S tiles Z iff
// the forced-placement map has a cycle somewhere.
Decision decide_line(const Tile& s, const LineOptions& opts = {});

// Same for an arbitrary sorted set of distinct integers (no box needed).
Decision decide_set(std::span<const Coord> sorted_points, const LineOptions& opts = {});

// Period of the certificate returned by decide_line.
Coord minimal_period(const Tile& s, const LineOptions& opts = {});

// Status only, for a normalized mask (bit 0 set). Used by the census loops.
Status decide_mask(std::uint64_t mask, std::uint64_t state_cap = std::uint64_t{1} << 26);

struct SizeRange {
    std::size_t min = 1;
    std::size_t max = SIZE_MAX;
    bool contains(std::size_t k) const { return k >= min && k <= max; }
};

struct CensusLimits {
    int max_n = 24;
    std::uint64_t state_cap = std::uint64_t{1} << 26;
};

struct CensusReport {
    std::int64_t n = 0;
    // Fits in 64 bits: at most 2^24 - 1 subsets at the default limit.
    std::uint64_t total = 0;
    std::map<std::size_t, std::uint64_t> by_size;
    // Subsets left undecided by the state cap (only possible for ground sets).
    std::uint64_t unknown = 0;
    double elapsed_seconds = 0.0;
    // total^(3/n), in double precision.
    double ratio = 0.0;
};

CensusReport count_box(int n, std::optional<SizeRange> size_filter, const TaskPool& pool,
                       const CensusLimits& limits = {});

// All tile masks of [0, n), ascending.
std::vector<std::uint64_t> tile_masks(int n, const TaskPool& pool, const CensusLimits& limits = {});

using TileVisitor = std::function<void(const Tile&, const PeriodCertificate&)>;

// Streams every tile of [0, n) with its certificate in ascending mask order.
// The visitor runs on the calling thread only.
void enumerate_box(int n, const TileVisitor& visit, const TaskPool& pool, const CensusLimits& limits = {});

CensusReport count_ground_set(std::vector<Coord> elements, const TaskPool& pool, const CensusLimits& limits = {});

// Coven-Meyerowitz condition T1 on a set with minimum 0: the product of the
// primes p over prime powers p^a with Phi_{p^a} | S(x) equals |S|. Every
// finite tile of Z satisfies it.
bool divisor_condition_t1(std::span<const Coord> normalized);

}  // namespace tilecensus::line
