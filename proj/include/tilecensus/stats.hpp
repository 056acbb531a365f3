#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "tilecensus/domain.hpp"
#include "tilecensus/line_tiler.hpp"
#include "tilecensus/parallel.hpp"

namespace tilecensus::stats {

// Exact statistics over every tile of [0, n), d = 1.
struct DensityReport {
    std::int64_t n = 0;
    std::uint64_t count = 0;
    double mean_density = 0.0;
    double stdev_density = 0.0;  // population standard deviation of |S| / n
    std::map<std::size_t, std::uint64_t> histogram;
};

DensityReport density_report(int n, const TaskPool& pool, const line::CensusLimits& limits = {});

// Uniform i.i.d. draws from the tile population of [0, n).
std::vector<Tile> sample_uniform(int n, std::uint64_t seed, std::size_t count, const TaskPool& pool,
                                 const line::CensusLimits& limits = {});

// P(i in S) for i in [0, n) under the uniform tile measure.
std::vector<double> marginal_frequencies(int n, const TaskPool& pool, const line::CensusLimits& limits = {});

struct WindowReport {
    std::int64_t n = 0;
    int w = 0;
    std::int64_t bulk_begin = 0;  // ceil(n/4)
    std::int64_t bulk_end = 0;    // floor(3n/4), exclusive
    std::size_t windows = 0;
    // Indexed by pattern; bit i is position start + i.
    std::vector<double> frequencies;
    std::vector<double> reference;  // Bernoulli(1/3)^w
    double tv_distance = 0.0;
};

// Restriction of a uniform tile to a uniform length-w window inside the bulk.
WindowReport window_frequencies(int n, int w, const TaskPool& pool, const line::CensusLimits& limits = {});

struct ComponentStats {
    std::size_t largest = 0;
    std::size_t count = 0;
};

// Components of the subgraph of the grid Z^d (l1 neighbours) induced by s.
ComponentStats component_stats(const Tile& s);

}  // namespace tilecensus::stats
