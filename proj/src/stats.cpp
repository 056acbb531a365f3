#include "tilecensus/stats.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include <boost/pending/disjoint_sets.hpp>

#include "random.hpp"

namespace tilecensus::stats {

namespace {

constexpr std::size_t kBlock = 4096;

// Runs fn(block_begin, block_end, slot) over fixed blocks of the mask list
// and returns the per-block slots in order; merging is left to the caller.
template <typename Acc, typename Fn>
std::vector<Acc> blocked(std::size_t size, const TaskPool& pool, Acc init, Fn fn) {
    std::vector<Acc> slots((size + kBlock - 1) / kBlock, init);
    pool.for_each_index(slots.size(), [&](std::size_t b) {
        fn(b * kBlock, std::min(size, (b + 1) * kBlock), slots[b]);
    });
    return slots;
}

}  // namespace

DensityReport density_report(int n, const TaskPool& pool, const line::CensusLimits& limits) {
    const std::vector<std::uint64_t> masks = line::tile_masks(n, pool, limits);
    DensityReport r;
    r.n = n;
    r.count = masks.size();

    using Hist = std::vector<std::uint64_t>;
    auto slots = blocked(masks.size(), pool, Hist(static_cast<std::size_t>(n) + 1, 0),
                         [&](std::size_t lo, std::size_t hi, Hist& h) {
                             for (std::size_t i = lo; i < hi; ++i) ++h[static_cast<std::size_t>(std::popcount(masks[i]))];
                         });
    Hist hist(static_cast<std::size_t>(n) + 1, 0);
    for (const auto& h : slots) {
        for (std::size_t k = 0; k < h.size(); ++k) hist[k] += h[k];
    }

    unsigned __int128 sum = 0, sum_sq = 0;
    for (std::size_t k = 0; k < hist.size(); ++k) {
        if (hist[k] == 0) continue;
        r.histogram[k] = hist[k];
        sum += static_cast<unsigned __int128>(hist[k]) * k;
        sum_sq += static_cast<unsigned __int128>(hist[k]) * k * k;
    }
    const auto c = static_cast<long double>(r.count);
    const auto nn = static_cast<long double>(n);
    r.mean_density = static_cast<double>(static_cast<long double>(sum) / (c * nn));
    // c * sum_sq - sum^2 is exact in 128 bits at census sizes.
    unsigned __int128 spread = static_cast<unsigned __int128>(r.count) * sum_sq - sum * sum;
    r.stdev_density = static_cast<double>(std::sqrt(static_cast<long double>(spread)) / (c * nn));
    return r;
}

std::vector<Tile> sample_uniform(int n, std::uint64_t seed, std::size_t count, const TaskPool& pool,
                                 const line::CensusLimits& limits) {
    const std::vector<std::uint64_t> masks = line::tile_masks(n, pool, limits);
    std::mt19937_64 rng(seed);
    std::vector<Tile> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(tile_from_mask(masks[uniform_below(rng, masks.size())], n));
    return out;
}

std::vector<double> marginal_frequencies(int n, const TaskPool& pool, const line::CensusLimits& limits) {
    const std::vector<std::uint64_t> masks = line::tile_masks(n, pool, limits);
    using Counts = std::vector<std::uint64_t>;
    auto slots = blocked(masks.size(), pool, Counts(static_cast<std::size_t>(n), 0),
                         [&](std::size_t lo, std::size_t hi, Counts& c) {
                             for (std::size_t i = lo; i < hi; ++i) {
                                 for (std::uint64_t m = masks[i]; m != 0; m &= m - 1) ++c[static_cast<std::size_t>(std::countr_zero(m))];
                             }
                         });
    Counts total(static_cast<std::size_t>(n), 0);
    for (const auto& c : slots) {
        for (std::size_t i = 0; i < c.size(); ++i) total[i] += c[i];
    }
    std::vector<double> out(total.size());
    for (std::size_t i = 0; i < total.size(); ++i) {
        out[i] = static_cast<double>(static_cast<long double>(total[i]) / static_cast<long double>(masks.size()));
    }
    return out;
}

WindowReport window_frequencies(int n, int w, const TaskPool& pool, const line::CensusLimits& limits) {
    if (w < 1 || w > 6) throw TilingError(ErrorCode::domain, "window width must lie in [1, 6]");
    WindowReport r;
    r.n = n;
    r.w = w;
    r.bulk_begin = (n + 3) / 4;
    r.bulk_end = (3 * static_cast<std::int64_t>(n)) / 4;
    if (r.bulk_end - r.bulk_begin < w) {
        throw TilingError(ErrorCode::domain, "no window of width " + std::to_string(w) + " fits in the bulk of [0, " +
                                                 std::to_string(n) + ")");
    }
    const std::vector<std::uint64_t> masks = line::tile_masks(n, pool, limits);
    r.windows = static_cast<std::size_t>(r.bulk_end - r.bulk_begin - w + 1);
    const std::size_t patterns = std::size_t{1} << w;
    const std::uint64_t low = patterns - 1;

    using Counts = std::vector<std::uint64_t>;
    auto slots = blocked(masks.size(), pool, Counts(patterns, 0), [&](std::size_t lo, std::size_t hi, Counts& c) {
        for (std::size_t i = lo; i < hi; ++i) {
            for (std::int64_t s = r.bulk_begin; s + w <= r.bulk_end; ++s) ++c[(masks[i] >> s) & low];
        }
    });
    Counts total(patterns, 0);
    for (const auto& c : slots) {
        for (std::size_t p = 0; p < patterns; ++p) total[p] += c[p];
    }
    const auto denom = static_cast<long double>(masks.size()) * static_cast<long double>(r.windows);
    r.frequencies.resize(patterns);
    r.reference.resize(patterns);
    double tv = 0.0;
    for (std::size_t p = 0; p < patterns; ++p) {
        r.frequencies[p] = static_cast<double>(static_cast<long double>(total[p]) / denom);
        const int ones = std::popcount(p);
        r.reference[p] = std::pow(1.0 / 3.0, ones) * std::pow(2.0 / 3.0, w - ones);
        tv += std::abs(r.frequencies[p] - r.reference[p]);
    }
    r.tv_distance = tv / 2.0;
    return r;
}

ComponentStats component_stats(const Tile& s) {
    const auto& pts = s.points();
    const std::size_t size = pts.size();
    std::vector<std::size_t> rank(size), parent(size);
    boost::disjoint_sets<std::size_t*, std::size_t*> sets(rank.data(), parent.data());
    for (std::size_t i = 0; i < size; ++i) sets.make_set(i);

    // Points are sorted, so the +1 neighbour along each axis is a binary search.
    Point q;
    for (std::size_t i = 0; i < size; ++i) {
        for (std::size_t axis = 0; axis < pts[i].size(); ++axis) {
            q = pts[i];
            ++q[axis];
            auto it = std::lower_bound(pts.begin(), pts.end(), q);
            if (it != pts.end() && *it == q) sets.union_set(i, static_cast<std::size_t>(it - pts.begin()));
        }
    }
    std::vector<std::size_t> sizes(size, 0);
    for (std::size_t i = 0; i < size; ++i) ++sizes[sets.find_set(i)];
    ComponentStats out;
    for (std::size_t c : sizes) {
        if (c == 0) continue;
        ++out.count;
        out.largest = std::max(out.largest, c);
    }
    return out;
}

}  // namespace tilecensus::stats
