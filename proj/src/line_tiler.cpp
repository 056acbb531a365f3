#include "tilecensus/line_tiler.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "arith.hpp"

namespace tilecensus::line {

namespace {

// ------------------------------------------------------------ frontiers
//
// A frontier holds the coverage of the cells [p, p + w) where p is the
// leftmost uncovered cell, so bit 0 is clear between steps. Two encodings:
// one machine word for diameters below 64, a word vector beyond that.

struct NarrowFrontier {
    std::uint64_t bits = 0;
    friend bool operator==(NarrowFrontier, NarrowFrontier) = default;
};

std::optional<Coord> first_overlap(NarrowFrontier f, NarrowFrontier t) {
    std::uint64_t both = f.bits & t.bits;
    if (both == 0) return std::nullopt;
    return std::countr_zero(both);
}

void place(NarrowFrontier& f, NarrowFrontier t) { f.bits |= t.bits; }

Coord skip_covered(NarrowFrontier& f) {
    int z = std::countr_one(f.bits);
    f.bits = z >= 64 ? 0 : f.bits >> z;
    return z;
}

struct WideFrontier {
    std::vector<std::uint64_t> words;
    friend bool operator==(const WideFrontier&, const WideFrontier&) = default;
};

WideFrontier wide_from(std::span<const Coord> normalized) {
    WideFrontier f;
    f.words.assign(static_cast<std::size_t>(normalized.back() / 64 + 2), 0);
    for (Coord x : normalized) f.words[static_cast<std::size_t>(x / 64)] |= std::uint64_t{1} << (x % 64);
    return f;
}

std::optional<Coord> first_overlap(const WideFrontier& f, const WideFrontier& t) {
    for (std::size_t i = 0; i < f.words.size(); ++i) {
        std::uint64_t both = f.words[i] & t.words[i];
        if (both != 0) return static_cast<Coord>(i * 64 + static_cast<std::size_t>(std::countr_zero(both)));
    }
    return std::nullopt;
}

void place(WideFrontier& f, const WideFrontier& t) {
    for (std::size_t i = 0; i < f.words.size(); ++i) f.words[i] |= t.words[i];
}

Coord skip_covered(WideFrontier& f) {
    auto& w = f.words;
    std::size_t full = 0;
    while (full < w.size() && w[full] == ~std::uint64_t{0}) ++full;
    int bit = full < w.size() ? std::countr_one(w[full]) : 0;
    Coord z = static_cast<Coord>(full * 64) + bit;
    // shift right by full words, then by bit
    std::size_t n = w.size();
    for (std::size_t i = 0; i < n; ++i) w[i] = i + full < n ? w[i + full] : 0;
    if (bit > 0) {
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t hi = i + 1 < n ? w[i + 1] : 0;
            w[i] = (w[i] >> bit) | (hi << (64 - bit));
        }
    }
    return z;
}

// ------------------------------------------------------------ greedy run

enum class GreedyEnd { cycle, overlap, capped };

struct GreedyOutcome {
    GreedyEnd end = GreedyEnd::capped;
    Coord witness = 0;
    Coord conflict = 0;
    Coord period = 0;
    std::vector<Coord> offsets;
    std::uint64_t steps = 0;
};

// Forced-greedy run from the empty frontier with Brent cycle detection.
template <typename Frontier>
GreedyOutcome run_greedy(const Frontier& tile, Frontier empty, std::uint64_t step_cap, bool want_certificate) {
    GreedyOutcome out;
    auto step = [&](Frontier& f, Coord& pos) {
        if (auto c = first_overlap(f, tile)) {
            out.witness = pos;
            out.conflict = pos + *c;
            return false;
        }
        place(f, tile);
        pos += skip_covered(f);
        ++out.steps;
        return true;
    };

    Frontier tortoise = empty;
    Frontier hare = std::move(empty);
    Coord hare_pos = 0;
    if (!step(hare, hare_pos)) {
        out.end = GreedyEnd::overlap;
        return out;
    }
    std::uint64_t power = 1;
    std::uint64_t lam = 1;
    while (!(tortoise == hare)) {
        if (power == lam) {
            tortoise = hare;
            power *= 2;
            lam = 0;
        }
        if (!step(hare, hare_pos)) {
            out.end = GreedyEnd::overlap;
            return out;
        }
        ++lam;
        if (out.steps > step_cap) {
            out.end = GreedyEnd::capped;
            return out;
        }
    }
    out.end = GreedyEnd::cycle;
    if (want_certificate) {
        Frontier f = hare;
        Coord pos = 0;
        for (std::uint64_t i = 0; i < lam; ++i) {
            out.offsets.push_back(pos);
            place(f, tile);
            pos += skip_covered(f);
        }
        out.period = pos;
    }
    return out;
}

// ------------------------------------------------- exhaustive cycle search

struct CycleSearch {
    bool found = false;
    Coord period = 0;
    std::vector<Coord> offsets;
    std::uint64_t visited = 0;
};

// Walks the forced-placement map from every frontier state. Each state has at
// most one successor, so a cycle exists iff some walk returns to itself.
CycleSearch search_all_frontiers(std::uint64_t tile, int diam, bool want_certificate) {
    thread_local std::vector<std::uint32_t> marks;
    thread_local std::uint32_t next_id = 1;

    CycleSearch out;
    const std::uint64_t states = std::uint64_t{1} << (diam - 1);
    if (marks.size() < states) marks.resize(states, 0);
    if (std::uint64_t{next_id} + states + 2 >= std::uint64_t{UINT32_MAX}) {
        std::fill(marks.begin(), marks.end(), 0);
        next_id = 1;
    }
    const std::uint32_t search_base = next_id;

    for (std::uint64_t start = 0; start < states; ++start) {
        if (marks[start] >= search_base) continue;
        const std::uint32_t walk = next_id++;
        std::uint64_t f = start << 1;
        for (;;) {
            std::uint64_t idx = f >> 1;
            if (marks[idx] == walk) {
                out.found = true;
                if (want_certificate) {
                    const std::uint64_t entry = f;
                    Coord pos = 0;
                    do {
                        out.offsets.push_back(pos);
                        f |= tile;
                        int z = std::countr_one(f);
                        f >>= z;
                        pos += z;
                    } while (f != entry);
                    out.period = pos;
                }
                return out;
            }
            if (marks[idx] >= search_base) break;
            marks[idx] = walk;
            ++out.visited;
            if ((f & tile) != 0) break;
            f |= tile;
            f >>= std::countr_one(f);
        }
    }
    return out;
}

Coord gcd_of(std::span<const Coord> normalized) {
    Coord g = 0;
    for (Coord x : normalized) g = std::gcd(g, x);
    return g == 0 ? 1 : g;
}

bool equidistributed(std::span<const Coord> xs, Coord p, Coord h) {
    // Phi_{p h}(x) | S(x)  <=>  for each r mod h the counts over the p classes
    // r + j h (mod p h) are equal.
    const Coord s = p * h;
    std::unordered_map<Coord, std::vector<int>> classes;
    for (Coord x : xs) {
        Coord res = floor_mod(x, s);
        auto& c = classes[res % h];
        if (c.empty()) c.assign(static_cast<std::size_t>(p), 0);
        ++c[static_cast<std::size_t>(res / h)];
    }
    for (const auto& [r, c] : classes) {
        if (std::adjacent_find(c.begin(), c.end(), std::not_equal_to<>()) != c.end()) return false;
    }
    return true;
}

Decision finish_not_tile(const GreedyOutcome& g, Coord base, Coord scale, std::string reason) {
    Decision d;
    d.status = Status::not_tile;
    d.witness = Point{base + scale * g.witness};
    d.conflict = Point{base + scale * g.conflict};
    d.reason = std::move(reason);
    return d;
}

// Period certificate for S = base + scale * T from one for T.
PeriodCertificate lift_certificate(Coord period, const std::vector<Coord>& offsets, Coord base, Coord scale) {
    PeriodCertificate c;
    c.period = period * scale;
    for (Coord o : offsets) {
        for (Coord r = 0; r < scale; ++r) c.offsets.push_back(floor_mod(scale * o + r - base, c.period));
    }
    std::sort(c.offsets.begin(), c.offsets.end());
    return c;
}

Decision decide_sorted(std::span<const Coord> pts, const LineOptions& opts) {
    const Coord base = pts.front();
    std::vector<Coord> shifted(pts.size());
    std::transform(pts.begin(), pts.end(), shifted.begin(), [&](Coord x) { return x - base; });
    const Coord scale = gcd_of(shifted);
    std::vector<Coord> norm(shifted.size());
    std::transform(shifted.begin(), shifted.end(), norm.begin(), [&](Coord x) { return x / scale; });
    const Coord diam = norm.back();

    Decision d;
    d.budget.cap = opts.state_cap;
    if (diam == 0) {
        d.status = Status::tiles;
        d.certificate = lift_certificate(1, {0}, base, scale);
        return d;
    }

    const std::uint64_t step_cap = opts.state_cap * 3;
    GreedyOutcome g;
    if (diam < 64) {
        NarrowFrontier t;
        for (Coord x : norm) t.bits |= std::uint64_t{1} << x;
        g = run_greedy(t, NarrowFrontier{}, step_cap, true);
    } else {
        WideFrontier t = wide_from(norm);
        WideFrontier empty;
        empty.words.assign(t.words.size(), 0);
        g = run_greedy(t, std::move(empty), step_cap, true);
    }
    d.budget.states_visited = g.steps;
    d.budget.placements_tried = g.steps + (g.end == GreedyEnd::overlap ? 1 : 0);

    if (g.end == GreedyEnd::cycle) {
        d.status = Status::tiles;
        d.certificate = lift_certificate(g.period, g.offsets, base, scale);
        d.reason = "greedy_cycle";
        return d;
    }
    if (!divisor_condition_t1(norm)) {
        if (g.end == GreedyEnd::overlap) {
            Decision nd = finish_not_tile(g, base, scale, "divisor_condition");
            nd.budget = d.budget;
            return nd;
        }
        d.status = Status::not_tile;
        d.reason = "divisor_condition";
        return d;
    }
    const bool searchable = diam <= 40 && (std::uint64_t{1} << (diam - 1)) <= opts.state_cap;
    if (!searchable || g.end == GreedyEnd::capped) {
        d.status = Status::unknown;
        d.budget.exhausted = true;
        d.reason = "state_cap";
        return d;
    }
    std::uint64_t tile = 0;
    for (Coord x : norm) tile |= std::uint64_t{1} << x;
    CycleSearch cs = search_all_frontiers(tile, static_cast<int>(diam), true);
    d.budget.states_visited += cs.visited;
    d.budget.placements_tried += cs.visited;
    if (cs.found) {
        d.status = Status::tiles;
        d.certificate = lift_certificate(cs.period, cs.offsets, base, scale);
        d.reason = "frontier_cycle";
        return d;
    }
    Decision nd = finish_not_tile(g, base, scale, "no_frontier_cycle");
    nd.budget = d.budget;
    return nd;
}

std::vector<Coord> mask_coords(std::uint64_t m) {
    std::vector<Coord> xs;
    for (; m != 0; m &= m - 1) xs.push_back(std::countr_zero(m));
    return xs;
}

void check_census_n(int n, const CensusLimits& limits) {
    if (n < 1) throw TilingError(ErrorCode::domain, "census needs n >= 1");
    if (n > limits.max_n || n > 62) {
        throw TilingError(ErrorCode::limit_exceeded,
                          "n = " + std::to_string(n) + " above census limit " + std::to_string(limits.max_n));
    }
}

std::size_t chunk_bits(unsigned jobs, int available_bits) {
    int b = std::bit_width(jobs * 16u);
    return static_cast<std::size_t>(std::clamp(b, 0, std::max(0, available_bits)));
}

}  // namespace

// ---------------------------------------------------------------- public

bool divisor_condition_t1(std::span<const Coord> normalized) {
    const auto k = static_cast<Coord>(normalized.size());
    if (k <= 1) return true;
    const Coord diam = normalized.back() - normalized.front();
    // Only primes dividing |S| can make the product equal |S|; any other
    // prime in the product already rules T1 out.
    Coord product = 1;
    Coord rest = k;
    for (Coord p = 2; p <= rest; ++p) {
        if (rest % p != 0) continue;
        while (rest % p == 0) rest /= p;
        for (Coord h = 1; h * (p - 1) <= diam; h *= p) {
            if (equidistributed(normalized, p, h)) {
                product *= p;
                if (product > k || k % product != 0) return false;
            }
        }
    }
    return product == k;
}

Decision decide_set(std::span<const Coord> sorted_points, const LineOptions& opts) {
    if (sorted_points.empty()) throw TilingError(ErrorCode::empty_set, "cannot decide the empty set");
    std::vector<Coord> pts(sorted_points.begin(), sorted_points.end());
    std::sort(pts.begin(), pts.end());
    if (std::adjacent_find(pts.begin(), pts.end()) != pts.end()) {
        throw TilingError(ErrorCode::duplicates, "points must be distinct");
    }
    return decide_sorted(pts, opts);
}

Decision decide_line(const Tile& s, const LineOptions& opts) {
    if (s.dim() != 1) throw TilingError(ErrorCode::wrong_dimension, "decide_line needs a 1-D tile");
    std::vector<Coord> pts = line_coords(s);
    Decision d = decide_sorted(pts, opts);
    if (d.status == Status::tiles && !verify(s, *d.certificate)) {
        throw TilingError(ErrorCode::certificate_failed, "period certificate does not verify for " + serialize_tile(s));
    }
    return d;
}

Coord minimal_period(const Tile& s, const LineOptions& opts) {
    Decision d = decide_line(s, opts);
    if (d.status == Status::not_tile) throw TilingError(ErrorCode::not_a_tile, serialize_tile(s) + " does not tile Z");
    if (d.status == Status::unknown) throw TilingError(ErrorCode::budget_exceeded, "state cap reached");
    return std::get<PeriodCertificate>(*d.certificate).period;
}

Status decide_mask(std::uint64_t mask, std::uint64_t state_cap) {
    if (mask == 0) throw TilingError(ErrorCode::empty_set, "empty mask");
    mask >>= std::countr_zero(mask);
    if (mask == 1) return Status::tiles;
    int g = 0;
    for (std::uint64_t m = mask & (mask - 1); m != 0; m &= m - 1) g = std::gcd(g, std::countr_zero(m));
    if (g > 1) {
        std::uint64_t reduced = 0;
        for (std::uint64_t m = mask; m != 0; m &= m - 1) reduced |= std::uint64_t{1} << (std::countr_zero(m) / g);
        mask = reduced;
    }
    const int diam = std::bit_width(mask) - 1;
    GreedyOutcome gr = run_greedy(NarrowFrontier{mask}, NarrowFrontier{}, state_cap * 3, false);
    if (gr.end == GreedyEnd::cycle) return Status::tiles;
    std::vector<Coord> xs = mask_coords(mask);
    if (!divisor_condition_t1(xs)) return Status::not_tile;
    if (gr.end == GreedyEnd::capped || (std::uint64_t{1} << (diam - 1)) > state_cap) return Status::unknown;
    return search_all_frontiers(mask, diam, false).found ? Status::tiles : Status::not_tile;
}

CensusReport count_box(int n, std::optional<SizeRange> size_filter, const TaskPool& pool, const CensusLimits& limits) {
    check_census_n(n, limits);
    auto t0 = std::chrono::steady_clock::now();

    // Count normalized sets (minimum at 0) and weight each by its number of
    // translates inside the box.
    const std::size_t bits = chunk_bits(pool.jobs(), n - 1);
    const std::uint64_t chunks = std::uint64_t{1} << bits;
    const std::uint64_t per_chunk = (std::uint64_t{1} << (n - 1)) >> bits;
    std::vector<std::array<std::uint64_t, 65>> partial(chunks);
    std::vector<std::uint64_t> partial_unknown(chunks, 0);
    pool.for_each_index(chunks, [&](std::size_t c) {
        auto& hist = partial[c];
        hist.fill(0);
        for (std::uint64_t k = c * per_chunk; k < (c + 1) * per_chunk; ++k) {
            std::uint64_t m = (k << 1) | 1;
            auto size = static_cast<std::size_t>(std::popcount(m));
            if (size_filter && !size_filter->contains(size)) continue;
            std::uint64_t weight = static_cast<std::uint64_t>(n - (std::bit_width(m) - 1));
            Status st = decide_mask(m, limits.state_cap);
            if (st == Status::tiles) hist[size] += weight;
            if (st == Status::unknown) partial_unknown[c] += weight;
        }
    });

    CensusReport r;
    r.n = n;
    for (std::uint64_t c = 0; c < chunks; ++c) {
        for (std::size_t s = 0; s < 65; ++s) {
            if (partial[c][s] != 0) r.by_size[s] += partial[c][s];
        }
        r.unknown += partial_unknown[c];
    }
    for (const auto& [size, count] : r.by_size) r.total += count;
    r.ratio = std::pow(static_cast<double>(r.total), 3.0 / n);
    r.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

std::vector<std::uint64_t> tile_masks(int n, const TaskPool& pool, const CensusLimits& limits) {
    check_census_n(n, limits);
    // Decide each shape once (minimum at 0), then expand to every translate.
    const std::uint64_t shapes = std::uint64_t{1} << (n - 1);
    std::vector<std::uint8_t> shape_tiles(shapes, 0);
    const std::size_t bits = chunk_bits(pool.jobs(), n - 1);
    const std::uint64_t per_chunk = shapes >> bits;
    pool.for_each_index(std::size_t{1} << bits, [&](std::size_t c) {
        for (std::uint64_t k = c * per_chunk; k < (c + 1) * per_chunk; ++k) {
            Status st = decide_mask((k << 1) | 1, limits.state_cap);
            if (st == Status::unknown) throw TilingError(ErrorCode::budget_exceeded, "undecided shape in census");
            shape_tiles[k] = st == Status::tiles;
        }
    });
    std::vector<std::uint64_t> out;
    const std::uint64_t full = std::uint64_t{1} << n;
    for (std::uint64_t m = 1; m < full; ++m) {
        if (shape_tiles[(m >> std::countr_zero(m)) >> 1]) out.push_back(m);
    }
    return out;
}

void enumerate_box(int n, const TileVisitor& visit, const TaskPool& pool, const CensusLimits& limits) {
    std::vector<std::uint64_t> masks = tile_masks(n, pool, limits);
    constexpr std::size_t block = 4096;
    const std::size_t batch = block * pool.jobs();
    LineOptions opts{limits.state_cap};
    for (std::size_t lo = 0; lo < masks.size(); lo += batch) {
        std::size_t hi = std::min(masks.size(), lo + batch);
        std::vector<std::optional<Tile>> tiles(hi - lo);
        std::vector<PeriodCertificate> certs(hi - lo);
        pool.for_each_index((hi - lo + block - 1) / block, [&](std::size_t b) {
            for (std::size_t i = lo + b * block; i < std::min(hi, lo + (b + 1) * block); ++i) {
                Tile t = tile_from_mask(masks[i], n);
                Decision d = decide_line(t, opts);
                certs[i - lo] = std::get<PeriodCertificate>(*d.certificate);
                tiles[i - lo].emplace(std::move(t));
            }
        });
        for (std::size_t i = 0; i < hi - lo; ++i) visit(*tiles[i], certs[i]);
    }
}

CensusReport count_ground_set(std::vector<Coord> elements, const TaskPool& pool, const CensusLimits& limits) {
    auto t0 = std::chrono::steady_clock::now();
    if (elements.empty()) throw TilingError(ErrorCode::empty_set, "ground set is empty");
    std::sort(elements.begin(), elements.end());
    if (std::adjacent_find(elements.begin(), elements.end()) != elements.end()) {
        throw TilingError(ErrorCode::duplicates, "ground set has repeated elements");
    }
    const int m = static_cast<int>(elements.size());
    if (m > limits.max_n || m > 62) {
        throw TilingError(ErrorCode::limit_exceeded,
                          "|M| = " + std::to_string(m) + " above census limit " + std::to_string(limits.max_n));
    }
    const std::uint64_t subsets = std::uint64_t{1} << m;
    const std::size_t bits = chunk_bits(pool.jobs(), m);
    const std::uint64_t per_chunk = subsets >> bits;
    std::vector<std::array<std::uint64_t, 65>> partial(std::size_t{1} << bits);
    std::vector<std::uint64_t> partial_unknown(std::size_t{1} << bits, 0);
    LineOptions opts{limits.state_cap};
    pool.for_each_index(std::size_t{1} << bits, [&](std::size_t c) {
        auto& hist = partial[c];
        hist.fill(0);
        std::vector<Coord> pts;
        for (std::uint64_t mask = std::max<std::uint64_t>(1, c * per_chunk); mask < (c + 1) * per_chunk; ++mask) {
            pts.clear();
            for (std::uint64_t b = mask; b != 0; b &= b - 1) pts.push_back(elements[static_cast<std::size_t>(std::countr_zero(b))]);
            Decision d = decide_sorted(pts, opts);
            if (d.status == Status::tiles) ++hist[pts.size()];
            if (d.status == Status::unknown) ++partial_unknown[c];
        }
    });
    CensusReport r;
    r.n = m;
    for (std::size_t c = 0; c < partial.size(); ++c) {
        for (std::size_t s = 0; s < 65; ++s) {
            if (partial[c][s] != 0) r.by_size[s] += partial[c][s];
        }
        r.unknown += partial_unknown[c];
    }
    for (const auto& [size, count] : r.by_size) r.total += count;
    r.ratio = std::pow(static_cast<double>(r.total), 3.0 / m);
    r.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

}  // namespace tilecensus::line
