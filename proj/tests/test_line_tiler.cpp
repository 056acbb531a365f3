#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "tilecensus/lattice_tiler.hpp"
#include "tilecensus/line_tiler.hpp"

using namespace tilecensus;

namespace {

Tile ltile(std::vector<Coord> xs) {
    Coord n = *std::max_element(xs.begin(), xs.end()) + 1;
    std::vector<Point> pts;
    for (Coord x : xs) pts.push_back({x});
    return normalize_tile(pts, 1, n);
}

std::vector<Coord> coords_of(std::uint64_t m) {
    std::vector<Coord> xs;
    for (int i = 0; i < 64; ++i) {
        if ((m >> i) & 1) xs.push_back(i);
    }
    return xs;
}

}  // namespace

TEST_CASE("decide_line worked examples") {
    auto d = line::decide_line(ltile({0}));
    CHECK(d.status == Status::tiles);
    CHECK(std::get<PeriodCertificate>(*d.certificate) == PeriodCertificate{1, {0}});

    d = line::decide_line(ltile({0, 1, 3}));
    CHECK(d.status == Status::not_tile);
    REQUIRE(d.witness);
    REQUIRE(d.conflict);
    CHECK(*d.witness == Point{2});
    CHECK(*d.conflict == Point{3});

    d = line::decide_line(ltile({0, 2}));
    CHECK(d.status == Status::tiles);
    CHECK(std::get<PeriodCertificate>(*d.certificate) == PeriodCertificate{4, {0, 1}});

    for (Coord k = 1; k <= 9; ++k) {
        d = line::decide_line(ltile({0, k}));
        REQUIRE(d.status == Status::tiles);
        auto cert = std::get<PeriodCertificate>(*d.certificate);
        CHECK(cert.period == 2 * k);
        std::vector<Coord> want(static_cast<std::size_t>(k));
        std::iota(want.begin(), want.end(), 0);
        CHECK(cert.offsets == want);
    }
}

TEST_CASE("minimal_period") {
    CHECK(line::minimal_period(ltile({0})) == 1);
    CHECK(line::minimal_period(ltile({0, 2})) == 4);
    CHECK(line::minimal_period(ltile({0, 1, 2})) == 3);
    CHECK_THROWS_AS(line::minimal_period(ltile({0, 1, 3})), TilingError);
}

TEST_CASE("wrong dimension is rejected") {
    Tile t = normalize_tile({{0, 0}}, 2, 1);
    CHECK_THROWS_AS(line::decide_line(t), TilingError);
}

TEST_CASE("agrees with the coverage-state oracle on every subset of [0,12)") {
    for (std::uint64_t m = 1; m < (1u << 12); ++m) {
        if (!(m & 1)) continue;  // translation invariance covers the rest
        auto xs = coords_of(m);
        auto want = oracle::line_tiles(xs);
        REQUIRE(want.max_valid_moves <= 1);  // forcedness
        auto got = line::decide_line(ltile(xs));
        REQUIRE(got.status != Status::unknown);
        INFO("set mask " << m);
        REQUIRE((got.status == Status::tiles) == want.tiles);
        REQUIRE((line::decide_mask(m) == Status::tiles) == want.tiles);
    }
}

TEST_CASE("non-tiles admit no cyclic tiling of small period") {
    for (std::uint64_t m = 1; m < (1u << 9); m += 2) {
        auto xs = coords_of(m);
        if (line::decide_mask(m) == Status::tiles) continue;
        for (Coord p = static_cast<Coord>(xs.size()); p <= 24; p += static_cast<Coord>(xs.size())) {
            INFO("mask " << m << " period " << p);
            REQUIRE_FALSE(oracle::tiles_cyclic(xs, p));
        }
    }
}

TEST_CASE("tiles are confirmed by a torus tiling at the certificate period") {
    for (std::uint64_t m = 1; m < (1u << 10); ++m) {
        auto xs = coords_of(m);
        Tile t = ltile(xs);
        auto d = line::decide_line(t);
        if (d.status != Status::tiles) continue;
        Coord p = std::get<PeriodCertificate>(*d.certificate).period;
        CHECK(p % static_cast<Coord>(xs.size()) == 0);
        REQUIRE(oracle::tiles_cyclic(xs, p));
        REQUIRE(lattice::tiles_torus(t, lattice::TorusSpec{{p}}).status == Status::tiles);
    }
}

TEST_CASE("translation and reflection invariance") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 300; ++trial) {
        std::uint64_t m = (rng() & ((1u << 14) - 1)) | 1;
        auto xs = coords_of(m);
        auto base = line::decide_line(ltile(xs));
        Coord shift = static_cast<Coord>(rng() % 7);
        std::vector<Coord> moved, mirrored;
        for (Coord x : xs) moved.push_back(x + shift);
        for (Coord x : xs) mirrored.push_back(xs.back() - x);
        auto a = line::decide_line(ltile(moved));
        auto b = line::decide_line(ltile(mirrored));
        REQUIRE(a.status == base.status);
        REQUIRE(b.status == base.status);
        if (base.status == Status::tiles) {
            CHECK(line::minimal_period(ltile(moved)) == std::get<PeriodCertificate>(*base.certificate).period);
        }
    }
}

TEST_CASE("wide tiles go through the multi-word frontier") {
    // {0, 70}: diameter above 64 bits.
    auto d = line::decide_set(std::vector<Coord>{0, 70});
    CHECK(d.status == Status::tiles);
    CHECK(std::get<PeriodCertificate>(*d.certificate).period == 140);
    d = line::decide_set(std::vector<Coord>{0, 1, 3, 100});
    CHECK(d.status == Status::not_tile);
    // {0,1,...} scaled by 33: gcd reduction keeps it cheap.
    d = line::decide_set(std::vector<Coord>{0, 66, 99});
    CHECK(d.status == Status::not_tile);
    d = line::decide_set(std::vector<Coord>{0, 33, 66});
    CHECK(d.status == Status::tiles);
}

TEST_CASE("duplicates and empty sets") {
    CHECK_THROWS_AS(line::decide_set(std::vector<Coord>{0, 0}), TilingError);
    CHECK_THROWS_AS(line::decide_set(std::vector<Coord>{}), TilingError);
}

TEST_CASE("divisor condition holds for every tile") {
    for (std::uint64_t m = 1; m < (1u << 12); m += 2) {
        auto xs = coords_of(m);
        if (line::decide_mask(m) == Status::tiles) REQUIRE(line::divisor_condition_t1(xs));
    }
}

TEST_CASE("count_box small values and parallel determinism") {
    TaskPool one(1), four(4);
    const std::uint64_t want[] = {1, 3, 7, 13};
    for (int n = 1; n <= 4; ++n) CHECK(line::count_box(n, std::nullopt, one).total == want[n - 1]);
    for (int n = 1; n <= 14; ++n) {
        auto a = line::count_box(n, std::nullopt, one);
        auto b = line::count_box(n, std::nullopt, four);
        CHECK(a.total == b.total);
        CHECK(a.by_size == b.by_size);
        std::uint64_t sum = 0;
        for (auto [k, v] : a.by_size) sum += v;
        CHECK(sum == a.total);
        if (n <= 9) CHECK(a.total == oracle::tile_masks(n).size());
    }
}

TEST_CASE("count_box size filter") {
    TaskPool pool(2);
    auto all = line::count_box(10, std::nullopt, pool);
    auto mid = line::count_box(10, line::SizeRange{2, 4}, pool);
    std::uint64_t want = all.by_size[2] + all.by_size[3] + all.by_size[4];
    CHECK(mid.total == want);
}

TEST_CASE("count_box limits") {
    TaskPool pool(1);
    CHECK_THROWS_AS(line::count_box(25, std::nullopt, pool), TilingError);
    line::CensusLimits tight{5};
    CHECK_THROWS_AS(line::count_box(6, std::nullopt, pool, tight), TilingError);
}

TEST_CASE("enumerate_box streams tiles in mask order") {
    TaskPool pool(3);
    std::vector<std::uint64_t> seen;
    line::enumerate_box(
        2, [&](const Tile& t, const PeriodCertificate& c) {
            CHECK(verify(t, c));
            seen.push_back(line_mask(t));
        },
        pool);
    CHECK(seen == std::vector<std::uint64_t>{1, 2, 3});
    seen.clear();
    line::enumerate_box(
        10, [&](const Tile& t, const PeriodCertificate& c) {
            REQUIRE(verify(t, c));
            seen.push_back(line_mask(t));
        },
        pool);
    CHECK(seen == line::tile_masks(10, pool));
    CHECK(std::is_sorted(seen.begin(), seen.end()));
    CHECK(seen.size() == line::count_box(10, std::nullopt, pool).total);
}

TEST_CASE("tile set closed under reflection") {
    TaskPool pool(1);
    auto masks = line::tile_masks(12, pool);
    std::set<std::uint64_t> all(masks.begin(), masks.end());
    for (std::uint64_t m : masks) {
        std::uint64_t r = 0;
        for (int i = 0; i < 12; ++i) {
            if ((m >> i) & 1) r |= std::uint64_t{1} << (11 - i);
        }
        REQUIRE(all.count(r));
    }
}

TEST_CASE("ground set census") {
    TaskPool pool(2);
    auto r = line::count_ground_set({1, 2, 4, 8}, pool);
    CHECK(r.total >= 10);
    // Oracle over all 15 subsets.
    std::uint64_t want = 0;
    std::vector<Coord> m{1, 2, 4, 8};
    for (unsigned s = 1; s < 16; ++s) {
        std::vector<Coord> xs;
        for (unsigned i = 0; i < 4; ++i) {
            if ((s >> i) & 1) xs.push_back(m[i]);
        }
        want += oracle::line_tiles(xs).tiles;
    }
    CHECK(r.total == want);
    CHECK(line::count_ground_set({0, 10}, pool).total == 3);
    for (int n = 1; n <= 10; ++n) {
        std::vector<Coord> box(static_cast<std::size_t>(n));
        std::iota(box.begin(), box.end(), 0);
        CHECK(line::count_ground_set(box, pool).total == line::count_box(n, std::nullopt, pool).total);
    }
    CHECK_THROWS_AS(line::count_ground_set({1, 1}, pool), TilingError);
}

TEST_CASE("lower bound 3^floor(n/3)") {
    TaskPool pool(1);
    std::uint64_t p = 1;
    for (int n = 1; n <= 18; ++n) {
        if (n % 3 == 0) p *= 3;
        CHECK(line::count_box(n, std::nullopt, pool).total >= p);
    }
}
