#include <random>

#include "doctest.h"
#include "tilecensus/domain.hpp"

using namespace tilecensus;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const TilingError& e) {
        return e.code();
    }
    FAIL("expected a TilingError");
    return ErrorCode::domain;
}

}  // namespace

TEST_CASE("normalize sorts and deduplicates") {
    Tile t = normalize_tile({{2}, {0}, {2}}, 1, 3);
    CHECK(t.points() == std::vector<Point>{{0}, {2}});
    CHECK(normalize_tile({{0, 0}}, 2, 1).size() == 1);
    CHECK(normalize_tile(t.points(), 1, 3) == t);
}

TEST_CASE("normalize rejects bad input") {
    CHECK(code_of([] { normalize_tile({{3}}, 1, 3); }) == ErrorCode::out_of_box);
    CHECK(code_of([] { normalize_tile({{-1}}, 1, 3); }) == ErrorCode::out_of_box);
    CHECK(code_of([] { normalize_tile({}, 1, 3); }) == ErrorCode::empty_set);
    CHECK(code_of([] { normalize_tile({{0, 1}, {0}}, 2, 3); }) == ErrorCode::bad_dimension);
    CHECK(code_of([] { normalize_tile({{0}}, 0, 3); }) == ErrorCode::bad_dimension);
}

TEST_CASE("diameter") {
    CHECK(diameter(normalize_tile({{0}, {4}}, 1, 5)) == 4);
    CHECK(diameter(normalize_tile({{0}}, 1, 1)) == 0);
    CHECK(diameter(normalize_tile({{1}, {2}, {5}}, 1, 6)) == 4);
    CHECK(code_of([] { diameter(normalize_tile({{0, 0}}, 2, 1)); }) == ErrorCode::wrong_dimension);
}

TEST_CASE("canonical serialization") {
    Tile t = normalize_tile({{4}, {0}}, 1, 6);
    CHECK(serialize_tile(t) == R"({"d":1,"n":6,"points":[[0],[4]]})");
    Tile u = parse_tile(R"({"n":6,"points":[[4],[0],[4]],"d":1})");
    CHECK(u == t);
    CHECK(serialize_tile(u) == serialize_tile(t));
}

TEST_CASE("round trip is exhaustive identity for small boxes") {
    for (int n = 1; n <= 6; ++n) {
        for (std::uint64_t m = 1; m < (std::uint64_t{1} << n); ++m) {
            Tile t = tile_from_mask(m, n);
            REQUIRE(parse_tile(serialize_tile(t)) == t);
            REQUIRE(line_mask(t) == m);
        }
    }
    // d = 2 boxes of side <= 3 exhaustively (2^9 subsets at side 3).
    for (int n = 1; n <= 3; ++n) {
        const int cells = n * n;
        for (std::uint64_t m = 1; m < (std::uint64_t{1} << cells); ++m) {
            std::vector<Point> pts;
            for (int c = 0; c < cells; ++c) {
                if ((m >> c) & 1) pts.push_back({c / n, c % n});
            }
            Tile t = normalize_tile(pts, 2, n);
            REQUIRE(parse_tile(serialize_tile(t)) == t);
        }
    }
}

TEST_CASE("parse errors carry a position") {
    try {
        parse_tile(R"({"d":1,"n":3,"points":[[0],)");
        FAIL("no error");
    } catch (const TilingError& e) {
        CHECK(e.code() == ErrorCode::parse_error);
        CHECK(e.detail().find("byte") != std::string::npos);
    }
    CHECK(code_of([] { parse_tile(R"({"d":1,"n":3,"points":[[5]]})"); }) == ErrorCode::out_of_box);
    CHECK(code_of([] { parse_tile(R"({"d":1,"points":[[0]]})"); }) == ErrorCode::parse_error);
}

TEST_CASE("HNF from generators") {
    HnfMatrix h = HnfMatrix::from_generators(2, std::vector<Point>{{1, 1}, {0, 3}});
    CHECK(h.determinant() == 3);
    for (int i = 0; i < 2; ++i) {
        for (int j = i + 1; j < 2; ++j) {
            CHECK(h.at(i, j) >= 0);
            CHECK(h.at(i, j) < h.at(i, i));
        }
        for (int j = 0; j < i; ++j) CHECK(h.at(i, j) == 0);
    }
    // Both generators reduce to the zero coset.
    CHECK(h.reduce({1, 1}) == Point{0, 0});
    CHECK(h.reduce({0, 3}) == Point{0, 0});
    CHECK(h.reduce({0, 1}) != Point{0, 0});
    CHECK(HnfMatrix::from_generators(2, std::vector<Point>{{1, 0}, {0, 3}}) == HnfMatrix::diagonal(std::vector<Coord>{1, 3}));
    CHECK(code_of([] { HnfMatrix::from_generators(2, std::vector<Point>{{1, 1}, {2, 2}}); }) == ErrorCode::degenerate);
}

TEST_CASE("certificate verification") {
    Tile t = normalize_tile({{0}, {2}}, 1, 3);
    CHECK(verify(t, PeriodCertificate{4, {0, 1}}));
    CHECK_FALSE(verify(t, PeriodCertificate{4, {0, 2}}));
    CHECK_FALSE(verify(t, PeriodCertificate{2, {0}}));
    CHECK(verify(t, TorusCertificate{{4}, {{0}, {1}}}));
    CHECK_FALSE(verify(t, TorusCertificate{{4}, {{0}}}));
    Tile two = normalize_tile({{0}, {1}}, 1, 2);
    CHECK(verify(two, LatticeCertificate{HnfMatrix::diagonal(std::vector<Coord>{2})}));
    CHECK_FALSE(verify(t, LatticeCertificate{HnfMatrix::diagonal(std::vector<Coord>{2})}));
}

TEST_CASE("decision JSON merges certificate fields") {
    Decision d;
    d.status = Status::tiles;
    d.certificate = PeriodCertificate{4, {0, 1}};
    d.reason = "greedy_cycle";
    auto j = to_json(d);
    CHECK(j["status"] == "tiles");
    CHECK(j["kind"] == "period");
    CHECK(j["period"] == 4);
    CHECK(j["offsets"] == nlohmann::json::array({0, 1}));
}
