#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "tilecensus/cli.hpp"

using nlohmann::json;
using tilecensus::cli::dispatch;
using tilecensus::cli::Environment;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args, Environment env = {}) {
    std::ostringstream out, err;
    int code = dispatch(args, out, err, env);
    return {code, out.str(), err.str()};
}

json first_error(const std::string& err) {
    std::istringstream in(err);
    std::string line;
    while (std::getline(in, line)) {
        auto j = json::parse(line, nullptr, false);
        if (!j.is_discarded() && j.contains("error")) return j;
    }
    return json();
}

const std::string kTile013 = R"({"d":1,"n":4,"points":[[0],[1],[3]]})";

}  // namespace

TEST_CASE("census command") {
    auto r = run({"census", "--n", "4"});
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["n"] == 4);
    CHECK(j["d"] == 1);
    CHECK(j["total"] == 13);
    CHECK(j["manifest"]["command"] == "census");
    CHECK(j["manifest"]["parameters"]["n"] == "4");
    CHECK_FALSE(j["manifest"]["parameters"].contains("jobs"));
}

TEST_CASE("census CSV") {
    auto r = run({"census", "--n", "4", "--format", "csv"});
    REQUIRE(r.code == 0);
    CHECK(r.out == "n,d,size,count\n4,1,1,4\n4,1,2,6\n4,1,3,2\n4,1,4,1\n4,1,ALL,13,6.84632504202\n");
    const std::string path = "cli_test_census.csv";
    auto f = run({"census", "--n", "4", "--csv", path});
    REQUIRE(f.code == 0);
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == r.out);
    std::remove(path.c_str());
}

TEST_CASE("decide reports not_tile with exit 0") {
    auto r = run({"decide", "--tile", kTile013});
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["status"] == "not_tile");
    CHECK(j["witness"] == json::array({2}));
}

TEST_CASE("period command") {
    auto r = run({"period", "--tile", R"({"d":1,"n":3,"points":[[0],[2]]})"});
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["period"] == 4);
    auto bad = run({"period", "--tile", kTile013});
    CHECK(bad.code == 1);
    CHECK(first_error(bad.err)["error"] == "NOT_A_TILE");
}

TEST_CASE("usage errors exit 2") {
    CHECK(run({"census", "--bogus"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"nonsense"}).code == 2);
    CHECK(run({"census"}).code == 2);
    CHECK(run({"census", "--n", "4", "--format", "xml"}).code == 2);
    CHECK(run({"bound", "jensen", "--m", "3", "--t", "7", "--format", "csv"}).code == 2);
}

TEST_CASE("domain and budget errors") {
    auto parse = run({"decide", "--tile", R"({"d":1,"n":3,"points":[[0],)"});
    CHECK(parse.code == 1);
    CHECK(first_error(parse.err)["error"] == "PARSE_ERROR");
    auto div = run({"torus", "--tile", kTile013, "--dims", "4"});
    CHECK(div.code == 1);
    CHECK(first_error(div.err)["error"] == "BAD_DIVISIBILITY");
    auto limit = run({"census", "--n", "30"});
    CHECK(limit.code == 3);
    CHECK(first_error(limit.err)["error"] == "LIMIT_EXCEEDED");
    auto vac = run({"bound", "total", "--n", "1000", "--d", "1", "--alpha", "0.1"});
    CHECK(vac.code == 1);
    CHECK(first_error(vac.err)["error"] == "VACUOUS_BOUND");
}

TEST_CASE("environment settings and flag precedence") {
    Environment env;
    env.max_n = "5";
    CHECK(run({"census", "--n", "6"}, env).code == 3);
    CHECK(run({"census", "--n", "5"}, env).code == 0);
    env.max_n = "zero";
    CHECK(run({"census", "--n", "5"}, env).code == 2);

    Environment cells;
    cells.budget_cells = "4";
    auto r = run({"torus", "--tile", R"({"d":2,"n":2,"points":[[0,0],[0,1],[1,0]]})", "--dims", "3,3"}, cells);
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["status"] == "unknown");
    auto flag = run({"torus", "--tile", R"({"d":2,"n":2,"points":[[0,0],[0,1],[1,0]]})", "--dims", "3,3", "--budget", "100"},
                    cells);
    CHECK(json::parse(flag.out)["status"] == "tiles");
}

TEST_CASE("jobs never change the output") {
    const std::vector<std::vector<std::string>> commands = {
        {"census", "--n", "14"},
        {"census-set", "--elements", "1,2,4,8,16"},
        {"stats", "density", "--n", "12"},
        {"stats", "marginals", "--n", "12"},
        {"stats", "windows", "--n", "12", "--w", "2"},
        {"stats", "sample", "--n", "10", "--seed", "3", "--count", "5"},
        {"bound", "total", "--n", "100000", "--d", "1", "--alpha", "0.1"},
        {"construct", "family-census", "--t", "1", "--d", "2"},
    };
    for (const auto& cmd : commands) {
        std::string first;
        for (const char* jobs : {"1", "4", "8"}) {
            auto args = cmd;
            args.push_back("--jobs");
            args.push_back(jobs);
            auto r = run(args);
            REQUIRE(r.code == 0);
            if (first.empty()) first = r.out;
            CHECK(r.out == first);
        }
    }
}

TEST_CASE("lattice, torus and decide-zd commands") {
    auto l = run({"lattice", "find", "--tile", R"({"d":2,"n":2,"points":[[0,0],[1,1]]})"});
    REQUIRE(l.code == 0);
    auto lj = json::parse(l.out);
    CHECK(lj["status"] == "tiles");
    CHECK(lj["kind"] == "lattice");
    CHECK(lj["determinant"] == 2);
    auto none = run({"lattice", "find", "--tile", kTile013});
    CHECK(json::parse(none.out)["status"] == "unknown");

    auto t = run({"torus", "--tile", R"({"d":1,"n":3,"points":[[0],[2]]})", "--dims", "4"});
    REQUIRE(t.code == 0);
    auto tj = json::parse(t.out);
    CHECK(tj["kind"] == "torus");
    CHECK(tj["placements"] == json::parse("[[0],[1]]"));

    auto z = run({"decide-zd", "--tile", R"({"d":2,"n":3,"points":[[0,0],[1,1],[2,2]]})"});
    CHECK(json::parse(z.out)["status"] == "tiles");
}

TEST_CASE("construct commands") {
    auto w = run({"construct", "word", "--letters", "2,1"});
    REQUIRE(w.code == 0);
    auto wj = json::parse(w.out);
    CHECK(wj["tile"]["points"] == json::parse("[[3],[4]]"));
    CHECK(wj["certificate"]["period"] == 2);

    auto r1 = run({"construct", "word", "--t", "5", "--random", "--seed", "9"});
    auto r2 = run({"construct", "word", "--t", "5", "--random", "--seed", "9"});
    CHECK(r1.out == r2.out);
    CHECK(json::parse(r1.out)["manifest"]["seed"] == 9);

    auto s = run({"construct", "slab", "--t", "1", "--d", "2", "--u", "0", "--coloring", "[0,1,2]"});
    REQUIRE(s.code == 0);
    CHECK(json::parse(s.out)["tile"]["points"] == json::parse("[[0,0],[1,1],[2,2]]"));
    auto rs = run({"construct", "slab", "--t", "2", "--d", "3", "--u", "1,4", "--random", "--seed", "2"});
    CHECK(rs.code == 0);
    auto bad = run({"construct", "slab", "--t", "1", "--d", "2", "--u", "0", "--coloring", "[0,1]"});
    CHECK(bad.code == 1);

    auto f = run({"construct", "family-census", "--t", "3", "--d", "1"});
    CHECK(json::parse(f.out)["distinct_tiles"] == 27);
}

TEST_CASE("bound commands") {
    auto r = json::parse(run({"bound", "rate", "--rho", "3.0"}).out);
    CHECK(r["bits_per_cell"] == 0.528320833574);
    auto j = json::parse(run({"bound", "jensen", "--m", "3", "--t", "7"}).out);
    CHECK(j["value"] == 12);
    auto l = json::parse(run({"bound", "lemma", "--N", "2"}).out);
    CHECK(l["max_at_endpoint"] == true);
    auto up = json::parse(run({"bound", "rate", "--ell", "300", "--k", "100", "--n", "1000", "--alpha", "0.1"}).out);
    CHECK(up["j_bound"] == 50.0);
    auto t = json::parse(run({"bound", "total", "--n", "1000000", "--d", "1", "--alpha", "0.1"}).out);
    CHECK(t["k"] == 1000);

    auto sh = run({"bound", "shearer", "--tile", R"({"d":1,"n":6,"points":[[3],[4]]})", "--translations",
                   "[[0],[2],[4],[6],[8],[10],[12],[14],[16],[18],[20],[22],[24],[26],[28]]", "--k", "5", "--torus"});
    REQUIRE(sh.code == 0);
    auto sj = json::parse(sh.out);
    CHECK(sj["a_sizes"] == json::parse(R"({"3":30})"));
    CHECK(std::abs(sj["bound_bits"].get<double>() - 2 * std::log2(3.0)) < 1e-9);
}

TEST_CASE("stats commands") {
    auto d = json::parse(run({"stats", "density", "--n", "3"}).out);
    CHECK(d["count"] == 7);
    auto c = json::parse(run({"stats", "components", "--tile", R"({"d":1,"n":5,"points":[[0],[2],[4]]})"}).out);
    CHECK(c["count"] == 3);
    auto s = json::parse(run({"stats", "sample", "--n", "1", "--seed", "1", "--count", "3"}).out);
    CHECK(s["tiles"].size() == 3);
    auto csv = run({"stats", "marginals", "--n", "3", "--format", "csv"});
    CHECK(csv.out == "n,position,frequency\n3,0,0.571428571429\n3,1,0.571428571429\n3,2,0.571428571429\n");
}

TEST_CASE("float formatting") {
    using tilecensus::cli::format_number;
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(tilecensus::cli::round_floats(json(2.0 / 3.0)).dump() == "0.666666666667");
}
