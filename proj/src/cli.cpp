#include "tilecensus/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fmt/chrono.h>
#include <fmt/format.h>
#include <fstream>
#include <functional>
#include <sstream>

#include "CLI11.hpp"
#include "tilecensus/constructions.hpp"
#include "tilecensus/domain.hpp"
#include "tilecensus/entropy_bound.hpp"
#include "tilecensus/lattice_tiler.hpp"
#include "tilecensus/line_tiler.hpp"
#include "tilecensus/parallel.hpp"
#include "tilecensus/stats.hpp"

namespace tilecensus::cli {

namespace {

using nlohmann::json;

constexpr const char* kToolVersion = "tilecensus 1.0.0";
constexpr int kFormatVersion = 1;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::uint64_t parse_env_number(const std::optional<std::string>& value, const char* name) {
    std::uint64_t x = 0;
    const auto& s = *value;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || ptr != s.data() + s.size() || x == 0) {
        throw UsageError(std::string(name) + " must be a positive integer, got '" + s + "'");
    }
    return x;
}

std::string read_text_arg(const std::string& arg) {
    auto first = arg.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) return arg;
    std::ifstream in(arg);
    if (!in) throw TilingError(ErrorCode::parse_error, "cannot read '" + arg + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json parse_json_arg(const std::string& arg) {
    std::string text = read_text_arg(arg);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw TilingError(ErrorCode::parse_error, "byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

Tile load_tile(const std::string& arg) { return parse_tile(read_text_arg(arg)); }

std::vector<Point> load_translations(const std::string& arg) {
    json j = parse_json_arg(arg);
    if (j.is_object() && j.contains("translations")) j = j["translations"];
    try {
        return j.get<std::vector<Point>>();
    } catch (const json::exception& e) {
        throw TilingError(ErrorCode::parse_error, std::string("translations must be a list of points: ") + e.what());
    }
}

json big_to_json(const boost::multiprecision::cpp_int& x) {
    if (x >= 0 && x <= std::numeric_limits<std::uint64_t>::max()) return static_cast<std::uint64_t>(x);
    return x.str();
}

json size_map(const std::map<std::size_t, std::uint64_t>& m) {
    json j = json::object();
    for (auto [k, v] : m) j[std::to_string(k)] = v;
    return j;
}

std::string iso_time(std::chrono::system_clock::time_point t) {
    return fmt::format("{:%Y-%m-%dT%H:%M:%S}Z", std::chrono::floor<std::chrono::milliseconds>(t));
}

// Output of a subcommand: the JSON document and, optionally, CSV text that
// replaces it on stdout when --format csv is requested.
struct Output {
    json doc;
    std::string csv;
};

struct Settings {
    unsigned jobs = TaskPool::default_jobs();
    line::CensusLimits limits;
    lattice::SearchBudget budget;
    std::string format = "json";
};

std::string census_csv(const line::CensusReport& r) {
    std::string s = "n,d,size,count\n";
    for (auto [k, v] : r.by_size) s += fmt::format("{},1,{},{}\n", r.n, k, v);
    s += fmt::format("{},1,ALL,{},{}\n", r.n, r.total, format_number(r.ratio));
    return s;
}

json census_json(const line::CensusReport& r) {
    return {{"n", r.n}, {"d", 1}, {"total", r.total}, {"by_size", size_map(r.by_size)}, {"ratio", r.ratio}};
}

json decision_with_tile(const Decision& d, const Tile& t) {
    json j = to_json(d);
    j["tile"] = to_json(t);
    return j;
}

}  // namespace

Environment Environment::from_process() {
    Environment e;
    if (const char* v = std::getenv("TILECENSUS_MAX_N")) e.max_n = v;
    if (const char* v = std::getenv("TILECENSUS_BUDGET_CELLS")) e.budget_cells = v;
    if (const char* v = std::getenv("TILECENSUS_JOBS")) e.jobs = v;
    return e;
}

std::string format_number(double x, int digits) {
    if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
    return fmt::format("{:.{}g}", x, digits);
}

json round_floats(const json& j, int digits) {
    switch (j.type()) {
        case json::value_t::number_float: {
            double x = j.get<double>();
            if (!std::isfinite(x)) return nullptr;
            return std::strtod(format_number(x, digits).c_str(), nullptr);
        }
        case json::value_t::array: {
            json out = json::array();
            for (const auto& v : j) out.push_back(round_floats(v, digits));
            return out;
        }
        case json::value_t::object: {
            json out = json::object();
            for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = round_floats(it.value(), digits);
            return out;
        }
        default:
            return j;
    }
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Environment& env) {
    auto emit_error = [&](std::string_view code, const std::string& detail) {
        err << json{{"error", code}, {"detail", detail}}.dump() << '\n';
    };

    Settings cfg;
    try {
        if (env.jobs) cfg.jobs = static_cast<unsigned>(parse_env_number(env.jobs, "TILECENSUS_JOBS"));
        if (env.max_n) cfg.limits.max_n = static_cast<int>(parse_env_number(env.max_n, "TILECENSUS_MAX_N"));
        if (env.budget_cells) cfg.budget.max_cells = parse_env_number(env.budget_cells, "TILECENSUS_BUDGET_CELLS");
    } catch (const UsageError& e) {
        emit_error("USAGE", e.what());
        return 2;
    }

    CLI::App app{"Translational tiling census engine"};
    app.name("tilecensus");
    app.require_subcommand(1);

    std::function<Output()> action;
    CLI::App* chosen = nullptr;
    std::optional<unsigned> jobs_flag;

    // Every leaf command takes --jobs and --format; the leaf that fires
    // records itself so the manifest can list its parameters.
    auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& desc) {
        CLI::App* sub = parent->add_subcommand(name, desc);
        sub->add_option("--jobs", jobs_flag, "Worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
        return sub;
    };
    auto bind = [&](CLI::App* sub, std::function<Output()> fn) {
        sub->callback([&, sub, fn] {
            chosen = sub;
            action = fn;
        });
    };
    auto pool = [&] { return TaskPool(cfg.jobs); };

    // ---- line tiler
    std::string tile_arg;
    {
        auto* sub = leaf(&app, "decide", "Decide whether a 1-D tile tiles Z");
        sub->add_option("--tile", tile_arg, "Tile JSON file or inline JSON")->required();
        bind(sub, [&] {
            Tile t = load_tile(tile_arg);
            return Output{decision_with_tile(line::decide_line(t), t), {}};
        });
    }
    {
        auto* sub = leaf(&app, "period", "Period of the tiling found for a 1-D tile");
        sub->add_option("--tile", tile_arg, "Tile JSON file or inline JSON")->required();
        bind(sub, [&] {
            Tile t = load_tile(tile_arg);
            Decision d = line::decide_line(t);
            if (d.status == Status::not_tile) throw TilingError(ErrorCode::not_a_tile, serialize_tile(t) + " does not tile Z");
            if (d.status == Status::unknown) throw TilingError(ErrorCode::budget_exceeded, "state cap reached");
            json j = to_json(*d.certificate);
            j["tile"] = to_json(t);
            return Output{j, {}};
        });
    }
    int census_n = 0;
    std::optional<std::size_t> min_size, max_size;
    std::optional<std::string> csv_path;
    {
        auto* sub = leaf(&app, "census", "Count the tiles contained in [0, n)");
        sub->add_option("--n", census_n, "Box side")->required();
        sub->add_option("--min-size", min_size, "Smallest tile size counted");
        sub->add_option("--max-size", max_size, "Largest tile size counted");
        sub->add_option("--csv", csv_path, "Also write CSV to this file");
        bind(sub, [&] {
            std::optional<line::SizeRange> range;
            if (min_size || max_size) range = line::SizeRange{min_size.value_or(1), max_size.value_or(SIZE_MAX)};
            auto report = line::count_box(census_n, range, pool(), cfg.limits);
            err << json{{"log", "census"}, {"n", census_n}, {"elapsed_seconds", report.elapsed_seconds}}.dump() << '\n';
            std::string csv = census_csv(report);
            if (csv_path) {
                std::ofstream f(*csv_path);
                if (!(f << csv)) throw TilingError(ErrorCode::domain, "cannot write '" + *csv_path + "'");
            }
            return Output{census_json(report), csv};
        });
    }
    std::vector<Coord> elements;
    {
        auto* sub = leaf(&app, "census-set", "Count the tiles contained in a finite ground set of Z");
        sub->add_option("--elements", elements, "Ground set, comma separated")->required()->delimiter(',');
        bind(sub, [&] {
            auto report = line::count_ground_set(elements, pool(), cfg.limits);
            json j = census_json(report);
            j.erase("d");
            j.erase("n");
            j["size"] = report.n;
            j["unknown"] = report.unknown;
            std::vector<Coord> sorted = elements;
            std::sort(sorted.begin(), sorted.end());
            sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
            j["elements"] = sorted;
            return Output{j, {}};
        });
    }

    // ---- lattice tiler
    std::optional<std::uint64_t> max_candidates, budget_cells, max_nodes;
    auto apply_budget = [&] {
        lattice::SearchBudget b = cfg.budget;
        if (max_candidates) b.max_candidates = *max_candidates;
        if (budget_cells) b.max_cells = *budget_cells;
        if (max_nodes) b.max_nodes = *max_nodes;
        return b;
    };
    {
        auto* group = app.add_subcommand("lattice", "Lattice tilings");
        group->require_subcommand(1);
        auto* sub = leaf(group, "find", "Search for a lattice of index |S| with S as transversal");
        sub->add_option("--tile", tile_arg, "Tile JSON file or inline JSON")->required();
        sub->add_option("--max-candidates", max_candidates, "HNF candidate budget");
        bind(sub, [&] {
            Tile t = load_tile(tile_arg);
            auto b = apply_budget();
            Decision d;
            if (auto cert = lattice::find_lattice_tiling(t, b.max_candidates)) {
                d.status = Status::tiles;
                d.certificate = *cert;
                d.reason = "lattice_transversal";
            } else {
                d.reason = "no_transversal_lattice";
            }
            d.budget.cap = b.max_candidates;
            return Output{decision_with_tile(d, t), {}};
        });
    }
    std::vector<Coord> dims;
    {
        auto* sub = leaf(&app, "torus", "Exact cover of a torus by translates");
        sub->add_option("--tile", tile_arg, "Tile JSON file or inline JSON")->required();
        sub->add_option("--dims", dims, "Torus side lengths, comma separated")->required()->delimiter(',');
        sub->add_option("--budget", budget_cells, "Largest torus (cells)");
        sub->add_option("--max-nodes", max_nodes, "Exact-cover node budget");
        bind(sub, [&] {
            Tile t = load_tile(tile_arg);
            Decision d = lattice::tiles_torus(t, lattice::TorusSpec{dims}, apply_budget());
            return Output{decision_with_tile(d, t), {}};
        });
    }
    {
        auto* sub = leaf(&app, "decide-zd", "Budgeted tiling search in any dimension");
        sub->add_option("--tile", tile_arg, "Tile JSON file or inline JSON")->required();
        sub->add_option("--budget", budget_cells, "Largest torus (cells)");
        sub->add_option("--max-candidates", max_candidates, "HNF candidate budget");
        sub->add_option("--max-nodes", max_nodes, "Exact-cover node budget");
        bind(sub, [&] {
            Tile t = load_tile(tile_arg);
            return Output{decision_with_tile(lattice::decide_zd(t, apply_budget()), t), {}};
        });
    }

    // ---- constructions
    std::optional<Coord> word_t;
    std::vector<int> letters;
    bool random_flag = false;
    std::optional<std::uint64_t> seed;
    int dim = 1;
    std::vector<Coord> shear;
    std::optional<std::string> coloring_arg;
    {
        auto* group = app.add_subcommand("construct", "Lower-bound tile families");
        group->require_subcommand(1);

        auto* word = leaf(group, "word", "Word tile {a_i t + i} in [0, 3t)");
        word->add_option("--t", word_t, "Word length");
        auto* letters_opt = word->add_option("--letters", letters, "Letters in {0,1,2}")->delimiter(',');
        auto* random_opt = word->add_flag("--random", random_flag, "Draw the letters at random");
        word->add_option("--seed", seed, "Random seed");
        letters_opt->excludes(random_opt);
        bind(word, [&] {
            constructions::Word w;
            if (random_flag) {
                if (!word_t) throw UsageError("--random needs --t");
                w = constructions::Word::random(*word_t, seed.value_or(0));
            } else {
                if (letters.empty()) throw UsageError("give --letters or --random");
                w = constructions::Word::make(letters);
                if (word_t && *word_t != w.t) throw UsageError("--t does not match the number of letters");
            }
            Tile tile = constructions::line_word_tile(w);
            Certificate cert = PeriodCertificate{w.t, {0}};
            if (!verify(tile, cert)) throw TilingError(ErrorCode::certificate_failed, "word tile certificate failed");
            json cj = to_json(cert);
            cj["status"] = "tiles";
            return Output{{{"tile", to_json(tile)}, {"letters", w.letters}, {"certificate", cj}}, {}};
        });

        auto* slab = leaf(group, "slab", "Slab tile S_{c,u} with its lattice certificate");
        slab->add_option("--t", word_t, "Slab thickness")->required();
        slab->add_option("--d", dim, "Dimension (>= 2)")->required();
        slab->add_option("--u", shear, "Shear vector, d-1 entries in [0,3t)")->required()->delimiter(',');
        auto* col_opt = slab->add_option("--coloring", coloring_arg, "JSON array of colors, file or inline");
        auto* slab_random = slab->add_flag("--random", random_flag, "Random coloring");
        slab->add_option("--seed", seed, "Random seed");
        col_opt->excludes(slab_random);
        bind(slab, [&] {
            constructions::SlabColoring col;
            if (random_flag) {
                col = constructions::SlabColoring::random(*word_t, dim, shear, seed.value_or(0));
            } else {
                if (!coloring_arg) throw UsageError("give --coloring or --random");
                json cj = parse_json_arg(*coloring_arg);
                if (cj.is_object() && cj.contains("colors")) cj = cj["colors"];
                std::vector<std::uint8_t> colors;
                try {
                    for (const auto& v : cj) colors.push_back(static_cast<std::uint8_t>(v.get<int>()));
                } catch (const json::exception& e) {
                    throw TilingError(ErrorCode::parse_error, std::string("coloring must be a list of integers: ") + e.what());
                }
                col = constructions::SlabColoring::make(*word_t, dim, shear, std::move(colors));
            }
            auto st = constructions::slab_tile(col);
            json cj = to_json(Certificate{st.certificate});
            cj["status"] = "tiles";
            return Output{{{"tile", to_json(st.tile)}, {"certificate", cj}}, {}};
        });

        auto* family = leaf(group, "family-census", "Count distinct tiles in the construction family");
        family->add_option("--t", word_t, "Thickness / word length")->required();
        family->add_option("--d", dim, "Dimension")->required();
        bind(family, [&] {
            auto fc = constructions::family_census(*word_t, dim, pool());
            return Output{{{"t", *word_t}, {"d", dim}, {"family_size", big_to_json(fc.family_size)},
                           {"distinct_tiles", big_to_json(fc.distinct_tiles)}},
                          {}};
        });
    }

    // ---- entropy bound
    std::optional<double> rho;
    entropy::BoundParams bp;
    std::optional<std::int64_t> ell, block_k;
    bool torus_flag = false;
    int jensen_m = 0, jensen_t = 0, lemma_n = 0, grid = 10000;
    std::string translations_arg;
    {
        auto* group = app.add_subcommand("bound", "Entropy upper-bound formulas");
        group->require_subcommand(1);

        auto* rate = leaf(group, "rate", "Per-cell rate; with --ell the full per-block report");
        rate->add_option("--rho", rho, "Ratio ell / k^d");
        rate->add_option("--n", bp.n, "Box side");
        rate->add_option("--d", bp.d, "Dimension");
        rate->add_option("--k", block_k, "Block scale");
        rate->add_option("--alpha", bp.alpha, "Small-set threshold");
        rate->add_option("--ell", ell, "Number of translates");
        rate->add_flag("--torus", torus_flag, "Periodic boundary (J = 0)");
        bind(rate, [&] {
            if (ell) {
                bp.ell = *ell;
                bp.k = block_k.value_or(entropy::default_block_scale(bp.n, bp.d));
                bp.torus_mode = torus_flag;
                auto r = entropy::entropy_upper(bp);
                return Output{{{"n", bp.n}, {"d", bp.d}, {"k", bp.k}, {"alpha", bp.alpha}, {"ell", bp.ell},
                               {"torus", torus_flag}, {"ratio", r.ratio}, {"j_bound", r.j_bound},
                               {"bits_per_cell", r.bits_per_cell}, {"total_log2_bound", r.total_log2_bound}},
                              {}};
            }
            if (!rho) throw UsageError("give --rho or --ell");
            double bits = entropy::interpolated_rate(*rho);
            return Output{{{"rho", *rho}, {"bits_per_cell", bits}, {"growth", std::exp2(bits)}}, {}};
        });

        auto* jensen = leaf(group, "jensen", "Largest product of m nonnegative integers summing to t");
        jensen->add_option("--m", jensen_m, "Number of parts")->required();
        jensen->add_option("--t", jensen_t, "Sum")->required();
        bind(jensen, [&] {
            return Output{{{"m", jensen_m}, {"t", jensen_t},
                           {"value", big_to_json(entropy::jensen_max_product(jensen_m, jensen_t))}},
                          {}};
        });

        auto* lemma = leaf(group, "lemma", "Endpoint lemma check on a grid of r in [0,1]");
        lemma->add_option("--N", lemma_n, "Integer part N")->required();
        lemma->add_option("--grid", grid, "Grid intervals");
        bind(lemma, [&] {
            double gap = entropy::endpoint_lemma_gap(lemma_n, grid);
            return Output{{{"N", lemma_n}, {"grid", grid}, {"f0", entropy::endpoint_f(lemma_n, 0.0)},
                           {"f1", entropy::endpoint_f(lemma_n, 1.0)}, {"gap", gap},
                           {"max_at_endpoint", gap >= -1e-12}},
                          {}};
        });

        auto* total = leaf(group, "total", "Total log2 bound on the number of tiles of [n]^d");
        total->add_option("--n", bp.n, "Box side")->required();
        total->add_option("--d", bp.d, "Dimension")->required();
        total->add_option("--alpha", bp.alpha, "Small-set threshold")->required();
        total->add_option("--k", block_k, "Block scale (default ceil(n^(1/2d)))");
        total->add_option("--seq-const", bp.seq_const, "Constant in the sequence-count exponent");
        bind(total, [&] {
            bp.k = block_k.value_or(entropy::default_block_scale(bp.n, bp.d));
            double log2_bound = entropy::total_count_log2(bp);
            double cells = std::pow(static_cast<double>(bp.n), bp.d);
            return Output{{{"n", bp.n}, {"d", bp.d}, {"k", bp.k}, {"alpha", bp.alpha}, {"seq_const", bp.seq_const},
                           {"log2_bound", log2_bound}, {"per_cell", log2_bound / cells},
                           {"reference", std::log2(3.0) / 3.0}},
                          {}};
        });

        auto* shearer = leaf(group, "shearer", "Shearer bound on a concrete tiling of [0, kn)^d");
        shearer->add_option("--tile", tile_arg, "Tile JSON")->required();
        shearer->add_option("--translations", translations_arg, "JSON list of translation vectors")->required();
        shearer->add_option("--k", block_k, "Region is [0, kn)^d")->required();
        shearer->add_flag("--torus", torus_flag, "Work on the torus Z_{kn}^d");
        bind(shearer, [&] {
            Tile t = load_tile(tile_arg);
            auto zs = load_translations(translations_arg);
            auto r = entropy::shearer_bound_from_instance(t, zs, *block_k, torus_flag, pool());
            return Output{{{"k", *block_k}, {"torus", torus_flag}, {"ell", r.ell}, {"j_boundary", r.j_boundary},
                           {"coverage_ok", r.coverage_ok}, {"a_sizes", size_map(r.a_sizes)},
                           {"sum_a_sizes", r.sum_a_sizes}, {"bound_bits", r.bound_bits},
                           {"bits_per_cell", r.bound_bits / t.volume()}},
                          {}};
        });
    }

    // ---- stats
    int stats_n = 0, window_w = 1;
    std::size_t sample_count = 1;
    {
        auto* group = app.add_subcommand("stats", "Exact statistics over tile populations");
        group->require_subcommand(1);

        auto* density = leaf(group, "density", "Size distribution of all tiles of [0, n)");
        density->add_option("--n", stats_n, "Box side")->required();
        bind(density, [&] {
            auto r = stats::density_report(stats_n, pool(), cfg.limits);
            std::string csv = "n,size,count\n";
            for (auto [k, v] : r.histogram) csv += fmt::format("{},{},{}\n", r.n, k, v);
            return Output{{{"n", r.n}, {"count", r.count}, {"mean_density", r.mean_density},
                           {"stdev_density", r.stdev_density}, {"histogram", size_map(r.histogram)}},
                          csv};
        });

        auto* marg = leaf(group, "marginals", "P(i in S) for a uniform tile of [0, n)");
        marg->add_option("--n", stats_n, "Box side")->required();
        bind(marg, [&] {
            auto f = stats::marginal_frequencies(stats_n, pool(), cfg.limits);
            std::string csv = "n,position,frequency\n";
            for (std::size_t i = 0; i < f.size(); ++i) csv += fmt::format("{},{},{}\n", stats_n, i, format_number(f[i]));
            return Output{{{"n", stats_n}, {"marginals", f}}, csv};
        });

        auto* win = leaf(group, "windows", "Bulk window patterns against Bernoulli(1/3)");
        win->add_option("--n", stats_n, "Box side")->required();
        win->add_option("--w", window_w, "Window width (<= 6)")->required();
        bind(win, [&] {
            auto r = stats::window_frequencies(stats_n, window_w, pool(), cfg.limits);
            json pats = json::object();
            std::string csv = "n,w,pattern,frequency,reference\n";
            for (std::size_t p = 0; p < r.frequencies.size(); ++p) {
                std::string bits;
                for (int i = 0; i < r.w; ++i) bits += ((p >> i) & 1) ? '1' : '0';
                pats[bits] = {{"frequency", r.frequencies[p]}, {"reference", r.reference[p]}};
                csv += fmt::format("{},{},{},{},{}\n", r.n, r.w, bits, format_number(r.frequencies[p]),
                                   format_number(r.reference[p]));
            }
            return Output{{{"n", r.n}, {"w", r.w}, {"bulk", {r.bulk_begin, r.bulk_end}}, {"windows", r.windows},
                           {"patterns", pats}, {"tv_distance", r.tv_distance}},
                          csv};
        });

        auto* comp = leaf(group, "components", "Connected components of a tile (l1 neighbours)");
        comp->add_option("--tile", tile_arg, "Tile JSON")->required();
        bind(comp, [&] {
            auto c = stats::component_stats(load_tile(tile_arg));
            return Output{{{"largest", c.largest}, {"count", c.count}}, {}};
        });

        auto* sample = leaf(group, "sample", "Uniform random tiles of [0, n)");
        sample->add_option("--n", stats_n, "Box side")->required();
        sample->add_option("--seed", seed, "Random seed")->required();
        sample->add_option("--count", sample_count, "Number of draws");
        bind(sample, [&] {
            auto tiles = stats::sample_uniform(stats_n, *seed, sample_count, pool(), cfg.limits);
            json arr = json::array();
            for (const auto& t : tiles) arr.push_back(to_json(t));
            return Output{{{"n", stats_n}, {"tiles", arr}}, {}};
        });
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        emit_error("USAGE", e.what());
        err << app.help();
        return 2;
    }
    if (!action) {
        emit_error("USAGE", "no command given");
        return 2;
    }
    if (jobs_flag) cfg.jobs = *jobs_flag;

    // Manifest: command path and every parameter given except --jobs, which
    // must not influence the output.
    std::string command;
    for (const CLI::App* a = chosen; a != nullptr && a->get_parent() != nullptr; a = a->get_parent()) {
        command = command.empty() ? a->get_name() : a->get_name() + " " + command;
    }
    json params = json::object();
    for (const CLI::Option* opt : chosen->get_options()) {
        if (opt->count() == 0 || opt->get_name() == "--jobs" || opt->get_lnames().empty()) continue;
        std::string joined;
        for (const auto& r : opt->results()) joined += (joined.empty() ? "" : ",") + r;
        params[opt->get_lnames().front()] = joined;
    }

    const auto started = std::chrono::system_clock::now();
    const auto t0 = std::chrono::steady_clock::now();
    try {
        Output o = action();
        json manifest = {{"command", command},
                         {"parameters", params},
                         {"versions", {{"tool", kToolVersion}, {"format", kFormatVersion}}}};
        if (seed) manifest["seed"] = *seed;
        if (cfg.format == "csv") {
            if (o.csv.empty()) throw UsageError("--format csv is not available for '" + command + "'");
            out << o.csv;
        } else {
            json doc = round_floats(o.doc);
            doc["manifest"] = manifest;
            out << doc.dump() << '\n';
        }
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        err << json{{"log", "run"},
                    {"command", command},
                    {"jobs", cfg.jobs},
                    {"started", iso_time(started)},
                    {"finished", iso_time(std::chrono::system_clock::now())},
                    {"elapsed_seconds", elapsed}}
                   .dump()
            << '\n';
        return 0;
    } catch (const UsageError& e) {
        emit_error("USAGE", e.what());
        return 2;
    } catch (const TilingError& e) {
        emit_error(to_string(e.code()), e.detail());
        return is_budget_error(e.code()) ? 3 : 1;
    } catch (const std::bad_alloc&) {
        emit_error("BUDGET_EXCEEDED", "out of memory");
        return 3;
    } catch (const std::exception& e) {
        emit_error("INTERNAL", e.what());
        return 1;
    }
}

}  // namespace tilecensus::cli
