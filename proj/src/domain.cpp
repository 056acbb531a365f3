#include "tilecensus/domain.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <set>

#include "arith.hpp"

namespace tilecensus {

using nlohmann::json;

Tile Tile::normalize(std::vector<Point> raw_points, int d, Coord n) {
    if (d < 1) throw TilingError(ErrorCode::bad_dimension, "dimension must be >= 1, got " + std::to_string(d));
    if (n < 1) throw TilingError(ErrorCode::out_of_box, "box side must be >= 1, got " + std::to_string(n));
    if (raw_points.empty()) throw TilingError(ErrorCode::empty_set, "a tile needs at least one point");
    for (const auto& p : raw_points) {
        if (p.size() != static_cast<std::size_t>(d)) {
            throw TilingError(ErrorCode::bad_dimension,
                              "point has " + std::to_string(p.size()) + " coordinates, expected " + std::to_string(d));
        }
        for (Coord c : p) {
            if (c < 0 || c >= n) {
                throw TilingError(ErrorCode::out_of_box,
                                  "coordinate " + std::to_string(c) + " outside [0," + std::to_string(n) + ")");
            }
        }
    }
    std::sort(raw_points.begin(), raw_points.end());
    raw_points.erase(std::unique(raw_points.begin(), raw_points.end()), raw_points.end());
    return Tile(d, n, std::move(raw_points));
}

double Tile::volume() const { return std::pow(static_cast<double>(n_), d_); }

bool Tile::contains(const Point& p) const { return std::binary_search(points_.begin(), points_.end(), p); }

Tile normalize_tile(std::vector<Point> raw_points, int d, Coord n) {
    return Tile::normalize(std::move(raw_points), d, n);
}

Tile tile_from_mask(std::uint64_t mask, Coord n) {
    std::vector<Point> pts;
    for (std::uint64_t m = mask; m != 0; m &= m - 1) pts.push_back({std::countr_zero(m)});
    return Tile::normalize(std::move(pts), 1, n);
}

std::uint64_t line_mask(const Tile& t) {
    if (t.dim() != 1) throw TilingError(ErrorCode::wrong_dimension, "expected a 1-D tile");
    if (t.side() > 64) throw TilingError(ErrorCode::limit_exceeded, "box side above 64 has no 64-bit mask");
    std::uint64_t m = 0;
    for (const auto& p : t.points()) m |= std::uint64_t{1} << p[0];
    return m;
}

std::vector<Coord> line_coords(const Tile& t) {
    if (t.dim() != 1) throw TilingError(ErrorCode::wrong_dimension, "expected a 1-D tile");
    std::vector<Coord> xs;
    xs.reserve(t.size());
    for (const auto& p : t.points()) xs.push_back(p[0]);
    return xs;
}

Coord diameter(const Tile& t) {
    if (t.dim() != 1) throw TilingError(ErrorCode::wrong_dimension, "diameter is defined for 1-D tiles");
    return t.points().back()[0] - t.points().front()[0];
}

// ---------------------------------------------------------------- HnfMatrix

HnfMatrix HnfMatrix::from_entries(int d, std::vector<Coord> row_major) {
    if (d < 1 || row_major.size() != static_cast<std::size_t>(d * d)) {
        throw TilingError(ErrorCode::bad_dimension, "HNF needs d*d entries");
    }
    HnfMatrix h(d, std::move(row_major));
    for (int i = 0; i < d; ++i) {
        if (h.at(i, i) < 1) throw TilingError(ErrorCode::degenerate, "HNF diagonal entries must be >= 1");
        for (int j = 0; j < d; ++j) {
            if (j < i && h.at(i, j) != 0) throw TilingError(ErrorCode::degenerate, "HNF must be upper triangular");
            if (j > i && (h.at(i, j) < 0 || h.at(i, j) >= h.at(i, i))) {
                throw TilingError(ErrorCode::degenerate, "HNF off-diagonal entry not reduced");
            }
        }
    }
    return h;
}

HnfMatrix HnfMatrix::diagonal(std::span<const Coord> diag) {
    int d = static_cast<int>(diag.size());
    std::vector<Coord> e(static_cast<std::size_t>(d * d), 0);
    for (int i = 0; i < d; ++i) e[static_cast<std::size_t>(i * d + i)] = diag[static_cast<std::size_t>(i)];
    return from_entries(d, std::move(e));
}

HnfMatrix HnfMatrix::from_generators(int d, std::span<const Point> generators) {
    std::vector<Point> active;
    for (const auto& g : generators) {
        if (g.size() != static_cast<std::size_t>(d)) throw TilingError(ErrorCode::bad_dimension, "generator dimension mismatch");
        if (std::any_of(g.begin(), g.end(), [](Coord c) { return c != 0; })) active.push_back(g);
    }
    std::vector<Point> cols(static_cast<std::size_t>(d));
    auto axpy = [](Point& y, Coord q, const Point& x) {
        for (std::size_t i = 0; i < y.size(); ++i) y[i] -= q * x[i];
    };
    for (int r = d - 1; r >= 0; --r) {
        auto row = static_cast<std::size_t>(r);
        for (;;) {
            // Euclid on row r across the remaining columns.
            auto pivot = active.end();
            for (auto it = active.begin(); it != active.end(); ++it) {
                if ((*it)[row] != 0 && (pivot == active.end() || std::llabs((*it)[row]) < std::llabs((*pivot)[row]))) {
                    pivot = it;
                }
            }
            if (pivot == active.end()) throw TilingError(ErrorCode::degenerate, "generators do not span a full-rank lattice");
            bool done = true;
            for (auto it = active.begin(); it != active.end(); ++it) {
                if (it == pivot || (*it)[row] == 0) continue;
                axpy(*it, floor_div((*it)[row], (*pivot)[row]), *pivot);
                if ((*it)[row] != 0) done = false;
            }
            if (done) {
                Point p = *pivot;
                if (p[row] < 0) {
                    for (auto& c : p) c = -c;
                }
                cols[row] = std::move(p);
                active.erase(pivot);
                std::erase_if(active, [](const Point& v) {
                    return std::all_of(v.begin(), v.end(), [](Coord c) { return c == 0; });
                });
                break;
            }
        }
    }
    for (int j = 0; j < d; ++j) {
        for (int i = j - 1; i >= 0; --i) {
            auto ui = static_cast<std::size_t>(i);
            auto& cj = cols[static_cast<std::size_t>(j)];
            axpy(cj, floor_div(cj[ui], cols[ui][ui]), cols[ui]);
        }
    }
    std::vector<Coord> e(static_cast<std::size_t>(d * d));
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) e[static_cast<std::size_t>(i * d + j)] = cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    }
    return from_entries(d, std::move(e));
}

Point HnfMatrix::column(int col) const {
    Point c(static_cast<std::size_t>(d_));
    for (int i = 0; i < d_; ++i) c[static_cast<std::size_t>(i)] = at(i, col);
    return c;
}

Coord HnfMatrix::determinant() const {
    Coord det = 1;
    for (int i = 0; i < d_; ++i) det *= at(i, i);
    return det;
}

Point HnfMatrix::reduce(const Point& v) const {
    if (v.size() != static_cast<std::size_t>(d_)) throw TilingError(ErrorCode::bad_dimension, "point/lattice dimension mismatch");
    Point r = v;
    for (int i = d_ - 1; i >= 0; --i) {
        Coord q = floor_div(r[static_cast<std::size_t>(i)], at(i, i));
        if (q == 0) continue;
        for (int k = 0; k <= i; ++k) r[static_cast<std::size_t>(k)] -= q * at(k, i);
    }
    return r;
}

// ------------------------------------------------------------ verification

bool verify(const Tile& t, const PeriodCertificate& c) {
    if (t.dim() != 1 || c.period < 1) return false;
    if (static_cast<Coord>(c.offsets.size() * t.size()) != c.period) return false;
    std::vector<char> hit(static_cast<std::size_t>(c.period), 0);
    for (Coord r : c.offsets) {
        if (r < 0 || r >= c.period) return false;
        for (const auto& s : t.points()) {
            auto cell = static_cast<std::size_t>(floor_mod(s[0] + r, c.period));
            if (hit[cell]) return false;
            hit[cell] = 1;
        }
    }
    return true;
}

bool verify(const Tile& t, const LatticeCertificate& c) {
    if (c.lattice.dim() != t.dim()) return false;
    if (c.lattice.determinant() != static_cast<Coord>(t.size())) return false;
    std::set<Point> keys;
    for (const auto& p : t.points()) {
        if (!keys.insert(c.lattice.reduce(p)).second) return false;
    }
    return true;
}

bool verify(const Tile& t, const TorusCertificate& c) {
    if (c.dims.size() != static_cast<std::size_t>(t.dim())) return false;
    Coord cells = 1;
    for (Coord m : c.dims) {
        if (m < 1) return false;
        cells *= m;
    }
    if (static_cast<Coord>(t.size() * c.placements.size()) != cells) return false;
    std::vector<char> hit(static_cast<std::size_t>(cells), 0);
    for (const auto& z : c.placements) {
        if (z.size() != c.dims.size()) return false;
        for (const auto& s : t.points()) {
            Coord idx = 0;
            for (std::size_t i = 0; i < c.dims.size(); ++i) idx = idx * c.dims[i] + floor_mod(s[i] + z[i], c.dims[i]);
            if (hit[static_cast<std::size_t>(idx)]) return false;
            hit[static_cast<std::size_t>(idx)] = 1;
        }
    }
    return true;
}

bool verify(const Tile& t, const Certificate& c) {
    return std::visit([&](const auto& cert) { return verify(t, cert); }, c);
}

std::string_view to_string(Status s) {
    switch (s) {
        case Status::tiles: return "tiles";
        case Status::not_tile: return "not_tile";
        case Status::unknown: return "unknown";
    }
    return "unknown";
}

// ------------------------------------------------------------------- JSON

json to_json(const Tile& t) {
    json pts = json::array();
    for (const auto& p : t.points()) pts.push_back(p);
    return json{{"d", t.dim()}, {"n", t.side()}, {"points", std::move(pts)}};
}

Tile tile_from_json(const json& j) {
    if (!j.is_object() || !j.contains("d") || !j.contains("n") || !j.contains("points")) {
        throw TilingError(ErrorCode::parse_error, "tile JSON needs keys d, n, points");
    }
    try {
        int d = j.at("d").get<int>();
        Coord n = j.at("n").get<Coord>();
        std::vector<Point> pts;
        for (const auto& p : j.at("points")) {
            if (!p.is_array()) throw TilingError(ErrorCode::parse_error, "each point must be an array");
            pts.push_back(p.get<Point>());
        }
        return Tile::normalize(std::move(pts), d, n);
    } catch (const json::exception& e) {
        throw TilingError(ErrorCode::parse_error, e.what());
    }
}

std::string serialize_tile(const Tile& t) { return to_json(t).dump(); }

Tile parse_tile(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw TilingError(ErrorCode::parse_error, "at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    return tile_from_json(j);
}

json to_json(const HnfMatrix& h) {
    json rows = json::array();
    for (int i = 0; i < h.dim(); ++i) {
        json row = json::array();
        for (int j = 0; j < h.dim(); ++j) row.push_back(h.at(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

struct CertificateJson {
    json operator()(const PeriodCertificate& c) const {
        return {{"kind", "period"}, {"period", c.period}, {"offsets", c.offsets}};
    }
    json operator()(const LatticeCertificate& c) const {
        return {{"kind", "lattice"}, {"hnf", to_json(c.lattice)}, {"determinant", c.lattice.determinant()}};
    }
    json operator()(const TorusCertificate& c) const {
        json pl = json::array();
        for (const auto& p : c.placements) pl.push_back(p);
        return {{"kind", "torus"}, {"dims", c.dims}, {"placements", std::move(pl)}};
    }
};

}  // namespace

json to_json(const Certificate& c) { return std::visit(CertificateJson{}, c); }

json to_json(const Decision& d) {
    json out = d.certificate ? to_json(*d.certificate) : json::object();
    out["status"] = std::string(to_string(d.status));
    if (d.witness) out["witness"] = *d.witness;
    if (d.conflict) out["conflict"] = *d.conflict;
    if (!d.reason.empty()) out["reason"] = d.reason;
    out["budget"] = {{"states_visited", d.budget.states_visited},
                     {"placements_tried", d.budget.placements_tried},
                     {"cap", d.budget.cap},
                     {"exhausted", d.budget.exhausted}};
    return out;
}

}  // namespace tilecensus
