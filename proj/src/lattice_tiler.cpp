#include "tilecensus/lattice_tiler.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "arith.hpp"
#include "exact_cover.hpp"

namespace tilecensus::lattice {

namespace {

void for_each_factorization(int d, Coord k, std::vector<Coord>& diag, const std::function<void()>& fn) {
    auto i = diag.size();
    if (static_cast<int>(i) == d - 1) {
        diag.push_back(k);
        fn();
        diag.pop_back();
        return;
    }
    for (Coord a = 1; a <= k; ++a) {
        if (k % a != 0) continue;
        diag.push_back(a);
        for_each_factorization(d, k / a, diag, fn);
        diag.pop_back();
    }
}

std::uint64_t off_diagonal_choices(const std::vector<Coord>& diag) {
    std::uint64_t n = 1;
    int d = static_cast<int>(diag.size());
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) n *= static_cast<std::uint64_t>(diag[static_cast<std::size_t>(i)]);
    }
    return n;
}

Coord torus_index(const Point& p, const std::vector<Coord>& dims) {
    Coord idx = 0;
    for (std::size_t i = 0; i < dims.size(); ++i) idx = idx * dims[i] + floor_mod(p[i], dims[i]);
    return idx;
}

Point torus_point(Coord idx, const std::vector<Coord>& dims) {
    Point p(dims.size());
    for (std::size_t i = dims.size(); i-- > 0;) {
        p[i] = idx % dims[i];
        idx /= dims[i];
    }
    return p;
}

}  // namespace

Coord TorusSpec::cells() const {
    Coord c = 1;
    for (Coord m : dims) c *= m;
    return c;
}

std::uint64_t count_hnf(int d, Coord k) {
    if (d < 1 || k < 1) throw TilingError(ErrorCode::domain, "count_hnf needs d >= 1 and k >= 1");
    std::uint64_t total = 0;
    std::vector<Coord> diag;
    for_each_factorization(d, k, diag, [&] { total += off_diagonal_choices(diag); });
    return total;
}

std::vector<HnfMatrix> enumerate_hnf(int d, Coord k, std::uint64_t max_candidates) {
    std::uint64_t total = count_hnf(d, k);
    if (total > max_candidates) {
        throw TilingError(ErrorCode::budget_exceeded, std::to_string(total) + " HNF candidates exceed the budget of " +
                                                          std::to_string(max_candidates));
    }
    std::vector<HnfMatrix> out;
    out.reserve(total);
    std::vector<Coord> diag;
    for_each_factorization(d, k, diag, [&] {
        // Odometer over the strictly upper entries, row-major, entry (i, j)
        // ranging over [0, h_ii).
        std::vector<std::pair<int, int>> slots;
        for (int i = 0; i < d; ++i) {
            for (int j = i + 1; j < d; ++j) slots.emplace_back(i, j);
        }
        std::vector<Coord> e(static_cast<std::size_t>(d * d), 0);
        for (int i = 0; i < d; ++i) e[static_cast<std::size_t>(i * d + i)] = diag[static_cast<std::size_t>(i)];
        for (;;) {
            out.push_back(HnfMatrix::from_entries(d, e));
            std::size_t s = slots.size();
            while (s > 0) {
                auto [i, j] = slots[s - 1];
                auto& v = e[static_cast<std::size_t>(i * d + j)];
                if (++v < diag[static_cast<std::size_t>(i)]) break;
                v = 0;
                --s;
            }
            if (s == 0) break;
        }
    });
    return out;
}

Point coset_key(const Point& v, const HnfMatrix& lattice) { return lattice.reduce(v); }

bool is_transversal(const Tile& s, const HnfMatrix& lattice) {
    if (lattice.dim() != s.dim()) throw TilingError(ErrorCode::bad_dimension, "tile and lattice dimensions differ");
    return verify(s, LatticeCertificate{lattice});
}

std::optional<LatticeCertificate> find_lattice_tiling(const Tile& s, std::uint64_t max_candidates) {
    for (const auto& h : enumerate_hnf(s.dim(), static_cast<Coord>(s.size()), max_candidates)) {
        if (is_transversal(s, h)) return LatticeCertificate{h};
    }
    return std::nullopt;
}

Decision tiles_torus(const Tile& s, const TorusSpec& spec, const SearchBudget& budget) {
    if (spec.dims.size() != static_cast<std::size_t>(s.dim())) {
        throw TilingError(ErrorCode::bad_dimension, "torus dimension differs from tile dimension");
    }
    if (std::any_of(spec.dims.begin(), spec.dims.end(), [](Coord m) { return m < 1; })) {
        throw TilingError(ErrorCode::domain, "torus sides must be >= 1");
    }
    Decision d;
    d.budget.cap = budget.max_nodes;
    // Compare in double first so huge products cannot overflow.
    double approx = 1.0;
    for (Coord m : spec.dims) approx *= static_cast<double>(m);
    if (approx > static_cast<double>(budget.max_cells)) {
        d.status = Status::unknown;
        d.budget.exhausted = true;
        d.reason = "cell_budget";
        return d;
    }
    const Coord cells = spec.cells();
    if (cells % static_cast<Coord>(s.size()) != 0) {
        throw TilingError(ErrorCode::bad_divisibility,
                          "|S| = " + std::to_string(s.size()) + " does not divide " + std::to_string(cells) + " cells");
    }

    // One option per distinct translate whose cells stay distinct mod dims.
    ExactCover ec(static_cast<std::size_t>(cells));
    std::vector<Coord> option_origin;
    std::set<std::vector<std::uint32_t>> seen;
    for (Coord x = 0; x < cells; ++x) {
        Point z = torus_point(x, spec.dims);
        std::vector<std::uint32_t> covered;
        covered.reserve(s.size());
        for (const auto& p : s.points()) {
            Point q(p.size());
            for (std::size_t i = 0; i < p.size(); ++i) q[i] = p[i] + z[i];
            covered.push_back(static_cast<std::uint32_t>(torus_index(q, spec.dims)));
        }
        std::vector<std::uint32_t> key = covered;
        std::sort(key.begin(), key.end());
        if (std::adjacent_find(key.begin(), key.end()) != key.end()) continue;
        if (!seen.insert(key).second) continue;
        ec.add_option(covered);
        option_origin.push_back(x);
    }

    auto result = ec.solve(budget.max_nodes);
    d.budget.placements_tried = result.nodes;
    d.budget.states_visited = result.nodes;
    if (result.solution) {
        TorusCertificate cert;
        cert.dims = spec.dims;
        for (std::size_t o : *result.solution) cert.placements.push_back(torus_point(option_origin[o], spec.dims));
        std::sort(cert.placements.begin(), cert.placements.end());
        if (!verify(s, cert)) throw TilingError(ErrorCode::certificate_failed, "torus certificate does not verify");
        d.status = Status::tiles;
        d.certificate = std::move(cert);
        return d;
    }
    if (result.exhausted) {
        d.status = Status::unknown;
        d.budget.exhausted = true;
        d.reason = "node_budget";
        return d;
    }
    d.status = Status::not_tile;
    d.reason = "no_torus_tiling";
    return d;
}

std::vector<TorusSpec> torus_schedule(const Tile& s, const SearchBudget& budget) {
    // Side lengths: multiples of the box side, plus divisors of n * |S|.
    const Coord n = s.side();
    const auto k = static_cast<Coord>(s.size());
    const auto max_cells = static_cast<Coord>(std::min<std::uint64_t>(budget.max_cells, INT64_MAX / 4));
    std::set<Coord> sides;
    for (Coord q = 1; q * n <= max_cells; ++q) {
        sides.insert(q * n);
        if (sides.size() > 64) break;
    }
    for (Coord m = 1; m <= n * k && m <= max_cells; ++m) {
        if ((n * k) % m == 0) sides.insert(m);
    }
    std::vector<Coord> side_list(sides.begin(), sides.end());

    std::vector<TorusSpec> out;
    std::vector<Coord> dims(static_cast<std::size_t>(s.dim()));
    std::function<void(std::size_t, Coord)> rec = [&](std::size_t axis, Coord cells) {
        if (axis == dims.size()) {
            if (cells % k == 0) out.push_back(TorusSpec{dims});
            return;
        }
        for (Coord m : side_list) {
            if (cells * m > max_cells) break;
            dims[axis] = m;
            rec(axis + 1, cells * m);
        }
    };
    rec(0, 1);
    std::stable_sort(out.begin(), out.end(), [](const TorusSpec& a, const TorusSpec& b) {
        Coord ca = a.cells(), cb = b.cells();
        return ca != cb ? ca < cb : a.dims < b.dims;
    });
    if (out.size() > budget.max_tori) out.resize(budget.max_tori);
    return out;
}

Decision decide_zd(const Tile& s, const SearchBudget& budget, const line::LineOptions& line_opts) {
    if (s.dim() == 1) return line::decide_line(s, line_opts);

    Decision d;
    d.status = Status::unknown;
    d.budget.cap = budget.max_nodes;
    const auto k = static_cast<Coord>(s.size());
    if (count_hnf(s.dim(), k) <= budget.max_candidates) {
        auto lattices = enumerate_hnf(s.dim(), k, budget.max_candidates);
        for (const auto& h : lattices) {
            ++d.budget.states_visited;
            if (is_transversal(s, h)) {
                d.status = Status::tiles;
                d.certificate = LatticeCertificate{h};
                d.reason = "lattice";
                return d;
            }
        }
    }
    std::uint64_t nodes_left = budget.max_nodes;
    for (const auto& spec : torus_schedule(s, budget)) {
        if (nodes_left == 0) break;
        SearchBudget b = budget;
        b.max_nodes = nodes_left;
        Decision t = tiles_torus(s, spec, b);
        d.budget.placements_tried += t.budget.placements_tried;
        nodes_left -= std::min(nodes_left, t.budget.placements_tried);
        if (t.status == Status::tiles) {
            d.status = Status::tiles;
            d.certificate = std::move(t.certificate);
            d.reason = "torus";
            return d;
        }
    }
    d.budget.exhausted = true;
    d.reason = "no_certificate_within_budget";
    return d;
}

}  // namespace tilecensus::lattice
