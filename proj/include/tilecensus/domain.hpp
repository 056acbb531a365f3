#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "tilecensus/error.hpp"

namespace tilecensus {

using Coord = std::int64_t;

// A lattice point of Z^d. Length is the ambient dimension.
using Point = std::vector<Coord>;

// Finite nonempty subset of the box [0, n)^d, points strictly sorted.
// The box is 0-based: the usual [n] = {1..n} is shifted down by one.
class Tile {
public:
    static Tile normalize(std::vector<Point> raw_points, int d, Coord n);

    int dim() const noexcept { return d_; }
    Coord side() const noexcept { return n_; }
    const std::vector<Point>& points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    // n^d as a double; exact for every box this project can enumerate.
    double volume() const;
    bool contains(const Point& p) const;

    friend bool operator==(const Tile&, const Tile&) = default;

private:
    Tile(int d, Coord n, std::vector<Point> points)
        : d_(d), n_(n), points_(std::move(points)) {}

    int d_;
    Coord n_;
    std::vector<Point> points_;
};

Tile normalize_tile(std::vector<Point> raw_points, int d, Coord n);

// 1-D helpers. Bit i of the mask is position i of the box.
Tile tile_from_mask(std::uint64_t mask, Coord n);
std::uint64_t line_mask(const Tile& t);
std::vector<Coord> line_coords(const Tile& t);

Coord diameter(const Tile& t);

// Upper-triangular basis whose columns generate a finite-index sublattice of
// Z^d. Canonical: h_ii >= 1 and 0 <= h_ij < h_ii for j > i.
class HnfMatrix {
public:
    static HnfMatrix from_entries(int d, std::vector<Coord> row_major);
    // Hermite normal form of the lattice spanned by the generators. Throws
    // degenerate when they do not span a full-rank sublattice.
    static HnfMatrix from_generators(int d, std::span<const Point> generators);
    static HnfMatrix diagonal(std::span<const Coord> diag);

    int dim() const noexcept { return d_; }
    Coord at(int row, int col) const { return entries_[static_cast<std::size_t>(row * d_ + col)]; }
    Point column(int col) const;
    Coord determinant() const;
    // Representative of v + L in the box [0,h_11) x ... x [0,h_dd).
    Point reduce(const Point& v) const;
    const std::vector<Coord>& entries() const noexcept { return entries_; }

    friend bool operator==(const HnfMatrix&, const HnfMatrix&) = default;

private:
    HnfMatrix(int d, std::vector<Coord> entries) : d_(d), entries_(std::move(entries)) {}

    int d_;
    std::vector<Coord> entries_;
};

struct PeriodCertificate {
    Coord period = 1;
    std::vector<Coord> offsets;
    friend bool operator==(const PeriodCertificate&, const PeriodCertificate&) = default;
};

struct LatticeCertificate {
    HnfMatrix lattice;
    friend bool operator==(const LatticeCertificate&, const LatticeCertificate&) = default;
};

struct TorusCertificate {
    std::vector<Coord> dims;
    std::vector<Point> placements;
    friend bool operator==(const TorusCertificate&, const TorusCertificate&) = default;
};

using Certificate = std::variant<PeriodCertificate, LatticeCertificate, TorusCertificate>;

enum class Status { tiles, not_tile, unknown };

std::string_view to_string(Status s);

struct BudgetSpent {
    std::uint64_t states_visited = 0;
    std::uint64_t placements_tried = 0;
    std::uint64_t cap = 0;
    bool exhausted = false;
};

struct Decision {
    Status status = Status::unknown;
    std::optional<Certificate> certificate;
    // For a 1-D non-tile: the cell the forced placement could not cover and
    // the already-covered cell it would have overlapped.
    std::optional<Point> witness;
    std::optional<Point> conflict;
    std::string reason;
    BudgetSpent budget;
};

bool verify(const Tile& t, const PeriodCertificate& c);
bool verify(const Tile& t, const LatticeCertificate& c);
bool verify(const Tile& t, const TorusCertificate& c);
bool verify(const Tile& t, const Certificate& c);

// Canonical JSON forms. Keys come out sorted, so dump() is stable.
nlohmann::json to_json(const Tile& t);
Tile tile_from_json(const nlohmann::json& j);
std::string serialize_tile(const Tile& t);
Tile parse_tile(std::string_view text);

nlohmann::json to_json(const HnfMatrix& h);
nlohmann::json to_json(const Certificate& c);
nlohmann::json to_json(const Decision& d);

}  // namespace tilecensus
