#include "tilecensus/entropy_bound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "arith.hpp"

namespace tilecensus::entropy {

namespace {

const double kLog2Three = std::log2(3.0);

void check_params(const BoundParams& p) {
    if (p.n < 1 || p.d < 1 || p.k < 1 || p.ell < 1) {
        throw TilingError(ErrorCode::domain, "n, d, k and ell must all be >= 1");
    }
    if (!(p.alpha > 0.0 && p.alpha <= 0.5)) throw TilingError(ErrorCode::domain, "alpha must lie in (0, 1/2]");
}

double log2_sum_exp2(double a, double b) {
    double m = std::max(a, b);
    return m + std::log2(std::exp2(a - m) + std::exp2(b - m));
}

}  // namespace

BigInt jensen_max_product(int m, int t) {
    if (m < 1 || t < 0) throw TilingError(ErrorCode::domain, "jensen_max_product needs m >= 1 and t >= 0");
    const int a = t / m;
    const int b = t % m;
    return boost::multiprecision::pow(BigInt(a + 1), static_cast<unsigned>(b)) *
           boost::multiprecision::pow(BigInt(a), static_cast<unsigned>(m - b));
}

double interpolated_rate(double rho) {
    if (!(rho >= 1.0) || !std::isfinite(rho)) throw TilingError(ErrorCode::domain, "interpolated_rate needs rho >= 1");
    const double N = std::floor(rho);
    const double r = rho - N;
    return (r * std::log2(N + 1.0) + (1.0 - r) * std::log2(N)) / rho;
}

IntegerRate best_integer_rate() {
    IntegerRate best{1, 0.0};
    double best_bits = -1.0;
    for (int N = 1; N <= 64; ++N) {
        double bits = std::log2(static_cast<double>(N)) / N;
        if (bits > best_bits) {
            best_bits = bits;
            best.argmax = N;
        }
    }
    best.value = std::exp2(best_bits);
    return best;
}

double endpoint_f(int N, double r) {
    if (N < 1) throw TilingError(ErrorCode::domain, "endpoint lemma needs N >= 1");
    if (!(r >= 0.0 && r <= 1.0)) throw TilingError(ErrorCode::domain, "r must lie in [0, 1]");
    return std::exp2((r * std::log2(N + 1.0) + (1.0 - r) * std::log2(static_cast<double>(N))) / (N + r));
}

double endpoint_lemma_gap(int N, int grid) {
    if (grid < 2) throw TilingError(ErrorCode::domain, "grid must be >= 2");
    const double ends = std::max(endpoint_f(N, 0.0), endpoint_f(N, 1.0));
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= grid; ++i) best = std::max(best, endpoint_f(N, static_cast<double>(i) / grid));
    return ends - best;
}

double binary_entropy(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw TilingError(ErrorCode::domain, "binary entropy needs alpha in [0, 1]");
    if (alpha == 0.0 || alpha == 1.0) return 0.0;
    return -alpha * std::log2(alpha) - (1.0 - alpha) * std::log2(1.0 - alpha);
}

std::int64_t default_block_scale(std::int64_t n, int d) {
    if (n < 1 || d < 1) throw TilingError(ErrorCode::domain, "block scale needs n, d >= 1");
    auto k = static_cast<std::int64_t>(std::ceil(std::pow(static_cast<double>(n), 1.0 / (2.0 * d)) - 1e-9));
    return std::max<std::int64_t>(k, 1);
}

PackingSlack packing_slack(const BoundParams& p) {
    check_params(p);
    if (p.k < 3) throw TilingError(ErrorCode::domain, "packing slack needs k >= 3");
    const auto k = static_cast<double>(p.k);
    PackingSlack s;
    s.j_exact_bound = (std::pow(k + 2.0, p.d) - std::pow(k - 2.0, p.d)) / p.alpha;
    s.j_simplified = 5.0 * p.d * std::pow(k, p.d - 1) / p.alpha;
    return s;
}

RateReport entropy_upper(const BoundParams& p) {
    check_params(p);
    RateReport r;
    const double kd = std::pow(static_cast<double>(p.k), p.d);
    const auto ell = static_cast<double>(p.ell);
    r.ratio = ell / kd;
    r.j_bound = p.torus_mode ? 0.0 : packing_slack(p).j_simplified;
    if (ell <= r.j_bound) {
        throw TilingError(ErrorCode::vacuous_bound, "ell = " + std::to_string(p.ell) + " does not exceed J");
    }
    r.bits_per_cell = ell / (ell - r.j_bound) * interpolated_rate(r.ratio);
    r.total_log2_bound = r.bits_per_cell * std::pow(static_cast<double>(p.n), p.d);
    return r;
}

double total_count_log2(const BoundParams& p) {
    check_params(p);
    const double v = std::pow(static_cast<double>(p.n), p.d);
    const double kd = std::pow(static_cast<double>(p.k), p.d);
    const double denom = kd - 5.0 * p.d * std::pow(static_cast<double>(p.k), p.d - 1) / p.alpha;
    if (denom <= 0.0) {
        throw TilingError(ErrorCode::vacuous_bound, "k^d <= 5 d k^(d-1) / alpha at k = " + std::to_string(p.k));
    }
    const double small_sets = binary_entropy(p.alpha) * v;
    const double sequences = p.seq_const * kd * std::log2(kd * v);
    const double per_sequence = kd / denom * (kLog2Three / 3.0) * v;
    return log2_sum_exp2(small_sets, sequences + per_sequence);
}

double pairwise_sum(std::span<const double> xs) {
    if (xs.size() <= 8) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
    std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

ShearerResult shearer_bound_from_instance(const Tile& s, std::span<const Point> translations, std::int64_t k,
                                          bool torus_mode, const TaskPool& pool) {
    if (k < 1) throw TilingError(ErrorCode::domain, "box scale k must be >= 1");
    if (translations.empty()) throw TilingError(ErrorCode::domain, "need at least one translation");
    const int d = s.dim();
    const auto ud = static_cast<std::size_t>(d);
    for (const auto& z : translations) {
        if (z.size() != ud) throw TilingError(ErrorCode::bad_dimension, "translation dimension differs from tile");
    }
    if (std::any_of(translations.front().begin(), translations.front().end(), [](Coord c) { return c != 0; })) {
        throw TilingError(ErrorCode::domain, "the first translation must be 0");
    }
    const Coord side = k * s.side();
    const double region_d = std::pow(static_cast<double>(side), d);
    if (region_d > 1e8) throw TilingError(ErrorCode::budget_exceeded, "region (k n)^d too large");
    const auto region = static_cast<std::size_t>(region_d);

    // Index of a point in [0, side)^d, or nullopt when it falls outside.
    auto index_of = [&](const Point& q) -> std::optional<std::size_t> {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < ud; ++i) {
            Coord c = torus_mode ? floor_mod(q[i], side) : q[i];
            if (c < 0 || c >= side) return std::nullopt;
            idx = idx * static_cast<std::size_t>(side) + static_cast<std::size_t>(c);
        }
        return idx;
    };

    ShearerResult out;
    out.ell = translations.size();

    std::vector<std::uint32_t> cover(region, 0);
    Point q(ud);
    for (const auto& z : translations) {
        bool leaves = false;
        for (const auto& p : s.points()) {
            for (std::size_t i = 0; i < ud; ++i) q[i] = p[i] + z[i];
            if (auto idx = index_of(q)) {
                ++cover[*idx];
            } else {
                leaves = true;
            }
        }
        if (leaves) ++out.j_boundary;
    }
    auto bad = std::find_if(cover.begin(), cover.end(), [](std::uint32_t c) { return c != 1; });
    if (bad != cover.end()) {
        throw TilingError(ErrorCode::not_a_tiling, "cell " + std::to_string(bad - cover.begin()) + " covered " +
                                                       std::to_string(*bad) + " times");
    }
    out.coverage_ok = true;
    if (out.ell <= out.j_boundary) throw TilingError(ErrorCode::degenerate, "every translate leaves the region");

    // |A_j| = #{i : j - z_i in [0,n)^d}: add each translate of the full box.
    std::vector<std::uint32_t> a_size(region, 0);
    const Coord n = s.side();
    const auto box = static_cast<std::size_t>(std::pow(static_cast<double>(n), d));
    for (const auto& z : translations) {
        for (std::size_t b = 0; b < box; ++b) {
            std::size_t rest = b;
            for (std::size_t i = ud; i-- > 0;) {
                q[i] = static_cast<Coord>(rest % static_cast<std::size_t>(n)) + z[i];
                rest /= static_cast<std::size_t>(n);
            }
            if (auto idx = index_of(q)) ++a_size[*idx];
        }
    }

    std::vector<double> terms(region);
    constexpr std::size_t block = 1 << 14;
    pool.for_each_index((region + block - 1) / block, [&](std::size_t b) {
        for (std::size_t j = b * block; j < std::min(region, (b + 1) * block); ++j) {
            terms[j] = std::log2(static_cast<double>(a_size[j]));
        }
    });
    for (std::uint32_t a : a_size) {
        ++out.a_sizes[a];
        out.sum_a_sizes += a;
    }
    if (out.sum_a_sizes > static_cast<std::uint64_t>(box) * out.ell) {
        throw TilingError(ErrorCode::degenerate, "sum of |A_j| exceeds n^d * ell");
    }
    out.bound_bits = pairwise_sum(terms) / static_cast<double>(out.ell - out.j_boundary);
    return out;
}

}  // namespace tilecensus::entropy
